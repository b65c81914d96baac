// Acceptance suite: one line per criterion, each with its numeric tolerance
// and wall-clock budget pinned. Exits nonzero on any failure.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "ordnung/gallery.hpp"
#include "ordnung/io.hpp"
#include "ordnung/ordnung.hpp"

using namespace ordnung;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool cond, const std::string& what) {
        if (!cond && pass) {
            pass = false;
            detail = what;
        }
    }
};

double l1_grid_oracle_pair(const FunctionFamily& fam, int resolution) {
    double best = 1e300;
    for (int m = 0; m <= resolution; ++m) {
        const double t = static_cast<double>(m) / resolution;
        for (int s = -1; s <= 1; s += 2) {
            const double c1 = t, c2 = s * (1.0 - t);
            double sup = 0.0;
            for (std::size_t x = 0; x < fam.chain.size; ++x)
                sup = std::max(sup, std::abs(c1 * fam[0](x) + c2 * fam[1](x)));
            best = std::min(best, sup);
        }
    }
    return best;
}

// --- criterion bodies ------------------------------------------------------

Outcome cantor_independence() {
    Outcome out;
    for (std::size_t k = 1; k <= 6; ++k) {
        const auto fam = gen_cantor_projections(k);
        std::vector<std::size_t> all(k);
        for (std::size_t i = 0; i < k; ++i) all[i] = i;
        const auto res = independence_at(fam, all, 0.25, 0.75);
        out.check(res.independent(), "no witness at k=" + std::to_string(k));
        if (!res.independent()) continue;
        out.check(res.witness->pattern_points.size() == (std::size_t{1} << k),
                  "missing patterns at k=" + std::to_string(k));
        out.check(witness_valid(*res.witness, fam),
                  "revalidation failed at k=" + std::to_string(k));
    }
    return out;
}

Outcome rademacher_independence() {
    Outcome out;
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto fam = gen_rademacher(n, 128);
        const auto w = independence_search(fam, n);
        out.check(w.has_value(), "no witness at n=" + std::to_string(n));
        if (!w) continue;
        out.check(w->a < 0.0 && 0.0 < w->b, "thresholds do not straddle zero");
        out.check(witness_valid(*w, fam), "revalidation failed at n=" + std::to_string(n));
    }
    return out;
}

Outcome monotone_tameness() {
    Outcome out;
    detail::SplitMix64 seeds(1001);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto fam = gen_random_monotone(10, 8, seeds.next());
        if (independence_search(fam, 2).has_value()) {
            out.check(false, "independent pair in trial " + std::to_string(trial));
            break;
        }
    }
    return out;
}

Outcome jordan_soundness() {
    Outcome out;
    detail::SplitMix64 seeds(2002);
    for (int trial = 0; trial < 10000; ++trial) {
        const auto fam = gen_random_bv(1, 2 + trial % 15, 4.0, seeds.next());
        const auto& f = fam[0];
        const auto [u, v] = jordan_decompose(f);
        if (!is_increasing(u) || !is_increasing(v)) {
            out.check(false, "non-monotone part in trial " + std::to_string(trial));
            break;
        }
        for (std::size_t x = 0; x < f.size(); ++x) {
            if (u(x) - v(x) != f(x)) { // bitwise
                out.check(false, "reconstruction off in trial " + std::to_string(trial));
                break;
            }
        }
        if (!out.pass) break;
    }
    return out;
}

Outcome variation_bound() {
    Outcome out;
    detail::SplitMix64 seeds(3003);
    std::size_t certified = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const auto fam = gen_random_bv(6, 8, 2.0, seeds.next());
        for (std::size_t k = 1; k <= 3 && out.pass; ++k) {
            const auto w = independence_search(fam, k);
            if (!w) continue;
            ++certified;
            out.check(witness_valid(*w, fam), "witness failed revalidation");
            double total = 0.0;
            for (auto i : w->indices) total += variation(fam[i]);
            const double lhs =
                (static_cast<double>(w->pattern_points.size()) - 1.0) * (w->b - w->a);
            out.check(lhs <= total + 1e-12,
                      "budget violated in trial " + std::to_string(trial));
        }
        if (!out.pass) break;
    }
    out.check(certified > 0, "corpus certified no subfamily at all");
    return out;
}

Outcome l1_cross_check() {
    Outcome out;
    for (std::size_t k = 1; k <= 6 && out.pass; ++k) {
        const auto fam = gen_cantor_projections(k);
        std::vector<std::size_t> all(k);
        for (std::size_t i = 0; i < k; ++i) all[i] = i;
        const auto res = independence_at(fam, all, 0.25, 0.75);
        out.check(res.independent(), "cube witness missing");
        if (!res.independent()) break;
        const auto chk = independence_implies_l1(*res.witness, fam, 1e-6);
        out.check(chk.certified, "cube bound failed at k=" + std::to_string(k));
    }
    for (std::size_t n = 1; n <= 6 && out.pass; ++n) {
        const auto fam = gen_rademacher(n, 128);
        const auto w = independence_search(fam, n);
        out.check(w.has_value(), "rademacher witness missing");
        if (!w) break;
        const auto chk = independence_implies_l1(*w, fam, 1e-6);
        out.check(chk.certified, "rademacher bound failed at n=" + std::to_string(n));
    }
    const auto pair = gen_cantor_projections(2);
    const auto cert = l1_constant(pair, 1e-6);
    out.check(std::abs(cert.constant - 0.5) <= 1e-3,
              "cube pair constant " + num_str(cert.constant));
    const double oracle = l1_grid_oracle_pair(pair, 4096);
    out.check(std::abs(cert.constant - oracle) <= 1e-3, "grid oracle disagrees");
    return out;
}

Outcome helly_extraction() {
    Outcome out;
    const auto fam = gen_random_monotone(10000, 3, 4004);
    const double eps = 0.2;
    const auto sel = select_monotone(fam, eps);
    out.check(sel.selected.size() >= 80, "selection below the pigeonhole floor");
    for (auto p : sel.sample_points)
        for (std::size_t i = 0; i < sel.selected.size() && out.pass; ++i)
            for (std::size_t j = i + 1; j < sel.selected.size(); ++j)
                if (std::abs(fam[sel.selected[i]](p) - fam[sel.selected[j]](p)) > eps) {
                    out.check(false, "pairwise deviation above epsilon");
                    break;
                }

    const auto bv = select_bv(fam, 1.0, eps);
    out.check(bv.trace.size() == 2 * bv.sample_points.size(), "missing split passes");
    for (auto p : bv.sample_points)
        for (std::size_t i = 0; i < bv.selected.size() && out.pass; ++i)
            for (std::size_t j = i + 1; j < bv.selected.size(); ++j)
                if (std::abs(fam[bv.selected[i]](p) - fam[bv.selected[j]](p)) > eps) {
                    out.check(false, "bv split exceeded epsilon");
                    break;
                }
    // the two halves of the split each respect eps/2 on their own part
    for (std::size_t step = 0; step + 1 < bv.trace.size() && out.pass; ++step)
        for (auto m : bv.trace[step + 1].survivors) {
            const auto& prev = bv.trace[step].survivors;
            if (std::find(prev.begin(), prev.end(), m) == prev.end()) {
                out.check(false, "trace is not nested");
                break;
            }
        }
    std::vector<std::vector<double>> us, vs;
    for (auto m : bv.selected) {
        auto [u, v] = jordan_decompose(fam[m]);
        us.push_back(u.values);
        vs.push_back(v.values);
    }
    for (auto p : bv.sample_points)
        for (std::size_t i = 0; i < us.size() && out.pass; ++i)
            for (std::size_t j = i + 1; j < us.size(); ++j)
                if (std::abs(us[i][p] - us[j][p]) > eps / 2 ||
                    std::abs(vs[i][p] - vs[j][p]) > eps / 2) {
                    out.check(false, "a split half exceeded eps/2");
                    break;
                }
    return out;
}

Outcome streaming_diagonal() {
    Outcome out;
    FunctionStream stream;
    stream.lo = 0.0;
    stream.hi = 1.0;
    stream.eval = [](std::size_t n, std::size_t p) {
        const double t = 1.0 - 1.0 / static_cast<double>(p + 1);
        double v = 1.0;
        for (std::size_t i = 0; i <= n; ++i) v *= t;
        return v;
    };
    std::vector<double> schedule(8);
    for (std::size_t m = 0; m < 8; ++m) schedule[m] = 1.0 / static_cast<double>(2 << m);
    const auto sel = diagonal_select_stream(stream, schedule, 8, 4096);
    out.check(sel.stages.size() == 8, "missing stages");
    for (std::size_t m = 1; m < sel.stages.size(); ++m)
        for (auto idx : sel.stages[m]) {
            const auto& prev = sel.stages[m - 1];
            if (std::find(prev.begin(), prev.end(), idx) == prev.end())
                out.check(false, "stages are not nested");
        }
    for (std::size_t m = 0; m < 8; ++m)
        for (std::size_t j = m; j < 8 && out.pass; ++j)
            for (std::size_t l = j; l < 8; ++l)
                for (std::size_t p = 0; p < m; ++p)
                    if (std::abs(stream.eval(sel.diagonal[j], p) -
                                 stream.eval(sel.diagonal[l], p)) > schedule[m]) {
                        out.check(false, "diagonal not within the stage tolerance");
                        break;
                    }
    return out;
}

Outcome representation_claims() {
    Outcome out;
    detail::SplitMix64 seeds(5005);
    for (int trial = 0; trial < 500 && out.pass; ++trial) {
        const std::size_t n = 2 + seeds.below(6);
        const auto fam = gen_random_monotone(1 + seeds.below(4), n, seeds.next());
        const auto emb = diagonal_embed(Chain(n), fam, true);
        const auto claims = verify_claims(emb);
        out.check(claims.partial_order && claims.linear_on_image && claims.extensions_ok,
                  "embedding check failed in trial " + std::to_string(trial) + ": " +
                      claims.counterexample);
        out.check(claims.topology_degenerate && claims.topologies_match,
                  "topology comparison not reported degenerate");
    }
    return out;
}

Outcome fragmentability() {
    Outcome out;
    const auto counter = is_fragmented({0.0, 1.0}, FiniteTopology::indiscrete(2), 0.5);
    out.check(!counter.fragmented && counter.witness_subset == 0b11,
              "indiscrete counterexample not caught");

    detail::SplitMix64 seeds(6006);
    auto random_fragmented = [&](const FiniteTopology& t, double eps) {
        const std::size_t n = t.ground_size();
        for (int attempt = 0; attempt < 40; ++attempt) {
            std::vector<double> f(n);
            for (auto& v : f) v = 0.25 * static_cast<double>(seeds.below(5));
            if (is_fragmented(f, t, eps).fragmented) return f;
        }
        return std::vector<double>(n, 0.25);
    };
    for (int trial = 0; trial < 500 && out.pass; ++trial) {
        const std::size_t n = 2 + seeds.below(5);
        const auto topo = gen_random_topology(n, seeds.below(24), seeds.next());
        const auto f = random_fragmented(topo, 0.5);
        const auto g = random_fragmented(topo, 0.5);
        out.check(fragmented_vector_closure(f, g, topo, 1.0),
                  "sum closure failed in trial " + std::to_string(trial));
    }
    for (int trial = 0; trial < 200 && out.pass; ++trial) {
        const std::size_t n = 2 + seeds.below(7);
        const auto fam = gen_random_bv(1, n, 2.0, seeds.next());
        const auto topo = interval_topology(Chain(n)); // every ray is open
        out.check(is_fragmented(fam[0].values, topo, 0.25).fragmented,
                  "bv function not fragmented in trial " + std::to_string(trial));
    }
    return out;
}

Outcome metric_selection() {
    Outcome out;
    const FiniteMetricSpace target(3, {0, 1, 2, 1, 0, 1, 2, 1, 0});
    const Chain chain(5);
    detail::SplitMix64 seeds(7007);
    std::vector<MetricChainFunction> members;
    while (members.size() < 300) {
        std::vector<std::size_t> vals(5);
        vals[0] = seeds.below(3);
        for (std::size_t i = 1; i < 5; ++i) {
            const auto prev = vals[i - 1];
            const auto move = seeds.below(3);
            vals[i] = move == 0 && prev > 0 ? prev - 1 : move == 2 && prev < 2 ? prev + 1 : prev;
        }
        MetricChainFunction f(chain, target, vals);
        if (metric_variation(f) <= 2.0) members.push_back(std::move(f));
    }
    const double eps = 0.5; // half of the least positive distance
    const auto sel = select_metric_valued(members, 2.0, eps);
    out.check(!sel.selected.empty(), "empty selection");
    for (auto p : sel.sample_points)
        for (std::size_t i = 0; i < sel.selected.size() && out.pass; ++i)
            for (std::size_t j = i + 1; j < sel.selected.size(); ++j)
                if (target.dist(members[sel.selected[i]].values[p],
                                members[sel.selected[j]].values[p]) > eps) {
                    out.check(false, "pairwise distance above epsilon");
                    break;
                }

    const auto seps = lipschitz_separators(target);
    const double diam = target.diameter();
    for (const auto& f : members) {
        for (std::size_t s = 0; s < seps.size() && out.pass; ++s) {
            std::vector<double> composed(chain.size);
            for (std::size_t x = 0; x < chain.size; ++x) composed[x] = seps[s](f.values[x]);
            const ChainFunction g(chain, composed, 0.0, 1.0);
            out.check(variation(g) <= metric_variation(f) / diam + 1e-12,
                      "separator contraction violated");
        }
        if (!out.pass) break;
    }
    return out;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(ORDNUNG_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_round_trip() {
    Outcome out;
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "ordnung-acceptance";
    fs::create_directories(dir);

    // fixtures
    const auto monotone = gen_random_monotone(6, 5, 8008);
    const auto cantor = gen_cantor_projections(2);
    const auto bv = gen_random_bv(4, 6, 1.5, 8009);
    const fs::path mono_json = dir / "monotone.json";
    const fs::path cantor_json = dir / "cantor.json";
    const fs::path bv_csv = dir / "bv.csv";
    const fs::path bad_json = dir / "bad.json";
    const fs::path frag_json = dir / "frag.json";
    std::ofstream(mono_json) << serialize_family(monotone).dump(2);
    std::ofstream(cantor_json) << serialize_family(cantor).dump(2);
    std::ofstream(bv_csv) << serialize_family_csv(bv);
    std::ofstream(bad_json) << R"({"chain":2,"range":[0,1],"functions":[[0,1.5]]})";
    std::ofstream(frag_json) << R"({"chain":2,"range":[0,1],"functions":[[0,1]],)"
                             << R"("topology":{"ground":2,"opens":[[],[0,1]]}})";

    // ingest -> serialize -> ingest identity, both formats
    for (const auto& fam : {monotone, cantor, bv}) {
        const auto via_json = ingest_text(serialize_family(fam).dump(), "json");
        out.check(via_json.family.has_value(), "json reload failed");
        if (via_json.family) {
            out.check(via_json.family->chain == fam.chain, "chain changed over json");
            for (std::size_t m = 0; m < fam.size(); ++m)
                out.check((*via_json.family)[m].values == fam[m].values,
                          "values changed over json");
        }
        const auto via_csv = ingest_text(serialize_family_csv(fam), "csv");
        out.check(via_csv.family.has_value(), "csv reload failed");
        if (via_csv.family)
            for (std::size_t m = 0; m < fam.size(); ++m)
                out.check((*via_csv.family)[m].values == fam[m].values,
                          "values changed over csv");
    }

    // exit-code matrix: 0 success, 2 certified negative, 1 error
    out.check(run_cli("variation " + mono_json.string()) == 0, "variation exit");
    out.check(run_cli("jordan " + bv_csv.string() + " --format csv") == 0, "csv jordan exit");
    out.check(run_cli("independence " + mono_json.string() + " --k 2") == 2,
              "tame family should exit 2");
    out.check(run_cli("independence " + cantor_json.string() + " --a 0.25 --b 0.75") == 0,
              "independent family should exit 0");
    out.check(run_cli("variation " + bad_json.string()) == 1, "schema error should exit 1");
    out.check(run_cli("variation " + (dir / "missing.json").string()) == 1,
              "missing file should exit 1");
    out.check(run_cli("bogus-command " + mono_json.string()) == 1, "unknown command exit");
    out.check(run_cli("fragcheck " + frag_json.string() + " --epsilon 0.5") == 2,
              "non-fragmented member should exit 2");
    out.check(run_cli("fragcheck " + mono_json.string() + " --epsilon 0.5") == 0,
              "fragmented family should exit 0");
    {
        // the env var moves the exhaustive-check cap
        const std::string cmd = "ORDNUNG_MAX_GROUND=3 " + std::string(ORDNUNG_CLI_PATH) +
                                " fragcheck " + mono_json.string() +
                                " --epsilon 0.5 >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        out.check(WIFEXITED(status) && WEXITSTATUS(status) == 1,
                  "lowered ground cap should exit 1 on a 5-point chain");
    }
    out.check(run_cli("select-monotone " + mono_json.string() + " --epsilon 0.25") == 0,
              "selection exit");
    out.check(run_cli("maxindep " + cantor_json.string()) == 0, "maxindep exit");

    // reports from identical runs differ only in the wall time
    const fs::path rep1 = dir / "rep1.json", rep2 = dir / "rep2.json";
    run_cli("variation " + mono_json.string() + " --out " + rep1.string());
    run_cli("variation " + mono_json.string() + " --out " + rep2.string());
    auto strip = [](const fs::path& p) {
        auto j = json::parse(read_file(p.string()));
        j.erase("wall_ms");
        return j.dump();
    };
    out.check(strip(rep1) == strip(rep2), "reports are not reproducible");
    return out;
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* label;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "cube projections independent at (1/4, 3/4), k=1..6", 1.0, cantor_independence},
        {2, "rademacher witnesses straddle zero, n=1..6", 5.0, rademacher_independence},
        {3, "1000 monotone families are pair-tame", 30.0, monotone_tameness},
        {4, "jordan parts increase and reconstruct bitwise, 10000 trials", 10.0,
         jordan_soundness},
        {5, "variation budget bounds every certified subfamily", 60.0, variation_bound},
        {6, "l1 constants dominate half the threshold gap", 30.0, l1_cross_check},
        {7, "pigeonhole floor holds for 10000-member extraction", 20.0, helly_extraction},
        {8, "streaming diagonal stays within the schedule", 10.0, streaming_diagonal},
        {9, "embedding order, linearity and extensions on 500 families", 30.0,
         representation_claims},
        {10, "fragmentability oracle and sum closure", 60.0, fragmentability},
        {11, "metric selection validated by direct distances", 30.0, metric_selection},
        {12, "cli round trip and exit-code convention", 10.0, cli_round_trip},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_s && out.pass) {
            out.pass = false;
            out.detail = "over the " + num_str(c.budget_s) + " s budget";
        }
        std::ostringstream line;
        line << (out.pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.label
             << " (" << std::fixed << secs << " s)";
        if (!out.pass) line << " -- " << out.detail;
        std::cout << line.str() << "\n";
        if (!out.pass) ++failures;
    }
    std::cout << (failures == 0 ? "all criteria passed"
                                : std::to_string(failures) + " criteria failed")
              << "\n";
    return failures == 0 ? 0 : 1;
}
