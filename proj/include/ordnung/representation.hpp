#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ordnung/bv.hpp"
#include "ordnung/errors.hpp"
#include "ordnung/order.hpp"

namespace ordnung {

// ---------------------------------------------------------------------------
// augment_separating

namespace detail {

inline bool members_separate(const FunctionFamily& family, std::size_t x, std::size_t y) {
    for (const auto& f : family.members)
        if (f(x) != f(y)) return true;
    return false;
}

} // namespace detail

// Appends indicators of {p : p >= b}, scaled into the family range, for the
// upper point b of every unseparated pair, in ascending order of b. One pass
// suffices: the indicator at b tells apart every pair straddling b.
inline FunctionFamily augment_separating(const Chain& x, const FunctionFamily& family) {
    require(family.chain == x, errc::size_mismatch, "family must live on the given chain");
    // Distinct upper points over all unseparated pairs.
    std::vector<std::size_t> uppers;
    std::vector<std::uint8_t> needed(x.size, 0);
    for (std::size_t i = 0; i < x.size; ++i)
        for (std::size_t j = i + 1; j < x.size; ++j)
            if (!detail::members_separate(family, i, j)) needed[j] = 1;
    for (std::size_t j = 0; j < x.size; ++j)
        if (needed[j]) uppers.push_back(j);
    if (uppers.empty()) return family;

    double lo = family.lo, hi = family.hi;
    if (hi <= lo) hi = lo + 1.0; // degenerate declared range cannot separate
    std::vector<ChainFunction> members = family.members;
    for (auto b : uppers) {
        std::vector<double> vals(x.size, lo);
        for (std::size_t p = b; p < x.size; ++p) vals[p] = hi;
        members.emplace_back(x, std::move(vals), lo, hi);
    }
    return FunctionFamily(x, std::move(members), lo, hi);
}

// ---------------------------------------------------------------------------
// diagonal_embed

// Image of the diagonal map together with the product-order relation it
// induces and the coordinate extensions.
struct EmbeddingResult {
    Chain source;
    FunctionFamily family;                       // possibly augmented
    std::vector<std::vector<double>> image;      // image[x][i] = f_i(x)
    std::vector<std::uint8_t> relation;          // row-major product order on image points

    bool related(std::size_t u, std::size_t v) const {
        return relation[u * source.size + v] != 0;
    }

    // Coordinate projection of member i on image points.
    std::vector<double> extension(std::size_t i) const {
        std::vector<double> out(image.size());
        for (std::size_t j = 0; j < image.size(); ++j) out[j] = image[j][i];
        return out;
    }
};

inline EmbeddingResult diagonal_embed(const Chain& x, const FunctionFamily& family,
                                      bool auto_augment) {
    require(family.chain == x, errc::size_mismatch, "family must live on the given chain");
    for (std::size_t m = 0; m < family.size(); ++m)
        if (auto i = first_decrease(family[m]))
            fail(errc::not_monotone, "member " + std::to_string(m) + " decreases between points " +
                                         std::to_string(*i) + " and " + std::to_string(*i + 1));

    FunctionFamily fam = auto_augment ? augment_separating(x, family) : family;
    const std::size_t n = x.size;
    const std::size_t k = fam.size();

    EmbeddingResult res{x, fam, {}, {}};
    res.image.assign(n, std::vector<double>(k, 0.0));
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t i = 0; i < k; ++i) res.image[p][i] = fam[i](p);

    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q)
            if (res.image[p] == res.image[q])
                fail(errc::not_separating, "points " + std::to_string(p) + " and " +
                                               std::to_string(q) + " share all member values");

    res.relation.assign(n * n, 0);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            bool le = true;
            for (std::size_t i = 0; i < k && le; ++i) le = res.image[u][i] <= res.image[v][i];
            res.relation[u * n + v] = le ? 1 : 0;
        }
    return res;
}

// ---------------------------------------------------------------------------
// verify_claims

// Checks on an embedding: the relation is a partial order on the image, it
// is total there, and the coordinate extensions are increasing restrictions
// of the original members. Closedness of the order and the coincidence of
// product and interval topologies carry no content on a finite image and are
// reported as degenerate passes.
struct ClaimReport {
    bool partial_order = false;   // relation is reflexive, antisymmetric, transitive
    bool linear_on_image = false; // relation is total on image points
    bool extensions_ok = false;   // projections increase and restrict to the members
    bool topologies_match = true; // degenerate at finite scale
    bool closedness_vacuous = true;
    bool topology_degenerate = true;
    std::string counterexample; // first failing claim's witness, empty when all pass

    bool all() const { return partial_order && linear_on_image && extensions_ok; }
};

inline ClaimReport verify_claims(const EmbeddingResult& e) {
    ClaimReport rep;
    auto note = [&rep](const std::string& msg) {
        if (rep.counterexample.empty()) rep.counterexample = msg;
    };
    const std::size_t n = e.source.size;

    rep.partial_order = true;
    for (std::size_t u = 0; u < n && rep.partial_order; ++u)
        if (!e.related(u, u)) {
            rep.partial_order = false;
            note("relation not reflexive at " + std::to_string(u));
        }
    for (std::size_t u = 0; u < n && rep.partial_order; ++u)
        for (std::size_t v = 0; v < n && rep.partial_order; ++v)
            if (u != v && e.related(u, v) && e.related(v, u)) {
                rep.partial_order = false;
                note("2-cycle between " + std::to_string(u) + " and " + std::to_string(v));
            }
    for (std::size_t u = 0; u < n && rep.partial_order; ++u)
        for (std::size_t v = 0; v < n && rep.partial_order; ++v)
            for (std::size_t w = 0; w < n && rep.partial_order; ++w)
                if (e.related(u, v) && e.related(v, w) && !e.related(u, w)) {
                    rep.partial_order = false;
                    note("transitivity fails through " + std::to_string(v));
                }

    rep.linear_on_image = true;
    for (std::size_t u = 0; u < n && rep.linear_on_image; ++u)
        for (std::size_t v = 0; v < n && rep.linear_on_image; ++v)
            if (!e.related(u, v) && !e.related(v, u)) {
                rep.linear_on_image = false;
                note("incomparable image points " + std::to_string(u) + ", " + std::to_string(v));
            }

    rep.extensions_ok = true;
    for (std::size_t i = 0; i < e.family.size() && rep.extensions_ok; ++i) {
        const auto ext = e.extension(i);
        for (std::size_t p = 0; p < n && rep.extensions_ok; ++p) {
            if (ext[p] != e.family[i](p)) {
                rep.extensions_ok = false;
                note("extension " + std::to_string(i) +
                     " does not restrict to the member at point " + std::to_string(p));
            }
        }
        for (std::size_t u = 0; u < n && rep.extensions_ok; ++u)
            for (std::size_t v = 0; v < n && rep.extensions_ok; ++v)
                if (e.related(u, v) && ext[u] > ext[v]) {
                    rep.extensions_ok = false;
                    note("extension " + std::to_string(i) + " is not order preserving");
                }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// is_fragmented

inline constexpr std::size_t kDefaultMaxGround = 15;

struct FragmentationResult {
    bool fragmented = true;
    std::uint64_t witness_subset = 0; // first subset with no qualifying open, on failure
};

namespace detail {

template <typename Diam>
FragmentationResult fragmented_impl(const FiniteTopology& t, double epsilon, Diam&& diam,
                                    std::size_t max_ground) {
    require(epsilon > 0.0, errc::tolerance_non_positive, "epsilon must be positive");
    const std::size_t n = t.ground_size();
    require(n <= max_ground, errc::ground_too_large,
            "exhaustive subset check capped at " + std::to_string(max_ground) + " points");
    const std::uint64_t all = mask::full(n);
    for (std::uint64_t a = 1; a <= all; ++a) {
        bool found = false;
        for (auto o : t.opens()) {
            const std::uint64_t cut = o & a;
            if (cut == 0) continue;
            if (diam(cut) <= epsilon) {
                found = true;
                break;
            }
        }
        if (!found) return {false, a};
    }
    return {true, 0};
}

} // namespace detail

// Exhaustive check of the fragmentation property: every nonempty subset A
// admits an open O with O cut A nonempty and with epsilon-small image.
inline FragmentationResult is_fragmented(const std::vector<double>& values,
                                         const FiniteTopology& t, double epsilon,
                                         std::size_t max_ground = kDefaultMaxGround) {
    require(values.size() == t.ground_size(), errc::size_mismatch,
            "need one value per ground point");
    auto diam = [&](std::uint64_t s) {
        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (std::size_t i = 0; i < values.size(); ++i)
            if (mask::contains(s, i)) {
                lo = first ? values[i] : std::min(lo, values[i]);
                hi = first ? values[i] : std::max(hi, values[i]);
                first = false;
            }
        return hi - lo;
    };
    return detail::fragmented_impl(t, epsilon, diam, max_ground);
}

inline FragmentationResult is_fragmented(const std::vector<std::size_t>& values,
                                         const FiniteTopology& t,
                                         const FiniteMetricSpace& target, double epsilon,
                                         std::size_t max_ground = kDefaultMaxGround) {
    require(values.size() == t.ground_size(), errc::size_mismatch,
            "need one value per ground point");
    for (auto p : values)
        require(p < target.size(), errc::index_out_of_range, "value is not a target point");
    auto diam = [&](std::uint64_t s) {
        double d = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i)
            if (mask::contains(s, i))
                for (std::size_t j = i + 1; j < values.size(); ++j)
                    if (mask::contains(s, j)) d = std::max(d, target.dist(values[i], values[j]));
        return d;
    };
    return detail::fragmented_impl(t, epsilon, diam, max_ground);
}

// ---------------------------------------------------------------------------
// fragmented_vector_closure

// Sum stability of fragmentation: besides checking f+g directly, replays the
// constructive argument. For each subset A pick an open O1 that works for f
// at epsilon/2, then an open O2 for g on A cut O1; the intersection must
// work for f+g at epsilon.
inline bool fragmented_vector_closure(const std::vector<double>& f, const std::vector<double>& g,
                                      const FiniteTopology& t, double epsilon,
                                      std::size_t max_ground = kDefaultMaxGround) {
    require(f.size() == t.ground_size() && g.size() == t.ground_size(), errc::size_mismatch,
            "need one value per ground point");
    require(is_fragmented(f, t, epsilon / 2.0, max_ground).fragmented, errc::precondition,
            "first summand is not fragmented at epsilon/2");
    require(is_fragmented(g, t, epsilon / 2.0, max_ground).fragmented, errc::precondition,
            "second summand is not fragmented at epsilon/2");

    const std::size_t n = t.ground_size();
    std::vector<double> sum(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) sum[i] = f[i] + g[i];
    if (!is_fragmented(sum, t, epsilon, max_ground).fragmented) return false;

    auto range_on = [&](const std::vector<double>& v, std::uint64_t s) {
        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (std::size_t i = 0; i < n; ++i)
            if (mask::contains(s, i)) {
                lo = first ? v[i] : std::min(lo, v[i]);
                hi = first ? v[i] : std::max(hi, v[i]);
                first = false;
            }
        return hi - lo;
    };

    const std::uint64_t all = mask::full(n);
    for (std::uint64_t a = 1; a <= all; ++a) {
        std::uint64_t o1 = 0;
        bool have_o1 = false;
        for (auto o : t.opens())
            if ((o & a) != 0 && range_on(f, o & a) <= epsilon / 2.0) {
                o1 = o;
                have_o1 = true;
                break;
            }
        if (!have_o1) return false; // cannot happen once the precondition holds
        const std::uint64_t a1 = a & o1;
        std::uint64_t o2 = 0;
        bool have_o2 = false;
        for (auto o : t.opens())
            if ((o & a1) != 0 && range_on(g, o & a1) <= epsilon / 2.0) {
                o2 = o;
                have_o2 = true;
                break;
            }
        if (!have_o2) return false;
        const std::uint64_t cut = a & o1 & o2;
        if (cut == 0 || range_on(sum, cut) > epsilon) return false;
    }
    return true;
}

} // namespace ordnung
