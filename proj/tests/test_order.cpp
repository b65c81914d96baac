#include <doctest.h>

#include <set>

#include "ordnung/bv.hpp"
#include "ordnung/gallery.hpp"
#include "ordnung/order.hpp"

using namespace ordnung;

namespace {

// Test-only oracle: materialize the product topology of t with itself as the
// union closure of all open rectangles, encoded as masks over n*n points.
// Only feasible for tiny grounds; used to cross-check product_open.
std::set<std::uint64_t> explicit_product_topology(const FiniteTopology& t) {
    const std::size_t n = t.ground_size();
    REQUIRE(n * n <= 16);
    std::set<std::uint64_t> basis;
    for (auto o1 : t.opens())
        for (auto o2 : t.opens()) {
            std::uint64_t rect = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (mask::contains(o1, i) && mask::contains(o2, j))
                        rect |= std::uint64_t{1} << (i * n + j);
            basis.insert(rect);
        }
    std::set<std::uint64_t> opens(basis);
    std::vector<std::uint64_t> queue(opens.begin(), opens.end());
    while (!queue.empty()) {
        const auto s = queue.back();
        queue.pop_back();
        for (auto b : basis)
            if (opens.insert(s | b).second) queue.push_back(s | b);
    }
    return opens;
}

FinitePoset random_poset(std::size_t n, detail::SplitMix64& rng) {
    // Random edges respecting the index order stay acyclic; take the
    // reflexive transitive closure.
    std::vector<std::vector<std::uint8_t>> leq(n, std::vector<std::uint8_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) leq[i][i] = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.below(3) == 0) leq[i][j] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (leq[i][k] && leq[k][j]) leq[i][j] = 1;
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (leq[i][j]) rel.emplace_back(i, j);
    return FinitePoset(n, rel);
}

} // namespace

TEST_CASE("chain invariants") {
    CHECK_THROWS_AS(Chain(0), error);
    CHECK_THROWS_AS(Chain(2, {"a"}), error);
    CHECK_THROWS_AS(Chain(2, {"a", "a"}), error);
    CHECK(Chain(3).size == 3);
    CHECK(Chain(2, {"lo", "hi"}).labels.size() == 2);
}

TEST_CASE("poset axioms are enforced") {
    CHECK_THROWS_AS(FinitePoset(2, {{0, 0}, {1, 1}, {0, 1}, {1, 0}}), error); // 2-cycle
    CHECK_THROWS_AS(FinitePoset(2, {{0, 1}}), error);                         // not reflexive
    CHECK_THROWS_AS(FinitePoset(3, {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {1, 2}}), error);
    const auto chain3 = FinitePoset::total_order(3);
    CHECK(chain3.leq(0, 2));
    CHECK_FALSE(chain3.leq(2, 0));
}

TEST_CASE("validate_topology examples") {
    // nested opens are closed under union and intersection
    CHECK(validate_topology(FiniteTopology(2, {0b00, 0b01, 0b11})).ok);

    const auto bad = validate_topology(FiniteTopology(2, {0b00, 0b01, 0b10}));
    CHECK_FALSE(bad.ok);
    CHECK(bad.violated_axiom == "not closed under union");
    CHECK((bad.first_set | bad.second_set) == 0b11);

    CHECK(validate_topology(FiniteTopology::discrete(3)).ok);
    CHECK_FALSE(validate_topology(FiniteTopology(2, {0b00, 0b01})).ok); // missing full set
}

TEST_CASE("interval topology collapses to the power set beyond one point") {
    const auto t1 = interval_topology(Chain(1));
    CHECK(t1.opens() == std::vector<std::uint64_t>{0b0, 0b1});

    const auto t2 = interval_topology(Chain(2));
    CHECK(t2.opens().size() == 4);

    for (std::size_t n = 2; n <= 6; ++n) {
        const auto t = interval_topology(Chain(n));
        REQUIRE(t.opens().size() == (std::size_t{1} << n)); // oracle: the power set
        CHECK(validate_topology(t).ok);
    }
    CHECK(validate_topology(t1).ok);
}

TEST_CASE("order_separate follows the ray rule") {
    const Chain two(2);
    CHECK(order_separate(two, 0, 1) == std::pair<std::uint64_t, std::uint64_t>{0b01, 0b10});

    const Chain three(3);
    CHECK(order_separate(three, 0, 2) == std::pair<std::uint64_t, std::uint64_t>{0b001, 0b100});

    const Chain five(5);
    const auto [o1, o2] = order_separate(five, 1, 4);
    CHECK(o1 == 0b00011);
    CHECK(o2 == 0b11000);

    CHECK_THROWS_AS(order_separate(five, 3, 3), error);
    CHECK_THROWS_AS(order_separate(five, 4, 1), error);
}

TEST_CASE("order_separate properties on random chains") {
    detail::SplitMix64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.below(10);
        const Chain x(n);
        const std::size_t u2 = 1 + rng.below(n - 1);
        const std::size_t u1 = rng.below(u2);
        const auto [o1, o2] = order_separate(x, u1, u2);
        CHECK((o1 & o2) == 0);
        CHECK(mask::contains(o1, u1));
        CHECK(mask::contains(o2, u2));
        const auto p1 = mask::points(o1, n);
        const auto p2 = mask::points(o2, n);
        REQUIRE_FALSE(p1.empty());
        REQUIRE_FALSE(p2.empty());
        CHECK(p1.back() < p2.front()); // every point of O1 precedes every point of O2
        if (n <= 6) {
            const auto t = interval_topology(x);
            CHECK(t.is_open(o1));
            CHECK(t.is_open(o2));
        }
    }
}

TEST_CASE("is_closed_order examples") {
    const auto chain2 = FinitePoset::total_order(2);
    CHECK(is_closed_order(chain2, FiniteTopology::discrete(2)));
    CHECK_FALSE(is_closed_order(chain2, FiniteTopology::indiscrete(2)));
    CHECK(is_closed_order(FinitePoset::antichain(3), FiniteTopology::discrete(3)));
    CHECK_THROWS_AS(is_closed_order(chain2, FiniteTopology::discrete(3)), error);
}

TEST_CASE("is_closed_order agrees with the explicit product topology") {
    detail::SplitMix64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng.below(2); // 2 or 3 points
        const auto t = gen_random_topology(n, rng.below(std::size_t{1} << n), rng.next());
        const auto p = random_poset(n, rng);
        const auto product = explicit_product_topology(t);
        std::uint64_t complement = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (!p.leq(i, j)) complement |= std::uint64_t{1} << (i * n + j);
        const bool oracle = product.count(complement) > 0;
        CHECK(is_closed_order(p, t) == oracle);
    }
}

TEST_CASE("chains with the interval topology have a closed order") {
    for (std::size_t n = 1; n <= 6; ++n)
        CHECK(is_closed_order(FinitePoset::total_order(n), interval_topology(Chain(n))));
}

TEST_CASE("separating_family examples") {
    const auto anti = separating_family(FinitePoset::antichain(2));
    REQUIRE(anti.size() == 2);
    CHECK(anti[0].values == std::vector<double>{1, 0});
    CHECK(anti[1].values == std::vector<double>{0, 1});

    const auto chain3 = separating_family(FinitePoset::total_order(3));
    REQUIRE(chain3.size() == 3);
    CHECK(chain3[0].values == std::vector<double>{1, 1, 1});
    CHECK(chain3[1].values == std::vector<double>{0, 1, 1});
    CHECK(chain3[2].values == std::vector<double>{0, 0, 1});

    // diamond: bottom 0, middles 1 and 2, top 3
    const FinitePoset diamond(4, {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {0, 1}, {0, 2}, {0, 3},
                                  {1, 3}, {2, 3}});
    const auto fam = separating_family(diamond);
    REQUIRE(fam.size() == 4);
    for (std::size_t x = 0; x < 4; ++x)
        for (std::size_t y = x + 1; y < 4; ++y) {
            bool separated = false;
            for (std::size_t m = 0; m < fam.size(); ++m)
                separated = separated || fam[m](x) != fam[m](y);
            CHECK(separated);
        }
}

TEST_CASE("separating families are increasing and separate on random posets") {
    detail::SplitMix64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.below(6);
        const auto p = random_poset(n, rng);
        const auto fam = separating_family(p);
        for (std::size_t m = 0; m < fam.size(); ++m)
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y = 0; y < n; ++y)
                    if (p.leq(x, y)) CHECK(fam[m](x) <= fam[m](y));
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = x + 1; y < n; ++y) {
                bool separated = false;
                for (std::size_t m = 0; m < fam.size(); ++m)
                    separated = separated || fam[m](x) != fam[m](y);
                CHECK(separated);
            }
    }
}

TEST_CASE("metric space invariants") {
    CHECK_THROWS_AS(FiniteMetricSpace(2, {0, 1, 2, 0}), error);                // asymmetric
    CHECK_THROWS_AS(FiniteMetricSpace(2, {0, 0, 0, 0}), error);                // indistinct
    CHECK_THROWS_AS(FiniteMetricSpace(2, {1, 1, 1, 0}), error);                // diagonal
    CHECK_THROWS_AS(FiniteMetricSpace(3, {0, 1, 3, 1, 0, 1, 3, 1, 0}), error); // triangle
    const FiniteMetricSpace path(3, {0, 1, 2, 1, 0, 1, 2, 1, 0});
    CHECK(path.diameter() == 2.0);
}
