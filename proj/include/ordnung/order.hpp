#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ordnung/errors.hpp"

namespace ordnung {

// Subsets of small ground sets are bit masks; bit i is ground point i.
namespace mask {

inline std::uint64_t full(std::size_t n) {
    return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

inline bool contains(std::uint64_t m, std::size_t i) {
    return (m >> i) & 1u;
}

inline std::uint64_t singleton(std::size_t i) { return std::uint64_t{1} << i; }

inline std::vector<std::size_t> points(std::uint64_t m, std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (contains(m, i)) out.push_back(i);
    return out;
}

} // namespace mask

// A finite linear order. Points are rank indices 0..size-1; labels are
// display-only and must be distinct when present.
struct Chain {
    std::size_t size = 1;
    std::vector<std::string> labels; // empty, or exactly `size` distinct entries

    explicit Chain(std::size_t n, std::vector<std::string> lbl = {})
        : size(n), labels(std::move(lbl)) {
        require(size >= 1, errc::schema_error, "chain size must be positive");
        if (!labels.empty()) {
            require(labels.size() == size, errc::schema_error,
                    "chain labels must have one entry per point");
            std::set<std::string> uniq(labels.begin(), labels.end());
            require(uniq.size() == labels.size(), errc::schema_error,
                    "chain labels must be distinct");
        }
    }

    bool operator==(const Chain&) const = default;
};

// Explicit finite partial order, dense incidence storage.
class FinitePoset {
public:
    FinitePoset(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& relation)
        : size_(n), leq_(n * n, 0) {
        require(n >= 1, errc::schema_error, "poset size must be positive");
        for (auto [i, j] : relation) {
            require(i < n && j < n, errc::schema_error, "relation pair out of range");
            leq_[i * n + j] = 1;
        }
        for (std::size_t i = 0; i < n; ++i)
            require(leq(i, i), errc::schema_error, "relation is not reflexive");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && leq(i, j) && leq(j, i))
                    fail(errc::schema_error, "relation is not antisymmetric");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (leq(i, j))
                    for (std::size_t k = 0; k < n; ++k)
                        if (leq(j, k) && !leq(i, k))
                            fail(errc::schema_error, "relation is not transitive");
    }

    static FinitePoset total_order(std::size_t n) {
        std::vector<std::pair<std::size_t, std::size_t>> rel;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) rel.emplace_back(i, j);
        return FinitePoset(n, rel);
    }

    static FinitePoset antichain(std::size_t n) {
        std::vector<std::pair<std::size_t, std::size_t>> rel;
        for (std::size_t i = 0; i < n; ++i) rel.emplace_back(i, i);
        return FinitePoset(n, rel);
    }

    std::size_t size() const { return size_; }
    bool leq(std::size_t i, std::size_t j) const { return leq_[i * size_ + j] != 0; }

    std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < size_; ++i)
            for (std::size_t j = 0; j < size_; ++j)
                if (leq(i, j)) out.emplace_back(i, j);
        return out;
    }

    bool operator==(const FinitePoset&) const = default;

private:
    std::size_t size_;
    std::vector<std::uint8_t> leq_;
};

// Explicit family of open sets on a small ground set. The constructor only
// normalizes; closure axioms are checked by validate_topology so that
// invalid inputs can be inspected rather than rejected.
class FiniteTopology {
public:
    FiniteTopology(std::size_t ground, std::vector<std::uint64_t> opens)
        : ground_(ground), opens_(std::move(opens)) {
        require(ground >= 1, errc::schema_error, "ground size must be positive");
        require(ground <= 63, errc::too_large, "ground sets above 63 points are not supported");
        const auto all = mask::full(ground);
        for (auto o : opens_)
            require((o & ~all) == 0, errc::schema_error, "open set exceeds the ground set");
        std::sort(opens_.begin(), opens_.end());
        opens_.erase(std::unique(opens_.begin(), opens_.end()), opens_.end());
    }

    static FiniteTopology indiscrete(std::size_t ground) {
        return FiniteTopology(ground, {0, mask::full(ground)});
    }

    static FiniteTopology discrete(std::size_t ground) {
        require(ground <= 20, errc::too_large, "discrete topology on more than 20 points");
        std::vector<std::uint64_t> opens(std::size_t{1} << ground);
        for (std::size_t m = 0; m < opens.size(); ++m) opens[m] = m;
        return FiniteTopology(ground, std::move(opens));
    }

    std::size_t ground_size() const { return ground_; }
    const std::vector<std::uint64_t>& opens() const { return opens_; }

    bool is_open(std::uint64_t s) const {
        return std::binary_search(opens_.begin(), opens_.end(), s);
    }

    bool operator==(const FiniteTopology&) const = default;

private:
    std::size_t ground_;
    std::vector<std::uint64_t> opens_;
};

// Finite metric space with a dense symmetric distance matrix.
class FiniteMetricSpace {
public:
    FiniteMetricSpace(std::size_t n, std::vector<double> distances)
        : size_(n), dist_(std::move(distances)) {
        require(n >= 1, errc::schema_error, "metric space size must be positive");
        require(dist_.size() == n * n, errc::schema_error, "distance matrix must be size x size");
        for (std::size_t i = 0; i < n; ++i) {
            require(dist(i, i) == 0.0, errc::schema_error, "distance diagonal must be zero");
            for (std::size_t j = 0; j < n; ++j) {
                require(dist(i, j) >= 0.0, errc::schema_error, "distances must be non-negative");
                require(dist(i, j) == dist(j, i), errc::schema_error,
                        "distance matrix must be symmetric");
                if (i != j)
                    require(dist(i, j) > 0.0, errc::schema_error,
                            "distinct points must have positive distance");
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    require(dist(i, j) <= dist(i, k) + dist(k, j), errc::schema_error,
                            "triangle inequality fails");
    }

    std::size_t size() const { return size_; }
    double dist(std::size_t i, std::size_t j) const { return dist_[i * size_ + j]; }

    double diameter() const {
        double d = 0.0;
        for (double v : dist_) d = std::max(d, v);
        return d;
    }

    bool operator==(const FiniteMetricSpace&) const = default;

private:
    std::size_t size_;
    std::vector<double> dist_;
};

// ---------------------------------------------------------------------------
// validate_topology

struct TopologyReport {
    bool ok = true;
    std::string violated_axiom;       // empty when ok
    std::uint64_t first_set = 0;      // offending pair for union/intersection axioms
    std::uint64_t second_set = 0;
};

inline TopologyReport validate_topology(const FiniteTopology& t) {
    TopologyReport rep;
    const auto& opens = t.opens();
    if (!t.is_open(0)) {
        rep.ok = false;
        rep.violated_axiom = "missing empty set";
        return rep;
    }
    for (std::size_t a = 0; a < opens.size(); ++a) {
        for (std::size_t b = a + 1; b < opens.size(); ++b) {
            if (!t.is_open(opens[a] | opens[b])) {
                rep.ok = false;
                rep.violated_axiom = "not closed under union";
                rep.first_set = opens[a];
                rep.second_set = opens[b];
                return rep;
            }
            if (!t.is_open(opens[a] & opens[b])) {
                rep.ok = false;
                rep.violated_axiom = "not closed under intersection";
                rep.first_set = opens[a];
                rep.second_set = opens[b];
                return rep;
            }
        }
    }
    if (!t.is_open(mask::full(t.ground_size()))) {
        rep.ok = false;
        rep.violated_axiom = "missing ground set";
        return rep;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// interval_topology

// Rays are strict: up_ray(a) = {i : i > a}, down_ray(b) = {i : i < b}.
inline std::uint64_t up_ray(const Chain& x, std::size_t a) {
    return mask::full(x.size) & ~((std::uint64_t{1} << (a + 1)) - 1);
}

inline std::uint64_t down_ray(const Chain&, std::size_t b) {
    return (std::uint64_t{1} << b) - 1;
}

// Topology generated by all rays of the chain. The basis (pairwise ray
// intersections, i.e. open intervals) is intersection-closed, so saturating
// it under unions yields the generated topology. Exponential output on
// chains with two or more points.
inline FiniteTopology interval_topology(const Chain& x) {
    const std::size_t n = x.size;
    require(n <= 16, errc::too_large,
            "interval topology is the power set beyond one point; capped at 16-point chains");
    std::set<std::uint64_t> basis;
    basis.insert(0);
    basis.insert(mask::full(n));
    for (std::size_t a = 0; a < n; ++a) basis.insert(up_ray(x, a));
    for (std::size_t b = 0; b < n; ++b) basis.insert(down_ray(x, b));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) basis.insert(up_ray(x, a) & down_ray(x, b));

    std::set<std::uint64_t> opens(basis);
    std::vector<std::uint64_t> queue(opens.begin(), opens.end());
    while (!queue.empty()) {
        const auto s = queue.back();
        queue.pop_back();
        for (auto b : basis) {
            const auto u = s | b;
            if (opens.insert(u).second) queue.push_back(u);
        }
    }
    return FiniteTopology(n, std::vector<std::uint64_t>(opens.begin(), opens.end()));
}

// ---------------------------------------------------------------------------
// order_separate

// Disjoint open neighborhoods with every point of the first preceding every
// point of the second. If the open interval (u1,u2) is empty the rays at u1
// and u2 already separate; otherwise split at the least interior point.
inline std::pair<std::uint64_t, std::uint64_t> order_separate(const Chain& x, std::size_t u1,
                                                              std::size_t u2) {
    require(x.size <= 63, errc::too_large, "separation masks cover chains up to 63 points");
    require(u1 < x.size && u2 < x.size, errc::index_out_of_range, "point index out of range");
    require(u1 < u2, errc::not_strictly_ordered, "order_separate needs u1 < u2");
    if (u2 == u1 + 1) return {down_ray(x, u2), up_ray(x, u1)};
    const std::size_t t = u1 + 1;
    return {down_ray(x, t), up_ray(x, t)};
}

// ---------------------------------------------------------------------------
// is_closed_order

// Membership test for the product topology of t with itself: S is open iff
// every point of S has a basic open rectangle inside S. Equivalent to
// materializing the product topology (rectangles are its basis) without
// enumerating the doubly exponential open family.
inline bool product_open(const FiniteTopology& t, const std::vector<std::uint8_t>& s) {
    const std::size_t n = t.ground_size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!s[i * n + j]) continue;
            bool covered = false;
            for (auto o1 : t.opens()) {
                if (!mask::contains(o1, i)) continue;
                for (auto o2 : t.opens()) {
                    if (!mask::contains(o2, j)) continue;
                    bool inside = true;
                    for (std::size_t a = 0; a < n && inside; ++a)
                        for (std::size_t b = 0; b < n && inside; ++b)
                            if (mask::contains(o1, a) && mask::contains(o2, b) && !s[a * n + b])
                                inside = false;
                    if (inside) {
                        covered = true;
                        break;
                    }
                }
                if (covered) break;
            }
            if (!covered) return false;
        }
    }
    return true;
}

// True iff the order graph is closed in the square of t, i.e. the complement
// of the graph is product-open.
inline bool is_closed_order(const FinitePoset& p, const FiniteTopology& t) {
    require(p.size() == t.ground_size(), errc::size_mismatch,
            "poset and topology must share the ground set");
    const std::size_t n = p.size();
    std::vector<std::uint8_t> complement(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) complement[i * n + j] = p.leq(i, j) ? 0 : 1;
    return product_open(t, complement);
}

} // namespace ordnung
