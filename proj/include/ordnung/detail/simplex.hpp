#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ordnung/errors.hpp"

namespace ordnung::detail {

// Exact minimization of max_j (A t)_j over the probability simplex
// { t >= 0, sum t = 1 }, as a dense linear program.
//
// Variables are (t_1..t_k, w, s_1..s_m) >= 0 with w = objective + shift:
//   (A t)_j - w + s_j = -shift          for each row j
//   sum_i t_i = 1
// minimize w. The shift keeps w non-negative, and t = e_1 together with the
// row slacks gives a starting basic feasible point, so no phase-1 is needed.
// Bland's rule guards against cycling on the (frequent) degenerate ties.
struct SimplexResult {
    double value = 0.0;
    std::vector<double> point; // minimizing t
};

inline SimplexResult minimize_max_over_simplex(const std::vector<std::vector<double>>& a) {
    const std::size_t m = a.size();
    require(m >= 1, errc::precondition, "objective needs at least one row");
    const std::size_t k = a[0].size();
    require(k >= 1, errc::precondition, "simplex needs at least one coordinate");
    for (const auto& row : a)
        require(row.size() == k, errc::precondition, "ragged objective matrix");

    double maxabs = 0.0;
    for (const auto& row : a)
        for (double x : row) maxabs = std::max(maxabs, std::abs(x));
    const double shift = maxabs + 1.0;

    const std::size_t rows = m + 1;
    const std::size_t nvar = k + 1 + m; // t, w, slacks
    std::vector<std::vector<double>> tab(rows, std::vector<double>(nvar + 1, 0.0));
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < k; ++i) tab[j][i] = a[j][i];
        tab[j][k] = -1.0;      // -w
        tab[j][k + 1 + j] = 1.0; // slack
        tab[j][nvar] = -shift;
    }
    for (std::size_t i = 0; i < k; ++i) tab[m][i] = 1.0;
    tab[m][nvar] = 1.0;

    std::vector<double> cost(nvar, 0.0);
    cost[k] = 1.0; // minimize w

    // Starting basis: t_1, w, and every slack except the tightest row.
    std::size_t argmax = 0;
    for (std::size_t j = 1; j < m; ++j)
        if (a[j][0] > a[argmax][0]) argmax = j;
    std::vector<std::size_t> basis(rows);
    basis[m] = 0; // t_1 in the simplex row
    std::size_t slot = 0;
    for (std::size_t j = 0; j < m; ++j)
        basis[slot++] = (j == argmax) ? k : k + 1 + j;

    auto pivot = [&](std::size_t pr, std::size_t pc) {
        const double p = tab[pr][pc];
        for (std::size_t c = 0; c <= nvar; ++c) tab[pr][c] /= p;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pr) continue;
            const double f = tab[r][pc];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= nvar; ++c) tab[r][c] -= f * tab[pr][c];
        }
        basis[pr] = pc;
    };

    // Canonicalize the starting basis.
    for (std::size_t r = 0; r < rows; ++r) pivot(r, basis[r]);

    const double eps = 1e-9;
    const std::size_t max_iter = 200 * (rows + nvar);
    bool optimal = false;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        std::vector<double> reduced(cost);
        for (std::size_t r = 0; r < rows; ++r) {
            const double cb = cost[basis[r]];
            if (cb == 0.0) continue;
            for (std::size_t c = 0; c < nvar; ++c) reduced[c] -= cb * tab[r][c];
        }
        std::size_t entering = nvar;
        for (std::size_t c = 0; c < nvar; ++c) {
            if (reduced[c] < -eps) {
                entering = c;
                break; // Bland: lowest index
            }
        }
        if (entering == nvar) {
            optimal = true;
            break;
        }

        std::size_t leaving = rows;
        double best_ratio = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            if (tab[r][entering] <= eps) continue;
            const double ratio = tab[r][nvar] / tab[r][entering];
            if (leaving == rows || ratio < best_ratio - eps ||
                (std::abs(ratio - best_ratio) <= eps && basis[r] < basis[leaving])) {
                leaving = r;
                best_ratio = ratio;
            }
        }
        require(leaving < rows, errc::precondition, "unbounded minimax program");
        pivot(leaving, entering);
    }
    require(optimal, errc::precondition, "pivot limit reached before optimality");

    SimplexResult out;
    std::vector<double> x(nvar, 0.0);
    for (std::size_t r = 0; r < rows; ++r) x[basis[r]] = tab[r][nvar];
    out.point.assign(x.begin(), x.begin() + k);
    out.value = x[k] - shift;
    return out;
}

} // namespace ordnung::detail
