#pragma once
// Shared test matrices and independent oracles.
//
// The oracles here deliberately avoid the library's code paths: they work on
// plain dense grids, use direct products instead of log sums, and scan
// densely instead of refining.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "pcnull/matrix.hpp"

namespace fixtures {

using pcnull::PCMatrix;

/// The 5x5 worked example with a_12 unknown.
inline PCMatrix worked_example() {
    PCMatrix m(5);
    m.set(0, 2, 2);
    m.set(0, 3, 3);
    m.set(0, 4, 4);
    m.set(1, 2, 2.5);
    m.set(1, 3, 2.5);
    m.set(1, 4, 3);
    m.set(2, 3, 1.3);
    m.set(2, 4, 1.8);
    m.set(3, 4, 1.5);
    return m;
}

/// The 3x3 example with the unknown B/C left null.
inline PCMatrix ab_example_with_null() {
    PCMatrix m(3);
    m.set(0, 1, 1);
    m.set(0, 2, 5);
    return m;
}

/// The same matrix with the unknown taken literally as 1.
inline PCMatrix ab_example_literal() {
    PCMatrix m = ab_example_with_null();
    m.set(1, 2, 1);
    return m;
}

/// The same matrix with the unknown replaced by 5 (and 1/5).
inline PCMatrix ab_example_substituted() {
    PCMatrix m = ab_example_with_null();
    m.set(1, 2, 5);
    return m;
}

/// 4x4 pattern with only a_13, a_23, a_34 known.
inline PCMatrix chain4_pattern(double a13, double a23, double a34) {
    PCMatrix m(4);
    m.set(0, 2, a13);
    m.set(1, 2, a23);
    m.set(2, 3, a34);
    return m;
}

inline PCMatrix quotient_matrix(const std::vector<double>& w, double scale = pcnull::kDefaultScaleBound) {
    PCMatrix m(w.size(), scale);
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = i + 1; j < w.size(); ++j) m.set(i, j, w[i] / w[j]);
    return m;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// ---------------------------------------------------------------------------
// Random generation
// ---------------------------------------------------------------------------

/// Weights log-uniform in [1/bound, bound].
inline std::vector<double> log_uniform_weights(std::mt19937_64& rng, std::size_t n, double bound = 5.0) {
    std::uniform_real_distribution<double> u(-std::log(bound), std::log(bound));
    std::vector<double> w(n);
    for (double& x : w) x = std::exp(u(rng));
    return w;
}

/// Random spanning tree edges (i<j) on n vertices: each vertex after a random
/// permutation's first attaches to a uniformly chosen earlier vertex.
inline std::vector<std::pair<std::size_t, std::size_t>> random_spanning_tree(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t v = 1; v < n; ++v) {
        std::uniform_int_distribution<std::size_t> pick(0, v - 1);
        std::size_t a = order[v], b = order[pick(rng)];
        edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    return edges;
}

/// Random reciprocal matrix with values log-uniform in [1/5, 5] and each
/// pair null with probability `null_rate`.
inline PCMatrix random_matrix(std::mt19937_64& rng, std::size_t n, double null_rate, double scale = 5.0) {
    PCMatrix m(n, scale);
    std::uniform_real_distribution<double> u(-std::log(scale), std::log(scale));
    std::bernoulli_distribution is_null(null_rate);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!is_null(rng)) m.set(i, j, std::exp(u(rng)));
    return m;
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

/// Direct evaluation of the triad index formula.
inline double oracle_ix(double x, double y, double z) {
    const double a = std::fabs(x - y / z) / x;
    const double b = std::fabs(y - x * z) / y;
    return a < b ? a : b;
}

using Dense = std::vector<std::vector<std::optional<double>>>;

inline Dense dense(const PCMatrix& m) {
    Dense d(m.size(), std::vector<std::optional<double>>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) d[i][j] = m.at(i, j);
    return d;
}

/// Max ix over every complete triple, by exhaustive enumeration.
inline std::optional<double> oracle_global(const Dense& a) {
    std::optional<double> worst;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (!(i < j && j < k)) continue;
                if (!a[i][j] || !a[i][k] || !a[j][k]) continue;
                const double ix = oracle_ix(*a[i][j], *a[i][k], *a[j][k]);
                if (!worst || ix > *worst) worst = ix;
            }
    return worst;
}

/// Objective for slot (p,q) of a dense grid with `x` in that slot, built by
/// writing x into a copy of the grid and enumerating triples through (p,q).
inline double oracle_objective(Dense a, std::size_t p, std::size_t q, double x) {
    a[p][q] = x;
    a[q][p] = 1.0 / x;
    double f = 0;
    const std::size_t n = a.size();
    for (std::size_t r = 0; r < n; ++r) {
        if (r == p || r == q) continue;
        std::size_t t[3] = {p, q, r};
        std::sort(t, t + 3);
        const auto& xv = a[t[0]][t[1]];
        const auto& yv = a[t[0]][t[2]];
        const auto& zv = a[t[1]][t[2]];
        if (!xv || !yv || !zv) continue;
        f = std::max(f, oracle_ix(*xv, *yv, *zv));
    }
    return f;
}

struct ScanResult {
    double x = 0;
    double f = 0;
};

/// Uniform scan of the objective over [lo, hi].
inline ScanResult oracle_scan(const Dense& a, std::size_t p, std::size_t q, double lo, double hi,
                              std::size_t points) {
    // Gather companion pairs once so the scan stays affordable at 1e6 points.
    struct Comp {
        int slot;
        double u, v;
    };
    std::vector<Comp> comps;
    const std::size_t n = a.size();
    for (std::size_t r = 0; r < n; ++r) {
        if (r == p || r == q) continue;
        std::size_t t[3] = {p, q, r};
        std::sort(t, t + 3);
        const std::pair<std::size_t, std::size_t> cells[3] = {{t[0], t[1]}, {t[0], t[2]}, {t[1], t[2]}};
        int slot = -1;
        double vals[3] = {0, 0, 0};
        bool complete = true;
        for (int c = 0; c < 3; ++c) {
            if (cells[c] == std::pair{p, q}) {
                slot = c;
                continue;
            }
            const auto& v = a[cells[c].first][cells[c].second];
            if (!v) complete = false;
            else vals[c] = *v;
        }
        if (!complete) continue;
        if (slot == 0) comps.push_back({0, vals[1], vals[2]});
        if (slot == 1) comps.push_back({1, vals[0], vals[2]});
        if (slot == 2) comps.push_back({2, vals[0], vals[1]});
    }
    ScanResult best{lo, 2.0};
    for (std::size_t g = 0; g < points; ++g) {
        const double x = lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(points - 1);
        double f = 0;
        for (const auto& c : comps) {
            const double ix = c.slot == 0   ? oracle_ix(x, c.u, c.v)
                              : c.slot == 1 ? oracle_ix(c.u, x, c.v)
                                            : oracle_ix(c.u, c.v, x);
            f = std::max(f, ix);
        }
        if (f < best.f) best = {x, f};
    }
    return best;
}

/// Row-i times column-j geometric means of known entries, via direct products.
inline double oracle_gm_fill(const Dense& a, std::size_t i, std::size_t j) {
    double row = 1, col = 1;
    int nr = 0, nc = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[i][k]) {
            row *= *a[i][k];
            ++nr;
        }
        if (a[k][j]) {
            col *= *a[k][j];
            ++nc;
        }
    }
    return std::pow(row, 1.0 / nr) * std::pow(col, 1.0 / nc);
}

}  // namespace fixtures
