#include "pcnull/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace pcnull {

namespace {

// Same formula as triad_ix without argument checks; the scan calls it in a
// tight loop over positive grid points only.
inline double ix_unchecked(double x, double y, double z) {
    return std::min(std::abs(x - y / z) / x, std::abs(y - x * z) / y);
}

class DisjointSet {
public:
    explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }

    void merge(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

Location cell_loc(std::size_t i, std::size_t j) {
    Location l;
    l.row = i + 1;
    l.col = j + 1;
    return l;
}

void require_connected(const PCMatrix& m) {
    const Recoverability r = recoverability(m);
    if (!r.fully_recoverable)
        throw Error(ErrorCode::not_recoverable,
                    "known entries do not connect all stimuli; components: " +
                        describe_components(r.components));
}

}  // namespace

Recoverability recoverability(const PCMatrix& m) {
    const std::size_t n = m.size();
    DisjointSet dsu(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (m.known(i, j)) dsu.merge(i, j);

    Recoverability r;
    std::map<std::size_t, std::size_t> root_to_component;
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t root = dsu.find(v);
        auto [it, inserted] = root_to_component.emplace(root, r.components.size());
        if (inserted) r.components.emplace_back();
        r.components[it->second].push_back(v);
    }
    r.fully_recoverable = r.components.size() == 1;
    for (const auto& comp : r.components)
        for (std::size_t a = 0; a < comp.size(); ++a)
            for (std::size_t b = a + 1; b < comp.size(); ++b) r.recoverable_pairs.emplace(comp[a], comp[b]);
    return r;
}

std::string describe_components(const std::vector<std::vector<std::size_t>>& components) {
    std::string out;
    for (const auto& comp : components) {
        if (!out.empty()) out += ' ';
        out += '{';
        for (std::size_t k = 0; k < comp.size(); ++k) {
            if (k) out += ',';
            out += std::to_string(comp[k] + 1);
        }
        out += '}';
    }
    return out;
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::gm: return "gm";
        case Method::triad: return "triad";
        case Method::transitive: return "transitive";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
    if (name == "gm") return Method::gm;
    if (name == "triad") return Method::triad;
    if (name == "transitive") return Method::transitive;
    return std::nullopt;
}

// ---------------------------------------------------------------------------

double replacement_objective(std::span<const CompanionTriad> triads, double x) {
    double f = 0;
    for (const auto& t : triads) f = std::max(f, t.with(x).ix);
    return f;
}

ReplacementResult minimize_over(std::span<const CompanionTriad> triads, double lo, double hi) {
    if (triads.empty()) throw Error(ErrorCode::deferred_slot, "no complete companion triad");
    if (!(lo > 0.0) || !(hi > lo)) throw Error(ErrorCode::domain, "search interval must be positive and non-empty");

    const std::size_t points = kScanPoints;
    const double step = (hi - lo) / static_cast<double>(points - 1);
    std::vector<double> grid(points), f(points, 0.0);
    for (std::size_t g = 0; g < points; ++g) grid[g] = lo + step * static_cast<double>(g);
    grid.back() = hi;

    for (const auto& t : triads) {
        const double a = t.first, b = t.second;
        switch (t.variable) {
            case TriadSlot::x:
                for (std::size_t g = 0; g < points; ++g) f[g] = std::max(f[g], ix_unchecked(grid[g], a, b));
                break;
            case TriadSlot::y:
                for (std::size_t g = 0; g < points; ++g) f[g] = std::max(f[g], ix_unchecked(a, grid[g], b));
                break;
            case TriadSlot::z:
                for (std::size_t g = 0; g < points; ++g) f[g] = std::max(f[g], ix_unchecked(a, b, grid[g]));
                break;
        }
    }

    const std::size_t best = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
    double left = grid[best == 0 ? 0 : best - 1];
    double right = grid[best + 1 == points ? best : best + 1];

    auto objective = [&](double x) { return replacement_objective(triads, x); };
    for (int iter = 0; iter < 200 && right - left > kRefineTolerance; ++iter) {
        const double m1 = left + (right - left) / 3.0;
        const double m2 = right - (right - left) / 3.0;
        if (objective(m1) <= objective(m2))
            right = m2;
        else
            left = m1;
    }

    double x_star = 0.5 * (left + right);
    double f_star = objective(x_star);
    if (f[best] < f_star) {
        x_star = grid[best];
        f_star = f[best];
    }

    ReplacementResult r;
    r.x_star = x_star;
    r.f_star = f_star;
    r.triads.assign(triads.begin(), triads.end());
    r.triad_ixs.reserve(triads.size());
    for (const auto& t : triads) r.triad_ixs.push_back(t.with(x_star).ix);
    r.f_star = *std::max_element(r.triad_ixs.begin(), r.triad_ixs.end());
    return r;
}

ReplacementResult minimize_replacement(const PCMatrix& m, std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    if (m.known(i, j)) throw Error(ErrorCode::slot_not_null, "slot already holds a value", cell_loc(i, j));
    const auto triads = triads_through(m, i, j);
    if (triads.empty())
        throw Error(ErrorCode::deferred_slot, "slot has no complete companion triad; recover other entries first",
                    cell_loc(i, j));
    return minimize_over(triads, 1.0 / m.scale_bound(), m.scale_bound());
}

// ---------------------------------------------------------------------------

TransitiveResult recover_transitive(const PCMatrix& m) {
    require_connected(m);
    const std::size_t n = m.size();

    std::vector<double> potential(n, 0.0);
    std::vector<std::size_t> parent(n, n);
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v = 0; v < n; ++v) {
            if (seen[v] || v == u || !m.known(u, v)) continue;
            // p_u - p_v = log a_uv
            potential[v] = potential[u] - std::log(m.value(u, v));
            parent[v] = u;
            seen[v] = true;
            queue.push_back(v);
        }
    }

    TransitiveResult out{m, 0.0};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!m.known(i, j)) {
                out.matrix.set(i, j, std::exp(potential[i] - potential[j]));
                continue;
            }
            if (parent[j] == i || parent[i] == j) continue;
            const double gap = std::abs(std::log(m.value(i, j)) - (potential[i] - potential[j]));
            out.residual = std::max(out.residual, gap);
        }
    return out;
}

PCMatrix gm_fill(const PCMatrix& m) {
    const std::size_t n = m.size();
    std::vector<double> row_log_gm(n, 0.0), col_log_gm(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        double row_sum = 0, col_sum = 0;
        std::size_t row_count = 0, col_count = 0;
        for (std::size_t b = 0; b < n; ++b) {
            if (const Cell c = m.at(a, b)) {
                row_sum += std::log(*c);
                ++row_count;
            }
            if (const Cell c = m.at(b, a)) {
                col_sum += std::log(*c);
                ++col_count;
            }
        }
        // the diagonal guarantees both counts are at least 1
        row_log_gm[a] = row_sum / static_cast<double>(row_count);
        col_log_gm[a] = col_sum / static_cast<double>(col_count);
    }

    PCMatrix out = m;
    for (const auto& [i, j] : m.null_slots()) out.set(i, j, std::exp(row_log_gm[i] + col_log_gm[j]));
    return out;
}

// ---------------------------------------------------------------------------

TriadFillResult triad_fill(const PCMatrix& m) {
    require_connected(m);

    TriadFillResult out{m, {}};
    PCMatrix& cur = out.matrix;
    const double lo = 1.0 / m.scale_bound();
    const double hi = m.scale_bound();

    std::map<CellKey, std::optional<ReplacementResult>> pending;
    auto evaluate = [&](const CellKey& key) -> std::optional<ReplacementResult> {
        const auto triads = triads_through(cur, key.first, key.second);
        if (triads.empty()) return std::nullopt;
        return minimize_over(triads, lo, hi);
    };
    for (const auto& key : cur.null_slots()) pending.emplace(key, evaluate(key));

    while (!pending.empty()) {
        double least = std::numeric_limits<double>::infinity();
        for (const auto& [key, result] : pending)
            if (result) least = std::min(least, result->f_star);
        if (!std::isfinite(least))
            throw std::logic_error("triad_fill stalled on a connected entry graph");

        // Near-ties go to the slot closest to the main diagonal, then lexicographic.
        const CellKey* chosen = nullptr;
        for (const auto& [key, result] : pending) {
            if (!result || result->f_star > least + kTieTolerance) continue;
            if (!chosen || std::tuple(key.second - key.first, key) <
                               std::tuple(chosen->second - chosen->first, *chosen))
                chosen = &key;
        }

        const CellKey slot = *chosen;
        const ReplacementResult result = *pending.at(slot);
        cur.set(slot.first, slot.second, result.x_star);
        out.log.steps.push_back({slot.first, slot.second, result.x_star, result.f_star, Method::triad});
        pending.erase(slot);

        // Only slots sharing a stimulus with the committed one gain a triad.
        for (auto& [key, cached] : pending) {
            const bool touches = key.first == slot.first || key.first == slot.second ||
                                 key.second == slot.first || key.second == slot.second;
            if (touches) cached = evaluate(key);
        }
    }

    out.log.residual = global_inconsistency(cur);
    return out;
}

RecoveryOutcome recover(const PCMatrix& m, Method method) {
    RecoveryOutcome out{method, m, {}, std::nullopt};
    switch (method) {
        case Method::triad: {
            auto filled = triad_fill(m);
            out.matrix = std::move(filled.matrix);
            out.log = std::move(filled.log);
            return out;
        }
        case Method::gm:
            out.matrix = gm_fill(m);
            break;
        case Method::transitive: {
            auto filled = recover_transitive(m);
            out.matrix = std::move(filled.matrix);
            out.path_residual = filled.residual;
            break;
        }
    }
    for (const auto& [i, j] : m.null_slots())
        out.log.steps.push_back({i, j, out.matrix.value(i, j), std::nullopt, method});
    out.log.residual = global_inconsistency(out.matrix);
    return out;
}

}  // namespace pcnull
