#include "pcnull/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "pcnull/inconsistency.hpp"

namespace pcnull {

namespace {

std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Location cell_loc(std::size_t i, std::size_t j) {
    Location l;
    l.row = i + 1;
    l.col = j + 1;
    return l;
}

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

Triad CompanionTriad::with(double value) const {
    Triad t{i, j, k, 0, 0, 0, 0};
    switch (variable) {
        case TriadSlot::x: t.x = value; t.y = first; t.z = second; break;
        case TriadSlot::y: t.x = first; t.y = value; t.z = second; break;
        case TriadSlot::z: t.x = first; t.y = second; t.z = value; break;
    }
    t.ix = triad_ix(t.x, t.y, t.z);
    return t;
}

PCMatrix::PCMatrix(std::size_t n, double scale_bound, ScaleMode mode)
    : n_(n), scale_bound_(scale_bound), mode_(mode) {
    if (n < 2)
        throw Error(ErrorCode::size, "matrix needs at least 2 stimuli, got " + std::to_string(n));
    if (!(scale_bound > 1.0) || !std::isfinite(scale_bound))
        throw Error(ErrorCode::scale, "scale bound must be a finite number > 1, got " + fmt_num(scale_bound));
    upper_.assign(n * (n - 1) / 2, std::nullopt);
}

void PCMatrix::set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != n_)
        throw Error(ErrorCode::shape, "expected " + std::to_string(n_) + " labels, got " +
                                          std::to_string(labels.size()));
    labels_ = std::move(labels);
}

std::size_t PCMatrix::slot(std::size_t i, std::size_t j) const {
    // i < j; row-major packing of the strict upper triangle
    return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

void PCMatrix::check_pair(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_)
        throw Error(ErrorCode::index, "index out of range for " + std::to_string(n_) + "x" +
                                          std::to_string(n_) + " matrix",
                    cell_loc(i, j));
    if (i == j) throw Error(ErrorCode::diagonal_write, "diagonal cells are fixed at 1", cell_loc(i, j));
}

Cell PCMatrix::at(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw Error(ErrorCode::index, "index out of range", cell_loc(i, j));
    if (i == j) return 1.0;
    if (i < j) return upper_[slot(i, j)];
    const Cell& c = upper_[slot(j, i)];
    if (!c) return std::nullopt;
    return 1.0 / *c;
}

bool PCMatrix::known(std::size_t i, std::size_t j) const { return at(i, j).has_value(); }

double PCMatrix::value(std::size_t i, std::size_t j) const {
    Cell c = at(i, j);
    if (!c) throw Error(ErrorCode::incomplete, "cell is null", cell_loc(i, j));
    return *c;
}

bool PCMatrix::in_scale(double v) const noexcept {
    const double lo = 1.0 / scale_bound_;
    const double slack = 1e-12;
    return v >= lo * (1 - slack) && v <= scale_bound_ * (1 + slack);
}

void PCMatrix::set(std::size_t i, std::size_t j, double v) {
    check_pair(i, j);
    if (!(v > 0.0) || !std::isfinite(v))
        throw Error(ErrorCode::domain, "comparison value must be a finite positive ratio, got " + fmt_num(v),
                    cell_loc(i, j));
    if (mode_ == ScaleMode::strict && !in_scale(v))
        throw Error(ErrorCode::scale,
                    "value " + fmt_num(v) + " outside scale [1/" + fmt_num(scale_bound_) + ", " +
                        fmt_num(scale_bound_) + "]",
                    cell_loc(i, j));
    if (i < j)
        upper_[slot(i, j)] = v;
    else
        upper_[slot(j, i)] = 1.0 / v;
}

void PCMatrix::clear(std::size_t i, std::size_t j) {
    check_pair(i, j);
    if (i < j)
        upper_[slot(i, j)].reset();
    else
        upper_[slot(j, i)].reset();
}

std::size_t PCMatrix::null_pair_count() const noexcept {
    std::size_t c = 0;
    for (const auto& cell : upper_)
        if (!cell) ++c;
    return c;
}

std::vector<std::pair<std::size_t, std::size_t>> PCMatrix::null_slots() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            if (!upper_[slot(i, j)]) out.emplace_back(i, j);
    return out;
}

PCMatrix new_matrix(std::size_t n, double scale_bound) { return PCMatrix(n, scale_bound); }

PCMatrix set_entry(PCMatrix m, std::size_t i, std::size_t j, double v) {
    m.set(i, j, v);
    return m;
}

PCMatrix clear_entry(PCMatrix m, std::size_t i, std::size_t j) {
    m.clear(i, j);
    return m;
}

std::vector<Triad> known_triads(const PCMatrix& m) {
    std::vector<Triad> out;
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const Cell x = m.at(i, j);
            if (!x) continue;
            for (std::size_t k = j + 1; k < n; ++k) {
                const Cell y = m.at(i, k);
                const Cell z = m.at(j, k);
                if (!y || !z) continue;
                out.push_back({i, j, k, *x, *y, *z, triad_ix(*x, *y, *z)});
            }
        }
    return out;
}

std::vector<CompanionTriad> triads_through(const PCMatrix& m, std::size_t i, std::size_t j) {
    if (i >= j || j >= m.size())
        throw Error(ErrorCode::index, "slot must satisfy i < j < n", cell_loc(i, j));
    std::vector<CompanionTriad> out;
    for (std::size_t k = 0; k < m.size(); ++k) {
        if (k == i || k == j) continue;
        CompanionTriad t;
        Cell a, b;
        if (k > j) {  // (i, j, k): slot is a_ij
            t = {i, j, k, TriadSlot::x, 0, 0};
            a = m.at(i, k);
            b = m.at(j, k);
        } else if (k > i) {  // (i, k, j): slot is a_ij = y
            t = {i, k, j, TriadSlot::y, 0, 0};
            a = m.at(i, k);
            b = m.at(k, j);
        } else {  // (k, i, j): slot is a_ij = z
            t = {k, i, j, TriadSlot::z, 0, 0};
            a = m.at(k, i);
            b = m.at(k, j);
        }
        if (!a || !b) continue;
        t.first = *a;
        t.second = *b;
        out.push_back(t);
    }
    return out;
}

DenseGrid to_grid(const PCMatrix& m) {
    DenseGrid g;
    g.n = m.size();
    g.scale_bound = m.scale_bound();
    g.labels = m.labels();
    g.cells.resize(g.n * g.n);
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j) g(i, j) = m.at(i, j);
    return g;
}

std::string_view to_string(Violation v) {
    switch (v) {
        case Violation::reciprocity: return "reciprocity";
        case Violation::unpaired_null: return "unpaired_null";
        case Violation::diagonal: return "diagonal";
        case Violation::non_positive: return "non_positive";
        case Violation::out_of_scale: return "out_of_scale";
    }
    return "unknown";
}

std::string_view to_string(Severity s) { return s == Severity::error ? "error" : "warning"; }

Diagnostics validate(const DenseGrid& g) {
    Diagnostics out;
    auto add = [&out](Severity s, Violation v, std::size_t i, std::size_t j, std::string msg) {
        out.push_back({s, v, i, j, std::move(msg)});
    };
    const double lo = 1.0 / g.scale_bound;
    for (std::size_t i = 0; i < g.n; ++i) {
        const Cell& d = g(i, i);
        if (!d || !close_rel(*d, 1.0, kReciprocityTolerance))
            add(Severity::error, Violation::diagonal, i, i,
                "diagonal cell is " + (d ? fmt_num(*d) : std::string("null")) + ", expected 1");
    }
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j) {
            if (i == j) continue;
            const Cell& c = g(i, j);
            if (!c) continue;
            if (!(*c > 0.0))
                add(Severity::error, Violation::non_positive, i, j, "value " + fmt_num(*c) + " is not positive");
            else if (*c < lo * (1 - 1e-12) || *c > g.scale_bound * (1 + 1e-12))
                add(Severity::warning, Violation::out_of_scale, i, j,
                    "value " + fmt_num(*c) + " outside scale [1/" + fmt_num(g.scale_bound) + ", " +
                        fmt_num(g.scale_bound) + "]");
        }
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = i + 1; j < g.n; ++j) {
            const Cell& a = g(i, j);
            const Cell& b = g(j, i);
            if (a.has_value() != b.has_value()) {
                add(Severity::error, Violation::unpaired_null, i, j, "only one cell of the pair is null");
                continue;
            }
            if (!a || !(*a > 0.0) || !(*b > 0.0)) continue;
            if (!close_rel(*a * *b, 1.0, kReciprocityTolerance))
                add(Severity::error, Violation::reciprocity, i, j,
                    "a_ij * a_ji = " + fmt_num(*a * *b) + ", expected 1");
        }
    return out;
}

Diagnostics validate(const PCMatrix& m) { return validate(to_grid(m)); }

}  // namespace pcnull
