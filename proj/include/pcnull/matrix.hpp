#pragma once
// Pairwise comparisons matrix with null entries.
//
// Only the upper triangle (i < j) is stored. The lower cell (j,i) is always
// the exact reciprocal of its partner, and the diagonal is always 1, so a
// PCMatrix cannot hold a non-reciprocal assessment. Dense grids read from
// files go through DenseGrid first, where such defects can be diagnosed.
//
// All library indices are 0-based. File formats, the CLI and the HTTP
// service speak 1-based indices.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcnull/error.hpp"

namespace pcnull {

inline constexpr double kDefaultScaleBound = 5.0;
inline constexpr double kReciprocityTolerance = 1e-9;

enum class ScaleMode { lenient, strict };

/// Cell value: a known positive ratio or null.
using Cell = std::optional<double>;

struct Triad {
    std::size_t i = 0, j = 0, k = 0;  // i < j < k
    double x = 0;                     // a_ij
    double y = 0;                     // a_ik
    double z = 0;                     // a_jk
    double ix = 0;
};

/// Which slot of a triad (x = a_ij, y = a_ik, z = a_jk) an unknown occupies.
enum class TriadSlot { x, y, z };

/// A triad through a null slot with both companion entries known.
struct CompanionTriad {
    std::size_t i = 0, j = 0, k = 0;  // sorted triple
    TriadSlot variable = TriadSlot::x;
    double first = 0;                 // companion values in triad order
    double second = 0;

    /// Triad values with `value` substituted for the variable slot.
    Triad with(double value) const;
};

class PCMatrix {
public:
    explicit PCMatrix(std::size_t n, double scale_bound = kDefaultScaleBound,
                      ScaleMode mode = ScaleMode::lenient);

    std::size_t size() const noexcept { return n_; }
    double scale_bound() const noexcept { return scale_bound_; }
    ScaleMode scale_mode() const noexcept { return mode_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Labels must be empty or exactly n long.
    void set_labels(std::vector<std::string> labels);
    void set_scale_mode(ScaleMode mode) noexcept { mode_ = mode; }

    Cell at(std::size_t i, std::size_t j) const;
    bool known(std::size_t i, std::size_t j) const;
    /// Known value; throws `incomplete` if the cell is null.
    double value(std::size_t i, std::size_t j) const;

    /// Sets (i,j) to v and (j,i) to 1/v.
    void set(std::size_t i, std::size_t j, double v);
    /// Nulls both (i,j) and (j,i). Clearing a null pair is a no-op.
    void clear(std::size_t i, std::size_t j);

    bool in_scale(double v) const noexcept;
    std::size_t null_pair_count() const noexcept;
    bool complete() const noexcept { return null_pair_count() == 0; }
    /// Upper-triangle null slots in lexicographic order.
    std::vector<std::pair<std::size_t, std::size_t>> null_slots() const;

    friend bool operator==(const PCMatrix&, const PCMatrix&) = default;

private:
    std::size_t slot(std::size_t i, std::size_t j) const;
    void check_pair(std::size_t i, std::size_t j) const;

    std::size_t n_;
    double scale_bound_;
    ScaleMode mode_;
    std::vector<Cell> upper_;
    std::vector<std::string> labels_;
};

PCMatrix new_matrix(std::size_t n, double scale_bound = kDefaultScaleBound);
PCMatrix set_entry(PCMatrix m, std::size_t i, std::size_t j, double v);
PCMatrix clear_entry(PCMatrix m, std::size_t i, std::size_t j);

/// Complete triads (i<j<k) in lexicographic order with ix filled in.
std::vector<Triad> known_triads(const PCMatrix& m);

/// Triads through slot (i,j), i<j, whose two other entries are known.
/// Ordered by the third index k.
std::vector<CompanionTriad> triads_through(const PCMatrix& m, std::size_t i,
                                           std::size_t j);

// ---------------------------------------------------------------------------
// Dense grids and validation
// ---------------------------------------------------------------------------

/// Full n x n grid as read from a file, before reciprocity is reconciled.
struct DenseGrid {
    std::size_t n = 0;
    double scale_bound = kDefaultScaleBound;
    std::vector<Cell> cells;  // row-major
    std::vector<std::string> labels;

    Cell& operator()(std::size_t i, std::size_t j) { return cells[i * n + j]; }
    const Cell& operator()(std::size_t i, std::size_t j) const { return cells[i * n + j]; }
};

DenseGrid to_grid(const PCMatrix& m);

enum class Severity { error, warning };

enum class Violation { reciprocity, unpaired_null, diagonal, non_positive, out_of_scale };

struct Diagnostic {
    Severity severity = Severity::error;
    Violation kind = Violation::reciprocity;
    std::size_t i = 0, j = 0;  // 0-based
    std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

std::string_view to_string(Violation v);
std::string_view to_string(Severity s);

Diagnostics validate(const DenseGrid& grid);
Diagnostics validate(const PCMatrix& m);

inline bool has_errors(const Diagnostics& d) {
    for (const auto& x : d)
        if (x.severity == Severity::error) return true;
    return false;
}

}  // namespace pcnull
