#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "pcnull/matrix.hpp"

namespace pcnull {

/// Triad inconsistency index of (x, y, z) = (a_ij, a_ik, a_jk):
///
///   ix = min(|x - y/z| / x, |y - x*z| / y)
///
/// Always in [0, 1); zero exactly when y = x*z. Throws `domain` for
/// non-positive arguments.
double triad_ix(double x, double y, double z);

/// Max ix over complete triads; nullopt when the matrix has none.
std::optional<double> global_inconsistency(const PCMatrix& m);

using CellKey = std::pair<std::size_t, std::size_t>;  // (i, j) with i < j, 0-based

struct InconsistencyReport {
    std::optional<double> global;
    std::vector<Triad> triads;                // ix descending, ties by (i,j,k)
    std::map<CellKey, double> per_cell_worst;  // worst ix over triads containing the cell
};

InconsistencyReport inconsistency_report(const PCMatrix& m);

}  // namespace pcnull
