#pragma once
// Recovery of null entries.
//
// Three fill methods are provided:
//   transitive  spanning-tree log potentials; exact on consistent input
//   gm          product of row and column geometric means of known entries
//   triad       stepwise minimax of the triad inconsistency index, committing
//               the slot with the least local inconsistency first
//
// Connectivity of the known-entry graph decides whether the transitive and
// triad methods can fill every null.

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pcnull/inconsistency.hpp"
#include "pcnull/matrix.hpp"

namespace pcnull {

struct Recoverability {
    std::vector<std::vector<std::size_t>> components;  // sorted, ordered by smallest member
    bool fully_recoverable = false;
    std::set<CellKey> recoverable_pairs;  // i < j in the same component

    bool recoverable(std::size_t i, std::size_t j) const {
        return recoverable_pairs.contains(i < j ? CellKey{i, j} : CellKey{j, i});
    }
};

Recoverability recoverability(const PCMatrix& m);

/// "{1,2} {3,4}" with 1-based members.
std::string describe_components(const std::vector<std::vector<std::size_t>>& components);

enum class Method { gm, triad, transitive };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

struct Step {
    std::size_t i = 0, j = 0;           // i < j
    double value = 0;                   // committed a_ij
    std::optional<double> local_ix;     // f* at commit time (triad method only)
    Method method = Method::triad;
};

struct StepLog {
    std::vector<Step> steps;
    std::optional<double> residual;     // global inconsistency of the filled matrix
};

struct ReplacementResult {
    double x_star = 0;
    double f_star = 0;
    std::vector<CompanionTriad> triads;
    std::vector<double> triad_ixs;      // ix of each companion triad at x_star
};

// ---------------------------------------------------------------------------
// Scalar minimizer
// ---------------------------------------------------------------------------

inline constexpr std::size_t kScanPoints = 10'000;
inline constexpr double kRefineTolerance = 1e-10;

/// f(x) = max over companion triads of ix with x in the variable slot.
double replacement_objective(std::span<const CompanionTriad> triads, double x);

/// Minimizes replacement_objective over [lo, hi]: uniform scan with
/// kScanPoints points, then ternary refinement of the bracket around the
/// best scan point until it is narrower than kRefineTolerance.
ReplacementResult minimize_over(std::span<const CompanionTriad> triads, double lo, double hi);

/// Minimizes over [1/N, N] for null slot (i,j). Throws `slot_not_null` if
/// the slot is known and `deferred_slot` if no companion triad is complete.
ReplacementResult minimize_replacement(const PCMatrix& m, std::size_t i, std::size_t j);

// ---------------------------------------------------------------------------
// Fill methods
// ---------------------------------------------------------------------------

struct TransitiveResult {
    PCMatrix matrix;
    double residual = 0;  // worst |log a_ij - (p_i - p_j)| over known non-tree edges
};

TransitiveResult recover_transitive(const PCMatrix& m);

/// Every null is filled from the original known entries at once.
PCMatrix gm_fill(const PCMatrix& m);

struct TriadFillResult {
    PCMatrix matrix;
    StepLog log;
};

/// Slots whose f* differ by no more than this are treated as tied.
inline constexpr double kTieTolerance = 1e-9;

TriadFillResult triad_fill(const PCMatrix& m);

/// Runs one method and reports what it filled.
struct RecoveryOutcome {
    Method method = Method::triad;
    PCMatrix matrix;
    StepLog log;
    std::optional<double> path_residual;  // transitive only
};

RecoveryOutcome recover(const PCMatrix& m, Method method);

}  // namespace pcnull
