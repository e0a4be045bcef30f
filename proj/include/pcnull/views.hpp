#pragma once
// JSON renderings of analysis results, shared by the CLI (--json) and the
// HTTP service. Indices are 1-based; numbers are full precision.

#include <json.hpp>

#include "pcnull/inconsistency.hpp"
#include "pcnull/matrix.hpp"
#include "pcnull/recovery.hpp"
#include "pcnull/weights.hpp"

namespace pcnull {

using ojson = nlohmann::ordered_json;

ojson triad_json(const Triad& t);
ojson report_json(const InconsistencyReport& r);
ojson recoverability_json(const Recoverability& r);
/// Null slots with recoverability status and the number of complete companion triads.
ojson null_slots_json(const PCMatrix& m, const Recoverability& r);
ojson diagnostics_json(const Diagnostics& d);
ojson step_log_json(const StepLog& log);
ojson weights_json(const WeightVector& w, const PCMatrix& m);
/// Full n x n grid, null as JSON null.
ojson grid_json(const PCMatrix& m);

/// Report, recoverability and null slots for a matrix.
ojson analysis_json(const PCMatrix& m);

}  // namespace pcnull
