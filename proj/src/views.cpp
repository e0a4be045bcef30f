#include "pcnull/views.hpp"

namespace pcnull {

namespace {
ojson optional_number(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }
}  // namespace

ojson triad_json(const Triad& t) {
    return {{"i", t.i + 1}, {"j", t.j + 1}, {"k", t.k + 1}, {"x", t.x}, {"y", t.y}, {"z", t.z}, {"ix", t.ix}};
}

ojson report_json(const InconsistencyReport& r) {
    ojson out;
    out["global"] = optional_number(r.global);
    auto triads = ojson::array();
    for (const auto& t : r.triads) triads.push_back(triad_json(t));
    out["triads"] = std::move(triads);
    auto cells = ojson::array();
    for (const auto& [key, ix] : r.per_cell_worst)
        cells.push_back({{"i", key.first + 1}, {"j", key.second + 1}, {"ix", ix}});
    out["per_cell_worst"] = std::move(cells);
    return out;
}

ojson recoverability_json(const Recoverability& r) {
    ojson out;
    auto comps = ojson::array();
    for (const auto& c : r.components) {
        auto members = ojson::array();
        for (std::size_t v : c) members.push_back(v + 1);
        comps.push_back(std::move(members));
    }
    out["components"] = std::move(comps);
    out["fully_recoverable"] = r.fully_recoverable;
    auto pairs = ojson::array();
    for (const auto& [i, j] : r.recoverable_pairs) pairs.push_back({i + 1, j + 1});
    out["recoverable_pairs"] = std::move(pairs);
    return out;
}

ojson null_slots_json(const PCMatrix& m, const Recoverability& r) {
    auto out = ojson::array();
    for (const auto& [i, j] : m.null_slots())
        out.push_back({{"i", i + 1},
                       {"j", j + 1},
                       {"recoverable", r.recoverable(i, j)},
                       {"companion_triads", triads_through(m, i, j).size()}});
    return out;
}

ojson diagnostics_json(const Diagnostics& d) {
    auto out = ojson::array();
    for (const auto& x : d)
        out.push_back({{"severity", to_string(x.severity)},
                       {"kind", to_string(x.kind)},
                       {"i", x.i + 1},
                       {"j", x.j + 1},
                       {"message", x.message}});
    return out;
}

ojson step_log_json(const StepLog& log) {
    ojson out;
    auto steps = ojson::array();
    for (const auto& s : log.steps)
        steps.push_back({{"i", s.i + 1},
                         {"j", s.j + 1},
                         {"value", s.value},
                         {"local_ix", optional_number(s.local_ix)},
                         {"method", to_string(s.method)}});
    out["steps"] = std::move(steps);
    out["residual"] = optional_number(log.residual);
    return out;
}

ojson weights_json(const WeightVector& w, const PCMatrix& m) {
    ojson out;
    out["w"] = w.w;
    out["normalized"] = w.normalization == Normalization::sum_to_one;
    if (!m.labels().empty()) out["labels"] = m.labels();
    return out;
}

ojson grid_json(const PCMatrix& m) {
    auto rows = ojson::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        auto row = ojson::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(optional_number(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ojson analysis_json(const PCMatrix& m) {
    const Recoverability rec = recoverability(m);
    ojson out;
    out["report"] = report_json(inconsistency_report(m));
    out["recoverability"] = recoverability_json(rec);
    out["null_slots"] = null_slots_json(m, rec);
    return out;
}

}  // namespace pcnull
