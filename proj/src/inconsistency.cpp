#include "pcnull/inconsistency.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

namespace pcnull {

double triad_ix(double x, double y, double z) {
    if (!(x > 0.0) || !(y > 0.0) || !(z > 0.0))
        throw Error(ErrorCode::domain, "triad values must be positive");
    return std::min(std::abs(x - y / z) / x, std::abs(y - x * z) / y);
}

std::optional<double> global_inconsistency(const PCMatrix& m) {
    std::optional<double> worst;
    for (const Triad& t : known_triads(m))
        if (!worst || t.ix > *worst) worst = t.ix;
    return worst;
}

InconsistencyReport inconsistency_report(const PCMatrix& m) {
    InconsistencyReport r;
    r.triads = known_triads(m);
    // known_triads is already lexicographic, so a stable sort keeps (i,j,k) order among ties
    std::stable_sort(r.triads.begin(), r.triads.end(),
                     [](const Triad& a, const Triad& b) { return a.ix > b.ix; });
    if (!r.triads.empty()) r.global = r.triads.front().ix;
    for (const Triad& t : r.triads) {
        for (CellKey key : {CellKey{t.i, t.j}, CellKey{t.i, t.k}, CellKey{t.j, t.k}}) {
            auto [it, inserted] = r.per_cell_worst.emplace(key, t.ix);
            if (!inserted) it->second = std::max(it->second, t.ix);
        }
    }
    return r;
}

}  // namespace pcnull
