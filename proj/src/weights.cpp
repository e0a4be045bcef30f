#include "pcnull/weights.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace pcnull {

WeightVector gm_weights(const PCMatrix& m, Normalization normalization) {
    const std::size_t n = m.size();
    if (!m.complete())
        throw Error(ErrorCode::incomplete, "matrix has " + std::to_string(m.null_pair_count()) +
                                               " null pair(s); recover missing entries before deriving weights");
    WeightVector out;
    out.w.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double log_sum = 0;
        for (std::size_t k = 0; k < n; ++k) log_sum += std::log(m.value(i, k));
        out.w.push_back(std::exp(log_sum / static_cast<double>(n)));
    }
    if (normalization == Normalization::sum_to_one) out = normalized(std::move(out));
    return out;
}

WeightVector normalized(WeightVector w) {
    const double total = std::accumulate(w.w.begin(), w.w.end(), 0.0);
    for (double& x : w.w) x /= total;
    w.normalization = Normalization::sum_to_one;
    return w;
}

PCMatrix consistent_from_weights(std::span<const double> w, double scale_bound) {
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!(w[i] > 0.0) || !std::isfinite(w[i])) {
            Location where;
            where.entry = i + 1;
            throw Error(ErrorCode::domain, "weights must be finite and positive", where);
        }
    PCMatrix m(w.size(), scale_bound);
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = i + 1; j < w.size(); ++j) m.set(i, j, w[i] / w[j]);
    return m;
}

PCMatrix consistent_from_weights(const WeightVector& w, double scale_bound) {
    return consistent_from_weights(std::span<const double>(w.w), scale_bound);
}

}  // namespace pcnull
