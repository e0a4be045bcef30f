#pragma once

#include <span>
#include <vector>

#include "pcnull/matrix.hpp"

namespace pcnull {

enum class Normalization { raw, sum_to_one };

/// Positive stimulus weights, unique up to a multiplicative constant.
struct WeightVector {
    std::vector<double> w;
    Normalization normalization = Normalization::raw;
};

/// Row geometric means of a complete matrix (diagonal included). Throws
/// `incomplete` when any null remains; recover the matrix first.
WeightVector gm_weights(const PCMatrix& m, Normalization normalization = Normalization::raw);

/// Quotient matrix a_ij = w_i / w_j.
PCMatrix consistent_from_weights(std::span<const double> w, double scale_bound = kDefaultScaleBound);
PCMatrix consistent_from_weights(const WeightVector& w, double scale_bound = kDefaultScaleBound);

WeightVector normalized(WeightVector w);

}  // namespace pcnull
