#pragma once

#include "metarepo/model.hpp"

#include <cstddef>
#include <vector>

namespace metarepo {

/// Heterogeneous Euclidean-overlap metric over the non-class attributes.
///
/// Numeric attributes contribute |a-b| after min-max normalization against
/// the reference dataset's observed range (clamped to [0,1]; zero-width
/// ranges contribute 0). Nominal attributes contribute 0 when equal and 1
/// otherwise. A missing operand contributes 1.
class DistanceMetric {
public:
    explicit DistanceMetric(const Dataset& reference);

    double operator()(const Row& a, const Row& b) const;

    /// Upper bound, sqrt(#features).
    double max_distance() const;

private:
    std::vector<std::size_t> features_;
    std::vector<bool> nominal_;
    std::vector<double> min_;
    std::vector<double> range_;
};

/// Dense symmetric pairwise distances for one dataset.
class DistanceMatrix {
public:
    DistanceMatrix(const Dataset& dataset, const DistanceMetric& metric);
    explicit DistanceMatrix(const Dataset& dataset);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * n_ + j]; }

private:
    std::size_t n_;
    std::vector<double> d_;
};

/// The k nearest instances other than i, ordered by (distance, index).
std::vector<std::size_t> nearest_neighbors(const DistanceMatrix& distances, std::size_t i, std::size_t k);

/// Index of the reference instance nearest to `row`, ties to the lowest index.
std::size_t nearest_instance(const Dataset& reference, const DistanceMetric& metric, const Row& row);

/// Leave-one-out misclassification rate of 1-NN. Requires N >= 2.
double loo_1nn_error(const Dataset& dataset, const DistanceMetric& metric);
double loo_1nn_error(const Dataset& dataset, const DistanceMatrix& distances);

} // namespace metarepo
