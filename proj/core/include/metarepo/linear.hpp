#pragma once

#include "metarepo/encoding.hpp"
#include "metarepo/model.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace metarepo {

struct LinearConfig {
    int epochs = 500;
    double learning_rate = 0.01;
    /// Weights start at zero and descent is full-batch, so the seed does not
    /// change the result; it is kept so callers can record it.
    std::uint64_t seed = 0;
};

/// One-vs-rest separator in the FeatureEncoder space: f(x) = w.x + b, positive iff f(x) > 0.
class LinearModel {
public:
    LinearModel(FeatureEncoder encoder, std::vector<double> weights, double bias, std::size_t positive_class);

    double decision_value(const Row& row) const;
    bool predicts_positive(const Row& row) const { return decision_value(row) > 0.0; }

    std::span<const double> weights() const noexcept { return weights_; }
    double bias() const noexcept { return bias_; }
    std::size_t positive_class() const noexcept { return positive_; }
    double weight_norm() const;
    const FeatureEncoder& encoder() const noexcept { return encoder_; }

private:
    FeatureEncoder encoder_;
    std::vector<double> weights_;
    double bias_;
    std::size_t positive_;
};

/// Minimizes the mean hinge loss of `positive_class` against the rest by full-batch gradient descent.
LinearModel train_linear(const Dataset& dataset, std::size_t positive_class, const LinearConfig& config = {});

/// Fraction of instances whose side of the separator disagrees with their label.
double linear_training_error(const LinearModel& model, const Dataset& dataset);

/// Sum over misclassified instances of |f(x)| / ||w||, divided by N.
double linear_error_distance(const LinearModel& model, const Dataset& dataset);

/// Binary targets used for one-vs-rest measures: {1} when C == 2, else every class.
std::vector<std::size_t> one_vs_rest_targets(const Dataset& dataset);

} // namespace metarepo
