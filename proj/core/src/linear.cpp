#include "metarepo/linear.hpp"

#include "metarepo/error.hpp"

#include <cmath>

namespace metarepo {

LinearModel::LinearModel(FeatureEncoder encoder, std::vector<double> weights, double bias,
                         std::size_t positive_class)
    : encoder_(std::move(encoder)), weights_(std::move(weights)), bias_(bias), positive_(positive_class) {
    if (weights_.size() != encoder_.width()) throw DataError("weight vector does not match encoding width");
}

double LinearModel::decision_value(const Row& row) const {
    const auto x = encoder_.encode(row);
    double f = bias_;
    for (std::size_t k = 0; k < x.size(); ++k) f += weights_[k] * x[k];
    return f;
}

double LinearModel::weight_norm() const {
    double s = 0.0;
    for (double w : weights_) s += w * w;
    return std::sqrt(s);
}

LinearModel train_linear(const Dataset& dataset, std::size_t positive_class, const LinearConfig& config) {
    const std::size_t n = dataset.num_instances();
    std::size_t positives = 0;
    for (std::size_t i = 0; i < n; ++i) positives += dataset.label(i) == positive_class ? 1 : 0;
    if (positives == 0 || positives == n) throw DataError("linear classifier needs instances on both sides");

    FeatureEncoder encoder(dataset);
    std::vector<std::vector<double>> x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = encoder.encode(dataset.row(i));
        y[i] = dataset.label(i) == positive_class ? 1.0 : -1.0;
    }

    const std::size_t width = encoder.width();
    std::vector<double> w(width, 0.0);
    double b = 0.0;
    std::vector<double> grad(width);
    const double scale = 1.0 / static_cast<double>(n);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double f = b;
            for (std::size_t k = 0; k < width; ++k) f += w[k] * x[i][k];
            if (y[i] * f < 1.0) {
                for (std::size_t k = 0; k < width; ++k) grad[k] -= y[i] * x[i][k];
                grad_b -= y[i];
            }
        }
        for (std::size_t k = 0; k < width; ++k) w[k] -= config.learning_rate * scale * grad[k];
        b -= config.learning_rate * scale * grad_b;
    }
    return LinearModel(std::move(encoder), std::move(w), b, positive_class);
}

double linear_training_error(const LinearModel& model, const Dataset& dataset) {
    const std::size_t n = dataset.num_instances();
    if (n == 0) throw DataError("no instances");
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool actual = dataset.label(i) == model.positive_class();
        if (model.predicts_positive(dataset.row(i)) != actual) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(n);
}

double linear_error_distance(const LinearModel& model, const Dataset& dataset) {
    const std::size_t n = dataset.num_instances();
    if (n == 0) throw DataError("no instances");
    const double norm = model.weight_norm();
    if (norm == 0.0) throw DataError("degenerate model");
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = model.decision_value(dataset.row(i));
        const bool actual = dataset.label(i) == model.positive_class();
        if ((f > 0.0) != actual) sum += std::abs(f) / norm;
    }
    return sum / static_cast<double>(n);
}

std::vector<std::size_t> one_vs_rest_targets(const Dataset& dataset) {
    if (dataset.num_classes() == 2) return {1};
    std::vector<std::size_t> out(dataset.num_classes());
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = c;
    return out;
}

} // namespace metarepo
