#include "metarepo/lda.hpp"

#include "metarepo/error.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace metarepo {

std::size_t LdaClassifier::predict(const Row& row) const {
    if (rules_.empty()) return fallback_;
    const auto x = encoder_.encode(row);
    std::vector<std::size_t> votes(num_classes_, 0);
    for (const auto& rule : rules_) {
        double projection = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) projection += rule.direction[k] * x[k];
        ++votes[projection > rule.threshold ? rule.first : rule.second];
    }
    return majority_class(votes);
}

LdaClassifier fit_lda(const Dataset& dataset) {
    FeatureEncoder encoder(dataset);
    const std::size_t width = encoder.width();
    if (width == 0) throw DataError("linear discriminant needs at least one feature");
    const std::size_t classes = dataset.num_classes();

    std::vector<std::vector<Eigen::VectorXd>> members(classes);
    for (std::size_t i = 0; i < dataset.num_instances(); ++i) {
        const auto enc = encoder.encode(dataset.row(i));
        members[dataset.label(i)].push_back(Eigen::Map<const Eigen::VectorXd>(enc.data(), enc.size()));
    }
    std::vector<Eigen::VectorXd> means(classes, Eigen::VectorXd::Zero(width));
    std::vector<Eigen::MatrixXd> scatter(classes, Eigen::MatrixXd::Zero(width, width));
    for (std::size_t c = 0; c < classes; ++c) {
        if (members[c].empty()) continue;
        for (const auto& x : members[c]) means[c] += x;
        means[c] /= static_cast<double>(members[c].size());
        for (const auto& x : members[c]) scatter[c] += (x - means[c]) * (x - means[c]).transpose();
    }

    LdaClassifier model(std::move(encoder));
    model.num_classes_ = classes;
    model.fallback_ = majority_class(dataset.class_counts());
    for (std::size_t a = 0; a < classes; ++a) {
        if (members[a].empty()) continue;
        for (std::size_t b = a + 1; b < classes; ++b) {
            if (members[b].empty()) continue;
            const double pooled_n = static_cast<double>(members[a].size() + members[b].size());
            Eigen::MatrixXd pooled = (scatter[a] + scatter[b]) / pooled_n;
            pooled.diagonal().array() += kLdaRidge;
            Eigen::LLT<Eigen::MatrixXd> llt(pooled);
            if (llt.info() != Eigen::Success) throw DataError("singular scatter matrix");
            const Eigen::VectorXd w = llt.solve(means[a] - means[b]);
            if (!w.allFinite()) throw DataError("singular scatter matrix");
            const double threshold = w.dot(means[a] + means[b]) / 2.0;
            model.rules_.push_back({a, b, std::vector<double>(w.data(), w.data() + w.size()), threshold});
        }
    }
    return model;
}

LdaResult train_lda(const Dataset& dataset, int folds, std::uint64_t seed) {
    require_measurable(dataset);
    LdaClassifier model = fit_lda(dataset);
    const double acc = cross_validated_accuracy(
        dataset,
        [](const Dataset& train) -> Predictor {
            return [m = fit_lda(train)](const Row& row) { return m.predict(row); };
        },
        folds, seed);
    return {std::move(model), acc};
}

} // namespace metarepo
