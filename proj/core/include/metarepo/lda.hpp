#pragma once

#include "metarepo/cross_validation.hpp"
#include "metarepo/encoding.hpp"
#include "metarepo/model.hpp"

#include <cstddef>
#include <vector>

namespace metarepo {

inline constexpr double kLdaRidge = 1e-6;

/// Fisher discriminant for every pair of classes present in training,
/// combined by pairwise voting (ties to the lowest class index).
class LdaClassifier {
public:
    std::size_t predict(const Row& row) const;

private:
    friend LdaClassifier fit_lda(const Dataset& dataset);

    struct PairRule {
        std::size_t first;
        std::size_t second;
        std::vector<double> direction;
        double threshold;
    };

    explicit LdaClassifier(FeatureEncoder encoder) : encoder_(std::move(encoder)) {}

    FeatureEncoder encoder_;
    std::vector<PairRule> rules_;
    std::size_t num_classes_ = 0;
    std::size_t fallback_ = 0;
};

/// Throws DataError when a pooled scatter matrix stays singular after the ridge.
LdaClassifier fit_lda(const Dataset& dataset);

struct LdaResult {
    LdaClassifier model;
    double cv_accuracy;
};

LdaResult train_lda(const Dataset& dataset, int folds = kLandmarkerFolds, std::uint64_t seed = kLandmarkerSeed);

} // namespace metarepo
