#pragma once

#include "metarepo/cross_validation.hpp"
#include "metarepo/model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace metarepo {

enum class StumpMode { best, random, worst, average };

/// One-node tree on a single attribute.
///
/// Numeric attributes split at a midpoint threshold into (<= t, > t);
/// nominal attributes get one branch per category. Missing values take a
/// branch of their own. Each branch predicts its majority class, and an
/// empty branch falls back to the overall majority.
struct DecisionStump {
    std::size_t attribute = 0;
    std::optional<double> threshold;
    std::vector<std::size_t> branch_class;
    std::size_t missing_class = 0;

    std::size_t predict(const Row& row) const;
};

/// Information gain of the attribute's best split on this data (missing values form their own part).
double information_gain(const Dataset& dataset, std::size_t attribute);

DecisionStump fit_stump(const Dataset& dataset, std::size_t attribute);

/// Attributes with at least one observed value.
std::vector<std::size_t> eligible_stump_attributes(const Dataset& dataset);

/// Resubstitution choice for a mode; `average` has no single choice.
std::size_t select_stump_attribute(const Dataset& dataset, StumpMode mode, std::uint64_t seed = kLandmarkerSeed);

struct StumpResult {
    /// Attribute(s) chosen on the full data: one for best/random/worst, every eligible one for average.
    std::vector<std::size_t> attributes;
    double cv_accuracy = 0.0;
};

/// Stump landmarker. Best and worst re-select their attribute inside every
/// training fold; random draws one attribute with the seed and keeps it.
StumpResult train_stump(const Dataset& dataset, StumpMode mode, std::uint64_t seed = kLandmarkerSeed,
                        int folds = kLandmarkerFolds);

} // namespace metarepo
