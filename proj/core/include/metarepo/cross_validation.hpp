#pragma once

#include "metarepo/model.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace metarepo {

/// Landmarker evaluation protocol: stratified 10-fold, partition seed 0.
inline constexpr int kLandmarkerFolds = 10;
inline constexpr std::uint64_t kLandmarkerSeed = 0;

/// Zero-based fold id per instance. Each class is shuffled with the seed and
/// dealt round-robin, continuing the deal across classes, so fold sizes
/// differ by at most one. Uses min(k, N) folds.
std::vector<int> stratified_folds(const Dataset& dataset, int k, std::uint64_t seed);

using Predictor = std::function<std::size_t(const Row&)>;
using Trainer = std::function<Predictor(const Dataset& training)>;

/// Out-of-fold predicted class for every instance.
std::vector<std::size_t> cross_validate(const Dataset& dataset, std::span<const int> folds, const Trainer& trainer);

double accuracy_of(const Dataset& dataset, std::span<const std::size_t> predicted);

/// Stratified k-fold accuracy of `trainer`.
double cross_validated_accuracy(const Dataset& dataset, const Trainer& trainer, int k = kLandmarkerFolds,
                                std::uint64_t seed = kLandmarkerSeed);

/// Majority class of the given counts, ties to the lowest class index.
std::size_t majority_class(std::span<const std::size_t> counts);

} // namespace metarepo
