#include "metarepo/cross_validation.hpp"

#include "metarepo/error.hpp"
#include "metarepo/rng.hpp"

#include <algorithm>

namespace metarepo {

std::vector<int> stratified_folds(const Dataset& dataset, int k, std::uint64_t seed) {
    const std::size_t n = dataset.num_instances();
    if (k < 1) throw DataError("fold count must be positive");
    const std::size_t folds = std::min<std::size_t>(static_cast<std::size_t>(k), n);
    std::vector<int> out(n, 0);
    if (n == 0) return out;

    Rng rng(seed);
    std::vector<std::vector<std::size_t>> by_class(dataset.num_classes());
    for (std::size_t i = 0; i < n; ++i) by_class.at(dataset.label(i)).push_back(i);

    std::size_t dealt = 0;
    for (auto& members : by_class) {
        rng.shuffle(std::span<std::size_t>(members));
        for (auto i : members) out[i] = static_cast<int>(dealt++ % folds);
    }
    return out;
}

std::vector<std::size_t> cross_validate(const Dataset& dataset, std::span<const int> folds, const Trainer& trainer) {
    const std::size_t n = dataset.num_instances();
    if (folds.size() != n) throw DataError("fold vector length differs from instance count");
    const int k = n == 0 ? 0 : *std::max_element(folds.begin(), folds.end()) + 1;
    std::vector<std::size_t> predicted(n, 0);
    for (int f = 0; f < k; ++f) {
        std::vector<std::size_t> train;
        std::vector<std::size_t> test;
        for (std::size_t i = 0; i < n; ++i) (folds[i] == f ? test : train).push_back(i);
        if (test.empty()) continue;
        if (train.empty()) throw DataError("fold " + std::to_string(f + 1) + " leaves no training data");
        Predictor predict = trainer(dataset.subset(train));
        for (auto i : test) predicted[i] = predict(dataset.row(i));
    }
    return predicted;
}

double accuracy_of(const Dataset& dataset, std::span<const std::size_t> predicted) {
    if (predicted.empty()) throw DataError("no predictions");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] == dataset.label(i)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

double cross_validated_accuracy(const Dataset& dataset, const Trainer& trainer, int k, std::uint64_t seed) {
    auto folds = stratified_folds(dataset, k, seed);
    auto predicted = cross_validate(dataset, folds, trainer);
    return accuracy_of(dataset, predicted);
}

std::size_t majority_class(std::span<const std::size_t> counts) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c) {
        if (counts[c] > counts[best]) best = c;
    }
    return best;
}

} // namespace metarepo
