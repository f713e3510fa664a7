#include "metarepo/stump.hpp"

#include "metarepo/error.hpp"
#include "metarepo/rng.hpp"

#include <algorithm>
#include <cmath>

namespace metarepo {

namespace {

double entropy(std::span<const std::size_t> counts) {
    std::size_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) return 0.0;
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

double weighted_entropy(std::span<const std::size_t> counts) {
    std::size_t total = 0;
    for (auto c : counts) total += c;
    return static_cast<double>(total) * entropy(counts);
}

struct Split {
    double gain = 0.0;
    std::optional<double> threshold;
};

/// Best split of one attribute. For numeric attributes the threshold is the
/// gain-maximizing midpoint, ties to the lowest threshold.
Split best_split(const Dataset& dataset, std::size_t attribute) {
    const std::size_t n = dataset.num_instances();
    const std::size_t classes = dataset.num_classes();
    const AttributeSpec& attr = dataset.attribute(attribute);
    std::vector<std::size_t> parent(classes, 0);
    std::vector<std::size_t> missing(classes, 0);
    for (std::size_t i = 0; i < n; ++i) {
        ++parent[dataset.label(i)];
        if (dataset.row(i)[attribute].is_missing()) ++missing[dataset.label(i)];
    }
    const double h_parent = entropy(parent);
    const double h_missing = weighted_entropy(missing);
    const double total = static_cast<double>(n);

    if (attr.is_nominal()) {
        std::vector<std::vector<std::size_t>> parts(attr.categories.size(), std::vector<std::size_t>(classes, 0));
        for (std::size_t i = 0; i < n; ++i) {
            const Value& v = dataset.row(i)[attribute];
            if (v.is_nominal()) ++parts[v.category()][dataset.label(i)];
        }
        double children = h_missing;
        for (const auto& p : parts) children += weighted_entropy(p);
        return {h_parent - children / total, std::nullopt};
    }

    std::vector<std::pair<double, std::size_t>> observed;
    for (std::size_t i = 0; i < n; ++i) {
        const Value& v = dataset.row(i)[attribute];
        if (v.is_numeric()) observed.emplace_back(v.number(), dataset.label(i));
    }
    std::sort(observed.begin(), observed.end());
    std::vector<std::size_t> right(classes, 0);
    for (const auto& [value, label] : observed) ++right[label];
    Split best{h_parent - (h_missing + weighted_entropy(right)) / total, std::nullopt};

    std::vector<std::size_t> left(classes, 0);
    for (std::size_t k = 0; k + 1 < observed.size(); ++k) {
        ++left[observed[k].second];
        --right[observed[k].second];
        if (observed[k].first == observed[k + 1].first) continue;
        const double gain =
            h_parent - (h_missing + weighted_entropy(left) + weighted_entropy(right)) / total;
        if (!best.threshold || gain > best.gain) {
            best.gain = gain;
            best.threshold = 0.5 * (observed[k].first + observed[k + 1].first);
        }
    }
    return best;
}

Predictor constant_predictor(std::size_t cls) {
    return [cls](const Row&) { return cls; };
}

Predictor stump_predictor(DecisionStump stump) {
    return [s = std::move(stump)](const Row& row) { return s.predict(row); };
}

} // namespace

std::size_t DecisionStump::predict(const Row& row) const {
    const Value& v = row[attribute];
    if (v.is_missing()) return missing_class;
    if (v.is_nominal()) return v.category() < branch_class.size() ? branch_class[v.category()] : missing_class;
    if (!threshold) return branch_class.front();
    return v.number() <= *threshold ? branch_class[0] : branch_class[1];
}

double information_gain(const Dataset& dataset, std::size_t attribute) {
    return best_split(dataset, attribute).gain;
}

DecisionStump fit_stump(const Dataset& dataset, std::size_t attribute) {
    const std::size_t classes = dataset.num_classes();
    const AttributeSpec& attr = dataset.attribute(attribute);
    const Split split = best_split(dataset, attribute);
    const std::size_t overall = majority_class(dataset.class_counts());

    const std::size_t branches = attr.is_nominal() ? attr.categories.size() : (split.threshold ? 2 : 1);
    std::vector<std::vector<std::size_t>> counts(branches, std::vector<std::size_t>(classes, 0));
    std::vector<std::size_t> missing(classes, 0);
    for (std::size_t i = 0; i < dataset.num_instances(); ++i) {
        const Value& v = dataset.row(i)[attribute];
        const std::size_t y = dataset.label(i);
        if (v.is_missing()) {
            ++missing[y];
        } else if (v.is_nominal()) {
            ++counts[v.category()][y];
        } else if (!split.threshold) {
            ++counts[0][y];
        } else {
            ++counts[v.number() <= *split.threshold ? 0 : 1][y];
        }
    }

    DecisionStump stump;
    stump.attribute = attribute;
    stump.threshold = split.threshold;
    for (const auto& c : counts) {
        const bool empty = std::all_of(c.begin(), c.end(), [](std::size_t x) { return x == 0; });
        stump.branch_class.push_back(empty ? overall : majority_class(c));
    }
    const bool no_missing = std::all_of(missing.begin(), missing.end(), [](std::size_t x) { return x == 0; });
    stump.missing_class = no_missing ? overall : majority_class(missing);
    return stump;
}

std::vector<std::size_t> eligible_stump_attributes(const Dataset& dataset) {
    std::vector<std::size_t> out;
    for (std::size_t a : dataset.feature_indices()) {
        for (const auto& row : dataset.rows()) {
            if (!row[a].is_missing()) {
                out.push_back(a);
                break;
            }
        }
    }
    return out;
}

std::size_t select_stump_attribute(const Dataset& dataset, StumpMode mode, std::uint64_t seed) {
    const auto eligible = eligible_stump_attributes(dataset);
    if (eligible.empty()) throw DataError("no attribute has observed values");
    switch (mode) {
    case StumpMode::random: {
        Rng rng(seed);
        return eligible[rng.uniform_index(eligible.size())];
    }
    case StumpMode::best:
    case StumpMode::worst: {
        std::size_t chosen = eligible.front();
        double chosen_gain = information_gain(dataset, chosen);
        for (std::size_t k = 1; k < eligible.size(); ++k) {
            const double g = information_gain(dataset, eligible[k]);
            if (mode == StumpMode::best ? g > chosen_gain : g < chosen_gain) {
                chosen = eligible[k];
                chosen_gain = g;
            }
        }
        return chosen;
    }
    case StumpMode::average: break;
    }
    throw DataError("the average stump has no single attribute");
}

StumpResult train_stump(const Dataset& dataset, StumpMode mode, std::uint64_t seed, int folds) {
    require_measurable(dataset);
    StumpResult result;
    if (mode == StumpMode::average) {
        result.attributes = eligible_stump_attributes(dataset);
        if (result.attributes.empty()) throw DataError("no attribute has observed values");
        double sum = 0.0;
        for (std::size_t a : result.attributes) {
            sum += cross_validated_accuracy(
                dataset, [a](const Dataset& train) { return stump_predictor(fit_stump(train, a)); }, folds);
        }
        result.cv_accuracy = sum / static_cast<double>(result.attributes.size());
        return result;
    }

    const std::size_t chosen = select_stump_attribute(dataset, mode, seed);
    result.attributes = {chosen};
    Trainer trainer;
    if (mode == StumpMode::random) {
        trainer = [chosen](const Dataset& train) { return stump_predictor(fit_stump(train, chosen)); };
    } else {
        trainer = [mode](const Dataset& train) {
            if (eligible_stump_attributes(train).empty()) {
                return constant_predictor(majority_class(train.class_counts()));
            }
            return stump_predictor(fit_stump(train, select_stump_attribute(train, mode)));
        };
    }
    result.cv_accuracy = cross_validated_accuracy(dataset, trainer, folds);
    return result;
}

} // namespace metarepo
