#include "metarepo/class_conditional.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace metarepo {

double ClassConditionalModel::conditional(std::size_t cls, std::size_t attribute, const Value& value) const {
    if (value.is_missing()) return 1.0;
    const Table& table = per_class_.at(cls);
    const std::size_t f = position_.at(attribute);
    if (value.is_nominal()) return table.nominal[f].at(value.category());
    const Numeric& g = table.numeric[f];
    // A class with no observed values for the attribute carries no evidence.
    if (!g.observed) return 1.0;
    const double z = value.number() - g.mean;
    return std::exp(-z * z / (2.0 * g.variance)) / std::sqrt(2.0 * std::numbers::pi * g.variance);
}

double ClassConditionalModel::likelihood(const Row& row, std::size_t cls) const {
    double product = 1.0;
    for (std::size_t a : features_) product *= std::min(1.0, conditional(cls, a, row[a]));
    return product;
}

ClassConditionalModel fit_class_conditionals(const Dataset& dataset) {
    ClassConditionalModel model;
    model.features_ = dataset.feature_indices();
    model.position_.assign(dataset.attributes().size(), 0);
    for (std::size_t f = 0; f < model.features_.size(); ++f) model.position_[model.features_[f]] = f;

    const std::size_t classes = dataset.num_classes();
    model.per_class_.resize(classes);
    for (std::size_t c = 0; c < classes; ++c) {
        auto& table = model.per_class_[c];
        table.nominal.resize(model.features_.size());
        table.numeric.resize(model.features_.size());
        for (std::size_t f = 0; f < model.features_.size(); ++f) {
            const std::size_t a = model.features_[f];
            const AttributeSpec& attr = dataset.attribute(a);
            if (attr.is_nominal()) {
                std::vector<std::size_t> counts(attr.categories.size(), 0);
                for (std::size_t i = 0; i < dataset.num_instances(); ++i) {
                    const Value& v = dataset.row(i)[a];
                    if (dataset.label(i) == c && v.is_nominal()) ++counts[v.category()];
                }
                std::size_t observed = 0;
                for (auto n : counts) observed += n;
                const double denom = static_cast<double>(observed + counts.size());
                for (auto n : counts) table.nominal[f].push_back((static_cast<double>(n) + 1.0) / denom);
                continue;
            }
            double sum = 0.0;
            std::size_t n = 0;
            for (std::size_t i = 0; i < dataset.num_instances(); ++i) {
                const Value& v = dataset.row(i)[a];
                if (dataset.label(i) == c && v.is_numeric()) {
                    sum += v.number();
                    ++n;
                }
            }
            if (n == 0) continue;
            const double mean = sum / static_cast<double>(n);
            double ss = 0.0;
            for (std::size_t i = 0; i < dataset.num_instances(); ++i) {
                const Value& v = dataset.row(i)[a];
                if (dataset.label(i) == c && v.is_numeric()) ss += (v.number() - mean) * (v.number() - mean);
            }
            table.numeric[f] = {mean, std::max(kVarianceFloor, ss / static_cast<double>(n)), true};
        }
    }
    return model;
}

} // namespace metarepo
