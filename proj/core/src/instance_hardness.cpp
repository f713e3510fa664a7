#include "metarepo/instance_hardness.hpp"

#include "metarepo/class_conditional.hpp"
#include "metarepo/error.hpp"
#include "metarepo/tree.hpp"

#include <algorithm>

namespace metarepo {

std::array<double, 8> InstanceHardnessVector::values() const {
    return {kdn,
            disjunct_size,
            disjunct_class_pct,
            static_cast<double>(tree_depth_unpruned),
            static_cast<double>(tree_depth_pruned),
            class_likelihood,
            minority_value,
            class_balance};
}

std::vector<double> compute_kdn(const Dataset& dataset, std::size_t k) {
    if (k < 1) throw DataError("k must be at least 1");
    if (dataset.num_instances() <= k) throw DataError("k must be smaller than the instance count");
    return compute_kdn(dataset, DistanceMatrix(dataset), k);
}

std::vector<double> compute_kdn(const Dataset& dataset, const DistanceMatrix& distances, std::size_t k) {
    const std::size_t n = dataset.num_instances();
    if (k < 1) throw DataError("k must be at least 1");
    if (n <= k) throw DataError("k must be smaller than the instance count");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t disagree = 0;
        for (auto j : nearest_neighbors(distances, i, k)) {
            if (dataset.label(j) != dataset.label(i)) ++disagree;
        }
        out[i] = static_cast<double>(disagree) / static_cast<double>(k);
    }
    return out;
}

DisjunctMeasures compute_disjunct_measures(const Dataset& dataset) {
    require_measurable(dataset);
    const TreeModel unpruned = train_tree(dataset, false);
    const TreeModel pruned = train_tree(dataset, true);
    const double largest = static_cast<double>(unpruned.largest_leaf_size());

    DisjunctMeasures m;
    for (std::size_t i = 0; i < dataset.num_instances(); ++i) {
        const Row& row = dataset.row(i);
        const auto& u = unpruned.node(unpruned.leaf_for(row));
        const auto& p = pruned.node(pruned.leaf_for(row));
        m.size.push_back(static_cast<double>(u.covered()) / largest);
        m.depth_unpruned.push_back(u.depth);
        m.class_pct.push_back(static_cast<double>(p.class_counts[dataset.label(i)]) /
                              static_cast<double>(p.covered()));
        m.depth_pruned.push_back(p.depth);
    }
    return m;
}

std::vector<double> compute_likelihood(const Dataset& dataset) {
    require_measurable(dataset);
    const ClassConditionalModel model = fit_class_conditionals(dataset);
    std::vector<double> out;
    for (std::size_t i = 0; i < dataset.num_instances(); ++i) out.push_back(model.likelihood(dataset.row(i), dataset.label(i)));
    return out;
}

SkewMeasures compute_skew(const Dataset& dataset) {
    require_measurable(dataset);
    const auto counts = dataset.class_counts();
    const double largest = static_cast<double>(*std::max_element(counts.begin(), counts.end()));
    const double n = static_cast<double>(dataset.num_instances());
    const double uniform = 1.0 / static_cast<double>(dataset.num_classes());
    SkewMeasures m;
    for (std::size_t i = 0; i < dataset.num_instances(); ++i) {
        const double own = static_cast<double>(counts[dataset.label(i)]);
        m.minority_value.push_back(own / largest);
        m.class_balance.push_back(own / n - uniform);
    }
    return m;
}

std::vector<InstanceHardnessVector> compute_hardness(const Dataset& dataset, std::size_t k) {
    require_measurable(dataset);
    const auto kdn = compute_kdn(dataset, k);
    const auto disjuncts = compute_disjunct_measures(dataset);
    const auto likelihood = compute_likelihood(dataset);
    const auto skew = compute_skew(dataset);
    std::vector<InstanceHardnessVector> out(dataset.num_instances());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = {kdn[i],
                  disjuncts.size[i],
                  disjuncts.class_pct[i],
                  disjuncts.depth_unpruned[i],
                  disjuncts.depth_pruned[i],
                  likelihood[i],
                  skew.minority_value[i],
                  skew.class_balance[i]};
    }
    return out;
}

std::array<double, 8> aggregate_hardness(std::span<const InstanceHardnessVector> vectors) {
    if (vectors.empty()) throw DataError("no hardness vectors to aggregate");
    std::array<double, 8> sum{};
    for (const auto& v : vectors) {
        const auto values = v.values();
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += values[k];
    }
    for (auto& s : sum) s /= static_cast<double>(vectors.size());
    return sum;
}

} // namespace metarepo
