#pragma once

#include "metarepo/model.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace metarepo {

struct TreeConfig {
    bool pruned = false;
    /// Minimum instances in at least two branches of any split.
    std::size_t min_leaf = 2;
    /// Confidence factor for pessimistic error estimates.
    double confidence = 0.25;
};

/// Decision tree grown by gain ratio. Each leaf is a disjunct.
class TreeModel {
public:
    struct Node {
        bool leaf = true;
        std::size_t attribute = 0;
        /// Set for numeric splits: children are {<= threshold, > threshold}.
        std::optional<double> threshold;
        /// Node indices; nominal splits have one child per category.
        std::vector<std::size_t> children;
        /// Branch taken by a missing value (the branch with most known training instances).
        std::size_t missing_branch = 0;
        /// Training instances that reached this node, per class.
        std::vector<std::size_t> class_counts;
        std::size_t majority = 0;
        int depth = 0;

        std::size_t covered() const;
    };

    std::size_t leaf_for(const Row& row) const;
    std::size_t predict(const Row& row) const { return nodes_[leaf_for(row)].majority; }

    std::span<const Node> nodes() const noexcept { return nodes_; }
    const Node& node(std::size_t index) const { return nodes_.at(index); }
    std::vector<std::size_t> leaves() const;
    int depth() const;
    bool pruned() const noexcept { return pruned_; }
    std::size_t largest_leaf_size() const;

private:
    friend TreeModel train_tree(const Dataset& dataset, const TreeConfig& config);
    std::vector<Node> nodes_;
    bool pruned_ = false;
};

/// Deterministic; degenerate data yields a single leaf.
TreeModel train_tree(const Dataset& dataset, const TreeConfig& config);
TreeModel train_tree(const Dataset& dataset, bool pruned);

/// Extra errors added to `errors` observed among `n` instances for an upper
/// confidence bound at confidence factor `cf`.
double pessimistic_extra_errors(double n, double errors, double cf);

} // namespace metarepo
