#include "metarepo/tree.hpp"

#include "metarepo/cross_validation.hpp"
#include "metarepo/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace metarepo {

namespace {

constexpr double kMinGain = 1e-10;

double entropy(std::span<const std::size_t> counts) {
    std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
    if (total == 0) return 0.0;
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

double split_information(std::span<const std::size_t> part_sizes, std::size_t total) {
    double s = 0.0;
    for (auto n : part_sizes) {
        if (n == 0) continue;
        const double p = static_cast<double>(n) / static_cast<double>(total);
        s -= p * std::log2(p);
    }
    return s;
}

struct Candidate {
    std::size_t attribute;
    std::optional<double> threshold;
    double gain;
    double ratio;
};

class Builder {
public:
    Builder(const Dataset& dataset, const TreeConfig& config) : data_(dataset), config_(config) {}

    std::vector<TreeModel::Node> nodes;

    std::size_t build(const std::vector<std::size_t>& idx, int depth, std::size_t inherited_majority) {
        const std::size_t self = nodes.size();
        nodes.emplace_back();
        std::vector<std::size_t> counts(data_.num_classes(), 0);
        for (auto i : idx) ++counts[data_.label(i)];
        nodes[self].class_counts = counts;
        nodes[self].depth = depth;
        nodes[self].majority = idx.empty() ? inherited_majority : majority_class(counts);

        const auto nonzero = std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; });
        if (idx.size() < 2 * config_.min_leaf || nonzero <= 1) return self;

        auto chosen = choose(idx);
        if (!chosen) return self;

        const AttributeSpec& attr = data_.attribute(chosen->attribute);
        const std::size_t branches = attr.is_nominal() ? attr.categories.size() : 2;
        std::vector<std::vector<std::size_t>> parts(branches);
        std::vector<std::size_t> unknown;
        for (auto i : idx) {
            const Value& v = data_.row(i)[chosen->attribute];
            if (v.is_missing()) {
                unknown.push_back(i);
            } else if (v.is_nominal()) {
                parts[v.category()].push_back(i);
            } else {
                parts[v.number() <= *chosen->threshold ? 0 : 1].push_back(i);
            }
        }
        std::size_t missing_branch = 0;
        for (std::size_t b = 1; b < branches; ++b) {
            if (parts[b].size() > parts[missing_branch].size()) missing_branch = b;
        }
        parts[missing_branch].insert(parts[missing_branch].end(), unknown.begin(), unknown.end());
        std::sort(parts[missing_branch].begin(), parts[missing_branch].end());

        const std::size_t majority = nodes[self].majority;
        std::vector<std::size_t> children;
        for (const auto& part : parts) children.push_back(build(part, depth + 1, majority));

        TreeModel::Node& node = nodes[self];
        node.leaf = false;
        node.attribute = chosen->attribute;
        node.threshold = chosen->threshold;
        node.children = std::move(children);
        node.missing_branch = missing_branch;
        return self;
    }

private:
    std::optional<Candidate> choose(const std::vector<std::size_t>& idx) const {
        std::vector<Candidate> candidates;
        for (std::size_t a : data_.feature_indices()) {
            if (auto c = evaluate(idx, a)) candidates.push_back(*c);
        }
        if (candidates.empty()) return std::nullopt;
        double mean_gain = 0.0;
        for (const auto& c : candidates) mean_gain += c.gain;
        mean_gain /= static_cast<double>(candidates.size());

        const Candidate* best = nullptr;
        for (const auto& c : candidates) {
            if (c.gain < mean_gain - 1e-12) continue;
            if (!best || c.ratio > best->ratio) best = &c;
        }
        return *best;
    }

    std::optional<Candidate> evaluate(const std::vector<std::size_t>& idx, std::size_t a) const {
        const std::size_t classes = data_.num_classes();
        const AttributeSpec& attr = data_.attribute(a);
        const std::size_t total = idx.size();
        const std::size_t min_leaf = config_.min_leaf;

        std::vector<std::size_t> known_counts(classes, 0);
        std::size_t missing = 0;
        for (auto i : idx) {
            if (data_.row(i)[a].is_missing()) {
                ++missing;
            } else {
                ++known_counts[data_.label(i)];
            }
        }
        const std::size_t known = total - missing;
        if (known < 2 * min_leaf) return std::nullopt;
        const double known_fraction = static_cast<double>(known) / static_cast<double>(total);
        const double h_known = entropy(known_counts);

        if (attr.is_nominal()) {
            std::vector<std::vector<std::size_t>> parts(attr.categories.size(), std::vector<std::size_t>(classes, 0));
            for (auto i : idx) {
                const Value& v = data_.row(i)[a];
                if (v.is_nominal()) ++parts[v.category()][data_.label(i)];
            }
            std::vector<std::size_t> sizes;
            std::size_t big_enough = 0;
            double children = 0.0;
            for (const auto& p : parts) {
                const std::size_t n = std::accumulate(p.begin(), p.end(), std::size_t{0});
                sizes.push_back(n);
                if (n >= min_leaf) ++big_enough;
                children += static_cast<double>(n) / static_cast<double>(known) * entropy(p);
            }
            if (big_enough < 2) return std::nullopt;
            const double gain = known_fraction * (h_known - children);
            if (gain <= kMinGain) return std::nullopt;
            sizes.push_back(missing);
            const double split = split_information(sizes, total);
            return Candidate{a, std::nullopt, gain, split > 0.0 ? gain / split : 0.0};
        }

        std::vector<std::pair<double, std::size_t>> observed;
        observed.reserve(known);
        for (auto i : idx) {
            const Value& v = data_.row(i)[a];
            if (v.is_numeric()) observed.emplace_back(v.number(), data_.label(i));
        }
        std::sort(observed.begin(), observed.end());
        std::vector<std::size_t> left(classes, 0);
        std::vector<std::size_t> right = known_counts;
        std::optional<Candidate> best;
        for (std::size_t k = 0; k + 1 < observed.size(); ++k) {
            ++left[observed[k].second];
            --right[observed[k].second];
            if (observed[k].first == observed[k + 1].first) continue;
            const std::size_t n_left = k + 1;
            const std::size_t n_right = observed.size() - n_left;
            if (n_left < min_leaf || n_right < min_leaf) continue;
            const double children = (static_cast<double>(n_left) * entropy(left) +
                                     static_cast<double>(n_right) * entropy(right)) /
                                    static_cast<double>(known);
            const double gain = known_fraction * (h_known - children);
            if (!best || gain > best->gain) {
                const std::size_t sizes[] = {n_left, n_right, missing};
                const double split = split_information(sizes, total);
                best = Candidate{a, 0.5 * (observed[k].first + observed[k + 1].first), gain,
                                 split > 0.0 ? gain / split : 0.0};
            }
        }
        if (!best || best->gain <= kMinGain) return std::nullopt;
        return best;
    }

    const Dataset& data_;
    const TreeConfig& config_;
};

double leaf_errors(const TreeModel::Node& node) {
    return static_cast<double>(node.covered() - node.class_counts[node.majority]);
}

/// Subtree replacement, bottom-up. Returns the estimated errors of the (possibly pruned) subtree.
double prune(std::vector<TreeModel::Node>& nodes, std::size_t index, double cf) {
    const double n = static_cast<double>(nodes[index].covered());
    const double e = leaf_errors(nodes[index]);
    const double as_leaf = n > 0.0 ? e + pessimistic_extra_errors(n, e, cf) : 0.0;
    if (nodes[index].leaf) return as_leaf;

    double as_tree = 0.0;
    for (std::size_t child : nodes[index].children) as_tree += prune(nodes, child, cf);
    if (as_leaf <= as_tree + 0.1) {
        nodes[index].leaf = true;
        nodes[index].children.clear();
        nodes[index].threshold.reset();
        return as_leaf;
    }
    return as_tree;
}

std::vector<TreeModel::Node> compact(const std::vector<TreeModel::Node>& nodes) {
    std::vector<TreeModel::Node> out;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    out.push_back(nodes[0]);
    while (!stack.empty()) {
        auto [old_index, new_index] = stack.back();
        stack.pop_back();
        std::vector<std::size_t> remapped;
        for (std::size_t child : nodes[old_index].children) {
            remapped.push_back(out.size());
            out.push_back(nodes[child]);
            stack.emplace_back(child, remapped.back());
        }
        out[new_index].children = std::move(remapped);
    }
    return out;
}

} // namespace

std::size_t TreeModel::Node::covered() const {
    return std::accumulate(class_counts.begin(), class_counts.end(), std::size_t{0});
}

std::size_t TreeModel::leaf_for(const Row& row) const {
    std::size_t index = 0;
    while (!nodes_[index].leaf) {
        const Node& node = nodes_[index];
        const Value& v = row[node.attribute];
        std::size_t branch = node.missing_branch;
        if (v.is_nominal() && v.category() < node.children.size()) {
            branch = v.category();
        } else if (v.is_numeric() && node.threshold) {
            branch = v.number() <= *node.threshold ? 0 : 1;
        }
        index = node.children[branch];
    }
    return index;
}

std::vector<std::size_t> TreeModel::leaves() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].leaf) out.push_back(i);
    }
    return out;
}

int TreeModel::depth() const {
    int d = 0;
    for (const auto& node : nodes_) {
        if (node.leaf) d = std::max(d, node.depth);
    }
    return d;
}

std::size_t TreeModel::largest_leaf_size() const {
    std::size_t largest = 0;
    for (const auto& node : nodes_) {
        if (node.leaf) largest = std::max(largest, node.covered());
    }
    return largest;
}

TreeModel train_tree(const Dataset& dataset, const TreeConfig& config) {
    if (dataset.num_instances() < 1) throw DataError("tree induction needs at least one instance");
    if (config.min_leaf < 1) throw DataError("minimum leaf size must be positive");
    std::vector<std::size_t> all(dataset.num_instances());
    std::iota(all.begin(), all.end(), std::size_t{0});

    Builder builder(dataset, config);
    builder.build(all, 0, majority_class(dataset.class_counts()));

    TreeModel model;
    model.nodes_ = std::move(builder.nodes);
    if (config.pruned) {
        prune(model.nodes_, 0, config.confidence);
        model.nodes_ = compact(model.nodes_);
        model.pruned_ = true;
    }
    return model;
}

TreeModel train_tree(const Dataset& dataset, bool pruned) {
    TreeConfig config;
    config.pruned = pruned;
    return train_tree(dataset, config);
}

double pessimistic_extra_errors(double n, double errors, double cf) {
    // Normal deviates for one-sided confidence levels, interpolated at cf.
    static constexpr double levels[] = {0, 0.001, 0.005, 0.01, 0.05, 0.10, 0.20, 0.40, 1.00};
    static constexpr double deviates[] = {4.0, 3.09, 2.58, 2.33, 1.65, 1.28, 0.84, 0.25, 0.00};
    std::size_t i = 0;
    while (cf > levels[i]) ++i;
    double z = deviates[i];
    if (i > 0) {
        z = deviates[i - 1] + (deviates[i] - deviates[i - 1]) * (cf - levels[i - 1]) / (levels[i] - levels[i - 1]);
    }
    const double coeff = z * z;

    if (errors < 1e-6) return n * (1.0 - std::exp(std::log(cf) / n));
    if (errors < 0.9999) {
        const double base = n * (1.0 - std::exp(std::log(cf) / n));
        return base + errors * (pessimistic_extra_errors(n, 1.0, cf) - base);
    }
    if (errors + 0.5 >= n) return 0.67 * (n - errors);
    const double upper = (errors + 0.5 + coeff / 2.0 +
                          std::sqrt(coeff * ((errors + 0.5) * (1.0 - (errors + 0.5) / n) + coeff / 4.0))) /
                         (n + coeff);
    return n * upper - errors;
}

} // namespace metarepo
