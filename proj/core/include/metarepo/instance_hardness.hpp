#pragma once

#include "metarepo/distance.hpp"
#include "metarepo/model.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace metarepo {

inline constexpr std::size_t kDefaultNeighbors = 5;

/// Per-instance hardness values, in export order.
struct InstanceHardnessVector {
    double kdn = 0;
    double disjunct_size = 0;
    double disjunct_class_pct = 0;
    int tree_depth_unpruned = 0;
    int tree_depth_pruned = 0;
    double class_likelihood = 0;
    double minority_value = 0;
    double class_balance = 0;

    std::array<double, 8> values() const;
    bool operator==(const InstanceHardnessVector&) const = default;
};

/// Export names matching InstanceHardnessVector::values().
inline constexpr std::array<std::string_view, 8> kHardnessNames = {"kAN", "DS", "DCP", "TDU", "TDP", "CL", "MV", "CB"};

/// Fraction of each instance's k nearest other instances with a different class. Requires N > k >= 1.
std::vector<double> compute_kdn(const Dataset& dataset, std::size_t k = kDefaultNeighbors);
std::vector<double> compute_kdn(const Dataset& dataset, const DistanceMatrix& distances, std::size_t k);

struct DisjunctMeasures {
    /// Covering leaf size over the largest leaf size, unpruned tree.
    std::vector<double> size;
    /// Share of the covering pruned leaf that has the instance's class.
    std::vector<double> class_pct;
    std::vector<int> depth_unpruned;
    std::vector<int> depth_pruned;
};

DisjunctMeasures compute_disjunct_measures(const Dataset& dataset);

/// Product of p(x_i | t(x)) over the non-class attributes, each factor capped at 1.
std::vector<double> compute_likelihood(const Dataset& dataset);

struct SkewMeasures {
    /// count(t(x)) / largest class count
    std::vector<double> minority_value;
    /// count(t(x)) / N - 1 / C
    std::vector<double> class_balance;
};

SkewMeasures compute_skew(const Dataset& dataset);

std::vector<InstanceHardnessVector> compute_hardness(const Dataset& dataset, std::size_t k = kDefaultNeighbors);

/// Arithmetic mean of each measure, in kHardnessNames order.
std::array<double, 8> aggregate_hardness(std::span<const InstanceHardnessVector> vectors);

} // namespace metarepo
