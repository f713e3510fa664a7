#pragma once

#include "metarepo/distance.hpp"
#include "metarepo/linear.hpp"
#include "metarepo/model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace metarepo {

/// Per-class statistics of one numeric attribute over its observed values.
/// Variance is the population variance; proportions sum to 1.
struct ClassAttributeStats {
    std::vector<double> mean;
    std::vector<double> variance;
    std::vector<double> proportion;
    std::vector<std::size_t> observed;
};

ClassAttributeStats class_attribute_stats(const Dataset& dataset, std::size_t attribute);

/// Fisher discriminant ratio of one attribute. Two classes present:
/// (m1 - m2)^2 / (v1 + v2). More classes: sum_{i<j} p_i p_j (m_i - m_j)^2 / sum_i p_i v_i.
/// A zero denominator gives 0 when the numerator is 0 and +inf otherwise.
double fisher_ratio(const ClassAttributeStats& stats);

struct NeighborDistances {
    /// Distance to the nearest same-class instance; empty for a class of one.
    std::vector<std::optional<double>> intra;
    /// Distance to the nearest instance of another class.
    std::vector<double> inter;
};

NeighborDistances neighbor_distances(const Dataset& dataset, const DistanceMatrix& distances);

/// Minimum spanning tree edges (i, j) with i < j, grown by Prim's algorithm
/// from instance 0. Equal weights are resolved by the lexicographically
/// smallest (min endpoint, max endpoint).
std::vector<std::pair<std::size_t, std::size_t>> minimum_spanning_tree(const DistanceMatrix& distances);

/// Synthetic instances interpolated between random same-class pairs. A class
/// is drawn uniformly among those with at least two members, then a distinct
/// pair within it and a coefficient t in [0, 1]. Numeric values interpolate;
/// nominal or missing values are copied from the nearer parent (t < 0.5 picks the first).
Dataset interpolate_instances(const Dataset& dataset, std::size_t count, std::uint64_t seed);

struct SimpleMeasures {
    double n_examples = 0;
    double num_attributes = 0;
    double prop_symbolic = 0;
    double prop_missing = 0;
    double prop_outlier_attrs = 0;
    double class_entropy = 0;
};

/// Trimmed-variance ratio used for outlier detection; 5% cut from each tail.
inline constexpr double kTrimFraction = 0.05;
inline constexpr double kOutlierRatio = 0.7;

SimpleMeasures compute_simple(const Dataset& dataset);

/// Measures on numeric attributes only; fields are empty when no numeric
/// attribute has observed values in two classes.
struct OverlapMeasures {
    std::optional<double> f1;
    std::optional<double> f2;
    std::optional<double> f3;
    std::optional<double> f4;
    std::vector<std::size_t> excluded_attributes;
};

/// One-vs-rest linear models trained on the data, one per target of
/// one_vs_rest_targets() that has instances on both sides.
std::vector<LinearModel> one_vs_rest_models(const Dataset& dataset, const LinearConfig& config = {});

/// Classes with at least one instance. The class-dependent measures throw
/// DataError when fewer than two are present.
std::vector<std::size_t> present_classes(const Dataset& dataset);

OverlapMeasures compute_overlap(const Dataset& dataset);

struct SeparabilityMeasures {
    double l1 = 0;
    double l2 = 0;
    double n1 = 0;
    /// Empty when every inter-class distance is zero.
    std::optional<double> n2;
    double n3 = 0;
};

SeparabilityMeasures compute_separability(const Dataset& dataset, const LinearConfig& linear = {});

struct GeometryMeasures {
    double l3 = 0;
    double n4 = 0;
    double t1 = 0;
    /// Empty when there are no non-class attributes.
    std::optional<double> t2;
};

/// T1 sphere radius is the distance to the nearest enemy minus this margin.
inline constexpr double kSphereMargin = 1e-9;

GeometryMeasures compute_geometry(const Dataset& dataset, std::uint64_t seed, const LinearConfig& linear = {});

/// Number of covering spheres left after discarding every sphere whose covered
/// set is contained in another's (equal sets keep the lowest index).
std::size_t covering_sphere_count(const Dataset& dataset, const DistanceMatrix& distances);

/// Cross-validated accuracies, except one_nn which is 1 - N3.
struct LandmarkerMeasures {
    double lda = 0;
    double one_nn = 0;
    double stump_best = 0;
    double stump_random = 0;
    double stump_worst = 0;
    double stump_avg = 0;
};

LandmarkerMeasures compute_landmarkers(const Dataset& dataset);

struct DatasetMetaFeatures {
    std::optional<double> n_examples, num_attributes, prop_symbolic, prop_missing, prop_outlier_attrs,
        class_entropy;
    std::optional<double> f1, f2, f3, f4;
    std::optional<double> l1, l2, n1, n2, n3;
    std::optional<double> l3, n4, t1, t2;
    std::optional<double> lm_lda, lm_1nn, lm_stump_best, lm_stump_random, lm_stump_worst, lm_stump_avg;

    std::vector<std::size_t> excluded_attributes;
    /// One line per measure that could not be computed and per excluded attribute.
    std::vector<std::string> notes;

    /// Export names and values in export order. Empty values export as `?`.
    std::vector<std::pair<std::string, std::optional<double>>> columns() const;
};

/// Every measure; one that fails or is non-finite is left empty and noted.
DatasetMetaFeatures compute_all(const Dataset& dataset, std::uint64_t seed = 0, const LinearConfig& linear = {});

} // namespace metarepo
