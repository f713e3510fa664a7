#include "metarepo/dataset_measures.hpp"

#include "metarepo/error.hpp"
#include "metarepo/lda.hpp"
#include "metarepo/rng.hpp"
#include "metarepo/stump.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <tuple>

namespace metarepo {

namespace {

void require_two_classes(const Dataset& dataset) {
    if (present_classes(dataset).size() < 2) throw DataError("at least two classes must be present");
}

double population_variance(std::span<const double> values) {
    if (values.empty()) return 0.0;
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(values.size());
}

std::vector<std::pair<std::size_t, std::size_t>> class_pairs(const std::vector<std::size_t>& classes) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        for (std::size_t j = i + 1; j < classes.size(); ++j) out.emplace_back(classes[i], classes[j]);
    }
    return out;
}

struct Interval {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    bool empty() const { return lo > hi; }
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

/// Observed range of `attribute` within class `cls`, restricted to `members`.
Interval class_interval(const Dataset& dataset, std::span<const std::size_t> members, std::size_t attribute,
                        std::size_t cls) {
    Interval r;
    for (auto i : members) {
        const Value& v = dataset.row(i)[attribute];
        if (dataset.label(i) == cls && v.is_numeric()) r.add(v.number());
    }
    return r;
}

/// Instances of classes a and b among `members` whose value lies outside the
/// two classes' overlap region. Missing values never count.
std::vector<std::size_t> discriminated(const Dataset& dataset, std::span<const std::size_t> members,
                                       std::size_t attribute, std::size_t a, std::size_t b) {
    const Interval ra = class_interval(dataset, members, attribute, a);
    const Interval rb = class_interval(dataset, members, attribute, b);
    Interval overlap;
    if (!ra.empty() && !rb.empty()) overlap = {std::max(ra.lo, rb.lo), std::min(ra.hi, rb.hi)};
    std::vector<std::size_t> out;
    for (auto i : members) {
        const Value& v = dataset.row(i)[attribute];
        if (!v.is_numeric()) continue;
        if (overlap.empty() || v.number() < overlap.lo || v.number() > overlap.hi) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> members_of(const Dataset& dataset, std::size_t a, std::size_t b) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < dataset.num_instances(); ++i) {
        if (dataset.label(i) == a || dataset.label(i) == b) out.push_back(i);
    }
    return out;
}

/// Fraction of one class pair's instances removed by greedily applying the
/// most discriminating unused attribute until nothing more can be removed.
double pair_f4(const Dataset& dataset, std::span<const std::size_t> attributes, std::size_t a, std::size_t b) {
    std::vector<std::size_t> remaining = members_of(dataset, a, b);
    const double total = static_cast<double>(remaining.size());
    std::vector<bool> used(attributes.size(), false);
    std::size_t removed = 0;
    while (!remaining.empty()) {
        std::optional<std::size_t> best;
        std::vector<std::size_t> best_set;
        for (std::size_t k = 0; k < attributes.size(); ++k) {
            if (used[k]) continue;
            auto d = discriminated(dataset, remaining, attributes[k], a, b);
            if (!best || d.size() > best_set.size()) {
                best = k;
                best_set = std::move(d);
            }
        }
        if (!best || best_set.empty()) break;
        used[*best] = true;
        removed += best_set.size();
        std::vector<std::size_t> kept;
        std::set_difference(remaining.begin(), remaining.end(), best_set.begin(), best_set.end(),
                            std::back_inserter(kept));
        remaining = std::move(kept);
    }
    return static_cast<double>(removed) / total;
}

double mean_training_error(const std::vector<LinearModel>& models, const Dataset& data) {
    if (models.empty()) throw DataError("no one-vs-rest model could be trained");
    double sum = 0.0;
    for (const auto& m : models) sum += linear_training_error(m, data);
    return sum / static_cast<double>(models.size());
}

double mean_error_distance(const std::vector<LinearModel>& models, const Dataset& data) {
    if (models.empty()) throw DataError("no one-vs-rest model could be trained");
    double sum = 0.0;
    for (const auto& m : models) sum += linear_error_distance(m, data);
    return sum / static_cast<double>(models.size());
}

double boundary_fraction(const Dataset& dataset, const DistanceMatrix& distances) {
    const std::size_t n = dataset.num_instances();
    std::vector<bool> boundary(n, false);
    for (auto [i, j] : minimum_spanning_tree(distances)) {
        if (dataset.label(i) != dataset.label(j)) boundary[i] = boundary[j] = true;
    }
    return static_cast<double>(std::count(boundary.begin(), boundary.end(), true)) / static_cast<double>(n);
}

std::optional<double> intra_inter_ratio(const Dataset& dataset, const DistanceMatrix& distances) {
    const auto nd = neighbor_distances(dataset, distances);
    double intra = 0.0;
    double inter = 0.0;
    for (std::size_t i = 0; i < nd.intra.size(); ++i) {
        if (!nd.intra[i]) continue;
        intra += *nd.intra[i];
        inter += nd.inter[i];
    }
    if (inter == 0.0) return std::nullopt;
    return intra / inter;
}

double nn_error_on(const Dataset& reference, const Dataset& probes) {
    const DistanceMetric metric(reference);
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < probes.num_instances(); ++i) {
        if (reference.label(nearest_instance(reference, metric, probes.row(i))) != probes.label(i)) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(probes.num_instances());
}

std::optional<double> points_per_dimension(const Dataset& dataset) {
    if (dataset.num_features() == 0) return std::nullopt;
    return static_cast<double>(dataset.num_instances()) / static_cast<double>(dataset.num_features());
}

} // namespace

ClassAttributeStats class_attribute_stats(const Dataset& dataset, std::size_t attribute) {
    const std::size_t classes = dataset.num_classes();
    std::vector<std::vector<double>> values(classes);
    for (std::size_t i = 0; i < dataset.num_instances(); ++i) {
        const Value& v = dataset.row(i)[attribute];
        if (v.is_numeric()) values[dataset.label(i)].push_back(v.number());
    }
    ClassAttributeStats s;
    std::size_t total = 0;
    for (const auto& vs : values) total += vs.size();
    for (const auto& vs : values) {
        s.observed.push_back(vs.size());
        s.mean.push_back(vs.empty() ? 0.0 : std::accumulate(vs.begin(), vs.end(), 0.0) / static_cast<double>(vs.size()));
        s.variance.push_back(population_variance(vs));
        s.proportion.push_back(total == 0 ? 0.0 : static_cast<double>(vs.size()) / static_cast<double>(total));
    }
    return s;
}

double fisher_ratio(const ClassAttributeStats& stats) {
    std::vector<std::size_t> seen;
    for (std::size_t c = 0; c < stats.observed.size(); ++c) {
        if (stats.observed[c] > 0) seen.push_back(c);
    }
    if (seen.size() < 2) throw DataError("Fisher ratio needs observed values in two classes");
    double numerator = 0.0;
    double denominator = 0.0;
    if (seen.size() == 2) {
        const std::size_t a = seen[0];
        const std::size_t b = seen[1];
        numerator = (stats.mean[a] - stats.mean[b]) * (stats.mean[a] - stats.mean[b]);
        denominator = stats.variance[a] + stats.variance[b];
    } else {
        for (auto [a, b] : class_pairs(seen)) {
            const double diff = stats.mean[a] - stats.mean[b];
            numerator += stats.proportion[a] * stats.proportion[b] * diff * diff;
        }
        for (auto c : seen) denominator += stats.proportion[c] * stats.variance[c];
    }
    if (denominator == 0.0) return numerator == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return numerator / denominator;
}

NeighborDistances neighbor_distances(const Dataset& dataset, const DistanceMatrix& distances) {
    const std::size_t n = dataset.num_instances();
    NeighborDistances nd;
    nd.intra.assign(n, std::nullopt);
    nd.inter.assign(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = distances(i, j);
            if (dataset.label(i) == dataset.label(j)) {
                if (!nd.intra[i] || d < *nd.intra[i]) nd.intra[i] = d;
            } else {
                nd.inter[i] = std::min(nd.inter[i], d);
            }
        }
    }
    return nd;
}

std::vector<std::pair<std::size_t, std::size_t>> minimum_spanning_tree(const DistanceMatrix& distances) {
    const std::size_t n = distances.size();
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    if (n < 2) return edges;
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<bool> in_tree(n, false);
    std::vector<double> key(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> parent(n, none);
    auto order = [&](std::size_t v) {
        return std::make_tuple(key[v], std::min(parent[v], v), std::max(parent[v], v));
    };

    in_tree[0] = true;
    for (std::size_t u = 1; u < n; ++u) {
        key[u] = distances(0, u);
        parent[u] = 0;
    }
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t next = none;
        for (std::size_t v = 0; v < n; ++v) {
            if (!in_tree[v] && (next == none || order(v) < order(next))) next = v;
        }
        in_tree[next] = true;
        edges.emplace_back(std::min(parent[next], next), std::max(parent[next], next));
        for (std::size_t u = 0; u < n; ++u) {
            if (in_tree[u]) continue;
            const double d = distances(next, u);
            const auto candidate = std::make_tuple(d, std::min(next, u), std::max(next, u));
            if (candidate < order(u)) {
                key[u] = d;
                parent[u] = next;
            }
        }
    }
    return edges;
}

Dataset interpolate_instances(const Dataset& dataset, std::size_t count, std::uint64_t seed) {
    std::vector<std::vector<std::size_t>> by_class(dataset.num_classes());
    for (std::size_t i = 0; i < dataset.num_instances(); ++i) by_class[dataset.label(i)].push_back(i);
    std::vector<std::size_t> eligible;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        if (by_class[c].size() >= 2) eligible.push_back(c);
    }
    if (eligible.empty()) throw DataError("no class has two instances to interpolate between");

    Rng rng(seed);
    std::vector<Row> rows;
    rows.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        const auto& members = by_class[eligible[rng.uniform_index(eligible.size())]];
        const std::size_t first = rng.uniform_index(members.size());
        std::size_t second = rng.uniform_index(members.size() - 1);
        if (second >= first) ++second;
        const double t = rng.uniform01();
        const Row& a = dataset.row(members[first]);
        const Row& b = dataset.row(members[second]);
        Row row = t < 0.5 ? a : b;
        for (std::size_t k : dataset.feature_indices()) {
            if (a[k].is_numeric() && b[k].is_numeric()) {
                row[k] = Value::numeric(a[k].number() + t * (b[k].number() - a[k].number()));
            }
        }
        rows.push_back(std::move(row));
    }
    return dataset.with_rows(std::move(rows));
}

std::vector<std::size_t> present_classes(const Dataset& dataset) {
    std::vector<std::size_t> out;
    const auto counts = dataset.class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] > 0) out.push_back(c);
    }
    return out;
}

std::vector<LinearModel> one_vs_rest_models(const Dataset& dataset, const LinearConfig& config) {
    const auto counts = dataset.class_counts();
    std::vector<LinearModel> models;
    for (std::size_t target : one_vs_rest_targets(dataset)) {
        if (counts[target] == 0 || counts[target] == dataset.num_instances()) continue;
        models.push_back(train_linear(dataset, target, config));
    }
    return models;
}

SimpleMeasures compute_simple(const Dataset& dataset) {
    require_measurable(dataset);
    SimpleMeasures m;
    const std::size_t n = dataset.num_instances();
    const auto& features = dataset.feature_indices();
    m.n_examples = static_cast<double>(n);
    m.num_attributes = static_cast<double>(features.size());

    std::size_t nominal = 0;
    std::size_t numeric = 0;
    std::size_t missing = 0;
    std::size_t outliers = 0;
    for (std::size_t a : features) {
        std::vector<double> values;
        for (const auto& row : dataset.rows()) {
            if (row[a].is_missing()) ++missing;
            if (row[a].is_numeric()) values.push_back(row[a].number());
        }
        if (dataset.attribute(a).is_nominal()) {
            ++nominal;
            continue;
        }
        ++numeric;
        const double full = population_variance(values);
        if (full <= 0.0) continue;
        std::sort(values.begin(), values.end());
        const auto cut = static_cast<std::size_t>(std::floor(kTrimFraction * static_cast<double>(values.size())));
        const std::span<const double> trimmed(values.data() + cut, values.size() - 2 * cut);
        if (population_variance(trimmed) / full < kOutlierRatio) ++outliers;
    }
    if (!features.empty()) {
        m.prop_symbolic = static_cast<double>(nominal) / static_cast<double>(features.size());
        m.prop_missing = static_cast<double>(missing) / static_cast<double>(n * features.size());
    }
    if (numeric > 0) m.prop_outlier_attrs = static_cast<double>(outliers) / static_cast<double>(numeric);

    for (auto c : dataset.class_counts()) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(n);
        m.class_entropy -= p * std::log2(p);
    }
    return m;
}

OverlapMeasures compute_overlap(const Dataset& dataset) {
    require_measurable(dataset);
    require_two_classes(dataset);
    const auto classes = present_classes(dataset);
    const auto pairs = class_pairs(classes);

    OverlapMeasures m;
    std::vector<std::size_t> usable;
    std::vector<ClassAttributeStats> stats;
    for (std::size_t a : dataset.feature_indices()) {
        if (!dataset.attribute(a).is_numeric()) continue;
        auto s = class_attribute_stats(dataset, a);
        if (std::count_if(s.observed.begin(), s.observed.end(), [](std::size_t k) { return k > 0; }) < 2) {
            m.excluded_attributes.push_back(a);
            continue;
        }
        usable.push_back(a);
        stats.push_back(std::move(s));
    }
    if (usable.empty()) return m;

    double f1 = 0.0;
    for (const auto& s : stats) f1 = std::max(f1, fisher_ratio(s));
    m.f1 = f1;

    double f2 = 0.0;
    for (auto [a, b] : pairs) {
        const auto all = members_of(dataset, a, b);
        double product = 1.0;
        for (std::size_t attr : usable) {
            const Interval ra = class_interval(dataset, all, attr, a);
            const Interval rb = class_interval(dataset, all, attr, b);
            if (ra.empty() || rb.empty()) {
                product = 0.0;
                continue;
            }
            const double overlap = std::max(0.0, std::min(ra.hi, rb.hi) - std::max(ra.lo, rb.lo));
            const double range = std::max(ra.hi, rb.hi) - std::min(ra.lo, rb.lo);
            product *= range == 0.0 ? 1.0 : overlap / range;
        }
        f2 += product;
    }
    m.f2 = f2;

    double f3 = 0.0;
    for (std::size_t attr : usable) {
        double sum = 0.0;
        for (auto [a, b] : pairs) {
            const auto all = members_of(dataset, a, b);
            sum += static_cast<double>(discriminated(dataset, all, attr, a, b).size()) / static_cast<double>(all.size());
        }
        f3 = std::max(f3, sum / static_cast<double>(pairs.size()));
    }
    m.f3 = f3;

    double f4 = 0.0;
    for (auto [a, b] : pairs) f4 += pair_f4(dataset, usable, a, b);
    m.f4 = f4 / static_cast<double>(pairs.size());
    return m;
}

SeparabilityMeasures compute_separability(const Dataset& dataset, const LinearConfig& linear) {
    require_measurable(dataset);
    require_two_classes(dataset);
    if (dataset.num_instances() < 2) throw DataError("separability measures need at least two instances");
    const auto models = one_vs_rest_models(dataset, linear);
    const DistanceMatrix distances(dataset);
    SeparabilityMeasures m;
    m.l1 = mean_error_distance(models, dataset);
    m.l2 = mean_training_error(models, dataset);
    m.n1 = boundary_fraction(dataset, distances);
    m.n2 = intra_inter_ratio(dataset, distances);
    m.n3 = loo_1nn_error(dataset, distances);
    return m;
}

std::size_t covering_sphere_count(const Dataset& dataset, const DistanceMatrix& distances) {
    const std::size_t n = dataset.num_instances();
    const std::size_t words = (n + 63) / 64;
    const auto nd = neighbor_distances(dataset, distances);
    std::vector<std::vector<std::uint64_t>> covered(n, std::vector<std::uint64_t>(words, 0));
    for (std::size_t i = 0; i < n; ++i) {
        const double radius = nd.inter[i] - kSphereMargin;
        for (std::size_t j = 0; j < n; ++j) {
            if (distances(i, j) <= radius) covered[i][j / 64] |= std::uint64_t{1} << (j % 64);
        }
    }
    auto subset = [&](std::size_t a, std::size_t b) {
        for (std::size_t w = 0; w < words; ++w) {
            if ((covered[a][w] & ~covered[b][w]) != 0) return false;
        }
        return true;
    };
    std::size_t kept = 0;
    for (std::size_t i = 0; i < n; ++i) {
        bool absorbed = false;
        for (std::size_t j = 0; j < n && !absorbed; ++j) {
            if (i == j || !subset(i, j)) continue;
            absorbed = !subset(j, i) || j < i;
        }
        if (!absorbed) ++kept;
    }
    return kept;
}

GeometryMeasures compute_geometry(const Dataset& dataset, std::uint64_t seed, const LinearConfig& linear) {
    require_measurable(dataset);
    require_two_classes(dataset);
    const Dataset synthetic = interpolate_instances(dataset, dataset.num_instances(), seed);
    GeometryMeasures m;
    m.l3 = mean_training_error(one_vs_rest_models(dataset, linear), synthetic);
    m.n4 = nn_error_on(dataset, synthetic);
    const DistanceMatrix distances(dataset);
    m.t1 = static_cast<double>(covering_sphere_count(dataset, distances)) /
           static_cast<double>(dataset.num_instances());
    m.t2 = points_per_dimension(dataset);
    return m;
}

LandmarkerMeasures compute_landmarkers(const Dataset& dataset) {
    require_measurable(dataset);
    require_two_classes(dataset);
    LandmarkerMeasures m;
    m.lda = train_lda(dataset).cv_accuracy;
    m.one_nn = 1.0 - loo_1nn_error(dataset, DistanceMetric(dataset));
    m.stump_best = train_stump(dataset, StumpMode::best).cv_accuracy;
    m.stump_random = train_stump(dataset, StumpMode::random).cv_accuracy;
    m.stump_worst = train_stump(dataset, StumpMode::worst).cv_accuracy;
    m.stump_avg = train_stump(dataset, StumpMode::average).cv_accuracy;
    return m;
}

std::vector<std::pair<std::string, std::optional<double>>> DatasetMetaFeatures::columns() const {
    return {{"numInst", n_examples},
            {"numAttr", num_attributes},
            {"propSymbolic", prop_symbolic},
            {"propMissing", prop_missing},
            {"propOutlierAttrs", prop_outlier_attrs},
            {"classEntropy", class_entropy},
            {"F1", f1},
            {"F2", f2},
            {"F3", f3},
            {"F4", f4},
            {"L1", l1},
            {"L2", l2},
            {"N1", n1},
            {"N2", n2},
            {"N3", n3},
            {"L3", l3},
            {"N4", n4},
            {"T1", t1},
            {"T2", t2},
            {"lmLDA", lm_lda},
            {"lm1NN", lm_1nn},
            {"lmStumpBest", lm_stump_best},
            {"lmStumpRandom", lm_stump_random},
            {"lmStumpWorst", lm_stump_worst},
            {"lmStumpAvg", lm_stump_avg}};
}

DatasetMetaFeatures compute_all(const Dataset& dataset, std::uint64_t seed, const LinearConfig& linear) {
    require_measurable(dataset);
    DatasetMetaFeatures mf;
    auto measure = [&mf](const char* name, const std::function<std::optional<double>()>& fn) -> std::optional<double> {
        try {
            const auto v = fn();
            if (!v) {
                mf.notes.push_back(std::string(name) + ": undefined");
                return std::nullopt;
            }
            if (!std::isfinite(*v)) {
                mf.notes.push_back(std::string(name) + ": not finite");
                return std::nullopt;
            }
            return v;
        } catch (const DataError& e) {
            mf.notes.push_back(std::string(name) + ": " + e.what());
            return std::nullopt;
        }
    };

    const SimpleMeasures simple = compute_simple(dataset);
    mf.n_examples = simple.n_examples;
    mf.num_attributes = simple.num_attributes;
    mf.prop_symbolic = simple.prop_symbolic;
    mf.prop_missing = simple.prop_missing;
    mf.prop_outlier_attrs = simple.prop_outlier_attrs;
    mf.class_entropy = simple.class_entropy;
    mf.t2 = measure("T2", [&] { return points_per_dimension(dataset); });

    std::optional<OverlapMeasures> overlap;
    try {
        overlap = compute_overlap(dataset);
        mf.excluded_attributes = overlap->excluded_attributes;
        for (std::size_t a : mf.excluded_attributes) {
            mf.notes.push_back("attribute '" + dataset.attribute(a).name + "' excluded from F1-F4");
        }
    } catch (const DataError& e) {
        mf.notes.push_back(std::string("overlap: ") + e.what());
    }
    mf.f1 = measure("F1", [&] { return overlap ? overlap->f1 : std::nullopt; });
    mf.f2 = measure("F2", [&] { return overlap ? overlap->f2 : std::nullopt; });
    mf.f3 = measure("F3", [&] { return overlap ? overlap->f3 : std::nullopt; });
    mf.f4 = measure("F4", [&] { return overlap ? overlap->f4 : std::nullopt; });

    const bool two_classes = present_classes(dataset).size() >= 2;
    // Shared inputs are computed once; a failure is replayed by every measure that needs them.
    std::vector<LinearModel> models;
    std::optional<std::string> models_failure;
    std::optional<Dataset> synthetic;
    std::optional<std::string> synthetic_failure;
    if (two_classes) {
        try {
            models = one_vs_rest_models(dataset, linear);
        } catch (const DataError& e) {
            models_failure = e.what();
        }
        try {
            synthetic = interpolate_instances(dataset, dataset.num_instances(), seed);
        } catch (const DataError& e) {
            synthetic_failure = e.what();
        }
    }
    auto need_classes = [&] {
        if (!two_classes) throw DataError("at least two classes must be present");
    };
    auto need_models = [&] {
        need_classes();
        if (models_failure) throw DataError(*models_failure);
    };
    auto need_synthetic = [&] {
        need_classes();
        if (synthetic_failure) throw DataError(*synthetic_failure);
    };
    const DistanceMatrix distances(dataset);

    mf.l1 = measure("L1", [&]() -> std::optional<double> {
        need_models();
        return mean_error_distance(models, dataset);
    });
    mf.l2 = measure("L2", [&]() -> std::optional<double> {
        need_models();
        return mean_training_error(models, dataset);
    });
    mf.n1 = measure("N1", [&]() -> std::optional<double> {
        need_classes();
        return boundary_fraction(dataset, distances);
    });
    mf.n2 = measure("N2", [&]() -> std::optional<double> {
        need_classes();
        return intra_inter_ratio(dataset, distances);
    });
    mf.n3 = measure("N3", [&]() -> std::optional<double> {
        need_classes();
        return loo_1nn_error(dataset, distances);
    });
    mf.l3 = measure("L3", [&]() -> std::optional<double> {
        need_models();
        need_synthetic();
        return mean_training_error(models, *synthetic);
    });
    mf.n4 = measure("N4", [&]() -> std::optional<double> {
        need_synthetic();
        return nn_error_on(dataset, *synthetic);
    });
    mf.t1 = measure("T1", [&]() -> std::optional<double> {
        need_classes();
        return static_cast<double>(covering_sphere_count(dataset, distances)) /
               static_cast<double>(dataset.num_instances());
    });

    mf.lm_lda = measure("lmLDA", [&]() -> std::optional<double> {
        need_classes();
        return train_lda(dataset).cv_accuracy;
    });
    mf.lm_1nn = measure("lm1NN", [&]() -> std::optional<double> {
        need_classes();
        return 1.0 - loo_1nn_error(dataset, distances);
    });
    const std::pair<const char*, StumpMode> stumps[] = {{"lmStumpBest", StumpMode::best},
                                                        {"lmStumpRandom", StumpMode::random},
                                                        {"lmStumpWorst", StumpMode::worst},
                                                        {"lmStumpAvg", StumpMode::average}};
    std::optional<double>* slots[] = {&mf.lm_stump_best, &mf.lm_stump_random, &mf.lm_stump_worst, &mf.lm_stump_avg};
    for (std::size_t k = 0; k < 4; ++k) {
        *slots[k] = measure(stumps[k].first, [&]() -> std::optional<double> {
            need_classes();
            return train_stump(dataset, stumps[k].second).cv_accuracy;
        });
    }
    return mf;
}

} // namespace metarepo
