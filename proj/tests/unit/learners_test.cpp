#include "assertions.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include "metarepo/class_conditional.hpp"
#include "metarepo/cross_validation.hpp"
#include "metarepo/distance.hpp"
#include "metarepo/error.hpp"
#include "metarepo/lda.hpp"
#include "metarepo/linear.hpp"
#include "metarepo/stump.hpp"
#include "metarepo/tree.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

namespace metarepo {
namespace {

using testing::line_dataset;
using testing::numeric_dataset;
using testing::random_dataset;
using testing::thrown_message;

testing::GeneratorOptions messy() {
    testing::GeneratorOptions o;
    o.missing_rate = 0.1;
    return o;
}

// ---- distance ----

TEST(DistanceMetric, SymmetricBoundedAndZeroOnSelf) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Dataset ds = random_dataset(seed, messy());
        const DistanceMetric metric(ds);
        const double bound = std::sqrt(static_cast<double>(ds.num_features()));
        for (std::size_t i = 0; i < ds.num_instances(); ++i) {
            const Row& a = ds.row(i);
            const bool observed = std::none_of(a.begin(), a.end(), [](const Value& v) { return v.is_missing(); });
            if (observed) EXPECT_EQ(metric(a, a), 0.0);
            for (std::size_t j = 0; j < ds.num_instances(); ++j) {
                const double d = metric(a, ds.row(j));
                EXPECT_EQ(d, metric(ds.row(j), a));
                EXPECT_GE(d, 0.0);
                EXPECT_LE(d, bound);
            }
        }
        EXPECT_EQ(metric.max_distance(), bound);
    }
}

TEST(DistanceMetric, MatchesDefinition) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Dataset ds = random_dataset(seed, messy());
        const DistanceMatrix m(ds);
        for (std::size_t i = 0; i < ds.num_instances(); ++i) {
            for (std::size_t j = 0; j < ds.num_instances(); ++j) {
                if (i != j) EXPECT_NEAR(m(i, j), testing::oracle_distance(ds, i, j), 1e-15);
            }
        }
    }
}

TEST(DistanceMetric, PerAttributeRules) {
    std::vector<AttributeSpec> attrs{AttributeSpec::numeric("x"), AttributeSpec::nominal("s", {"a", "b"}),
                                     AttributeSpec::numeric("flat"), AttributeSpec::nominal("class", {"p", "q"})};
    const Dataset ds("d", attrs, 3,
                     {{Value::numeric(0), Value::nominal(0), Value::numeric(5), Value::nominal(0)},
                      {Value::numeric(4), Value::nominal(1), Value::numeric(5), Value::nominal(1)},
                      {Value::missing(), Value::nominal(0), Value::numeric(5), Value::nominal(1)}});
    const DistanceMetric metric(ds);
    EXPECT_DOUBLE_EQ(metric(ds.row(0), ds.row(1)), std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(metric(ds.row(0), ds.row(2)), 1.0);
    Row outside = ds.row(1);
    outside[0] = Value::numeric(100.0);
    EXPECT_DOUBLE_EQ(metric(ds.row(0), outside), std::sqrt(2.0));
}

TEST(LooOneNn, SeparatedClusters) {
    EXPECT_EQ(loo_1nn_error(line_dataset({0, 1, 10, 11}, {0, 0, 1, 1}, 2), DistanceMetric(line_dataset({0, 1, 10, 11}, {0, 0, 1, 1}, 2))), 0.0);
}

TEST(LooOneNn, AlternatingClasses) {
    const Dataset ds = line_dataset({0, 1, 2, 3}, {0, 1, 0, 1}, 2);
    EXPECT_EQ(loo_1nn_error(ds, DistanceMetric(ds)), 1.0);
}

TEST(LooOneNn, MatchesBruteForce) {
    testing::GeneratorOptions o;
    o.min_instances = 30;
    o.max_instances = 30;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Dataset ds = random_dataset(100 + seed, o);
        EXPECT_EQ(loo_1nn_error(ds, DistanceMetric(ds)), testing::oracle_loo_1nn_error(ds)) << seed;
        EXPECT_EQ(loo_1nn_error(ds, DistanceMatrix(ds)), testing::oracle_loo_1nn_error(ds)) << seed;
    }
}

TEST(LooOneNn, NeedsTwoInstances) {
    const Dataset ds = line_dataset({0}, {0}, 2);
    EXPECT_THROW(loo_1nn_error(ds, DistanceMetric(ds)), DataError);
}

TEST(NearestNeighbors, OrderedByDistanceThenIndex) {
    const Dataset ds = line_dataset({0, 1, 1, 2, 3}, {0, 0, 1, 1, 0}, 2);
    const DistanceMatrix m(ds);
    EXPECT_EQ(nearest_neighbors(m, 0, 3), (std::vector<std::size_t>{1, 2, 3}));
    EXPECT_EQ(nearest_neighbors(m, 3, 4), (std::vector<std::size_t>{1, 2, 4, 0}));
}

// ---- linear ----

Dataset separable() {
    return line_dataset({0, 1, 2, 3, 7, 8, 9, 10}, {0, 0, 0, 0, 1, 1, 1, 1}, 2);
}

TEST(Linear, SeparatesSeparableData) {
    const LinearConfig config{5000, 0.1, 0};
    const LinearModel model = train_linear(separable(), 1, config);
    EXPECT_EQ(linear_training_error(model, separable()), 0.0);
    EXPECT_EQ(linear_error_distance(model, separable()), 0.0);
}

TEST(Linear, IdenticalRowsWithOppositeLabels) {
    const Dataset ds = line_dataset({1, 1}, {0, 1}, 2);
    const LinearModel model = train_linear(ds, 1);
    EXPECT_GE(linear_training_error(model, ds), 0.5);
}

TEST(Linear, Deterministic) {
    const Dataset ds = random_dataset(7, messy());
    const LinearModel a = train_linear(ds, ds.label(0), {500, 0.01, 42});
    const LinearModel b = train_linear(ds, ds.label(0), {500, 0.01, 42});
    EXPECT_TRUE(std::equal(a.weights().begin(), a.weights().end(), b.weights().begin(), b.weights().end()));
    EXPECT_EQ(a.bias(), b.bias());
}

TEST(Linear, SingleSideIsAnError) {
    EXPECT_THROW(train_linear(line_dataset({0, 1}, {0, 0}, 2), 0), DataError);
}

Dataset ten_points() {
    // x = 0 is labelled positive but lies on the negative side of f(x) = x/9 - 0.5.
    return line_dataset({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, {1, 0, 0, 0, 0, 1, 1, 1, 1, 1}, 2);
}

TEST(LinearErrorDistance, HandComputed) {
    const Dataset ds = ten_points();
    const LinearModel model(FeatureEncoder(ds), {1.0}, -0.5, 1);
    EXPECT_NEAR(linear_training_error(model, ds), 0.1, 1e-15);
    EXPECT_NEAR(linear_error_distance(model, ds), 0.05, 1e-12);
}

TEST(LinearErrorDistance, ScaleInvariant) {
    const Dataset ds = ten_points();
    const double base = linear_error_distance(LinearModel(FeatureEncoder(ds), {1.0}, -0.5, 1), ds);
    for (double c : {0.01, 2.0, 37.5}) {
        EXPECT_NEAR(linear_error_distance(LinearModel(FeatureEncoder(ds), {c}, -0.5 * c, 1), ds), base, 1e-12);
    }
}

TEST(LinearErrorDistance, ZeroWeightsAreDegenerate) {
    const Dataset ds = ten_points();
    EXPECT_EQ(thrown_message<DataError>([&] { linear_error_distance(LinearModel(FeatureEncoder(ds), {0.0}, 1.0, 1), ds); }),
              "degenerate model");
}

// ---- LDA ----

Dataset blobs(std::uint64_t seed, bool duplicate_column) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<std::vector<double>> x;
    std::vector<std::size_t> y;
    for (int i = 0; i < 40; ++i) {
        const std::size_t c = static_cast<std::size_t>(i % 2);
        const double a = noise(gen) + (c ? 10.0 : 0.0);
        const double b = noise(gen);
        x.push_back(duplicate_column ? std::vector<double>{a, b, a} : std::vector<double>{a, b});
        y.push_back(c);
    }
    return numeric_dataset(x, y, 2);
}

TEST(Lda, SeparatedBlobs) {
    EXPECT_EQ(train_lda(blobs(1, false)).cv_accuracy, 1.0);
}

TEST(Lda, DuplicateColumnChangesNoPrediction) {
    const Dataset plain = blobs(2, false);
    const Dataset doubled = blobs(2, true);
    const LdaClassifier a = fit_lda(plain);
    const LdaClassifier b = fit_lda(doubled);
    for (std::size_t i = 0; i < plain.num_instances(); ++i) {
        EXPECT_EQ(a.predict(plain.row(i)), b.predict(doubled.row(i))) << i;
    }
}

TEST(Lda, Deterministic) {
    const Dataset ds = random_dataset(5);
    EXPECT_EQ(train_lda(ds).cv_accuracy, train_lda(ds).cv_accuracy);
}

// ---- stumps ----

// Attribute 0 predicts the class exactly; attribute 1 is unrelated to it.
Dataset perfect_and_noise() {
    std::vector<std::vector<double>> x;
    std::vector<std::size_t> y;
    std::mt19937_64 gen(9);
    for (int i = 0; i < 40; ++i) {
        const std::size_t c = static_cast<std::size_t>(i % 2);
        x.push_back({static_cast<double>(c) * 5.0 + static_cast<double>(i % 5) * 0.1,
                     static_cast<double>(gen() % 1000)});
        y.push_back(c);
    }
    return numeric_dataset(x, y, 2);
}

TEST(Stump, BestOnAPerfectAttribute) {
    const StumpResult r = train_stump(perfect_and_noise(), StumpMode::best);
    EXPECT_EQ(r.attributes, std::vector<std::size_t>{0});
    EXPECT_EQ(r.cv_accuracy, 1.0);
}

TEST(Stump, WorstPicksTheNoiseAttribute) {
    EXPECT_EQ(train_stump(perfect_and_noise(), StumpMode::worst).attributes, std::vector<std::size_t>{1});
}

TEST(Stump, AverageIsTheMeanOfPerAttributeAccuracies) {
    const Dataset ds = perfect_and_noise();
    double sum = 0.0;
    for (std::size_t a : {0u, 1u}) {
        sum += cross_validated_accuracy(ds, [a](const Dataset& train) -> Predictor {
            return [s = fit_stump(train, a)](const Row& row) { return s.predict(row); };
        });
    }
    EXPECT_NEAR(train_stump(ds, StumpMode::average).cv_accuracy, sum / 2.0, 1e-15);
}

TEST(Stump, RandomIsSeeded) {
    const Dataset ds = random_dataset(4);
    EXPECT_EQ(train_stump(ds, StumpMode::random, 3).attributes, train_stump(ds, StumpMode::random, 3).attributes);
}

TEST(Stump, AllMissingAttributesAreExcluded) {
    std::vector<AttributeSpec> attrs{AttributeSpec::numeric("gone"), AttributeSpec::nominal("class", {"a", "b"})};
    const Dataset ds("d", attrs, 1,
                     {{Value::missing(), Value::nominal(0)}, {Value::missing(), Value::nominal(1)}});
    EXPECT_TRUE(eligible_stump_attributes(ds).empty());
    EXPECT_THROW(train_stump(ds, StumpMode::best), DataError);
}

double entropy_of(const std::map<std::size_t, double>& counts) {
    double total = 0.0;
    for (const auto& [c, n] : counts) total += n;
    double h = 0.0;
    for (const auto& [c, n] : counts) {
        if (n > 0) h -= n / total * std::log2(n / total);
    }
    return h;
}

// Gain of the best split by direct enumeration of partitions.
double oracle_gain(const Dataset& ds, std::size_t a) {
    const double n = static_cast<double>(ds.num_instances());
    std::map<std::size_t, double> all;
    for (std::size_t i = 0; i < ds.num_instances(); ++i) all[ds.label(i)] += 1.0;
    auto children = [&](auto&& part_of) {
        std::map<long, std::map<std::size_t, double>> parts;
        for (std::size_t i = 0; i < ds.num_instances(); ++i) parts[part_of(ds.row(i)[a])][ds.label(i)] += 1.0;
        double h = 0.0;
        for (const auto& [p, counts] : parts) {
            double size = 0.0;
            for (const auto& [c, k] : counts) size += k;
            h += size / n * entropy_of(counts);
        }
        return h;
    };
    if (ds.attribute(a).is_nominal()) {
        return entropy_of(all) - children([](const Value& v) { return v.is_missing() ? -1L : static_cast<long>(v.category()); });
    }
    std::set<double> values;
    for (const auto& row : ds.rows()) {
        if (row[a].is_numeric()) values.insert(row[a].number());
    }
    double best = entropy_of(all) - children([](const Value& v) { return v.is_missing() ? -1L : 0L; });
    bool first = true;
    for (auto it = values.begin(); it != values.end() && std::next(it) != values.end(); ++it) {
        const double t = 0.5 * (*it + *std::next(it));
        const double g = entropy_of(all) - children([t](const Value& v) { return v.is_missing() ? -1L : (v.number() <= t ? 0L : 1L); });
        if (first || g > best) best = g;
        first = false;
    }
    return best;
}

TEST(Stump, BestAttainsTheMaximumGain) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Dataset ds = random_dataset(seed, messy());
        double max_gain = -1.0;
        double min_gain = 1e9;
        for (std::size_t a : eligible_stump_attributes(ds)) {
            const double g = oracle_gain(ds, a);
            EXPECT_NEAR(information_gain(ds, a), g, 1e-12) << seed;
            max_gain = std::max(max_gain, g);
            min_gain = std::min(min_gain, g);
        }
        EXPECT_NEAR(oracle_gain(ds, select_stump_attribute(ds, StumpMode::best)), max_gain, 1e-12) << seed;
        EXPECT_NEAR(oracle_gain(ds, select_stump_attribute(ds, StumpMode::worst)), min_gain, 1e-12) << seed;
    }
}

// ---- tree ----

TEST(Tree, PureDataIsOneLeaf) {
    const TreeModel t = train_tree(line_dataset({0, 1, 2, 3}, {1, 1, 1, 1}, 2), false);
    EXPECT_EQ(t.leaves().size(), 1u);
    EXPECT_EQ(t.depth(), 0);
    EXPECT_EQ(t.predict(Row{Value::numeric(9), Value::nominal(0)}), 1u);
}

// Class 1 iff x > 5 and y > 5: needs two levels of splits.
Dataset quadrant() {
    std::vector<std::vector<double>> x;
    std::vector<std::size_t> y;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            x.push_back({static_cast<double>(i) + 0.5, static_cast<double>(j) + 0.5});
            y.push_back(i > 5 && j > 5 ? 1 : 0);
        }
    }
    return numeric_dataset(x, y, 2);
}

TEST(Tree, LearnsAQuadrant) {
    const Dataset ds = quadrant();
    const TreeModel t = train_tree(ds, false);
    EXPECT_EQ(t.depth(), 2);
    EXPECT_EQ(t.leaves().size(), 3u);
    for (std::size_t i = 0; i < ds.num_instances(); ++i) EXPECT_EQ(t.predict(ds.row(i)), ds.label(i));
}

TEST(Tree, XorWithMinimumLeafTwo) {
    std::vector<AttributeSpec> attrs{AttributeSpec::nominal("a", {"0", "1"}), AttributeSpec::nominal("b", {"0", "1"}),
                                     AttributeSpec::nominal("class", {"n", "y"})};
    std::vector<Row> rows;
    for (std::size_t a : {0u, 1u}) {
        for (std::size_t b : {0u, 1u}) rows.push_back({Value::nominal(a), Value::nominal(b), Value::nominal(a ^ b)});
    }
    const TreeModel t = train_tree(Dataset("xor", attrs, 2, rows), false);
    EXPECT_LE(t.depth(), 2);
    for (std::size_t leaf : t.leaves()) EXPECT_GE(t.node(leaf).covered(), 2u);
}

TEST(Tree, LeavesPartitionTheTrainingData) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Dataset ds = random_dataset(seed, messy());
        for (bool pruned : {false, true}) {
            const TreeModel t = train_tree(ds, pruned);
            std::size_t covered = 0;
            for (std::size_t leaf : t.leaves()) covered += t.node(leaf).covered();
            EXPECT_EQ(covered, ds.num_instances()) << seed;
            EXPECT_EQ(t.node(0).covered(), ds.num_instances());
        }
    }
}

TEST(Tree, PruningNeverDeepens) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Dataset ds = random_dataset(seed, messy());
        const TreeModel full = train_tree(ds, false);
        const TreeModel pruned = train_tree(ds, true);
        EXPECT_LE(pruned.depth(), full.depth()) << seed;
        EXPECT_LE(pruned.leaves().size(), full.leaves().size()) << seed;
        EXPECT_TRUE(pruned.pruned());
        EXPECT_EQ(train_tree(ds, true).nodes().size(), pruned.nodes().size());
    }
}

TEST(Tree, PessimisticBoundWithNoErrors) {
    // With no observed errors the upper bound is 1 - cf^(1/n).
    for (double n : {1.0, 6.0, 20.0}) {
        EXPECT_NEAR(pessimistic_extra_errors(n, 0.0, 0.25), n * (1.0 - std::pow(0.25, 1.0 / n)), 1e-9) << n;
    }
    EXPECT_GT(pessimistic_extra_errors(20.0, 3.0, 0.25), 0.0);
    EXPECT_LT(pessimistic_extra_errors(20.0, 3.0, 0.25), pessimistic_extra_errors(20.0, 3.0, 0.1));
}

// ---- cross-validation ----

TEST(StratifiedFolds, BalancedAndSeeded) {
    const Dataset ds = random_dataset(12);
    const auto folds = stratified_folds(ds, 10, 3);
    EXPECT_EQ(folds, stratified_folds(ds, 10, 3));
    const std::size_t k = std::min<std::size_t>(10, ds.num_instances());
    std::vector<std::size_t> size(k, 0);
    for (int f : folds) ++size.at(static_cast<std::size_t>(f));
    EXPECT_LE(*std::max_element(size.begin(), size.end()) - *std::min_element(size.begin(), size.end()), 1u);
}

// ---- class conditionals ----

Dataset laplace_fixture() {
    std::vector<AttributeSpec> attrs{AttributeSpec::nominal("s", {"v", "w"}), AttributeSpec::nominal("class", {"A", "B"})};
    return Dataset("laplace", attrs, 1,
                   {{Value::nominal(0), Value::nominal(0)},
                    {Value::nominal(0), Value::nominal(0)},
                    {Value::nominal(0), Value::nominal(0)},
                    {Value::nominal(1), Value::nominal(1)}});
}

TEST(ClassConditionals, LaplaceSmoothing) {
    const Dataset ds = laplace_fixture();
    const ClassConditionalModel model = fit_class_conditionals(ds);
    EXPECT_NEAR(model.conditional(0, 0, Value::nominal(0)), 0.8, 1e-15);
    EXPECT_NEAR(model.conditional(0, 0, Value::nominal(1)), 0.2, 1e-15);
    EXPECT_EQ(model.conditional(0, 0, Value::missing()), 1.0);
}

TEST(ClassConditionals, NominalConditionalsSumToOne) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Dataset ds = random_dataset(seed, messy());
        const ClassConditionalModel model = fit_class_conditionals(ds);
        for (std::size_t c = 0; c < ds.num_classes(); ++c) {
            for (std::size_t a : ds.feature_indices()) {
                if (!ds.attribute(a).is_nominal()) continue;
                double sum = 0.0;
                for (std::size_t v = 0; v < ds.attribute(a).categories.size(); ++v) {
                    const double p = model.conditional(c, a, Value::nominal(v));
                    EXPECT_GT(p, 0.0);
                    EXPECT_LT(p, 1.0);
                    sum += p;
                }
                EXPECT_NEAR(sum, 1.0, 1e-12);
            }
        }
    }
}

TEST(ClassConditionals, GaussianWithVarianceFloor) {
    const Dataset ds = line_dataset({1, 1, 1, 2, 4}, {0, 0, 0, 1, 1}, 2);
    const ClassConditionalModel model = fit_class_conditionals(ds);
    const double pi = std::acos(-1.0);
    EXPECT_NEAR(model.conditional(1, 0, Value::numeric(3)), 1.0 / std::sqrt(2 * pi), 1e-12);
    EXPECT_NEAR(model.conditional(0, 0, Value::numeric(1)), 1.0 / std::sqrt(2 * pi * kVarianceFloor), 1e-3);
    EXPECT_EQ(model.likelihood(ds.row(0), 0), 1.0);
}

} // namespace
} // namespace metarepo
