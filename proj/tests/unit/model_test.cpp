#include "assertions.hpp"
#include "generators.hpp"

#include "metarepo/error.hpp"
#include "metarepo/model.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

namespace metarepo {
namespace {

using testing::line_dataset;
using testing::thrown_message;

Dataset four_rows() {
    return line_dataset({0.0, 1.0, 2.0, 3.0}, {0, 0, 1, 1}, 2);
}

TEST(ValidateDataset, WellFormedHasNoViolations) {
    const Dataset ds = testing::numeric_dataset({{0, 1}, {1, 2}, {2, 3}, {3, 4}}, {0, 1, 0, 1}, 2);
    EXPECT_TRUE(validate_dataset(ds).empty());
}

TEST(ValidateDataset, MissingClassNamesTheRow) {
    Dataset ds = four_rows();
    std::vector<Row> rows(ds.rows().begin(), ds.rows().end());
    rows[2][1] = Value::missing();
    const auto violations = validate_dataset(ds.with_rows(rows));
    ASSERT_EQ(violations.size(), 1u);
    EXPECT_EQ(violations[0].row, 2u);
}

TEST(ValidateDataset, CategoryOutOfRangeNamesRowAndAttribute) {
    Dataset ds = four_rows();
    std::vector<Row> rows(ds.rows().begin(), ds.rows().end());
    rows[3][1] = Value::nominal(7);
    const auto violations = validate_dataset(ds.with_rows(rows));
    ASSERT_EQ(violations.size(), 1u);
    EXPECT_EQ(violations[0].row, 3u);
    EXPECT_EQ(violations[0].attribute, 1u);
}

TEST(ValidateDataset, DuplicateNamesAndCategories) {
    std::vector<AttributeSpec> attrs{AttributeSpec::numeric("a"), AttributeSpec::numeric("a"),
                                     AttributeSpec::nominal("class", {"x", "x"})};
    const Dataset ds("d", attrs, 2, {{Value::numeric(1), Value::numeric(2), Value::nominal(0)}});
    EXPECT_EQ(validate_dataset(ds).size(), 2u);
}

TEST(RequireMeasurable, RejectsSingleClassDeclaration) {
    std::vector<AttributeSpec> attrs{AttributeSpec::numeric("a"), AttributeSpec::nominal("class", {"only"})};
    const Dataset ds("d", attrs, 1, {{Value::numeric(1), Value::nominal(0)}});
    EXPECT_THROW(require_measurable(ds), DataError);
}

TEST(ExperimentKey, RendersLabel) {
    EXPECT_EQ((ExperimentKey{"weka", "BP", 1, ""}.label()), "BP_1");
    EXPECT_EQ((ExperimentKey{"weka", "C4.5", -1, ""}.label()), "C4.5_-1");
    EXPECT_TRUE((ExperimentKey{"weka", "C4.5", -1, ""}.uses_defaults()));
}

TEST(Role, CellEncoding) {
    EXPECT_TRUE(Role::from_cell("?").is_test());
    EXPECT_TRUE(Role::from_cell("0").is_filtered());
    EXPECT_EQ(Role::from_cell("1"), Role::train(1.0));
    EXPECT_EQ(Role::from_cell("0.74").weight(), 0.74);
    EXPECT_EQ(Role::train(0.74).to_cell(), "0.74");
    EXPECT_EQ(Role::filtered().to_cell(), "0");
    EXPECT_EQ(Role::test().to_cell(), "?");
    EXPECT_EQ(Role::train().to_cell(), "1");
    EXPECT_THROW(Role::train(0.0), DataError);
    EXPECT_THROW(Role::train(1.5), DataError);
    EXPECT_THROW(Role::from_cell("-0.5"), DataError);
    EXPECT_THROW(Role::from_cell("x"), DataError);
}

TEST(Role, WeightsRoundTripThroughCells) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> weight(1e-6, 1.0);
    for (int t = 0; t < 500; ++t) {
        const Role r = Role::train(weight(gen));
        EXPECT_EQ(Role::from_cell(r.to_cell()), r);
    }
}

TEST(PartitionKey, SchemesRender) {
    FoldAssignment f{"weka", 1, KFold{10}, 1, {}};
    EXPECT_EQ(f.key(), "weka_1_10_1");
    f.scheme = FixedSplit{};
    f.partition_seed = 9;
    EXPECT_EQ(f.key(), "weka_0_0_1");
    f.scheme = PercentSplit{33};
    EXPECT_EQ(f.key(), "weka_9_33_1");
}

TEST(PartitionKey, ParseRendersBack) {
    std::mt19937_64 gen(11);
    const std::vector<std::string> toolkits{"weka", "waffles", "my_toolkit", "a_b_c"};
    for (int t = 0; t < 300; ++t) {
        PartitionKey key{toolkits[gen() % toolkits.size()], static_cast<long long>(gen() % 1000),
                         static_cast<int>(gen() % 20), static_cast<int>(gen() % 20) + 1};
        const std::string text = key.render();
        EXPECT_EQ(PartitionKey::parse(text), key);
        EXPECT_EQ(PartitionKey::parse(text).render(), text);
    }
    EXPECT_THROW(PartitionKey::parse("weka_1_10"), DataError);
    EXPECT_THROW(PartitionKey::parse("weka_01_10_1"), DataError);
    EXPECT_THROW(PartitionKey::parse("weka_1_10_0"), DataError);
}

std::vector<FoldAssignment> kfold(std::size_t n, int k) {
    std::vector<FoldAssignment> out;
    for (int f = 1; f <= k; ++f) {
        FoldAssignment a{"weka", 1, KFold{k}, f, {}};
        for (std::size_t i = 0; i < n; ++i) {
            a.roles.push_back(static_cast<int>(i % static_cast<std::size_t>(k)) + 1 == f ? Role::test()
                                                                                          : Role::train());
        }
        out.push_back(std::move(a));
    }
    return out;
}

TEST(KFoldCoverage, EachInstanceTestedOnce) {
    const auto folds = kfold(150, 10);
    EXPECT_NO_THROW(require_kfold_coverage(folds));
    std::vector<int> count(150, 0);
    for (const auto& f : folds) {
        for (auto i : f.test_instances()) ++count[i];
    }
    EXPECT_TRUE(std::all_of(count.begin(), count.end(), [](int c) { return c == 1; }));
}

TEST(KFoldCoverage, RejectsGapsAndOverlaps) {
    auto folds = kfold(20, 4);
    folds[0].roles[0] = Role::train();
    EXPECT_THROW(require_kfold_coverage(folds), DataError);
    folds = kfold(20, 4);
    folds[1].roles[0] = Role::test();
    EXPECT_THROW(require_kfold_coverage(folds), DataError);
    folds = kfold(20, 4);
    folds.pop_back();
    EXPECT_THROW(require_kfold_coverage(folds), DataError);
}

struct ScoredRun {
    Dataset data;
    std::vector<FoldAssignment> folds;
    std::vector<PredictionSet> sets;
};

ScoredRun run_with_errors(std::size_t wrong) {
    std::vector<std::vector<double>> x(150);
    std::vector<std::size_t> y(150);
    for (std::size_t i = 0; i < 150; ++i) {
        x[i] = {static_cast<double>(i)};
        y[i] = i % 3;
    }
    ScoredRun r{testing::numeric_dataset(x, y, 3), kfold(150, 10), {}};
    const ExperimentKey key{"weka", "BP", 1, ""};
    std::size_t budget = wrong;
    for (const auto& f : r.folds) {
        PredictionSet s{key, f.key(), {}};
        for (auto i : f.test_instances()) {
            std::size_t p = y[i];
            if (budget > 0) {
                p = (p + 1) % 3;
                --budget;
            }
            s.predictions[i] = p;
        }
        r.sets.push_back(std::move(s));
    }
    return r;
}

TEST(AggregateAccuracy, AllCorrect) {
    const ScoredRun r = run_with_errors(0);
    EXPECT_EQ(aggregate_accuracy(r.sets, r.folds, r.data), 1.0);
}

TEST(AggregateAccuracy, HandCountedTenFold) {
    const ScoredRun r = run_with_errors(5);
    EXPECT_NEAR(aggregate_accuracy(r.sets, r.folds, r.data), 0.9667, 1e-4);
    EXPECT_NEAR(aggregate_accuracy(r.sets, r.folds, r.data), 145.0 / 150.0, 1e-12);
}

TEST(AggregateAccuracy, PermutationInvariant) {
    ScoredRun r = run_with_errors(17);
    const double base = aggregate_accuracy(r.sets, r.folds, r.data);
    std::mt19937_64 gen(5);
    for (int t = 0; t < 20; ++t) {
        std::shuffle(r.sets.begin(), r.sets.end(), gen);
        std::shuffle(r.folds.begin(), r.folds.end(), gen);
        EXPECT_EQ(aggregate_accuracy(r.sets, r.folds, r.data), base);
    }
}

TEST(AggregateAccuracy, Errors) {
    ScoredRun r = run_with_errors(0);
    EXPECT_EQ(thrown_message<DataError>([&] { aggregate_accuracy({}, r.folds, r.data); }),
              "no predictions to aggregate");
    const std::size_t train_instance = r.folds[0].roles[0].is_test() ? 1 : 0;
    r.sets[0].predictions[train_instance] = 0;
    EXPECT_EQ(thrown_message<DataError>([&] { aggregate_accuracy(r.sets, r.folds, r.data); }),
              "prediction/partition mismatch");
}

TEST(FormatAccuracy, TwoDecimals) {
    EXPECT_EQ(format_accuracy(0.968), "96.80");
    EXPECT_EQ(format_accuracy(1.0), "100.00");
    EXPECT_EQ(format_accuracy(1310.0 / 1350.0), "97.04");
}

} // namespace
} // namespace metarepo
