#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace metarepo {

enum class AttributeKind : std::uint8_t { numeric, nominal };

struct AttributeSpec {
    std::string name;
    AttributeKind kind = AttributeKind::numeric;
    std::vector<std::string> categories;

    static AttributeSpec numeric(std::string name);
    static AttributeSpec nominal(std::string name, std::vector<std::string> categories);

    bool is_nominal() const noexcept { return kind == AttributeKind::nominal; }
    bool is_numeric() const noexcept { return kind == AttributeKind::numeric; }
    std::optional<std::size_t> category_index(std::string_view token) const;

    bool operator==(const AttributeSpec&) const = default;
};

/// One cell of a dataset row: a real number, a category index, or missing.
class Value {
public:
    constexpr Value() noexcept = default;

    static constexpr Value missing() noexcept { return Value{}; }
    static constexpr Value numeric(double v) noexcept { return Value{Tag::numeric, v, 0}; }
    static constexpr Value nominal(std::size_t category) noexcept { return Value{Tag::nominal, 0.0, category}; }

    constexpr bool is_missing() const noexcept { return tag_ == Tag::missing; }
    constexpr bool is_numeric() const noexcept { return tag_ == Tag::numeric; }
    constexpr bool is_nominal() const noexcept { return tag_ == Tag::nominal; }

    constexpr double number() const noexcept { return number_; }
    constexpr std::size_t category() const noexcept { return category_; }

    constexpr bool operator==(const Value&) const = default;

private:
    enum class Tag : std::uint8_t { missing, numeric, nominal };
    constexpr Value(Tag tag, double number, std::size_t category) noexcept
        : tag_(tag), number_(number), category_(category) {}

    Tag tag_ = Tag::missing;
    double number_ = 0.0;
    std::size_t category_ = 0;
};

using Row = std::vector<Value>;

/// Typed attribute schema plus instance rows; one attribute is the nominal class.
///
/// Construction does not validate. Call validate_dataset() or require_measurable()
/// before handing data to the learners or measures.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::string name, std::vector<AttributeSpec> attributes, std::size_t class_index,
            std::vector<Row> rows);

    const std::string& name() const noexcept { return name_; }
    std::span<const AttributeSpec> attributes() const noexcept { return attributes_; }
    const AttributeSpec& attribute(std::size_t a) const { return attributes_.at(a); }
    std::size_t class_index() const noexcept { return class_index_; }
    const AttributeSpec& class_attribute() const { return attributes_.at(class_index_); }

    std::span<const Row> rows() const noexcept { return rows_; }
    const Row& row(std::size_t i) const { return rows_.at(i); }

    /// N
    std::size_t num_instances() const noexcept { return rows_.size(); }
    /// C, the declared category count of the class attribute.
    std::size_t num_classes() const;
    /// |x|, the non-class attribute count.
    std::size_t num_features() const noexcept { return features_.size(); }
    /// Positions of the non-class attributes, ascending.
    const std::vector<std::size_t>& feature_indices() const noexcept { return features_; }

    std::size_t label(std::size_t i) const { return rows_[i][class_index_].category(); }
    std::vector<std::size_t> labels() const;
    std::vector<std::size_t> class_counts() const;

    Dataset subset(std::span<const std::size_t> indices) const;
    Dataset with_rows(std::vector<Row> rows) const;

    bool operator==(const Dataset&) const = default;

private:
    std::string name_;
    std::vector<AttributeSpec> attributes_;
    std::size_t class_index_ = 0;
    std::vector<Row> rows_;
    std::vector<std::size_t> features_;
};

struct Violation {
    std::optional<std::size_t> row;
    std::optional<std::size_t> attribute;
    std::string message;

    bool operator==(const Violation&) const = default;
};

std::vector<Violation> validate_dataset(const Dataset& dataset);

/// Throws DataError unless the dataset is valid with N >= 1 and C >= 2.
void require_measurable(const Dataset& dataset);

/// Learning algorithm plus hyperparameter setting; renders as `LA_seed`.
struct ExperimentKey {
    std::string toolkit;
    std::string algorithm;
    int hyperparameter_seed = -1;
    std::string hyperparameter_string;

    std::string label() const;
    bool uses_defaults() const noexcept { return hyperparameter_seed == -1; }
    bool same_identity(const ExperimentKey& other) const noexcept;

    bool operator==(const ExperimentKey&) const = default;
};

struct KFold {
    int num_folds = 10;
    bool operator==(const KFold&) const = default;
};
struct PercentSplit {
    int test_percent = 33;
    bool operator==(const PercentSplit&) const = default;
};
struct FixedSplit {
    bool operator==(const FixedSplit&) const = default;
};
using SplitScheme = std::variant<KFold, PercentSplit, FixedSplit>;

/// Per-instance role in one partition. Serialized as `?` (test), 0 (filtered) or the weight.
class Role {
public:
    enum class Kind : std::uint8_t { test, train, filtered };

    static Role test() noexcept { return Role{Kind::test, 0.0}; }
    static Role filtered() noexcept { return Role{Kind::filtered, 0.0}; }
    /// Weight must lie in (0, 1].
    static Role train(double weight = 1.0);
    /// Decodes a serialized cell: `?`, 0, or a weight in (0, 1].
    static Role from_cell(std::string_view cell);

    Kind kind() const noexcept { return kind_; }
    bool is_test() const noexcept { return kind_ == Kind::test; }
    bool is_train() const noexcept { return kind_ == Kind::train; }
    bool is_filtered() const noexcept { return kind_ == Kind::filtered; }
    double weight() const noexcept { return weight_; }

    std::string to_cell() const;

    bool operator==(const Role&) const = default;

private:
    Role(Kind kind, double weight) noexcept : kind_(kind), weight_(weight) {}
    Kind kind_;
    double weight_;
};

/// `toolkit_seed_count_fold`, the identity half of a FoldAssignment.
struct PartitionKey {
    std::string toolkit;
    long long seed = 0;
    int count = 0;
    int fold = 1;

    std::string render() const;
    /// Splits from the right so toolkits may contain underscores.
    static PartitionKey parse(std::string_view text);

    bool operator==(const PartitionKey&) const = default;
};

struct FoldAssignment {
    std::string toolkit;
    long long partition_seed = 0;
    SplitScheme scheme = KFold{};
    int fold_index = 1;
    std::vector<Role> roles;

    PartitionKey partition_key() const;
    std::string key() const { return partition_key().render(); }
    std::vector<std::size_t> test_instances() const;

    bool operator==(const FoldAssignment&) const = default;
};

/// Throws DataError unless each instance is Test in exactly one fold of a complete k-fold set.
void require_kfold_coverage(std::span<const FoldAssignment> folds);

struct PredictionSet {
    ExperimentKey experiment;
    std::string partition;
    /// instance index -> predicted class index, both zero-based.
    std::map<std::size_t, std::size_t> predictions;

    bool operator==(const PredictionSet&) const = default;
};

/// Fraction of correct test predictions, pooled over every fold and run.
double aggregate_accuracy(std::span<const PredictionSet> prediction_sets,
                          std::span<const FoldAssignment> partitions, const Dataset& dataset);

/// Accuracy as a percentage with two decimals, e.g. "96.80".
std::string format_accuracy(double accuracy);

} // namespace metarepo
