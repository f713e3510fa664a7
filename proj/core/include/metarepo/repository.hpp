#pragma once

#include "metarepo/dataset_measures.hpp"
#include "metarepo/document_store.hpp"
#include "metarepo/instance_hardness.hpp"
#include "metarepo/model.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace metarepo {

/// Shared collections; every other collection belongs to one dataset.
inline constexpr std::string_view kTrainingSetsCollection = "training_sets";
inline constexpr std::string_view kHyperparametersCollection = "hyperparameters";

/// Fixed document keys inside a dataset collection.
inline constexpr std::string_view kDatasetDocument = "dataset";
inline constexpr std::string_view kMetaFeaturesDocument = "meta_features";
inline constexpr std::string_view kInstanceMetaFeaturesDocument = "instance_meta_features";

enum class MetaFeatureLevel { dataset, instance };

/// Everything one experiment document holds: the predictions of one
/// experiment over the folds of one partition set.
///
/// Stored under `<LA_seed>/<toolkit>_<seed>_<count>` with the body
/// {"experiment": {...}, "partitions": "<toolkit>_<seed>_<count>", "folds": {fold: {instance: class}}}
/// where folds, instances and classes are 1-based.
struct ExperimentRecord {
    ExperimentKey experiment;
    /// `toolkit_seed_count`, the partition key without its fold.
    std::string partition_set;
    long long partition_seed = 0;
    /// fold -> (zero-based instance -> zero-based class)
    std::map<int, std::map<std::size_t, std::size_t>> folds;

    std::string document_key() const;
    std::vector<PredictionSet> prediction_sets() const;
};

Json experiment_json(const ExperimentKey& key);
ExperimentKey experiment_from_json(const Json& body);
Json fold_assignment_json(const FoldAssignment& assignment);
FoldAssignment fold_assignment_from_json(const Json& body);

/// Dataset-level document body: measure name -> value, null when undefined.
Json dataset_metafeatures_json(const DatasetMetaFeatures& features,
                               const std::optional<std::array<double, 8>>& hardness_means = std::nullopt);
/// Instance-level document body: 1-based instance number -> {measure: value}.
Json instance_metafeatures_json(std::span<const InstanceHardnessVector> vectors);

/// The stored schema on top of a DocumentStore. Document ids are `collection/key`.
class ResultsRepository {
public:
    explicit ResultsRepository(DocumentStore& store) : store_(store) {}

    DocumentStore& store() noexcept { return store_; }
    const DocumentStore& store() const noexcept { return store_; }

    /// Stores the canonical ARFF form under the dataset's name.
    std::string register_dataset(const Dataset& dataset, bool force = false);
    Dataset load_dataset(const std::string& name) const;
    bool has_dataset(const std::string& name) const;
    std::vector<std::string> datasets() const;

    std::string put_fold_assignment(const std::string& dataset, const FoldAssignment& assignment, bool force = false);
    std::optional<FoldAssignment> find_fold_assignment(const std::string& dataset, const std::string& partition_key) const;
    /// Ordered by toolkit, then numeric seed, fold count and fold.
    std::vector<FoldAssignment> fold_assignments(const std::string& dataset) const;

    /// Toolkit, verbatim string and the normalized parameter map, keyed `LA_seed`.
    std::string put_algorithm(const ExperimentKey& key, bool force = false);
    std::vector<ExperimentKey> algorithms() const;

    /// Adds one fold's predictions to the experiment document. The partition
    /// must already be stored. A fold already present with other predictions
    /// is a conflict unless `force`.
    std::string put_experiment(const std::string& dataset, const ExperimentKey& key, const FoldAssignment& partition,
                               const PredictionSet& predictions, bool force = false);

    /// Folds, algorithm and predictions of one run in a single all-or-nothing write.
    /// The folds may span several partition sets; each becomes its own experiment document.
    void put_run(const std::string& dataset, const ExperimentKey& key, std::span<const FoldAssignment> folds,
                 std::span<const PredictionSet> predictions, bool force = false);

    std::vector<ExperimentRecord> experiments(const std::string& dataset) const;

    std::string put_metafeatures(const std::string& dataset, MetaFeatureLevel level, const Json& body,
                                 bool force = false);
    std::optional<Json> metafeatures(const std::string& dataset, MetaFeatureLevel level) const;

    /// Pooled accuracy of every stored run of `key` on the dataset.
    std::optional<double> accuracy(const std::string& dataset, const ExperimentKey& key) const;

private:
    DocumentStore& store_;
};

} // namespace metarepo
