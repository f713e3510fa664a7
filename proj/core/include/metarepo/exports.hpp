#pragma once

#include "metarepo/repository.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace metarepo {

/// Orders experiments by algorithm, then numeric hyperparameter seed, then toolkit.
bool natural_less(const ExperimentKey& a, const ExperimentKey& b);

/// Dataset-level measure names in export order: the dataset measures, the
/// hardness means, then any other stored names alphabetically.
std::vector<std::string> metafeature_column_order(const std::vector<std::string>& stored_names);

/// LA_seed, Toolkit, Hyperparameters; one row per stored algorithm document.
std::string export_algorithm_table(const ResultsRepository& repository);

/// toolkit followed by the shared parameter names; `?` where a toolkit lacks one.
std::string export_hyperparameter_mapping(std::string_view algorithm);

/// One row per stored fold, one column per instance: `?` test, 0 filtered, else the weight.
std::string export_fold_table(const ResultsRepository& repository, const std::string& dataset);

/// #, hardness measures, act, then one prediction column per experiment and
/// partition seed named `LA_seed/partitionSeed`. Classes are 1-based.
std::string export_instance_level(const ResultsRepository& repository, const std::string& dataset);

/// One row per dataset with stored meta-features: the measures, then the pooled
/// accuracy of every stored experiment as a percentage with two decimals.
std::string export_dataset_level(const ResultsRepository& repository);

/// One row per (dataset, toolkit, hyperparameter setting) of an algorithm:
/// measures, toolkit, shared parameter values and accuracy.
std::string export_per_algorithm(const ResultsRepository& repository, std::string_view algorithm);

} // namespace metarepo
