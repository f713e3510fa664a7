#pragma once

#include "metarepo/model.hpp"
#include "metarepo/repository.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace metarepo {

/// One toolkit run over a partition set.
///
/// Text form, `\n` line ends:
///   line 1  toolkit<TAB>algorithm<TAB>hyperparameter seed<TAB>hyperparameter string
///   line 2  partition key of fold 1, e.g. weka_1_10_1, optionally <TAB>kfold|percent|fixed
///   body    fold,instance,role[,predicted class label]
/// Folds and instances are 1-based. A role is `?` (test), 0 (filtered) or a
/// training weight in (0, 1]. Only test instances may carry a prediction.
/// Without a scheme token, toolkit_0_0_1 is a fixed split and anything else k-fold.
struct RunFile {
    ExperimentKey experiment;
    std::vector<FoldAssignment> folds;
    std::vector<PredictionSet> predictions;
};

/// Validates fold coverage and prediction/role consistency against the dataset.
RunFile parse_run_file(std::string_view text, const Dataset& dataset);

std::string write_run_file(const RunFile& run, const Dataset& dataset);

/// Parses, then stores every fold, the algorithm and the predictions in one write.
RunFile ingest_run_file(ResultsRepository& repository, const std::string& dataset, std::string_view text,
                        bool force = false);

} // namespace metarepo
