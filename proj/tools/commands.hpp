#pragma once

#include "metarepo/cross_validation.hpp"
#include "metarepo/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace metarepo::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kConflict = 3 };

/// Learners the `run` command can cross-validate without an external toolkit.
inline constexpr std::string_view kBuiltinLearners[] = {"1nn", "lda", "stump", "tree"};

/// The learner's fixed default settings as a command line, e.g. "-mode best".
std::string builtin_hyperparameters(std::string_view learner);

/// Throws DataError for a name outside kBuiltinLearners.
Trainer builtin_trainer(std::string_view learner);

/// Stratified k-fold partitions and out-of-fold predictions of one built-in
/// learner, one fold set per partition seed. Shaped exactly like an ingested run file.
struct BuiltinRun {
    ExperimentKey experiment;
    std::vector<FoldAssignment> folds;
    std::vector<PredictionSet> predictions;
};
BuiltinRun run_builtin(const Dataset& dataset, std::string_view learner, std::span<const std::int64_t> seeds,
                       int folds);

/// Parses `args` (without the program name) and executes one subcommand.
/// Diagnostics go to `err` as a single line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace metarepo::cli
