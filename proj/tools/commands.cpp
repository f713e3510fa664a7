#include "commands.hpp"

#include "metarepo/arff.hpp"
#include "metarepo/dataset_measures.hpp"
#include "metarepo/distance.hpp"
#include "metarepo/document_store.hpp"
#include "metarepo/error.hpp"
#include "metarepo/exports.hpp"
#include "metarepo/hyperparameters.hpp"
#include "metarepo/instance_hardness.hpp"
#include "metarepo/lda.hpp"
#include "metarepo/repository.hpp"
#include "metarepo/run_file.hpp"
#include "metarepo/stump.hpp"
#include "metarepo/tree.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace metarepo::cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << bytes;
    if (!out.flush()) throw DataError("cannot write " + path.string());
}

struct Options {
    std::string store = "metarepo-store";
    bool force = false;

    std::string arff_path;
    std::string class_attribute;
    std::string rename;

    std::string dataset;
    std::vector<std::string> datasets;
    std::string learner;
    std::vector<std::int64_t> seeds{1};
    int folds = 10;

    std::string run_path;

    bool instance_level = false;
    bool dataset_level = false;
    std::size_t k = kDefaultNeighbors;
    std::uint64_t measure_seed = 0;

    std::string table;
    std::string subject;
    std::string out_dir;

    std::string collection;
    std::string prefix;
    std::optional<std::int64_t> revision;
};

int cmd_register(ResultsRepository& repo, const Options& o, std::ostream& out) {
    Dataset ds = parse_arff(read_file(o.arff_path),
                            o.class_attribute.empty() ? std::nullopt : std::optional<std::string>(o.class_attribute));
    if (!o.rename.empty()) {
        std::vector<AttributeSpec> attributes(ds.attributes().begin(), ds.attributes().end());
        std::vector<Row> rows(ds.rows().begin(), ds.rows().end());
        ds = Dataset(o.rename, std::move(attributes), ds.class_index(), std::move(rows));
    }
    out << repo.register_dataset(ds, o.force) << '\n';
    return kOk;
}

int cmd_run(ResultsRepository& repo, const Options& o, std::ostream& out) {
    const Dataset ds = repo.load_dataset(o.dataset);
    const BuiltinRun result = run_builtin(ds, o.learner, o.seeds, o.folds);
    repo.put_run(o.dataset, result.experiment, result.folds, result.predictions, o.force);
    out << result.experiment.label() << ' ' << format_accuracy(aggregate_accuracy(result.predictions, result.folds, ds))
        << '\n';
    return kOk;
}

int cmd_ingest(ResultsRepository& repo, const Options& o, std::ostream& out) {
    const RunFile run = ingest_run_file(repo, o.dataset, read_file(o.run_path), o.force);
    out << run.experiment.label() << ' ' << run.folds.size() << " folds\n";
    return kOk;
}

int cmd_compute(ResultsRepository& repo, const Options& o, std::ostream& out) {
    const bool both = !o.instance_level && !o.dataset_level;
    for (const auto& name : o.datasets) {
        const Dataset ds = repo.load_dataset(name);
        require_measurable(ds);
        const auto hardness = compute_hardness(ds, o.k);
        if (both || o.instance_level) {
            repo.put_metafeatures(name, MetaFeatureLevel::instance, instance_metafeatures_json(hardness), o.force);
        }
        if (both || o.dataset_level) {
            const DatasetMetaFeatures features = compute_all(ds, o.measure_seed);
            repo.put_metafeatures(name, MetaFeatureLevel::dataset,
                                  dataset_metafeatures_json(features, aggregate_hardness(hardness)), o.force);
            for (const auto& note : features.notes) out << name << ": " << note << '\n';
        }
        out << name << '\n';
    }
    return kOk;
}

int cmd_export(ResultsRepository& repo, const Options& o, std::ostream& out) {
    auto needs_subject = [&](std::string_view what) {
        if (o.subject.empty()) throw CLI::ValidationError("export " + o.table + " needs " + std::string(what));
    };
    std::string text;
    std::string file;
    if (o.table == "algorithms") {
        text = export_algorithm_table(repo);
        file = "algorithms";
    } else if (o.table == "mapping") {
        needs_subject("an algorithm");
        text = export_hyperparameter_mapping(o.subject);
        file = o.subject + "_mapping";
    } else if (o.table == "folds") {
        needs_subject("a dataset");
        text = export_fold_table(repo, o.subject);
        file = o.subject + "_folds";
    } else if (o.table == "instances") {
        needs_subject("a dataset");
        text = export_instance_level(repo, o.subject);
        file = o.subject + "_instances";
    } else if (o.table == "datasets") {
        text = export_dataset_level(repo);
        file = "datasets";
    } else if (o.table == "algorithm") {
        needs_subject("an algorithm");
        text = export_per_algorithm(repo, o.subject);
        file = o.subject + "_results";
    }

    if (o.out_dir.empty()) {
        out << text;
    } else {
        const fs::path target = fs::path(o.out_dir) / (encode_name(file) + ".arff");
        write_file(target, text);
        out << target.string() << '\n';
    }
    return kOk;
}

int cmd_snapshot(ResultsRepository& repo, std::ostream& out) {
    out << repo.store().snapshot() << '\n';
    return kOk;
}

int cmd_query(const ResultsRepository& repo, const Options& o, std::ostream& out) {
    for (const auto& doc : repo.store().query(o.collection, o.prefix, o.revision)) out << doc.key << '\n';
    return kOk;
}

} // namespace

std::string builtin_hyperparameters(std::string_view learner) {
    if (learner == "1nn") return "-metric heom";
    if (learner == "lda") return "-ridge " + format_number(kLdaRidge);
    if (learner == "stump") return "-mode best";
    if (learner == "tree") {
        const TreeConfig defaults;
        return "-cf " + format_number(defaults.confidence) + " -m " + std::to_string(defaults.min_leaf) + " -pruned";
    }
    throw DataError("unknown learner '" + std::string(learner) + "'");
}

Trainer builtin_trainer(std::string_view learner) {
    if (learner == "1nn") {
        return [](const Dataset& training) -> Predictor {
            DistanceMetric metric(training);
            return [training, metric](const Row& row) {
                return training.label(nearest_instance(training, metric, row));
            };
        };
    }
    if (learner == "lda") {
        return [](const Dataset& training) -> Predictor {
            return [model = fit_lda(training)](const Row& row) { return model.predict(row); };
        };
    }
    if (learner == "stump") {
        return [](const Dataset& training) -> Predictor {
            const std::size_t attribute = select_stump_attribute(training, StumpMode::best);
            return [stump = fit_stump(training, attribute)](const Row& row) { return stump.predict(row); };
        };
    }
    if (learner == "tree") {
        return [](const Dataset& training) -> Predictor {
            return [model = train_tree(training, true)](const Row& row) { return model.predict(row); };
        };
    }
    throw DataError("unknown learner '" + std::string(learner) + "'");
}

BuiltinRun run_builtin(const Dataset& dataset, std::string_view learner, std::span<const std::int64_t> seeds,
                       int folds) {
    require_measurable(dataset);
    if (folds < 2) throw DataError("at least two folds are required");
    if (seeds.empty()) throw DataError("at least one seed is required");
    const Trainer trainer = builtin_trainer(learner);

    BuiltinRun result;
    result.experiment =
        ExperimentKey{std::string(kBuiltinToolkit), std::string(learner), -1, builtin_hyperparameters(learner)};
    for (const std::int64_t seed : seeds) {
        if (seed < 0) throw DataError("partition seeds must be non-negative");
        const std::vector<int> fold_of = stratified_folds(dataset, folds, static_cast<std::uint64_t>(seed));
        const int count = *std::max_element(fold_of.begin(), fold_of.end()) + 1;
        const std::vector<std::size_t> predicted = cross_validate(dataset, fold_of, trainer);
        for (int f = 0; f < count; ++f) {
            FoldAssignment fold;
            fold.toolkit = std::string(kBuiltinToolkit);
            fold.partition_seed = seed;
            fold.scheme = KFold{count};
            fold.fold_index = f + 1;
            PredictionSet predictions;
            predictions.experiment = result.experiment;
            for (std::size_t i = 0; i < fold_of.size(); ++i) {
                if (fold_of[i] == f) {
                    fold.roles.push_back(Role::test());
                    predictions.predictions[i] = predicted[i];
                } else {
                    fold.roles.push_back(Role::train());
                }
            }
            predictions.partition = fold.key();
            result.folds.push_back(std::move(fold));
            result.predictions.push_back(std::move(predictions));
        }
    }
    return result;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Experiment and meta-feature repository for meta-learning", "metarepo"};
    app.require_subcommand(1);
    app.add_option("--store", o.store, "Store root directory")->capture_default_str();
    app.add_flag("--force", o.force, "Replace conflicting documents");

    auto* reg = app.add_subcommand("register", "Store an ARFF dataset");
    reg->add_option("arff", o.arff_path, "ARFF file")->required()->check(CLI::ExistingFile);
    reg->add_option("--class", o.class_attribute, "Class attribute (default: last attribute)");
    reg->add_option("--name", o.rename, "Dataset name (default: the ARFF relation)");

    auto* run_cmd = app.add_subcommand("run", "Cross-validate a built-in learner and store its predictions");
    run_cmd->add_option("dataset", o.dataset, "Registered dataset")->required();
    run_cmd->add_option("learner", o.learner, "1nn, lda, stump or tree")
        ->required()
        ->check(CLI::IsMember({"1nn", "lda", "stump", "tree"}));
    run_cmd->add_option("--seed", o.seeds, "Partition seeds")->capture_default_str();
    run_cmd->add_option("--folds", o.folds, "Folds per partition set")->capture_default_str()->check(CLI::Range(2, 1000));

    auto* ingest = app.add_subcommand("ingest", "Store a toolkit run file");
    ingest->add_option("dataset", o.dataset, "Registered dataset")->required();
    ingest->add_option("runfile", o.run_path, "Run file")->required()->check(CLI::ExistingFile);

    auto* compute = app.add_subcommand("compute", "Compute and store meta-features (both levels by default)");
    compute->add_option("datasets", o.datasets, "Registered datasets")->required();
    compute->add_flag("--instance", o.instance_level, "Instance hardness measures only");
    compute->add_flag("--dataset", o.dataset_level, "Dataset-level measures only");
    compute->add_option("--k", o.k, "Neighbours for kDN")->capture_default_str()->check(CLI::PositiveNumber);
    compute->add_option("--seed", o.measure_seed, "Seed for the interpolated instances")->capture_default_str();

    auto* exp = app.add_subcommand("export", "Write a meta-data table as ARFF");
    exp->add_option("table", o.table, "algorithms, mapping, folds, instances, datasets or algorithm")
        ->required()
        ->check(CLI::IsMember({"algorithms", "mapping", "folds", "instances", "datasets", "algorithm"}));
    exp->add_option("subject", o.subject, "Dataset or algorithm the table is about");
    exp->add_option("--out", o.out_dir, "Output directory (default: stdout)")->check(CLI::ExistingDirectory);

    auto* snap = app.add_subcommand("snapshot", "Freeze the store under a new revision");

    auto* query = app.add_subcommand("query", "List document keys in a collection");
    query->add_option("collection", o.collection, "Collection, usually a dataset name")->required();
    query->add_option("prefix", o.prefix, "Key prefix");
    query->add_option("--revision", o.revision, "Read a snapshot instead of the head");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "metarepo: " << e.what() << '\n';
        return kUsage;
    }

    try {
        o.store = fs::absolute(o.store).string();
        if (!o.arff_path.empty()) o.arff_path = fs::absolute(o.arff_path).string();
        if (!o.run_path.empty()) o.run_path = fs::absolute(o.run_path).string();
        if (!o.out_dir.empty()) o.out_dir = fs::absolute(o.out_dir).string();

        DocumentStore store(o.store);
        ResultsRepository repo(store);
        if (reg->parsed()) return cmd_register(repo, o, out);
        if (run_cmd->parsed()) return cmd_run(repo, o, out);
        if (ingest->parsed()) return cmd_ingest(repo, o, out);
        if (compute->parsed()) return cmd_compute(repo, o, out);
        if (exp->parsed()) return cmd_export(repo, o, out);
        if (snap->parsed()) return cmd_snapshot(repo, out);
        if (query->parsed()) return cmd_query(repo, o, out);
        return kUsage;
    } catch (const CLI::ValidationError& e) {
        err << "metarepo: " << e.what() << '\n';
        return kUsage;
    } catch (const ConflictError& e) {
        err << "metarepo: " << e.what() << '\n';
        return kConflict;
    } catch (const std::exception& e) {
        err << "metarepo: " << e.what() << '\n';
        return kDataError;
    }
}

} // namespace metarepo::cli
