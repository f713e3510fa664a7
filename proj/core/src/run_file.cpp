#include "metarepo/run_file.hpp"

#include "metarepo/error.hpp"

#include <charconv>
#include <optional>

namespace metarepo {

namespace {

std::vector<std::string_view> split(std::string_view text, char separator, std::size_t max_parts = 0) {
    std::vector<std::string_view> parts;
    while (true) {
        if (max_parts && parts.size() + 1 == max_parts) {
            parts.push_back(text);
            return parts;
        }
        const auto at = text.find(separator);
        if (at == std::string_view::npos) {
            parts.push_back(text);
            return parts;
        }
        parts.push_back(text.substr(0, at));
        text.remove_prefix(at + 1);
    }
}

template <typename Int>
std::optional<Int> parse_int(std::string_view token) {
    Int value{};
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
    return value;
}

DataError bad_header(const std::string& detail) { return DataError("bad run header: " + detail); }

std::string at_line(std::size_t line) { return " at line " + std::to_string(line); }

std::string scheme_token(const SplitScheme& scheme) {
    if (std::holds_alternative<KFold>(scheme)) return "kfold";
    if (std::holds_alternative<PercentSplit>(scheme)) return "percent";
    return "fixed";
}

} // namespace

RunFile parse_run_file(std::string_view text, const Dataset& dataset) {
    std::vector<std::string_view> lines = split(text, '\n');
    for (auto& line : lines) {
        if (line.ends_with('\r')) line.remove_suffix(1);
    }
    if (lines.size() < 2) throw bad_header("expected a header line and a partition line");

    const auto header = split(lines[0], '\t');
    if (header.size() != 4) throw bad_header("expected 4 tab-separated fields, got " + std::to_string(header.size()));
    const auto hp_seed = parse_int<int>(header[2]);
    if (header[0].empty() || header[1].empty() || !hp_seed) throw bad_header("toolkit, algorithm and seed are required");
    RunFile run;
    run.experiment = {std::string(header[0]), std::string(header[1]), *hp_seed, std::string(header[3])};

    const auto partition_line = split(lines[1], '\t');
    if (partition_line.size() > 2) throw bad_header("malformed partition line");
    PartitionKey first;
    try {
        first = PartitionKey::parse(partition_line[0]);
    } catch (const DataError&) {
        throw bad_header("bad partition key '" + std::string(partition_line[0]) + "'");
    }
    if (first.fold != 1) throw bad_header("the partition line must name fold 1");
    if (first.toolkit != run.experiment.toolkit) throw bad_header("partition toolkit differs from the run toolkit");
    const std::string_view token =
        partition_line.size() == 2 ? partition_line[1] : (first.seed == 0 && first.count == 0 ? "fixed" : "kfold");
    SplitScheme scheme;
    if (token == "kfold") {
        if (first.count < 1) throw bad_header("k-fold needs a positive fold count");
        scheme = KFold{first.count};
    } else if (token == "percent") {
        if (first.count < 1 || first.count > 99) throw bad_header("percent split needs a test percentage in 1..99");
        scheme = PercentSplit{first.count};
    } else if (token == "fixed") {
        if (first.seed != 0 || first.count != 0) throw bad_header("a fixed split is keyed toolkit_0_0_1");
        scheme = FixedSplit{};
    } else {
        throw bad_header("unknown split scheme '" + std::string(token) + "'");
    }
    const int fold_count = std::holds_alternative<KFold>(scheme) ? first.count : 1;

    const std::size_t n = dataset.num_instances();
    std::vector<std::vector<std::optional<Role>>> roles(fold_count, std::vector<std::optional<Role>>(n));
    std::vector<std::map<std::size_t, std::size_t>> predicted(fold_count);
    for (std::size_t l = 2; l < lines.size(); ++l) {
        const std::string_view line = lines[l];
        if (line.empty()) continue;
        const auto cells = split(line, ',', 4);
        if (cells.size() < 3) throw DataError("expected fold,instance,role[,prediction]" + at_line(l + 1));
        const auto fold = parse_int<int>(cells[0]);
        if (!fold || *fold < 1 || *fold > fold_count) throw DataError("fold out of range" + at_line(l + 1));
        const auto instance = parse_int<std::size_t>(cells[1]);
        if (!instance || *instance < 1 || *instance > n) throw DataError("instance out of range" + at_line(l + 1));
        const std::size_t i = *instance - 1;
        Role role = Role::test();
        try {
            role = Role::from_cell(cells[2]);
        } catch (const DataError& e) {
            throw DataError(std::string(e.what()) + at_line(l + 1));
        }
        auto& slot = roles[*fold - 1][i];
        if (slot) {
            throw DataError("instance " + std::to_string(*instance) + " listed twice in fold " + std::to_string(*fold));
        }
        slot = role;
        if (cells.size() == 4 && !cells[3].empty()) {
            if (!role.is_test()) throw DataError("role conflict at instance " + std::to_string(*instance));
            const auto cls = dataset.class_attribute().category_index(cells[3]);
            if (!cls) throw DataError("unknown class label '" + std::string(cells[3]) + "'" + at_line(l + 1));
            predicted[*fold - 1][i] = *cls;
        }
    }

    for (int f = 0; f < fold_count; ++f) {
        FoldAssignment assignment{run.experiment.toolkit, first.seed, scheme, f + 1, {}};
        for (std::size_t i = 0; i < n; ++i) {
            if (!roles[f][i]) {
                throw DataError("fold " + std::to_string(f + 1) + " misses instance " + std::to_string(i + 1));
            }
            assignment.roles.push_back(*roles[f][i]);
        }
        run.predictions.push_back({run.experiment, assignment.key(), std::move(predicted[f])});
        run.folds.push_back(std::move(assignment));
    }
    require_kfold_coverage(run.folds);
    return run;
}

std::string write_run_file(const RunFile& run, const Dataset& dataset) {
    if (run.folds.empty()) throw DataError("a run needs at least one fold");
    const auto& e = run.experiment;
    std::string out = e.toolkit + "\t" + e.algorithm + "\t" + std::to_string(e.hyperparameter_seed) + "\t" +
                      e.hyperparameter_string + "\n";
    out += run.folds.front().key() + "\t" + scheme_token(run.folds.front().scheme) + "\n";
    for (const auto& fold : run.folds) {
        const PredictionSet* set = nullptr;
        for (const auto& p : run.predictions) {
            if (p.partition == fold.key()) set = &p;
        }
        for (std::size_t i = 0; i < fold.roles.size(); ++i) {
            out += std::to_string(fold.fold_index) + "," + std::to_string(i + 1) + "," + fold.roles[i].to_cell();
            if (set) {
                if (auto it = set->predictions.find(i); it != set->predictions.end()) {
                    out += "," + dataset.class_attribute().categories.at(it->second);
                }
            }
            out += "\n";
        }
    }
    return out;
}

RunFile ingest_run_file(ResultsRepository& repository, const std::string& dataset, std::string_view text, bool force) {
    const Dataset data = repository.load_dataset(dataset);
    RunFile run = parse_run_file(text, data);
    repository.put_run(dataset, run.experiment, run.folds, run.predictions, force);
    return run;
}

} // namespace metarepo
