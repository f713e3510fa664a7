#include "metarepo/exports.hpp"

#include "metarepo/arff.hpp"
#include "metarepo/error.hpp"
#include "metarepo/hyperparameters.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace metarepo {

namespace {

using Table = std::vector<std::vector<std::string>>;

std::string cell_of(const Json& value) {
    if (value.is_null()) return "?";
    if (value.is_number()) return format_number(value.get<double>());
    if (value.is_string()) return value.get<std::string>();
    throw DataError("unexpected stored value " + value.dump());
}

std::vector<std::string> keys_of(const Json& object) {
    std::vector<std::string> out;
    for (const auto& [key, value] : object.items()) out.push_back(key);
    return out;
}

std::vector<std::string> metafeature_cells(const std::optional<Json>& stored, const std::vector<std::string>& names) {
    std::vector<std::string> out;
    for (const auto& name : names) {
        if (!stored || !stored->contains(name)) {
            out.emplace_back("?");
        } else {
            out.push_back(cell_of(stored->at(name)));
        }
    }
    return out;
}

std::vector<std::string> stored_metafeature_order(const ResultsRepository& repository,
                                                  const std::vector<std::string>& datasets) {
    std::set<std::string> names;
    for (const auto& ds : datasets) {
        if (auto mf = repository.metafeatures(ds, MetaFeatureLevel::dataset)) {
            for (auto& k : keys_of(*mf)) names.insert(std::move(k));
        }
    }
    return metafeature_column_order({names.begin(), names.end()});
}

std::string write_table(const std::vector<std::string>& headers, const Table& rows, std::string_view relation) {
    return write_meta_table(headers, rows, relation);
}

} // namespace

bool natural_less(const ExperimentKey& a, const ExperimentKey& b) {
    return std::tie(a.algorithm, a.hyperparameter_seed, a.toolkit, a.hyperparameter_string) <
           std::tie(b.algorithm, b.hyperparameter_seed, b.toolkit, b.hyperparameter_string);
}

std::vector<std::string> metafeature_column_order(const std::vector<std::string>& stored_names) {
    std::vector<std::string> canonical;
    for (const auto& [name, value] : DatasetMetaFeatures{}.columns()) canonical.push_back(name);
    for (auto name : kHardnessNames) canonical.emplace_back(name);

    const std::set<std::string> stored(stored_names.begin(), stored_names.end());
    std::vector<std::string> out;
    for (const auto& name : canonical) {
        if (stored.contains(name)) out.push_back(name);
    }
    for (const auto& name : stored) {
        if (std::find(canonical.begin(), canonical.end(), name) == canonical.end()) out.push_back(name);
    }
    return out;
}

std::string export_algorithm_table(const ResultsRepository& repository) {
    auto keys = repository.algorithms();
    std::sort(keys.begin(), keys.end(), natural_less);
    Table rows;
    for (const auto& k : keys) {
        rows.push_back({k.label(), k.toolkit, k.hyperparameter_string.empty() ? "?" : k.hyperparameter_string});
    }
    return write_table({"LA_seed", "Toolkit", "Hyperparameters"}, rows, "algorithms");
}

std::string export_hyperparameter_mapping(std::string_view algorithm) {
    const AlgorithmMapping* mapping = find_mapping(algorithm);
    if (!mapping) throw DataError("unknown algorithm '" + std::string(algorithm) + "'");
    std::vector<std::string> headers{"toolkit"};
    headers.insert(headers.end(), mapping->parameters.begin(), mapping->parameters.end());
    Table rows;
    for (const auto& t : mapping->toolkits) {
        std::vector<std::string> row{t.toolkit};
        for (const auto& flag : t.flags) row.push_back(flag ? *flag : "?");
        rows.push_back(std::move(row));
    }
    return write_table(headers, rows, std::string(algorithm) + "_hyperparameters");
}

std::string export_fold_table(const ResultsRepository& repository, const std::string& dataset) {
    const Dataset data = repository.load_dataset(dataset);
    const auto folds = repository.fold_assignments(dataset);
    std::vector<std::string> headers{"toolkit_seed_#folds_fold"};
    for (std::size_t i = 0; i < data.num_instances(); ++i) headers.push_back(std::to_string(i + 1));
    Table rows;
    for (const auto& f : folds) {
        std::vector<std::string> row{f.key()};
        for (const auto& r : f.roles) row.push_back(r.to_cell());
        rows.push_back(std::move(row));
    }
    return write_table(headers, rows, dataset + "_folds");
}

std::string export_instance_level(const ResultsRepository& repository, const std::string& dataset) {
    const Dataset data = repository.load_dataset(dataset);
    const auto stored = repository.metafeatures(dataset, MetaFeatureLevel::instance);
    if (!stored) throw DataError("no meta-features stored");

    std::set<std::string> measure_set;
    for (const auto& [instance, values] : stored->items()) {
        for (auto& k : keys_of(values)) measure_set.insert(std::move(k));
    }
    std::vector<std::string> measures;
    for (auto name : kHardnessNames) {
        if (measure_set.erase(std::string(name))) measures.emplace_back(name);
    }
    measures.insert(measures.end(), measure_set.begin(), measure_set.end());

    auto records = repository.experiments(dataset);
    std::sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
        if (natural_less(a.experiment, b.experiment)) return true;
        if (natural_less(b.experiment, a.experiment)) return false;
        return std::tie(a.partition_seed, a.partition_set) < std::tie(b.partition_seed, b.partition_set);
    });
    std::map<std::string, int> short_name_uses;
    for (const auto& r : records) ++short_name_uses[r.experiment.label() + "/" + std::to_string(r.partition_seed)];

    std::vector<std::string> headers{"#"};
    headers.insert(headers.end(), measures.begin(), measures.end());
    headers.emplace_back("act");
    for (const auto& r : records) {
        const std::string short_name = r.experiment.label() + "/" + std::to_string(r.partition_seed);
        headers.push_back(short_name_uses[short_name] > 1 ? r.experiment.label() + "/" + r.partition_set : short_name);
    }

    Table rows;
    for (std::size_t i = 0; i < data.num_instances(); ++i) {
        const std::string number = std::to_string(i + 1);
        std::vector<std::string> row{number};
        const Json* values = stored->contains(number) ? &stored->at(number) : nullptr;
        for (const auto& m : measures) row.push_back(values && values->contains(m) ? cell_of(values->at(m)) : "?");
        row.push_back(std::to_string(data.label(i) + 1));
        for (const auto& r : records) {
            std::string cell = "?";
            for (const auto& [fold, predictions] : r.folds) {
                if (auto it = predictions.find(i); it != predictions.end()) cell = std::to_string(it->second + 1);
            }
            row.push_back(std::move(cell));
        }
        rows.push_back(std::move(row));
    }
    return write_table(headers, rows, dataset + "_instances");
}

std::string export_dataset_level(const ResultsRepository& repository) {
    std::vector<std::string> datasets;
    for (const auto& ds : repository.datasets()) {
        if (repository.metafeatures(ds, MetaFeatureLevel::dataset)) datasets.push_back(ds);
    }
    if (datasets.empty()) throw DataError("no meta-features stored");
    const auto measures = stored_metafeature_order(repository, datasets);

    std::vector<ExperimentKey> experiments;
    for (const auto& ds : datasets) {
        for (const auto& r : repository.experiments(ds)) {
            const bool known = std::any_of(experiments.begin(), experiments.end(),
                                           [&](const ExperimentKey& k) { return k.same_identity(r.experiment); });
            if (!known) experiments.push_back(r.experiment);
        }
    }
    std::sort(experiments.begin(), experiments.end(), natural_less);

    std::vector<std::string> headers{"data set"};
    headers.insert(headers.end(), measures.begin(), measures.end());
    for (const auto& e : experiments) headers.push_back(e.label());
    Table rows;
    for (const auto& ds : datasets) {
        std::vector<std::string> row{ds};
        const auto mf = metafeature_cells(repository.metafeatures(ds, MetaFeatureLevel::dataset), measures);
        row.insert(row.end(), mf.begin(), mf.end());
        for (const auto& e : experiments) {
            const auto acc = repository.accuracy(ds, e);
            row.push_back(acc ? format_accuracy(*acc) : "?");
        }
        rows.push_back(std::move(row));
    }
    return write_table(headers, rows, "datasets");
}

std::string export_per_algorithm(const ResultsRepository& repository, std::string_view algorithm) {
    std::vector<ExperimentKey> settings;
    for (const auto& k : repository.algorithms()) {
        if (k.algorithm == algorithm) settings.push_back(k);
    }
    if (settings.empty()) throw DataError("unknown algorithm '" + std::string(algorithm) + "'");

    std::vector<std::string> parameters;
    if (const AlgorithmMapping* mapping = find_mapping(algorithm)) parameters = mapping->parameters;

    const auto datasets = repository.datasets();
    const auto measures = stored_metafeature_order(repository, datasets);
    std::vector<std::string> headers{"data set"};
    headers.insert(headers.end(), measures.begin(), measures.end());
    headers.emplace_back("toolkit");
    headers.insert(headers.end(), parameters.begin(), parameters.end());
    headers.emplace_back("acc");

    struct Entry {
        std::string dataset;
        ExperimentKey key;
        double accuracy;
    };
    std::vector<Entry> entries;
    for (const auto& ds : datasets) {
        for (const auto& k : settings) {
            if (auto acc = repository.accuracy(ds, k)) entries.push_back({ds, k, *acc});
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.dataset, a.key.toolkit, a.key.hyperparameter_seed) <
               std::tie(b.dataset, b.key.toolkit, b.key.hyperparameter_seed);
    });

    Table rows;
    for (const auto& e : entries) {
        std::vector<std::string> row{e.dataset};
        const auto mf = metafeature_cells(repository.metafeatures(e.dataset, MetaFeatureLevel::dataset), measures);
        row.insert(row.end(), mf.begin(), mf.end());
        row.push_back(e.key.toolkit);
        const auto normalized = normalize_hyperparameters(e.key.algorithm, e.key.toolkit, e.key.hyperparameter_string);
        for (const auto& p : parameters) {
            const auto it = normalized.find(p);
            row.push_back(it == normalized.end() ? "?" : it->second);
        }
        row.push_back(format_accuracy(e.accuracy));
        rows.push_back(std::move(row));
    }
    return write_table(headers, rows, std::string(algorithm) + "_results");
}

} // namespace metarepo
