#include "metarepo/repository.hpp"

#include "metarepo/arff.hpp"
#include "metarepo/error.hpp"
#include "metarepo/hyperparameters.hpp"

#include <algorithm>
#include <charconv>
#include <tuple>

namespace metarepo {

namespace {

const std::string kTrainingSets(kTrainingSetsCollection);
const std::string kHyperparameters(kHyperparametersCollection);

void require_dataset_name(const std::string& name) {
    if (name.empty()) throw DataError("dataset name must be non-empty");
    if (name == kTrainingSetsCollection || name == kHyperparametersCollection) {
        throw DataError("dataset name '" + name + "' is reserved");
    }
    if (name.find('/') != std::string::npos) throw DataError("dataset name must not contain '/'");
}

std::string document_id(const std::string& collection, const std::string& key) { return collection + "/" + key; }

std::string one_based(std::size_t index) { return std::to_string(index + 1); }

std::size_t parse_one_based(const std::string& text, const char* what) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0 || text.front() == '0') {
        throw DataError(std::string("bad ") + what + " '" + text + "'");
    }
    return value - 1;
}

std::string partition_set_of(const PartitionKey& key) {
    return key.toolkit + "_" + std::to_string(key.seed) + "_" + std::to_string(key.count);
}

Json scheme_json(const SplitScheme& scheme) {
    if (const auto* k = std::get_if<KFold>(&scheme)) return Json{{"kind", "kfold"}, {"folds", k->num_folds}};
    if (const auto* p = std::get_if<PercentSplit>(&scheme)) return Json{{"kind", "percent"}, {"percent", p->test_percent}};
    return Json{{"kind", "fixed"}};
}

SplitScheme scheme_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "kfold") return KFold{j.at("folds").get<int>()};
    if (kind == "percent") return PercentSplit{j.at("percent").get<int>()};
    if (kind == "fixed") return FixedSplit{};
    throw DataError("unknown split scheme '" + kind + "'");
}

Json predictions_json(const std::map<std::size_t, std::size_t>& predictions) {
    Json out = Json::object();
    for (const auto& [instance, cls] : predictions) out[one_based(instance)] = cls + 1;
    return out;
}

/// Checks predictions against the partition and the dataset's class attribute.
void check_predictions(const PredictionSet& set, const FoldAssignment& partition, const Dataset& dataset) {
    if (set.partition != partition.key()) throw DataError("prediction/partition mismatch");
    for (const auto& [instance, cls] : set.predictions) {
        if (instance >= partition.roles.size() || !partition.roles[instance].is_test()) {
            throw DataError("prediction/partition mismatch");
        }
        if (cls >= dataset.num_classes()) {
            throw DataError("predicted class out of range at instance " + one_based(instance));
        }
    }
}

void check_roles(const FoldAssignment& assignment, const Dataset& dataset) {
    if (assignment.roles.size() != dataset.num_instances()) {
        throw DataError("fold assignment " + assignment.key() + " has " + std::to_string(assignment.roles.size()) +
                        " roles for " + std::to_string(dataset.num_instances()) + " instances");
    }
}

/// Folds the new predictions into an experiment document, or throws on a conflict.
Json merge_experiment(const std::optional<Document>& existing, const ExperimentKey& key,
                      const std::string& partition_set, std::span<const PredictionSet> sets, bool force) {
    const std::string doc_key = key.label() + "/" + partition_set;
    Json body{{"experiment", experiment_json(key)}, {"partitions", partition_set}, {"folds", Json::object()}};
    if (existing) {
        if (existing->body.at("experiment") != body.at("experiment") && !force) {
            throw ConflictError("conflicting experiment " + doc_key);
        }
        body["folds"] = existing->body.at("folds");
    }
    for (const auto& set : sets) {
        const std::string fold = std::to_string(PartitionKey::parse(set.partition).fold);
        Json entry = predictions_json(set.predictions);
        if (body["folds"].contains(fold) && body["folds"][fold] != entry && !force) {
            throw ConflictError("conflicting experiment " + doc_key + " fold " + fold);
        }
        body["folds"][fold] = std::move(entry);
    }
    return body;
}

Json algorithm_json(const ExperimentKey& key) {
    Json parameters = Json::object();
    for (const auto& [name, value] : normalize_hyperparameters(key.algorithm, key.toolkit, key.hyperparameter_string)) {
        parameters[name] = value;
    }
    Json body = experiment_json(key);
    body["parameters"] = std::move(parameters);
    body["defaults"] = key.uses_defaults();
    return body;
}

void check_metafeature_values(const Json& object, const char* where) {
    if (!object.is_object()) throw DataError(std::string(where) + " must be an object");
    for (const auto& [name, value] : object.items()) {
        if (!value.is_number() && !value.is_null()) {
            throw DataError(std::string(where) + " value '" + name + "' must be a number or null");
        }
    }
}

} // namespace

std::string ExperimentRecord::document_key() const { return experiment.label() + "/" + partition_set; }

std::vector<PredictionSet> ExperimentRecord::prediction_sets() const {
    std::vector<PredictionSet> out;
    for (const auto& [fold, predictions] : folds) {
        out.push_back({experiment, partition_set + "_" + std::to_string(fold), predictions});
    }
    return out;
}

Json experiment_json(const ExperimentKey& key) {
    return Json{{"toolkit", key.toolkit},
                {"algorithm", key.algorithm},
                {"seed", key.hyperparameter_seed},
                {"hyperparameters", key.hyperparameter_string}};
}

ExperimentKey experiment_from_json(const Json& body) {
    return ExperimentKey{body.at("toolkit").get<std::string>(), body.at("algorithm").get<std::string>(),
                         body.at("seed").get<int>(), body.at("hyperparameters").get<std::string>()};
}

Json fold_assignment_json(const FoldAssignment& assignment) {
    Json roles = Json::array();
    for (const auto& r : assignment.roles) roles.push_back(r.to_cell());
    return Json{{"toolkit", assignment.toolkit},
                {"seed", assignment.partition_seed},
                {"scheme", scheme_json(assignment.scheme)},
                {"fold", assignment.fold_index},
                {"roles", std::move(roles)}};
}

FoldAssignment fold_assignment_from_json(const Json& body) {
    FoldAssignment a;
    a.toolkit = body.at("toolkit").get<std::string>();
    a.partition_seed = body.at("seed").get<long long>();
    a.scheme = scheme_from_json(body.at("scheme"));
    a.fold_index = body.at("fold").get<int>();
    for (const auto& cell : body.at("roles")) a.roles.push_back(Role::from_cell(cell.get<std::string>()));
    return a;
}

Json dataset_metafeatures_json(const DatasetMetaFeatures& features,
                               const std::optional<std::array<double, 8>>& hardness_means) {
    Json body = Json::object();
    for (const auto& [name, value] : features.columns()) body[name] = value ? Json(*value) : Json(nullptr);
    if (hardness_means) {
        for (std::size_t k = 0; k < kHardnessNames.size(); ++k) body[std::string(kHardnessNames[k])] = (*hardness_means)[k];
    }
    return body;
}

Json instance_metafeatures_json(std::span<const InstanceHardnessVector> vectors) {
    Json body = Json::object();
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        Json entry = Json::object();
        const auto values = vectors[i].values();
        for (std::size_t k = 0; k < kHardnessNames.size(); ++k) {
            entry[std::string(kHardnessNames[k])] = std::isfinite(values[k]) ? Json(values[k]) : Json(nullptr);
        }
        body[one_based(i)] = std::move(entry);
    }
    return body;
}

std::string ResultsRepository::register_dataset(const Dataset& dataset, bool force) {
    require_dataset_name(dataset.name());
    const auto violations = validate_dataset(dataset);
    if (!violations.empty()) throw DataError("invalid dataset: " + violations.front().message);
    const Json body{{"arff", write_arff(dataset)},
                    {"class", dataset.class_attribute().name},
                    {"instances", dataset.num_instances()}};
    store_.put(dataset.name(), std::string(kDatasetDocument), body, force);
    return document_id(dataset.name(), std::string(kDatasetDocument));
}

Dataset ResultsRepository::load_dataset(const std::string& name) const {
    require_dataset_name(name);
    const auto doc = store_.find(name, std::string(kDatasetDocument));
    if (!doc) throw NotFoundError("dataset '" + name + "' is not registered");
    return parse_arff(doc->body.at("arff").get<std::string>(), doc->body.at("class").get<std::string>());
}

bool ResultsRepository::has_dataset(const std::string& name) const {
    try {
        require_dataset_name(name);
    } catch (const DataError&) {
        return false;
    }
    return store_.find(name, std::string(kDatasetDocument)).has_value();
}

std::vector<std::string> ResultsRepository::datasets() const {
    std::vector<std::string> out;
    for (const auto& name : store_.collections()) {
        if (has_dataset(name)) out.push_back(name);
    }
    return out;
}

std::string ResultsRepository::put_fold_assignment(const std::string& dataset, const FoldAssignment& assignment,
                                                   bool force) {
    check_roles(assignment, load_dataset(dataset));
    const std::string key = dataset + "/" + assignment.key();
    store_.put(kTrainingSets, key, fold_assignment_json(assignment), force);
    return document_id(kTrainingSets, key);
}

std::optional<FoldAssignment> ResultsRepository::find_fold_assignment(const std::string& dataset,
                                                                      const std::string& partition_key) const {
    const auto doc = store_.find(kTrainingSets, dataset + "/" + partition_key);
    if (!doc) return std::nullopt;
    return fold_assignment_from_json(doc->body);
}

std::vector<FoldAssignment> ResultsRepository::fold_assignments(const std::string& dataset) const {
    require_dataset_name(dataset);
    std::vector<FoldAssignment> out;
    for (const auto& doc : store_.query(kTrainingSets, dataset + "/")) out.push_back(fold_assignment_from_json(doc.body));
    std::sort(out.begin(), out.end(), [](const FoldAssignment& a, const FoldAssignment& b) {
        const PartitionKey ka = a.partition_key();
        const PartitionKey kb = b.partition_key();
        return std::tie(ka.toolkit, ka.seed, ka.count, ka.fold) < std::tie(kb.toolkit, kb.seed, kb.count, kb.fold);
    });
    return out;
}

std::string ResultsRepository::put_algorithm(const ExperimentKey& key, bool force) {
    store_.put(kHyperparameters, key.label(), algorithm_json(key), force);
    return document_id(kHyperparameters, key.label());
}

std::vector<ExperimentKey> ResultsRepository::algorithms() const {
    std::vector<ExperimentKey> out;
    for (const auto& doc : store_.query(kHyperparameters)) out.push_back(experiment_from_json(doc.body));
    return out;
}

std::string ResultsRepository::put_experiment(const std::string& dataset, const ExperimentKey& key,
                                              const FoldAssignment& partition, const PredictionSet& predictions,
                                              bool force) {
    const Dataset data = load_dataset(dataset);
    if (!predictions.experiment.same_identity(key)) throw DataError("prediction set belongs to another experiment");
    check_roles(partition, data);
    check_predictions(predictions, partition, data);
    const std::string partition_set = partition_set_of(partition.partition_key());
    const std::string doc_key = key.label() + "/" + partition_set;

    store_.transact([&](const DocumentStore& store) {
        const auto stored = store.find(kTrainingSets, dataset + "/" + partition.key());
        if (!stored) throw NotFoundError("dangling partition reference " + partition.key());
        if (fold_assignment_from_json(stored->body) != partition) throw DataError("prediction/partition mismatch");
        const std::span<const PredictionSet> one(&predictions, 1);
        return std::vector<PendingPut>{
            {dataset, doc_key, merge_experiment(store.find(dataset, doc_key), key, partition_set, one, force), true}};
    });
    return document_id(dataset, doc_key);
}

void ResultsRepository::put_run(const std::string& dataset, const ExperimentKey& key,
                                std::span<const FoldAssignment> folds, std::span<const PredictionSet> predictions,
                                bool force) {
    const Dataset data = load_dataset(dataset);
    if (folds.empty()) throw DataError("a run needs at least one fold");
    std::map<std::string, std::vector<FoldAssignment>> sets;
    for (const auto& f : folds) {
        check_roles(f, data);
        sets[partition_set_of(f.partition_key())].push_back(f);
    }
    for (const auto& [name, members] : sets) require_kfold_coverage(members);

    std::map<std::string, std::vector<PredictionSet>> predictions_by_set;
    for (const auto& set : predictions) {
        if (!set.experiment.same_identity(key)) throw DataError("prediction set belongs to another experiment");
        const auto part = std::find_if(folds.begin(), folds.end(),
                                       [&](const FoldAssignment& f) { return f.key() == set.partition; });
        if (part == folds.end()) throw DataError("prediction/partition mismatch");
        check_predictions(set, *part, data);
        predictions_by_set[partition_set_of(part->partition_key())].push_back(set);
    }

    store_.transact(
        [&](const DocumentStore& store) {
            std::vector<PendingPut> puts;
            for (const auto& f : folds) puts.push_back({kTrainingSets, dataset + "/" + f.key(), fold_assignment_json(f)});
            puts.push_back({kHyperparameters, key.label(), algorithm_json(key)});
            for (const auto& [partition_set, members] : predictions_by_set) {
                const std::string doc_key = key.label() + "/" + partition_set;
                puts.push_back({dataset, doc_key,
                                merge_experiment(store.find(dataset, doc_key), key, partition_set, members, force),
                                true});
            }
            return puts;
        },
        force);
}

std::vector<ExperimentRecord> ResultsRepository::experiments(const std::string& dataset) const {
    require_dataset_name(dataset);
    std::vector<ExperimentRecord> out;
    for (const auto& doc : store_.query(dataset)) {
        if (doc.key.find('/') == std::string::npos) continue;
        ExperimentRecord r;
        r.experiment = experiment_from_json(doc.body.at("experiment"));
        r.partition_set = doc.body.at("partitions").get<std::string>();
        r.partition_seed = PartitionKey::parse(r.partition_set + "_1").seed;
        for (const auto& [fold, entries] : doc.body.at("folds").items()) {
            auto& map = r.folds[static_cast<int>(parse_one_based(fold, "fold") + 1)];
            for (const auto& [instance, cls] : entries.items()) {
                map[parse_one_based(instance, "instance")] = cls.get<std::size_t>() - 1;
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string ResultsRepository::put_metafeatures(const std::string& dataset, MetaFeatureLevel level, const Json& body,
                                                bool force) {
    const Dataset data = load_dataset(dataset);
    std::string key;
    if (level == MetaFeatureLevel::dataset) {
        check_metafeature_values(body, "meta-feature document");
        key = std::string(kMetaFeaturesDocument);
    } else {
        if (!body.is_object()) throw DataError("instance meta-feature document must be an object");
        for (const auto& [instance, values] : body.items()) {
            if (parse_one_based(instance, "instance") >= data.num_instances()) {
                throw DataError("instance index " + instance + " beyond dataset size");
            }
            check_metafeature_values(values, "instance meta-feature entry");
        }
        key = std::string(kInstanceMetaFeaturesDocument);
    }
    store_.put(dataset, key, body, force);
    return document_id(dataset, key);
}

std::optional<Json> ResultsRepository::metafeatures(const std::string& dataset, MetaFeatureLevel level) const {
    require_dataset_name(dataset);
    const std::string key(level == MetaFeatureLevel::dataset ? kMetaFeaturesDocument : kInstanceMetaFeaturesDocument);
    const auto doc = store_.find(dataset, key);
    if (!doc) return std::nullopt;
    return std::optional<Json>(std::in_place, doc->body);
}

std::optional<double> ResultsRepository::accuracy(const std::string& dataset, const ExperimentKey& key) const {
    std::vector<PredictionSet> sets;
    std::vector<FoldAssignment> partitions;
    for (const auto& record : experiments(dataset)) {
        if (!record.experiment.same_identity(key)) continue;
        for (auto& set : record.prediction_sets()) {
            auto partition = find_fold_assignment(dataset, set.partition);
            if (!partition) throw NotFoundError("dangling partition reference " + set.partition);
            partitions.push_back(std::move(*partition));
            sets.push_back(std::move(set));
        }
    }
    if (sets.empty()) return std::nullopt;
    return aggregate_accuracy(sets, partitions, load_dataset(dataset));
}

} // namespace metarepo
