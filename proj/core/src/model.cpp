#include "metarepo/model.hpp"

#include "metarepo/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <unordered_set>

namespace metarepo {

AttributeSpec AttributeSpec::numeric(std::string name) {
    return AttributeSpec{std::move(name), AttributeKind::numeric, {}};
}

AttributeSpec AttributeSpec::nominal(std::string name, std::vector<std::string> categories) {
    return AttributeSpec{std::move(name), AttributeKind::nominal, std::move(categories)};
}

std::optional<std::size_t> AttributeSpec::category_index(std::string_view token) const {
    auto it = std::find(categories.begin(), categories.end(), token);
    if (it == categories.end()) return std::nullopt;
    return static_cast<std::size_t>(it - categories.begin());
}

Dataset::Dataset(std::string name, std::vector<AttributeSpec> attributes, std::size_t class_index,
                 std::vector<Row> rows)
    : name_(std::move(name)), attributes_(std::move(attributes)), class_index_(class_index),
      rows_(std::move(rows)) {
    for (std::size_t a = 0; a < attributes_.size(); ++a) {
        if (a != class_index_) features_.push_back(a);
    }
}

std::size_t Dataset::num_classes() const {
    if (class_index_ >= attributes_.size()) return 0;
    return attributes_[class_index_].categories.size();
}

std::vector<std::size_t> Dataset::labels() const {
    std::vector<std::size_t> out(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) out[i] = label(i);
    return out;
}

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(num_classes(), 0);
    for (const auto& r : rows_) {
        const auto& v = r[class_index_];
        if (v.is_nominal() && v.category() < counts.size()) ++counts[v.category()];
    }
    return counts;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    std::vector<Row> rows;
    rows.reserve(indices.size());
    for (auto i : indices) rows.push_back(rows_.at(i));
    return with_rows(std::move(rows));
}

Dataset Dataset::with_rows(std::vector<Row> rows) const {
    return Dataset{name_, attributes_, class_index_, std::move(rows)};
}

std::vector<Violation> validate_dataset(const Dataset& dataset) {
    std::vector<Violation> out;
    const auto attrs = dataset.attributes();
    if (dataset.class_index() >= attrs.size()) {
        out.push_back({std::nullopt, std::nullopt, "class index out of range"});
        return out;
    }
    if (!attrs[dataset.class_index()].is_nominal()) {
        out.push_back({std::nullopt, dataset.class_index(), "class attribute must be nominal"});
    }

    std::unordered_set<std::string> names;
    for (std::size_t a = 0; a < attrs.size(); ++a) {
        if (!names.insert(attrs[a].name).second) {
            out.push_back({std::nullopt, a, "duplicate attribute name '" + attrs[a].name + "'"});
        }
        if (attrs[a].is_nominal()) {
            if (attrs[a].categories.empty()) {
                out.push_back({std::nullopt, a, "nominal attribute has no categories"});
            }
            std::set<std::string> seen;
            for (const auto& c : attrs[a].categories) {
                if (!seen.insert(c).second) {
                    out.push_back({std::nullopt, a, "duplicate category '" + c + "'"});
                }
            }
        }
    }

    const auto rows = dataset.rows();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != attrs.size()) {
            out.push_back({i, std::nullopt,
                           "expected " + std::to_string(attrs.size()) + " values, got " +
                               std::to_string(rows[i].size())});
            continue;
        }
        for (std::size_t a = 0; a < attrs.size(); ++a) {
            const Value& v = rows[i][a];
            if (v.is_missing()) {
                if (a == dataset.class_index()) out.push_back({i, a, "missing class label"});
                continue;
            }
            if (attrs[a].is_nominal()) {
                if (!v.is_nominal()) {
                    out.push_back({i, a, "numeric value in nominal attribute"});
                } else if (v.category() >= attrs[a].categories.size()) {
                    out.push_back({i, a, "category index out of range"});
                }
            } else {
                if (!v.is_numeric()) {
                    out.push_back({i, a, "nominal value in numeric attribute"});
                } else if (!std::isfinite(v.number())) {
                    out.push_back({i, a, "non-finite numeric value"});
                }
            }
        }
    }
    return out;
}

void require_measurable(const Dataset& dataset) {
    auto violations = validate_dataset(dataset);
    if (!violations.empty()) {
        std::string where;
        if (violations.front().row) where += " at row " + std::to_string(*violations.front().row + 1);
        throw DataError("invalid dataset: " + violations.front().message + where);
    }
    if (dataset.num_instances() < 1) throw DataError("dataset has no instances");
    if (dataset.num_classes() < 2) throw DataError("dataset needs at least two classes");
}

std::string ExperimentKey::label() const {
    return algorithm + "_" + std::to_string(hyperparameter_seed);
}

bool ExperimentKey::same_identity(const ExperimentKey& other) const noexcept {
    return toolkit == other.toolkit && algorithm == other.algorithm &&
           hyperparameter_seed == other.hyperparameter_seed;
}

Role Role::train(double weight) {
    if (!(weight > 0.0 && weight <= 1.0)) {
        throw DataError("training weight must lie in (0,1], got " + std::to_string(weight));
    }
    return Role{Kind::train, weight};
}

Role Role::from_cell(std::string_view cell) {
    if (cell == "?") return test();
    double w = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), w);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw DataError("bad role cell '" + std::string(cell) + "'");
    }
    if (w == 0.0) return filtered();
    return train(w);
}

std::string Role::to_cell() const {
    switch (kind_) {
    case Kind::test: return "?";
    case Kind::filtered: return "0";
    case Kind::train: break;
    }
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, weight_);
    return std::string(buf, end);
}

std::string PartitionKey::render() const {
    return toolkit + "_" + std::to_string(seed) + "_" + std::to_string(count) + "_" + std::to_string(fold);
}

namespace {

template <typename Int>
Int parse_integer(std::string_view s, std::string_view whole) {
    Int value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw DataError("bad partition key '" + std::string(whole) + "'");
    }
    return value;
}

} // namespace

PartitionKey PartitionKey::parse(std::string_view text) {
    std::string_view rest = text;
    std::string_view parts[3];
    for (int i = 2; i >= 0; --i) {
        auto pos = rest.rfind('_');
        if (pos == std::string_view::npos) throw DataError("bad partition key '" + std::string(text) + "'");
        parts[i] = rest.substr(pos + 1);
        rest = rest.substr(0, pos);
    }
    if (rest.empty()) throw DataError("bad partition key '" + std::string(text) + "'");
    PartitionKey key;
    key.toolkit = std::string(rest);
    key.seed = parse_integer<long long>(parts[0], text);
    key.count = parse_integer<int>(parts[1], text);
    key.fold = parse_integer<int>(parts[2], text);
    if (key.count < 0 || key.fold < 1) throw DataError("bad partition key '" + std::string(text) + "'");
    if (key.render() != text) throw DataError("non-canonical partition key '" + std::string(text) + "'");
    return key;
}

PartitionKey FoldAssignment::partition_key() const {
    struct Visitor {
        const FoldAssignment& f;
        PartitionKey operator()(const KFold& k) const {
            return {f.toolkit, f.partition_seed, k.num_folds, f.fold_index};
        }
        PartitionKey operator()(const PercentSplit& p) const {
            return {f.toolkit, f.partition_seed, p.test_percent, 1};
        }
        PartitionKey operator()(const FixedSplit&) const { return {f.toolkit, 0, 0, 1}; }
    };
    return std::visit(Visitor{*this}, scheme);
}

std::vector<std::size_t> FoldAssignment::test_instances() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < roles.size(); ++i) {
        if (roles[i].is_test()) out.push_back(i);
    }
    return out;
}

void require_kfold_coverage(std::span<const FoldAssignment> folds) {
    if (folds.empty()) throw DataError("no folds");
    const auto* kfold = std::get_if<KFold>(&folds.front().scheme);
    if (!kfold) return;
    const std::size_t n = folds.front().roles.size();
    std::vector<int> tested(n, 0);
    std::set<int> seen_folds;
    for (const auto& f : folds) {
        if (f.roles.size() != n) throw DataError("folds disagree on instance count");
        if (f.scheme != folds.front().scheme || f.toolkit != folds.front().toolkit ||
            f.partition_seed != folds.front().partition_seed) {
            throw DataError("folds belong to different partitions");
        }
        if (f.fold_index < 1 || f.fold_index > kfold->num_folds || !seen_folds.insert(f.fold_index).second) {
            throw DataError("bad or repeated fold index " + std::to_string(f.fold_index));
        }
        for (auto i : f.test_instances()) ++tested[i];
    }
    if (static_cast<int>(seen_folds.size()) != kfold->num_folds) {
        throw DataError("expected " + std::to_string(kfold->num_folds) + " folds, got " +
                        std::to_string(seen_folds.size()));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (tested[i] != 1) {
            throw DataError("instance " + std::to_string(i + 1) + " is tested " + std::to_string(tested[i]) +
                            " times across folds");
        }
    }
}

double aggregate_accuracy(std::span<const PredictionSet> prediction_sets,
                          std::span<const FoldAssignment> partitions, const Dataset& dataset) {
    std::size_t total = 0;
    std::size_t correct = 0;
    for (const auto& set : prediction_sets) {
        if (!set.experiment.same_identity(prediction_sets.front().experiment)) {
            throw DataError("prediction sets refer to different experiments");
        }
        auto part = std::find_if(partitions.begin(), partitions.end(),
                                 [&](const FoldAssignment& f) { return f.key() == set.partition; });
        if (part == partitions.end()) throw DataError("prediction/partition mismatch");
        for (const auto& [instance, predicted] : set.predictions) {
            if (instance >= part->roles.size() || !part->roles[instance].is_test() ||
                instance >= dataset.num_instances()) {
                throw DataError("prediction/partition mismatch");
            }
            ++total;
            if (predicted == dataset.label(instance)) ++correct;
        }
    }
    if (total == 0) throw DataError("no predictions to aggregate");
    return static_cast<double>(correct) / static_cast<double>(total);
}

std::string format_accuracy(double accuracy) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", accuracy * 100.0);
    return buf;
}

} // namespace metarepo
