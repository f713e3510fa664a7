#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace metarepo::testing {

double oracle_distance(const Dataset& dataset, std::size_t i, std::size_t j) {
    double sum = 0.0;
    for (std::size_t a = 0; a < dataset.attributes().size(); ++a) {
        if (a == dataset.class_index()) continue;
        const Value& x = dataset.row(i)[a];
        const Value& y = dataset.row(j)[a];
        double d = 0.0;
        if (x.is_missing() || y.is_missing()) {
            d = 1.0;
        } else if (dataset.attribute(a).is_nominal()) {
            d = x.category() == y.category() ? 0.0 : 1.0;
        } else {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (const auto& row : dataset.rows()) {
                if (row[a].is_missing()) continue;
                lo = std::min(lo, row[a].number());
                hi = std::max(hi, row[a].number());
            }
            const double range = hi - lo;
            d = range > 0.0 ? std::min(1.0, std::abs(x.number() - y.number()) / range) : 0.0;
        }
        sum += d * d;
    }
    return std::sqrt(sum);
}

double oracle_loo_1nn_error(const Dataset& dataset) {
    const std::size_t n = dataset.num_instances();
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = n;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = oracle_distance(dataset, i, j);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        if (dataset.label(best) != dataset.label(i)) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(n);
}

std::vector<double> oracle_kdn(const Dataset& dataset, std::size_t k) {
    const std::size_t n = dataset.num_instances();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, std::size_t>> all;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) all.emplace_back(oracle_distance(dataset, i, j), j);
        }
        std::sort(all.begin(), all.end());
        std::size_t disagree = 0;
        for (std::size_t m = 0; m < k; ++m) disagree += dataset.label(all[m].second) != dataset.label(i) ? 1 : 0;
        out[i] = static_cast<double>(disagree) / static_cast<double>(k);
    }
    return out;
}

double oracle_kruskal_weight(const Dataset& dataset) {
    const std::size_t n = dataset.num_instances();
    std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(oracle_distance(dataset, i, j), i, j);
    }
    std::sort(edges.begin(), edges.end());
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    double total = 0.0;
    for (const auto& [w, i, j] : edges) {
        const std::size_t a = find(i);
        const std::size_t b = find(j);
        if (a == b) continue;
        parent[a] = b;
        total += w;
    }
    return total;
}

std::optional<double> oracle_f1(const Dataset& dataset) {
    const std::size_t classes = dataset.num_classes();
    std::optional<double> best;
    for (std::size_t a = 0; a < dataset.attributes().size(); ++a) {
        if (a == dataset.class_index() || dataset.attribute(a).is_nominal()) continue;
        std::vector<double> sum(classes, 0.0);
        std::vector<double> count(classes, 0.0);
        for (std::size_t i = 0; i < dataset.num_instances(); ++i) {
            const Value& v = dataset.row(i)[a];
            if (v.is_missing()) continue;
            sum[dataset.label(i)] += v.number();
            count[dataset.label(i)] += 1.0;
        }
        std::vector<double> mean(classes, 0.0);
        std::vector<double> var(classes, 0.0);
        double total = 0.0;
        std::vector<std::size_t> present;
        for (std::size_t c = 0; c < classes; ++c) {
            if (count[c] == 0.0) continue;
            present.push_back(c);
            mean[c] = sum[c] / count[c];
            total += count[c];
        }
        if (present.size() < 2) continue;
        for (std::size_t i = 0; i < dataset.num_instances(); ++i) {
            const Value& v = dataset.row(i)[a];
            if (v.is_missing()) continue;
            const std::size_t c = dataset.label(i);
            var[c] += (v.number() - mean[c]) * (v.number() - mean[c]) / count[c];
        }
        double numerator = 0.0;
        double denominator = 0.0;
        if (present.size() == 2) {
            const std::size_t p = present[0];
            const std::size_t q = present[1];
            numerator = (mean[p] - mean[q]) * (mean[p] - mean[q]);
            denominator = var[p] + var[q];
        } else {
            for (std::size_t x = 0; x < present.size(); ++x) {
                const std::size_t ci = present[x];
                denominator += count[ci] / total * var[ci];
                for (std::size_t y = x + 1; y < present.size(); ++y) {
                    const std::size_t cj = present[y];
                    numerator += count[ci] / total * count[cj] / total * (mean[ci] - mean[cj]) * (mean[ci] - mean[cj]);
                }
            }
        }
        double ratio;
        if (denominator == 0.0) {
            ratio = numerator == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        } else {
            ratio = numerator / denominator;
        }
        if (!best || ratio > *best) best = ratio;
    }
    return best;
}

double oracle_entropy(const Dataset& dataset) {
    std::vector<double> histogram(dataset.num_classes(), 0.0);
    for (std::size_t i = 0; i < dataset.num_instances(); ++i) histogram[dataset.label(i)] += 1.0;
    double h = 0.0;
    for (double count : histogram) {
        if (count == 0.0) continue;
        const double p = count / static_cast<double>(dataset.num_instances());
        h -= p * std::log2(p);
    }
    return h;
}

} // namespace metarepo::testing
