#include "metarepo/distance.hpp"

#include "metarepo/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace metarepo {

DistanceMetric::DistanceMetric(const Dataset& reference) : features_(reference.feature_indices()) {
    const std::size_t f = features_.size();
    nominal_.resize(f);
    min_.assign(f, 0.0);
    range_.assign(f, 0.0);
    for (std::size_t k = 0; k < f; ++k) {
        const std::size_t a = features_[k];
        nominal_[k] = reference.attribute(a).is_nominal();
        if (nominal_[k]) continue;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& row : reference.rows()) {
            if (!row[a].is_numeric()) continue;
            lo = std::min(lo, row[a].number());
            hi = std::max(hi, row[a].number());
        }
        if (lo <= hi) {
            min_[k] = lo;
            range_[k] = hi - lo;
        }
    }
}

double DistanceMetric::operator()(const Row& a, const Row& b) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < features_.size(); ++k) {
        const Value& x = a[features_[k]];
        const Value& y = b[features_[k]];
        double d;
        if (x.is_missing() || y.is_missing()) {
            d = 1.0;
        } else if (nominal_[k]) {
            d = x.category() == y.category() ? 0.0 : 1.0;
        } else if (range_[k] > 0.0) {
            d = std::min(1.0, std::abs(x.number() - y.number()) / range_[k]);
        } else {
            d = 0.0;
        }
        sum += d * d;
    }
    return std::sqrt(sum);
}

double DistanceMetric::max_distance() const { return std::sqrt(static_cast<double>(features_.size())); }

DistanceMatrix::DistanceMatrix(const Dataset& dataset, const DistanceMetric& metric)
    : n_(dataset.num_instances()), d_(n_ * n_, 0.0) {
    const auto rows = dataset.rows();
    for (std::size_t i = 0; i < n_; ++i) {
        d_[i * n_ + i] = metric(rows[i], rows[i]);
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double d = metric(rows[i], rows[j]);
            d_[i * n_ + j] = d;
            d_[j * n_ + i] = d;
        }
    }
}

DistanceMatrix::DistanceMatrix(const Dataset& dataset) : DistanceMatrix(dataset, DistanceMetric(dataset)) {}

std::vector<std::size_t> nearest_neighbors(const DistanceMatrix& distances, std::size_t i, std::size_t k) {
    std::vector<std::size_t> others;
    others.reserve(distances.size());
    for (std::size_t j = 0; j < distances.size(); ++j) {
        if (j != i) others.push_back(j);
    }
    k = std::min(k, others.size());
    auto closer = [&](std::size_t a, std::size_t b) {
        const double da = distances(i, a);
        const double db = distances(i, b);
        return da < db || (da == db && a < b);
    };
    std::partial_sort(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(k), others.end(), closer);
    others.resize(k);
    return others;
}

std::size_t nearest_instance(const Dataset& reference, const DistanceMetric& metric, const Row& row) {
    if (reference.num_instances() == 0) throw DataError("empty reference set");
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    const auto rows = reference.rows();
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const double d = metric(row, rows[j]);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

double loo_1nn_error(const Dataset& dataset, const DistanceMatrix& distances) {
    const std::size_t n = dataset.num_instances();
    if (n < 2) throw DataError("leave-one-out 1-NN needs at least two instances");
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = i == 0 ? 1 : 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            if (distances(i, j) < distances(i, best)) best = j;
        }
        if (dataset.label(best) != dataset.label(i)) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(n);
}

double loo_1nn_error(const Dataset& dataset, const DistanceMetric& metric) {
    return loo_1nn_error(dataset, DistanceMatrix(dataset, metric));
}

} // namespace metarepo
