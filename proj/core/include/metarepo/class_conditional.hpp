#pragma once

#include "metarepo/model.hpp"

#include <cstddef>
#include <vector>

namespace metarepo {

inline constexpr double kVarianceFloor = 1e-9;

/// p(x_i | class) for every non-class attribute.
///
/// Nominal attributes use Laplace smoothing, (count + 1) / (observed class count + categories),
/// where the class count excludes instances missing that attribute.
/// Numeric attributes use a Gaussian fit to the class's observed values
/// (population variance, floored at kVarianceFloor).
class ClassConditionalModel {
public:
    /// Probability (nominal) or density (numeric) of `value` under `cls`; 1 for a missing value.
    double conditional(std::size_t cls, std::size_t attribute, const Value& value) const;

    /// Product of the conditionals over the non-class attributes, numeric densities capped at 1.
    double likelihood(const Row& row, std::size_t cls) const;

    std::size_t num_classes() const noexcept { return per_class_.size(); }

private:
    friend ClassConditionalModel fit_class_conditionals(const Dataset& dataset);

    struct Numeric {
        double mean = 0.0;
        double variance = kVarianceFloor;
        bool observed = false;
    };
    /// Indexed by feature position.
    struct Table {
        std::vector<std::vector<double>> nominal;
        std::vector<Numeric> numeric;
    };

    std::vector<std::size_t> features_;
    /// attribute index -> feature position
    std::vector<std::size_t> position_;
    std::vector<Table> per_class_;
};

ClassConditionalModel fit_class_conditionals(const Dataset& dataset);

} // namespace metarepo
