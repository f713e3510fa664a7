#pragma once

#include "metarepo/model.hpp"

#include <cstddef>
#include <vector>

namespace metarepo {

/// Maps rows to dense real vectors for the linear learners.
///
/// Numeric attributes are min-max scaled against the fitting data, with
/// missing values imputed by the observed mean. Nominal attributes are
/// one-hot encoded with one extra slot for a missing value.
class FeatureEncoder {
public:
    explicit FeatureEncoder(const Dataset& fitting);

    std::size_t width() const noexcept { return width_; }
    std::vector<double> encode(const Row& row) const;

private:
    struct Slot {
        std::size_t attribute;
        bool nominal;
        std::size_t offset;
        std::size_t categories;
        double min;
        double range;
        double mean;
    };
    std::vector<Slot> slots_;
    std::size_t width_ = 0;
};

} // namespace metarepo
