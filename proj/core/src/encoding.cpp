#include "metarepo/encoding.hpp"

#include <algorithm>
#include <limits>

namespace metarepo {

FeatureEncoder::FeatureEncoder(const Dataset& fitting) {
    for (std::size_t a : fitting.feature_indices()) {
        const AttributeSpec& attr = fitting.attribute(a);
        Slot slot{a, attr.is_nominal(), width_, 0, 0.0, 0.0, 0.0};
        if (slot.nominal) {
            slot.categories = attr.categories.size();
            width_ += slot.categories + 1;
        } else {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            double sum = 0.0;
            std::size_t count = 0;
            for (const auto& row : fitting.rows()) {
                if (!row[a].is_numeric()) continue;
                lo = std::min(lo, row[a].number());
                hi = std::max(hi, row[a].number());
                sum += row[a].number();
                ++count;
            }
            if (count > 0) {
                slot.min = lo;
                slot.range = hi - lo;
                slot.mean = sum / static_cast<double>(count);
            }
            width_ += 1;
        }
        slots_.push_back(slot);
    }
}

std::vector<double> FeatureEncoder::encode(const Row& row) const {
    std::vector<double> out(width_, 0.0);
    for (const Slot& s : slots_) {
        const Value& v = row[s.attribute];
        if (s.nominal) {
            const std::size_t hot = v.is_nominal() && v.category() < s.categories ? v.category() : s.categories;
            out[s.offset + hot] = 1.0;
        } else {
            const double x = v.is_numeric() ? v.number() : s.mean;
            out[s.offset] = s.range > 0.0 ? (x - s.min) / s.range : 0.0;
        }
    }
    return out;
}

} // namespace metarepo
