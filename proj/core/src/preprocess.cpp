#include "oscail/preprocess.hpp"

#include <algorithm>
#include <stdexcept>

namespace oscail {

std::vector<double> normalize_instance(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("normalize_instance: empty vector");
    const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
    const double lo = *lo_it, hi = *hi_it;
    std::vector<double> out(x.size());
    if (hi == lo) return out; // degenerate: all zeros
    const double span = hi - lo;
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - lo) / span;
    return out;
}

NormalizationMode fit_attribute_norm(const IndexView& train) {
    if (train.empty()) throw std::invalid_argument("fit_attribute_norm: empty training view");
    const std::size_t d = train.parent().feature_count();
    NormalizationMode mode;
    mode.kind = NormalizationKind::PerAttribute;
    mode.mins.assign(d, 0.0);
    mode.maxs.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        double lo = train.features(0)[j], hi = lo;
        for (std::size_t i = 1; i < train.size(); ++i) {
            const double v = train.features(i)[j];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        mode.mins[j] = lo;
        mode.maxs[j] = hi;
    }
    return mode;
}

std::vector<double> apply_attribute_norm(const NormalizationMode& mode,
                                         std::span<const double> x) {
    if (mode.kind != NormalizationKind::PerAttribute)
        throw std::invalid_argument("apply_attribute_norm: mode is not per-attribute");
    if (x.size() != mode.mins.size())
        throw std::invalid_argument("apply_attribute_norm: expected " +
                                    std::to_string(mode.mins.size()) + " features, got " +
                                    std::to_string(x.size()));
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double span = mode.maxs[j] - mode.mins[j];
        out[j] = span == 0.0 ? 0.0 : (x[j] - mode.mins[j]) / span;
    }
    return out;
}

std::vector<double> apply_normalization(const NormalizationMode& mode,
                                        std::span<const double> x) {
    switch (mode.kind) {
        case NormalizationKind::None:
            return std::vector<double>(x.begin(), x.end());
        case NormalizationKind::PerInstance:
            return normalize_instance(x);
        case NormalizationKind::PerAttribute:
            return apply_attribute_norm(mode, x);
    }
    throw std::logic_error("apply_normalization: bad mode");
}

std::vector<double> prepare_input(const NormalizationMode& mode, std::size_t arity,
                                  std::span<const double> x) {
    if (x.size() != arity)
        throw std::invalid_argument("feature vector has arity " + std::to_string(x.size()) +
                                    " but the model expects " + std::to_string(arity));
    return apply_normalization(mode, x);
}

} // namespace oscail
