#ifndef OSCAIL_PREPROCESS_HPP
#define OSCAIL_PREPROCESS_HPP

#include <span>
#include <vector>

#include "oscail/dataset.hpp"

namespace oscail {

enum class NormalizationKind { None, PerInstance, PerAttribute };

// Carried inside every trained model so prediction applies the identical
// transform the training vectors saw. PerAttribute holds the per-column
// (min, max) fitted on training data only.
struct NormalizationMode {
    NormalizationKind kind = NormalizationKind::None;
    std::vector<double> mins; // PerAttribute only
    std::vector<double> maxs;

    bool operator==(const NormalizationMode&) const = default;
};

// Rescales one instance into [0, 1]: v -> (v - min) / (max - min). A
// constant vector maps to all zeros.
std::vector<double> normalize_instance(std::span<const double> x);

// Column ranges from the training view only; applying to out-of-range test
// values is not clamped. A constant training column maps to 0 everywhere.
NormalizationMode fit_attribute_norm(const IndexView& train);
std::vector<double> apply_attribute_norm(const NormalizationMode& mode,
                                         std::span<const double> x);

// Dispatch on the mode; None copies through.
std::vector<double> apply_normalization(const NormalizationMode& mode,
                                        std::span<const double> x);

// Arity check against the model's expected feature count, then the mode.
std::vector<double> prepare_input(const NormalizationMode& mode, std::size_t arity,
                                  std::span<const double> x);

} // namespace oscail

#endif
