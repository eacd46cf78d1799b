#ifndef OSCAIL_METRICS_HPP
#define OSCAIL_METRICS_HPP

#include <cstdint>
#include <span>
#include <string>

#include "oscail/dataset.hpp"

namespace oscail {

enum class Metric { Euclidean, Manhattan, Cosine };

// Metric letters as used on the -D switch: e, m, c.
char metric_letter(Metric m);
Metric metric_from_letter(char c);

// Cosine is exposed as 1 - similarity so all three share the
// smaller-is-closer contract. Cosine rejects zero vectors.
double distance(Metric metric, std::span<const double> a, std::span<const double> b);

// Target is the positive class: rows are actual labels, columns predictions.
struct ConfusionMatrix {
    std::int64_t tp = 0; // Target predicted Target
    std::int64_t fn = 0; // Target predicted Other
    std::int64_t fp = 0; // Other predicted Target
    std::int64_t tn = 0; // Other predicted Other

    std::int64_t total() const { return tp + fn + fp + tn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

struct EvalReport {
    ConfusionMatrix matrix;
    double error = 0.0;
    double sensitivity = 1.0; // tp / (tp + fn); 1 when no positives present
    double specificity = 1.0; // tn / (tn + fp); 1 when no negatives present
    double bar = 1.0;         // (sensitivity + specificity) / 2
    double ber = 0.0;         // 1 - bar
    bool degenerate = false;  // a rate had an empty denominator
};

EvalReport evaluate(std::span<const Label> predictions, std::span<const Label> truths);
EvalReport report_from_matrix(const ConfusionMatrix& m);

// The confusion table layout used on the result stream and in log files.
std::string render_confusion(const ConfusionMatrix& m);

} // namespace oscail

#endif
