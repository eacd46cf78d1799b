#include "oscail/metrics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace oscail {

char metric_letter(Metric m) {
    switch (m) {
        case Metric::Euclidean: return 'e';
        case Metric::Manhattan: return 'm';
        case Metric::Cosine: return 'c';
    }
    throw std::logic_error("metric_letter: bad metric");
}

Metric metric_from_letter(char c) {
    switch (c) {
        case 'e': case 'E': return Metric::Euclidean;
        case 'm': case 'M': return Metric::Manhattan;
        case 'c': case 'C': return Metric::Cosine;
    }
    throw std::invalid_argument(std::string("unknown distance metric letter '") + c + "'");
}

double distance(Metric metric, std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("distance: vectors have arity " + std::to_string(a.size()) +
                                    " and " + std::to_string(b.size()));
    switch (metric) {
        case Metric::Euclidean: {
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double d = a[i] - b[i];
                s += d * d;
            }
            return std::sqrt(s);
        }
        case Metric::Manhattan: {
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
            return s;
        }
        case Metric::Cosine: {
            double dot = 0.0, na = 0.0, nb = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                dot += a[i] * b[i];
                na += a[i] * a[i];
                nb += b[i] * b[i];
            }
            if (na == 0.0 || nb == 0.0)
                throw std::invalid_argument("cosine distance is undefined for zero vectors");
            return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
        }
    }
    throw std::logic_error("distance: bad metric");
}

EvalReport report_from_matrix(const ConfusionMatrix& m) {
    if (m.total() == 0) throw std::invalid_argument("evaluate: no predictions");
    EvalReport r;
    r.matrix = m;
    r.error = static_cast<double>(m.fp + m.fn) / static_cast<double>(m.total());
    if (m.tp + m.fn > 0) {
        r.sensitivity = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
    } else {
        r.sensitivity = 1.0;
        r.degenerate = true;
    }
    if (m.tn + m.fp > 0) {
        r.specificity = static_cast<double>(m.tn) / static_cast<double>(m.tn + m.fp);
    } else {
        r.specificity = 1.0;
        r.degenerate = true;
    }
    r.bar = (r.sensitivity + r.specificity) / 2.0;
    r.ber = 1.0 - r.bar;
    return r;
}

EvalReport evaluate(std::span<const Label> predictions, std::span<const Label> truths) {
    if (predictions.size() != truths.size())
        throw std::invalid_argument("evaluate: " + std::to_string(predictions.size()) +
                                    " predictions vs " + std::to_string(truths.size()) +
                                    " truths");
    ConfusionMatrix m;
    for (std::size_t i = 0; i < truths.size(); ++i) {
        if (truths[i] == Label::Target)
            (predictions[i] == Label::Target ? m.tp : m.fn)++;
        else
            (predictions[i] == Label::Target ? m.fp : m.tn)++;
    }
    return report_from_matrix(m);
}

std::string render_confusion(const ConfusionMatrix& m) {
    std::ostringstream out;
    auto pad = [](std::string s, std::size_t width) {
        while (s.size() < width) s += ' ';
        return s;
    };
    auto row = [&](const std::string& a, const std::string& b, const std::string& c) {
        out << "| " << pad(a, 10) << "| " << pad(b, 19) << "| " << pad(c, 18) << "|\n";
    };
    auto cell = [](std::int64_t v) { return "     " + std::to_string(v); };
    const std::string rule = "|-----------|--------------------|-------------------|\n";
    out << rule;
    row("", "Target predictions", "Other Predictions");
    out << rule;
    row("Target", cell(m.tp), cell(m.fn));
    out << rule;
    row("Other", cell(m.fp), cell(m.tn));
    out << rule;
    return out.str();
}

} // namespace oscail
