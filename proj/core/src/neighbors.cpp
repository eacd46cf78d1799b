#include "oscail/neighbors.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "state_io.hpp"

namespace oscail {

namespace {

// Stored vectors are sorted lexicographically when a model is built, and
// neighbour ties resolve by (distance, index). Predictions are therefore
// independent of the order the training rows arrived in.
void canonical_sort(std::vector<std::vector<double>>& vs) {
    std::sort(vs.begin(), vs.end());
}

// Indices of the n nearest entries to x, self_index excluded, ordered by
// (distance, index).
template <typename DistFn>
std::vector<std::size_t> nearest(std::size_t count, std::size_t n, DistFn&& dist_to,
                                 std::ptrdiff_t self_index = -1) {
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (static_cast<std::ptrdiff_t>(i) == self_index) continue;
        order.emplace_back(dist_to(i), i);
    }
    n = std::min(n, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end());
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = order[i].second;
    return out;
}

std::vector<std::vector<double>> collect_targets(const IndexView& view,
                                                 const NormalizationMode& norm) {
    std::vector<std::vector<double>> vs;
    for (std::size_t i = 0; i < view.size(); ++i)
        if (view.is_target(i)) vs.push_back(apply_normalization(norm, view.features(i)));
    return vs;
}

} // namespace

OsKnnClassifier::OsKnnClassifier(std::vector<std::vector<double>> stored_targets, int m, int k,
                                 double threshold, Metric metric, NormalizationMode norm)
    : stored_(std::move(stored_targets)),
      m_(m),
      k_(k),
      threshold_(threshold),
      metric_(metric),
      norm_(std::move(norm)) {
    if (m_ < 1 || k_ < 1) throw std::invalid_argument("one-sided kNN: m and k must be >= 1");
    if (!(threshold_ > 0.0)) throw std::invalid_argument("one-sided kNN: threshold must be > 0");
    const std::size_t need = std::max<std::size_t>(static_cast<std::size_t>(m_),
                                                   static_cast<std::size_t>(k_) + 1);
    if (stored_.size() < need)
        throw std::invalid_argument("one-sided kNN: needs at least " + std::to_string(need) +
                                    " target examples, got " + std::to_string(stored_.size()));
    canonical_sort(stored_);
    arity_ = stored_.front().size();

    // Each stored point's mean distance to its own k nearest stored targets
    // (itself excluded) is fixed once trained; precompute it for D2.
    neighbour_mean_.resize(stored_.size());
    for (std::size_t i = 0; i < stored_.size(); ++i) {
        auto nn = nearest(stored_.size(), static_cast<std::size_t>(k_),
                          [&](std::size_t j) { return distance(metric_, stored_[i], stored_[j]); },
                          static_cast<std::ptrdiff_t>(i));
        double sum = 0.0;
        for (std::size_t j : nn) sum += distance(metric_, stored_[i], stored_[j]);
        neighbour_mean_[i] = sum / static_cast<double>(nn.size());
    }
}

double OsKnnClassifier::decision_ratio(std::span<const double> x) const {
    const std::vector<double> q = prepare_input(norm_, arity_, x);
    auto nn = nearest(stored_.size(), static_cast<std::size_t>(m_),
                      [&](std::size_t j) { return distance(metric_, q, stored_[j]); });
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t j : nn) {
        d1 += distance(metric_, q, stored_[j]);
        d2 += neighbour_mean_[j];
    }
    d1 /= static_cast<double>(nn.size());
    d2 /= static_cast<double>(nn.size());
    if (d2 == 0.0) {
        // All relevant neighbours coincide; the ratio's limit accepts only
        // an exact hit.
        return d1 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return d1 / d2;
}

Label OsKnnClassifier::predict(std::span<const double> x) const {
    return decision_ratio(x) > threshold_ ? Label::Other : Label::Target;
}

void OsKnnClassifier::write_state(std::ostream& out) const {
    out << "[hyperparameters]\n";
    out << "m " << m_ << '\n';
    out << "k " << k_ << '\n';
    out << "threshold " << fmt_double(threshold_) << '\n';
    out << "metric " << metric_letter(metric_) << '\n';
    detail::write_normalization(out, norm_);
    out << "[state]\n";
    out << "targets " << stored_.size() << ' ' << arity_ << '\n';
    for (const auto& v : stored_) detail::write_vector_row(out, v);
}

NnPcClassifier::NnPcClassifier(std::vector<std::vector<double>> stored_targets, Metric metric,
                               NormalizationMode norm)
    : stored_(std::move(stored_targets)), metric_(metric), norm_(std::move(norm)) {
    if (stored_.size() < 2)
        throw std::invalid_argument("NN-PC: needs at least 2 target examples");
    canonical_sort(stored_);
    arity_ = stored_.front().size();

    // delta = Max over stored x of Min over stored y != x of distance(x, y).
    delta_ = 0.0;
    for (std::size_t i = 0; i < stored_.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < stored_.size(); ++j) {
            if (j == i) continue;
            best = std::min(best, distance(metric_, stored_[i], stored_[j]));
        }
        delta_ = std::max(delta_, best);
    }
}

Label NnPcClassifier::predict(std::span<const double> x) const {
    const std::vector<double> q = prepare_input(norm_, arity_, x);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : stored_) best = std::min(best, distance(metric_, q, t));
    // Accept at equality so the stored training points classify as Target.
    return best <= delta_ ? Label::Target : Label::Other;
}

void NnPcClassifier::write_state(std::ostream& out) const {
    out << "[hyperparameters]\n";
    out << "metric " << metric_letter(metric_) << '\n';
    detail::write_normalization(out, norm_);
    out << "[state]\n";
    out << "delta " << fmt_double(delta_) << '\n';
    out << "targets " << stored_.size() << ' ' << arity_ << '\n';
    for (const auto& v : stored_) detail::write_vector_row(out, v);
}

BinaryKnnClassifier::BinaryKnnClassifier(std::vector<std::pair<std::vector<double>, Label>> stored,
                                         int k, Metric metric, NormalizationMode norm)
    : stored_(std::move(stored)), k_(k), metric_(metric), norm_(std::move(norm)) {
    if (k_ < 1) throw std::invalid_argument("two-class kNN: k must be >= 1");
    if (stored_.size() < static_cast<std::size_t>(k_))
        throw std::invalid_argument("two-class kNN: fewer stored examples than k");
    bool any_target = false, any_other = false;
    for (const auto& [v, lab] : stored_)
        (lab == Label::Target ? any_target : any_other) = true;
    if (!any_target || !any_other)
        throw std::invalid_argument("two-class kNN: both labels must be present in training data");
    std::sort(stored_.begin(), stored_.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second == Label::Target && b.second == Label::Other;
    });
    arity_ = stored_.front().first.size();
}

Label BinaryKnnClassifier::predict(std::span<const double> x) const {
    const std::vector<double> q = prepare_input(norm_, arity_, x);
    auto nn = nearest(stored_.size(), static_cast<std::size_t>(k_),
                      [&](std::size_t j) { return distance(metric_, q, stored_[j].first); });
    int target_votes = 0;
    for (std::size_t j : nn)
        if (stored_[j].second == Label::Target) ++target_votes;
    return 2 * target_votes >= static_cast<int>(nn.size()) ? Label::Target : Label::Other;
}

void BinaryKnnClassifier::write_state(std::ostream& out) const {
    out << "[hyperparameters]\n";
    out << "k " << k_ << '\n';
    out << "metric " << metric_letter(metric_) << '\n';
    detail::write_normalization(out, norm_);
    out << "[state]\n";
    out << "stored " << stored_.size() << ' ' << arity_ << '\n';
    for (const auto& [v, lab] : stored_) {
        out << (lab == Label::Target ? kTargetToken : kOtherToken) << ' ';
        detail::write_vector_row(out, v);
    }
}

OsKnnClassifier train_osknn(const IndexView& view, int m, int k, double threshold,
                            Metric metric, const NormalizationMode& norm) {
    return OsKnnClassifier(collect_targets(view, norm), m, k, threshold, metric, norm);
}

NnPcClassifier train_nnpc(const IndexView& view, Metric metric, const NormalizationMode& norm) {
    return NnPcClassifier(collect_targets(view, norm), metric, norm);
}

BinaryKnnClassifier train_binary_knn(const IndexView& view, int k, Metric metric,
                                     const NormalizationMode& norm) {
    std::vector<std::pair<std::vector<double>, Label>> stored;
    stored.reserve(view.size());
    for (std::size_t i = 0; i < view.size(); ++i) {
        const std::string& lab = view.label(i);
        if (lab != kTargetToken && lab != kOtherToken)
            throw std::invalid_argument("two-class kNN: label '" + lab +
                                        "' is neither Target nor Other");
        stored.emplace_back(apply_normalization(norm, view.features(i)),
                            lab == kTargetToken ? Label::Target : Label::Other);
    }
    return BinaryKnnClassifier(std::move(stored), k, metric, norm);
}

} // namespace oscail
