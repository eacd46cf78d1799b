#include "oscail/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "oscail/rng.hpp"
#include "state_io.hpp"

namespace oscail {

namespace {

double sq_euclidean(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

std::vector<std::vector<double>> collect_targets(const IndexView& view,
                                                 const NormalizationMode& norm) {
    std::vector<std::vector<double>> vs;
    for (std::size_t i = 0; i < view.size(); ++i)
        if (view.is_target(i)) vs.push_back(apply_normalization(norm, view.features(i)));
    return vs;
}

} // namespace

std::vector<std::vector<double>> lloyd_cluster(const std::vector<std::vector<double>>& points,
                                               int clusters, std::uint64_t seed, int max_iter,
                                               KMeansTrace* trace,
                                               std::vector<int>* assignment_out) {
    if (clusters < 1) throw std::invalid_argument("k-means: cluster count must be >= 1");
    const std::size_t n = points.size();
    const std::size_t c = static_cast<std::size_t>(clusters);
    if (n < c)
        throw std::invalid_argument("k-means: " + std::to_string(clusters) +
                                    " clusters requested but only " + std::to_string(n) +
                                    " target examples available");
    const std::size_t d = points.front().size();

    // Forgy initialization: C distinct points sampled without replacement.
    std::vector<std::int32_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::int32_t>(i);
    SplitMix64 rng(seed);
    rng.shuffle(order);
    std::vector<std::vector<double>> centroids(c);
    for (std::size_t k = 0; k < c; ++k) centroids[k] = points[static_cast<std::size_t>(order[k])];

    std::vector<int> assignment(n, -1);
    auto assign_all = [&]() {
        bool changed = false;
        double objective = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_euclidean(points[i], centroids[0]);
            for (std::size_t k = 1; k < c; ++k) {
                const double dk = sq_euclidean(points[i], centroids[k]);
                if (dk < best_d) { // ties keep the lowest centroid index
                    best_d = dk;
                    best = static_cast<int>(k);
                }
            }
            objective += best_d;
            if (assignment[i] != best) {
                assignment[i] = best;
                changed = true;
            }
        }
        if (trace) trace->objective_per_iteration.push_back(objective);
        return changed;
    };

    assign_all();
    for (int iter = 0; iter < max_iter; ++iter) {
        // Mean update.
        std::vector<std::vector<double>> sums(c, std::vector<double>(d, 0.0));
        std::vector<std::size_t> counts(c, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(assignment[i]);
            for (std::size_t j = 0; j < d; ++j) sums[k][j] += points[i][j];
            ++counts[k];
        }
        for (std::size_t k = 0; k < c; ++k) {
            if (counts[k] == 0) continue;
            for (std::size_t j = 0; j < d; ++j)
                centroids[k][j] = sums[k][j] / static_cast<double>(counts[k]);
        }
        // Reseed any emptied cluster to the point farthest from its nearest
        // surviving centroid.
        for (std::size_t k = 0; k < c; ++k) {
            if (counts[k] != 0) continue;
            double far_d = -1.0;
            std::size_t far_i = 0;
            for (std::size_t i = 0; i < n; ++i) {
                double near_d = std::numeric_limits<double>::infinity();
                for (std::size_t k2 = 0; k2 < c; ++k2) {
                    if (counts[k2] == 0) continue;
                    near_d = std::min(near_d, sq_euclidean(points[i], centroids[k2]));
                }
                if (near_d > far_d) {
                    far_d = near_d;
                    far_i = i;
                }
            }
            centroids[k] = points[far_i];
            counts[k] = 1; // occupied from now on
        }
        if (!assign_all()) break;
    }
    if (assignment_out) *assignment_out = assignment;
    return centroids;
}

KMeansClassifier::KMeansClassifier(std::vector<std::vector<double>> centroids, double threshold,
                                   Metric metric, NormalizationMode norm)
    : centroids_(std::move(centroids)),
      threshold_(threshold),
      metric_(metric),
      norm_(std::move(norm)) {
    if (centroids_.empty()) throw std::invalid_argument("k-means: no centroids");
    if (!(threshold_ > 0.0)) throw std::invalid_argument("k-means: threshold must be > 0");
    arity_ = centroids_.front().size();
}

double KMeansClassifier::nearest_centroid_distance(std::span<const double> x) const {
    const std::vector<double> q = prepare_input(norm_, arity_, x);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& mu : centroids_) best = std::min(best, distance(metric_, q, mu));
    return best;
}

Label KMeansClassifier::predict(std::span<const double> x) const {
    return nearest_centroid_distance(x) <= threshold_ ? Label::Target : Label::Other;
}

void KMeansClassifier::write_state(std::ostream& out) const {
    out << "[hyperparameters]\n";
    out << "clusters " << centroids_.size() << '\n';
    out << "threshold " << fmt_double(threshold_) << '\n';
    out << "metric " << metric_letter(metric_) << '\n';
    detail::write_normalization(out, norm_);
    out << "[state]\n";
    out << "centroids " << centroids_.size() << ' ' << arity_ << '\n';
    for (const auto& mu : centroids_) detail::write_vector_row(out, mu);
}

KMeansClassifier train_kmeans(const IndexView& view, int clusters, double threshold,
                              std::uint64_t seed, Metric metric, const NormalizationMode& norm,
                              KMeansTrace* trace) {
    auto targets = collect_targets(view, norm);
    auto centroids = lloyd_cluster(targets, clusters, seed, 100, trace);
    return KMeansClassifier(std::move(centroids), threshold, metric, norm);
}

} // namespace oscail
