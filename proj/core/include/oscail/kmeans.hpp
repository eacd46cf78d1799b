#ifndef OSCAIL_KMEANS_HPP
#define OSCAIL_KMEANS_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "oscail/classifier.hpp"
#include "oscail/metrics.hpp"

namespace oscail {

// One-sided k-Means: Lloyd clustering of the target examples, then a test
// point is a Target iff the distance to its nearest centroid is within the
// threshold.
class KMeansClassifier final : public Classifier {
public:
    KMeansClassifier(std::vector<std::vector<double>> centroids, double threshold,
                     Metric metric, NormalizationMode norm);

    const char* algorithm_id() const override { return "KMEANS"; }
    std::size_t arity() const override { return arity_; }
    Label predict(std::span<const double> x) const override;
    void write_state(std::ostream& out) const override;
    std::unique_ptr<Classifier> clone() const override {
        return std::make_unique<KMeansClassifier>(*this);
    }

    double nearest_centroid_distance(std::span<const double> x) const;

    const std::vector<std::vector<double>>& centroids() const { return centroids_; }
    double threshold() const { return threshold_; }
    Metric metric() const { return metric_; }
    const NormalizationMode& normalization() const { return norm_; }

private:
    std::vector<std::vector<double>> centroids_;
    double threshold_;
    Metric metric_;
    NormalizationMode norm_;
    std::size_t arity_;
};

struct KMeansTrace {
    std::vector<double> objective_per_iteration; // sum of squared distances
};

// Lloyd's algorithm on the Target rows only. Initial centroids are C
// distinct target points drawn by the seeded generator; assignment uses
// squared euclidean distance and iteration stops when assignments are
// unchanged or after max_iter rounds. An emptied cluster is reseeded to the
// point farthest from its nearest surviving centroid.
std::vector<std::vector<double>> lloyd_cluster(const std::vector<std::vector<double>>& points,
                                               int clusters, std::uint64_t seed,
                                               int max_iter = 100,
                                               KMeansTrace* trace = nullptr,
                                               std::vector<int>* assignment_out = nullptr);

KMeansClassifier train_kmeans(const IndexView& view, int clusters, double threshold,
                              std::uint64_t seed, Metric metric = Metric::Euclidean,
                              const NormalizationMode& norm = {}, KMeansTrace* trace = nullptr);

} // namespace oscail

#endif
