#ifndef OSCAIL_NEIGHBORS_HPP
#define OSCAIL_NEIGHBORS_HPP

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "oscail/classifier.hpp"
#include "oscail/metrics.hpp"

namespace oscail {

// One-sided kNN, the D1/D2 ratio test. D1 is the mean distance from the
// test point to its m nearest stored targets; D2 is the mean, over those m
// neighbours, of each neighbour's mean distance to its own k nearest stored
// targets (itself excluded). Other iff D1/D2 > T.
class OsKnnClassifier final : public Classifier {
public:
    OsKnnClassifier(std::vector<std::vector<double>> stored_targets, int m, int k,
                    double threshold, Metric metric, NormalizationMode norm);

    const char* algorithm_id() const override { return "KNN"; }
    std::size_t arity() const override { return arity_; }
    Label predict(std::span<const double> x) const override;
    void write_state(std::ostream& out) const override;
    std::unique_ptr<Classifier> clone() const override {
        return std::make_unique<OsKnnClassifier>(*this);
    }

    // The D1/D2 ratio itself; the label flips from Target to Other once the
    // threshold drops below it.
    double decision_ratio(std::span<const double> x) const;

    const std::vector<std::vector<double>>& stored_targets() const { return stored_; }
    int m() const { return m_; }
    int k() const { return k_; }
    double threshold() const { return threshold_; }
    Metric metric() const { return metric_; }
    const NormalizationMode& normalization() const { return norm_; }

private:
    std::vector<std::vector<double>> stored_; // normalized, canonically sorted
    int m_;
    int k_;
    double threshold_;
    Metric metric_;
    NormalizationMode norm_;
    std::size_t arity_;
    std::vector<double> neighbour_mean_; // per stored point: mean distance to its k nearest
};

// Datta's positive-class rule: accept iff the distance to the nearest
// stored target is <= delta = max over stored points of the distance to
// their nearest other stored point.
class NnPcClassifier final : public Classifier {
public:
    NnPcClassifier(std::vector<std::vector<double>> stored_targets, Metric metric,
                   NormalizationMode norm);

    const char* algorithm_id() const override { return "NNPC"; }
    std::size_t arity() const override { return arity_; }
    Label predict(std::span<const double> x) const override;
    void write_state(std::ostream& out) const override;
    std::unique_ptr<Classifier> clone() const override {
        return std::make_unique<NnPcClassifier>(*this);
    }

    double delta() const { return delta_; }
    Metric metric() const { return metric_; }
    const std::vector<std::vector<double>>& stored_targets() const { return stored_; }
    const NormalizationMode& normalization() const { return norm_; }

private:
    std::vector<std::vector<double>> stored_;
    Metric metric_;
    NormalizationMode norm_;
    std::size_t arity_;
    double delta_;
};

// The two-class baseline: majority vote over the k nearest stored examples
// found by exact linear scan. Vote ties predict Target.
class BinaryKnnClassifier final : public Classifier {
public:
    BinaryKnnClassifier(std::vector<std::pair<std::vector<double>, Label>> stored, int k,
                        Metric metric, NormalizationMode norm);

    const char* algorithm_id() const override { return "2CKNN"; }
    std::size_t arity() const override { return arity_; }
    Label predict(std::span<const double> x) const override;
    void write_state(std::ostream& out) const override;
    std::unique_ptr<Classifier> clone() const override {
        return std::make_unique<BinaryKnnClassifier>(*this);
    }

    int k() const { return k_; }
    Metric metric() const { return metric_; }
    const std::vector<std::pair<std::vector<double>, Label>>& stored() const { return stored_; }

private:
    std::vector<std::pair<std::vector<double>, Label>> stored_;
    int k_;
    Metric metric_;
    NormalizationMode norm_;
    std::size_t arity_;
};

// Trainers. The one-sided trainers use only the Target rows of the view;
// Other rows are discarded. norm is applied to the stored vectors and
// recorded in the model.
OsKnnClassifier train_osknn(const IndexView& view, int m, int k, double threshold,
                            Metric metric, const NormalizationMode& norm = {});
NnPcClassifier train_nnpc(const IndexView& view, Metric metric,
                          const NormalizationMode& norm = {});
BinaryKnnClassifier train_binary_knn(const IndexView& view, int k, Metric metric,
                                     const NormalizationMode& norm = {});

} // namespace oscail

#endif
