#ifndef OSCAIL_OCSVM_HPP
#define OSCAIL_OCSVM_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "oscail/classifier.hpp"

namespace oscail {

struct KernelSpec {
    enum class Kind { Gaussian, Polynomial };
    Kind kind = Kind::Gaussian;
    double sigma = 1.0;    // gaussian width
    double exponent = 1.0; // polynomial degree

    bool operator==(const KernelSpec&) const = default;
};

// gaussian: exp(-|x-y|^2 / (2 sigma^2)); polynomial: (x . y)^p.
double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y);

struct OcSvmOptions {
    // Stop when the maximal KKT violation drops below this. The gradient is
    // normalized (sum of alpha is 1), so this is an absolute scale; the
    // tight default keeps small-instance solutions within 1e-3 of the dense
    // optimum in every coefficient.
    double kkt_tol = 1e-6;
    int max_passes = 10000; // passes over the data; one pass = l pair steps
    // When set, the dual objective is appended after every pair step.
    std::vector<double>* objective_trace = nullptr;
};

// Schoelkopf's one-class SVM. Training solves the dual
//   minimize 1/2 sum_ij a_i a_j K(x_i, x_j)
//   subject to 0 <= a_i <= 1/(nu l), sum_i a_i = 1
// by pairwise coordinate steps on the maximally KKT-violating pair. rho is
// the mean of sum_j a_j K(x_j, x_i) over the unbounded support vectors, and
// f(x) = sum_i a_i K(x_i, x) - rho classifies Target iff f(x) >= 0.
class OcSvmClassifier final : public Classifier {
public:
    OcSvmClassifier(std::vector<std::vector<double>> support_vectors,
                    std::vector<double> coefficients, double rho, double nu,
                    KernelSpec kernel, NormalizationMode norm);

    const char* algorithm_id() const override { return "SVM"; }
    std::size_t arity() const override { return arity_; }
    Label predict(std::span<const double> x) const override;
    void write_state(std::ostream& out) const override;
    std::unique_ptr<Classifier> clone() const override {
        return std::make_unique<OcSvmClassifier>(*this);
    }

    double decision_value(std::span<const double> x) const;

    const std::vector<std::vector<double>>& support_vectors() const { return support_; }
    const std::vector<double>& coefficients() const { return alpha_; }
    double rho() const { return rho_; }
    double nu() const { return nu_; }
    const KernelSpec& kernel() const { return kernel_; }
    const NormalizationMode& normalization() const { return norm_; }

private:
    std::vector<std::vector<double>> support_;
    std::vector<double> alpha_;
    double rho_;
    double nu_;
    KernelSpec kernel_;
    NormalizationMode norm_;
    std::size_t arity_;
};

OcSvmClassifier train_ocsvm(const IndexView& view, double nu, const KernelSpec& kernel,
                            const NormalizationMode& norm = {}, const OcSvmOptions& opts = {});

// Same solver on an explicit point list; exposed for the multi-cluster
// variant and the tests.
OcSvmClassifier train_ocsvm_points(const std::vector<std::vector<double>>& points, double nu,
                                   const KernelSpec& kernel, const NormalizationMode& norm = {},
                                   const OcSvmOptions& opts = {});

// Multi-cluster variant: the targets are k-means clustered, one OcSvm is
// trained per cluster, and a point is a Target iff any cluster accepts it.
// Clusters that end up with fewer than 2 members are merged into the
// cluster with the nearest centroid.
class McOcSvmClassifier final : public Classifier {
public:
    struct Cluster {
        std::vector<double> centroid;
        OcSvmClassifier svm;
    };

    McOcSvmClassifier(std::vector<Cluster> clusters, double nu, KernelSpec kernel,
                      NormalizationMode norm);

    const char* algorithm_id() const override { return "MCSVM"; }
    std::size_t arity() const override { return arity_; }
    Label predict(std::span<const double> x) const override;
    void write_state(std::ostream& out) const override;
    std::unique_ptr<Classifier> clone() const override {
        return std::make_unique<McOcSvmClassifier>(*this);
    }

    const std::vector<Cluster>& clusters() const { return clusters_; }

private:
    std::vector<Cluster> clusters_;
    double nu_;
    KernelSpec kernel_;
    NormalizationMode norm_;
    std::size_t arity_;
};

McOcSvmClassifier train_mc_ocsvm(const IndexView& view, int clusters, double nu,
                                 const KernelSpec& kernel, std::uint64_t seed,
                                 const NormalizationMode& norm = {},
                                 const OcSvmOptions& opts = {});

} // namespace oscail

#endif
