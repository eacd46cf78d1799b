#include "oscail/ocsvm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "oscail/kmeans.hpp"
#include "state_io.hpp"

namespace oscail {

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("kernel: vectors have arity " + std::to_string(x.size()) +
                                    " and " + std::to_string(y.size()));
    switch (spec.kind) {
        case KernelSpec::Kind::Gaussian: {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = x[i] - y[i];
                s += d * d;
            }
            return std::exp(-s / (2.0 * spec.sigma * spec.sigma));
        }
        case KernelSpec::Kind::Polynomial: {
            double dot = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
            return std::pow(dot, spec.exponent);
        }
    }
    throw std::logic_error("kernel_eval: bad kernel kind");
}

namespace {

void validate_kernel(const KernelSpec& k) {
    if (k.kind == KernelSpec::Kind::Gaussian && !(k.sigma > 0.0))
        throw std::invalid_argument("gaussian kernel width must be > 0");
    if (k.kind == KernelSpec::Kind::Polynomial && !(k.exponent >= 1.0))
        throw std::invalid_argument("polynomial kernel exponent must be >= 1");
}

struct SmoSolution {
    std::vector<double> alpha;
    double rho = 0.0;
};

// Pairwise coordinate optimization on the maximally violating pair. The
// equality constraint sum(alpha) = 1 is preserved by moving mass between
// the two chosen coordinates; each step solves that one-dimensional
// subproblem exactly, so the dual objective never increases.
SmoSolution solve_one_class_dual(const std::vector<std::vector<double>>& pts,
                                 double nu, const KernelSpec& kernel,
                                 const OcSvmOptions& opts) {
    const std::size_t l = pts.size();
    const double box = 1.0 / (nu * static_cast<double>(l));

    std::vector<double> kmat(l * l);
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double v = kernel_eval(kernel, pts[i], pts[j]);
            kmat[i * l + j] = v;
            kmat[j * l + i] = v;
        }

    // Feasible start: fill the box from the front, as many coordinates at
    // the upper bound as fit, one fractional remainder. With nu = 1 the box
    // constraint meets the simplex constraint and every alpha sits at 1/l.
    std::vector<double> alpha(l, 0.0);
    if (nu == 1.0) {
        alpha.assign(l, box);
    } else {
        double remaining = 1.0;
        for (std::size_t i = 0; i < l && remaining > 0.0; ++i) {
            alpha[i] = std::min(box, remaining);
            remaining -= alpha[i];
        }
    }

    // Gradient of the dual: G_i = sum_j K_ij alpha_j.
    std::vector<double> grad(l, 0.0);
    for (std::size_t i = 0; i < l; ++i) {
        double g = 0.0;
        for (std::size_t j = 0; j < l; ++j) g += kmat[i * l + j] * alpha[j];
        grad[i] = g;
    }

    double objective = 0.0;
    if (opts.objective_trace) {
        for (std::size_t i = 0; i < l; ++i) objective += alpha[i] * grad[i];
        objective *= 0.5;
        opts.objective_trace->push_back(objective);
    }

    const long long max_steps =
        static_cast<long long>(opts.max_passes) * static_cast<long long>(l);
    bool converged = false;
    for (long long step = 0; step < max_steps; ++step) {
        // up: can receive mass (alpha < box), choose the smallest gradient;
        // down: can give mass (alpha > 0), choose the largest gradient.
        std::ptrdiff_t up = -1, down = -1;
        for (std::size_t i = 0; i < l; ++i) {
            if (alpha[i] < box && (up < 0 || grad[i] < grad[static_cast<std::size_t>(up)]))
                up = static_cast<std::ptrdiff_t>(i);
            if (alpha[i] > 0.0 && (down < 0 || grad[i] > grad[static_cast<std::size_t>(down)]))
                down = static_cast<std::ptrdiff_t>(i);
        }
        if (up < 0 || down < 0) { // nu = 1: the feasible set is one point
            converged = true;
            break;
        }
        const std::size_t a = static_cast<std::size_t>(up);
        const std::size_t b = static_cast<std::size_t>(down);
        const double violation = grad[b] - grad[a];
        if (violation <= opts.kkt_tol) {
            converged = true;
            break;
        }

        const double eta = kmat[a * l + a] + kmat[b * l + b] - 2.0 * kmat[a * l + b];
        double t = violation; // step moving mass from b to a
        if (eta > 1e-12) t = violation / eta;
        t = std::min({t, box - alpha[a], alpha[b]});
        if (t <= 1e-15 * box) {
            converged = true; // no representable progress left
            break;
        }
        alpha[a] += t;
        alpha[b] -= t;
        // Clip exactly onto the box so bound membership is an exact test.
        alpha[a] = std::min(alpha[a], box);
        alpha[b] = std::max(alpha[b], 0.0);
        for (std::size_t i = 0; i < l; ++i)
            grad[i] += t * (kmat[i * l + a] - kmat[i * l + b]);

        if (opts.objective_trace) {
            double obj = 0.0;
            for (std::size_t i = 0; i < l; ++i) obj += alpha[i] * grad[i];
            opts.objective_trace->push_back(0.5 * obj);
        }
    }
    if (!converged)
        throw std::runtime_error("one-class SVM did not converge within " +
                                 std::to_string(opts.max_passes) + " passes");

    // rho: average gradient over the unbounded support vectors, or over all
    // support vectors when none are unbounded (e.g. nu = 1).
    double rho_sum = 0.0;
    std::size_t rho_n = 0;
    for (std::size_t i = 0; i < l; ++i)
        if (alpha[i] > 0.0 && alpha[i] < box) {
            rho_sum += grad[i];
            ++rho_n;
        }
    if (rho_n == 0) {
        for (std::size_t i = 0; i < l; ++i)
            if (alpha[i] > 0.0) {
                rho_sum += grad[i];
                ++rho_n;
            }
    }
    return SmoSolution{std::move(alpha), rho_sum / static_cast<double>(rho_n)};
}

std::vector<std::vector<double>> collect_targets(const IndexView& view,
                                                 const NormalizationMode& norm) {
    std::vector<std::vector<double>> vs;
    for (std::size_t i = 0; i < view.size(); ++i)
        if (view.is_target(i)) vs.push_back(apply_normalization(norm, view.features(i)));
    return vs;
}

} // namespace

OcSvmClassifier::OcSvmClassifier(std::vector<std::vector<double>> support_vectors,
                                 std::vector<double> coefficients, double rho, double nu,
                                 KernelSpec kernel, NormalizationMode norm)
    : support_(std::move(support_vectors)),
      alpha_(std::move(coefficients)),
      rho_(rho),
      nu_(nu),
      kernel_(kernel),
      norm_(std::move(norm)) {
    if (support_.empty() || support_.size() != alpha_.size())
        throw std::invalid_argument("one-class SVM: support vectors and coefficients mismatch");
    arity_ = support_.front().size();
}

double OcSvmClassifier::decision_value(std::span<const double> x) const {
    const std::vector<double> q = prepare_input(norm_, arity_, x);
    double f = -rho_;
    for (std::size_t i = 0; i < support_.size(); ++i)
        f += alpha_[i] * kernel_eval(kernel_, support_[i], q);
    return f;
}

Label OcSvmClassifier::predict(std::span<const double> x) const {
    return decision_value(x) >= 0.0 ? Label::Target : Label::Other;
}

void OcSvmClassifier::write_state(std::ostream& out) const {
    out << "[hyperparameters]\n";
    out << "kernel " << (kernel_.kind == KernelSpec::Kind::Gaussian ? "gaussian" : "polynomial")
        << '\n';
    out << "sigma " << fmt_double(kernel_.sigma) << '\n';
    out << "exponent " << fmt_double(kernel_.exponent) << '\n';
    out << "nu " << fmt_double(nu_) << '\n';
    detail::write_normalization(out, norm_);
    out << "[state]\n";
    out << "rho " << fmt_double(rho_) << '\n';
    out << "support " << support_.size() << ' ' << arity_ << '\n';
    for (std::size_t i = 0; i < support_.size(); ++i) {
        out << fmt_double(alpha_[i]) << ' ';
        detail::write_vector_row(out, support_[i]);
    }
}

OcSvmClassifier train_ocsvm_points(const std::vector<std::vector<double>>& points, double nu,
                                   const KernelSpec& kernel, const NormalizationMode& norm,
                                   const OcSvmOptions& opts) {
    if (!(nu > 0.0 && nu <= 1.0))
        throw std::invalid_argument("one-class SVM: nu must lie in (0, 1]");
    validate_kernel(kernel);
    if (points.size() < 2)
        throw std::invalid_argument("one-class SVM: needs at least 2 target examples");

    SmoSolution sol = solve_one_class_dual(points, nu, kernel, opts);

    std::vector<std::vector<double>> sv;
    std::vector<double> coeff;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (sol.alpha[i] > 0.0) {
            sv.push_back(points[i]);
            coeff.push_back(sol.alpha[i]);
        }
    return OcSvmClassifier(std::move(sv), std::move(coeff), sol.rho, nu, kernel, norm);
}

OcSvmClassifier train_ocsvm(const IndexView& view, double nu, const KernelSpec& kernel,
                            const NormalizationMode& norm, const OcSvmOptions& opts) {
    return train_ocsvm_points(collect_targets(view, norm), nu, kernel, norm, opts);
}

McOcSvmClassifier::McOcSvmClassifier(std::vector<Cluster> clusters, double nu, KernelSpec kernel,
                                     NormalizationMode norm)
    : clusters_(std::move(clusters)), nu_(nu), kernel_(kernel), norm_(std::move(norm)) {
    if (clusters_.empty())
        throw std::invalid_argument("multi-cluster one-class SVM: no clusters");
    arity_ = clusters_.front().centroid.size();
}

Label McOcSvmClassifier::predict(std::span<const double> x) const {
    const std::vector<double> q = prepare_input(norm_, arity_, x);
    for (const Cluster& c : clusters_)
        if (c.svm.decision_value(q) >= 0.0) return Label::Target;
    return Label::Other;
}

void McOcSvmClassifier::write_state(std::ostream& out) const {
    out << "[hyperparameters]\n";
    out << "clusters " << clusters_.size() << '\n';
    out << "kernel " << (kernel_.kind == KernelSpec::Kind::Gaussian ? "gaussian" : "polynomial")
        << '\n';
    out << "sigma " << fmt_double(kernel_.sigma) << '\n';
    out << "exponent " << fmt_double(kernel_.exponent) << '\n';
    out << "nu " << fmt_double(nu_) << '\n';
    detail::write_normalization(out, norm_);
    out << "[state]\n";
    for (std::size_t c = 0; c < clusters_.size(); ++c) {
        out << "cluster " << c << '\n';
        out << "centroid ";
        detail::write_vector_row(out, clusters_[c].centroid);
        out << "rho " << fmt_double(clusters_[c].svm.rho()) << '\n';
        out << "support " << clusters_[c].svm.support_vectors().size() << ' ' << arity_ << '\n';
        for (std::size_t i = 0; i < clusters_[c].svm.support_vectors().size(); ++i) {
            out << fmt_double(clusters_[c].svm.coefficients()[i]) << ' ';
            detail::write_vector_row(out, clusters_[c].svm.support_vectors()[i]);
        }
    }
}

McOcSvmClassifier train_mc_ocsvm(const IndexView& view, int clusters, double nu,
                                 const KernelSpec& kernel, std::uint64_t seed,
                                 const NormalizationMode& norm, const OcSvmOptions& opts) {
    if (clusters < 1)
        throw std::invalid_argument("multi-cluster one-class SVM: cluster count must be >= 1");
    auto targets = collect_targets(view, norm);
    if (targets.size() < 2 * static_cast<std::size_t>(clusters))
        throw std::invalid_argument("multi-cluster one-class SVM: needs at least 2 targets "
                                    "per cluster (" +
                                    std::to_string(targets.size()) + " targets, " +
                                    std::to_string(clusters) + " clusters)");

    std::vector<int> assignment;
    auto centroids = lloyd_cluster(targets, clusters, seed, 100, nullptr, &assignment);

    std::vector<std::vector<std::size_t>> members(centroids.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        members[static_cast<std::size_t>(assignment[i])].push_back(i);

    // Merge clusters that cannot train an SVM (< 2 members) into the
    // nearest sufficiently large cluster.
    std::vector<std::size_t> small, large;
    for (std::size_t c = 0; c < members.size(); ++c)
        (members[c].size() < 2 ? small : large).push_back(c);
    if (large.empty())
        throw std::runtime_error("multi-cluster one-class SVM: clustering produced no cluster "
                                 "with 2 or more members");
    for (std::size_t c : small) {
        std::size_t best = large.front();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t t : large) {
            const double d = distance(Metric::Euclidean, centroids[c], centroids[t]);
            if (d < best_d) {
                best_d = d;
                best = t;
            }
        }
        auto& dst = members[best];
        dst.insert(dst.end(), members[c].begin(), members[c].end());
        members[c].clear();
    }

    std::vector<McOcSvmClassifier::Cluster> built;
    for (std::size_t c = 0; c < members.size(); ++c) {
        if (members[c].empty()) continue;
        std::vector<std::vector<double>> pts;
        pts.reserve(members[c].size());
        for (std::size_t i : members[c]) pts.push_back(targets[i]);
        // Member vectors are already normalized; the per-cluster SVM must
        // not normalize again.
        OcSvmClassifier svm = train_ocsvm_points(pts, nu, kernel, NormalizationMode{}, opts);
        built.push_back({centroids[c], std::move(svm)});
    }
    return McOcSvmClassifier(std::move(built), nu, kernel, norm);
}

} // namespace oscail
