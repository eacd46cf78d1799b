#ifndef OSCAIL_TEST_ORACLES_HPP
#define OSCAIL_TEST_ORACLES_HPP

// Independent brute-force oracles used to pin expected values. These
// deliberately share no code with the implementations they check: plain
// loops, full sorts and a projected-gradient QP solver.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "oscail/dataset.hpp"
#include "oscail/metrics.hpp"

namespace oscail::test {

using Vec = std::vector<double>;
using Points = std::vector<Vec>;

inline double oracle_dist(Metric m, const Vec& a, const Vec& b) {
    double s = 0.0;
    switch (m) {
        case Metric::Euclidean:
            for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
            return std::sqrt(s);
        case Metric::Manhattan:
            for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
            return s;
        case Metric::Cosine: {
            double dot = 0, na = 0, nb = 0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                dot += a[i] * b[i];
                na += a[i] * a[i];
                nb += b[i] * b[i];
            }
            // Same rounding shape as the implementation so near-tied
            // neighbour distances compare bit-identically.
            return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
        }
    }
    return 0.0;
}

// Neighbour list by full sort over (distance, index); stored points are
// assumed canonically (lexicographically) sorted by the caller.
inline std::vector<std::size_t> oracle_neighbours(const Points& stored, const Vec& q, Metric m,
                                                  std::size_t count,
                                                  std::ptrdiff_t self = -1) {
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t i = 0; i < stored.size(); ++i) {
        if (static_cast<std::ptrdiff_t>(i) == self) continue;
        order.emplace_back(oracle_dist(m, q, stored[i]), i);
    }
    std::sort(order.begin(), order.end());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < std::min(count, order.size()); ++i)
        out.push_back(order[i].second);
    return out;
}

// The D1/D2 ratio decision, recomputed from scratch.
inline Label oracle_osknn(const Points& stored_sorted, const Vec& q, int m, int k, double T,
                          Metric metric) {
    const auto nn = oracle_neighbours(stored_sorted, q, metric, static_cast<std::size_t>(m));
    double d1 = 0.0;
    for (std::size_t i : nn) d1 += oracle_dist(metric, q, stored_sorted[i]);
    d1 /= static_cast<double>(nn.size());

    double d2 = 0.0;
    for (std::size_t i : nn) {
        const auto own = oracle_neighbours(stored_sorted, stored_sorted[i], metric,
                                           static_cast<std::size_t>(k),
                                           static_cast<std::ptrdiff_t>(i));
        double mean = 0.0;
        for (std::size_t j : own) mean += oracle_dist(metric, stored_sorted[i], stored_sorted[j]);
        d2 += mean / static_cast<double>(own.size());
    }
    d2 /= static_cast<double>(nn.size());

    if (d2 == 0.0) return d1 == 0.0 ? Label::Target : Label::Other;
    return d1 / d2 > T ? Label::Other : Label::Target;
}

// Tax's NN-d acceptance rule, first nearest neighbour only.
inline Label oracle_nnd(const Points& stored_sorted, const Vec& q, Metric metric) {
    const auto nn = oracle_neighbours(stored_sorted, q, metric, 1);
    const std::size_t b = nn.front();
    const double d1 = oracle_dist(metric, q, stored_sorted[b]);
    const auto bn = oracle_neighbours(stored_sorted, stored_sorted[b], metric, 1,
                                      static_cast<std::ptrdiff_t>(b));
    const double d2 = oracle_dist(metric, stored_sorted[b], stored_sorted[bn.front()]);
    if (d2 == 0.0) return d1 == 0.0 ? Label::Target : Label::Other;
    return d1 / d2 > 1.0 ? Label::Other : Label::Target;
}

// Datta's delta over all pairs.
inline double oracle_delta(const Points& stored, Metric metric) {
    double delta = 0.0;
    for (std::size_t i = 0; i < stored.size(); ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < stored.size(); ++j)
            if (j != i) nearest = std::min(nearest, oracle_dist(metric, stored[i], stored[j]));
        delta = std::max(delta, nearest);
    }
    return delta;
}

inline Label oracle_nnpc(const Points& stored, const Vec& q, Metric metric) {
    const double delta = oracle_delta(stored, metric);
    double nearest = std::numeric_limits<double>::infinity();
    for (const Vec& t : stored) nearest = std::min(nearest, oracle_dist(metric, q, t));
    return nearest <= delta ? Label::Target : Label::Other;
}

// Majority vote over the k nearest of canonically sorted (vector, label)
// pairs; ties in the vote go to Target.
inline Label oracle_binary_knn(const std::vector<std::pair<Vec, Label>>& stored_sorted,
                               const Vec& q, int k, Metric metric) {
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t i = 0; i < stored_sorted.size(); ++i)
        order.emplace_back(oracle_dist(metric, q, stored_sorted[i].first), i);
    std::sort(order.begin(), order.end());
    int target = 0, other = 0;
    for (int i = 0; i < k; ++i)
        (stored_sorted[order[static_cast<std::size_t>(i)].second].second == Label::Target
             ? target
             : other)++;
    return target >= other ? Label::Target : Label::Other;
}

// k-means objective recomputed directly.
inline double oracle_kmeans_objective(const Points& points, const Points& centroids) {
    double total = 0.0;
    for (const Vec& x : points) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec& mu : centroids) {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mu[i]) * (x[i] - mu[i]);
            best = std::min(best, s);
        }
        total += best;
    }
    return total;
}

// Dense-QP oracle for the one-class dual: projected gradient descent on
//   min 1/2 a^T K a  s.t.  0 <= a_i <= box, sum a = 1.
// The projection onto the box-constrained simplex is found by bisection on
// the shift lambda in clip(v - lambda, 0, box).
struct QpOracle {
    std::vector<double> alpha;
    double rho = 0.0;
};

inline std::vector<double> project_box_simplex(std::vector<double> v, double box) {
    double lo = *std::min_element(v.begin(), v.end()) - box - 1.0;
    double hi = *std::max_element(v.begin(), v.end()) + 1.0;
    auto mass = [&](double lambda) {
        double s = 0.0;
        for (double x : v) s += std::clamp(x - lambda, 0.0, box);
        return s;
    };
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mass(mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    const double lambda = 0.5 * (lo + hi);
    for (double& x : v) x = std::clamp(x - lambda, 0.0, box);
    return v;
}

inline QpOracle solve_qp_oracle(const std::vector<std::vector<double>>& kmat, double nu) {
    const std::size_t l = kmat.size();
    const double box = 1.0 / (nu * static_cast<double>(l));

    // Lipschitz constant of the gradient is bounded by the trace.
    double trace = 0.0;
    for (std::size_t i = 0; i < l; ++i) trace += kmat[i][i];
    const double step = 1.0 / std::max(trace, 1e-12);

    std::vector<double> alpha = project_box_simplex(std::vector<double>(l, 1.0 / l), box);
    for (int it = 0; it < 200000; ++it) {
        std::vector<double> v(l);
        for (std::size_t i = 0; i < l; ++i) {
            double g = 0.0;
            for (std::size_t j = 0; j < l; ++j) g += kmat[i][j] * alpha[j];
            v[i] = alpha[i] - step * g;
        }
        std::vector<double> next = project_box_simplex(std::move(v), box);
        double delta = 0.0;
        for (std::size_t i = 0; i < l; ++i) delta = std::max(delta, std::fabs(next[i] - alpha[i]));
        alpha = std::move(next);
        if (delta < 1e-14) break;
    }

    QpOracle out;
    out.alpha = alpha;
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < l; ++i) {
        const bool unbounded = alpha[i] > 1e-10 && alpha[i] < box - 1e-10;
        if (!unbounded) continue;
        double g = 0.0;
        for (std::size_t j = 0; j < l; ++j) g += kmat[i][j] * alpha[j];
        sum += g;
        ++n;
    }
    if (n == 0) {
        for (std::size_t i = 0; i < l; ++i) {
            if (alpha[i] <= 1e-10) continue;
            double g = 0.0;
            for (std::size_t j = 0; j < l; ++j) g += kmat[i][j] * alpha[j];
            sum += g;
            ++n;
        }
    }
    out.rho = sum / static_cast<double>(n);
    return out;
}

// Smallest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
inline double smallest_eigenvalue(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::fabs(a[p][q]) < 1e-18) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a[i][p], aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a[p][i], aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
            }
    }
    double smallest = a[0][0];
    for (std::size_t i = 1; i < n; ++i) smallest = std::min(smallest, a[i][i]);
    return smallest;
}

} // namespace oscail::test

#endif
