#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "oscail/ocsvm.hpp"
#include "test_helpers.hpp"

using namespace oscail;

namespace {

KernelSpec gaussian(double sigma) {
    KernelSpec k;
    k.kind = KernelSpec::Kind::Gaussian;
    k.sigma = sigma;
    return k;
}

KernelSpec polynomial(double p) {
    KernelSpec k;
    k.kind = KernelSpec::Kind::Polynomial;
    k.exponent = p;
    return k;
}

test::Points gaussian_cloud(SplitMix64& rng, int n, int d) {
    test::Points pts;
    for (int i = 0; i < n; ++i) {
        test::Vec x(static_cast<std::size_t>(d));
        for (auto& v : x) v = rng.gaussian();
        pts.push_back(std::move(x));
    }
    return pts;
}

std::vector<std::vector<double>> kernel_matrix(const KernelSpec& spec, const test::Points& pts) {
    std::vector<std::vector<double>> k(pts.size(), std::vector<double>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j) k[i][j] = kernel_eval(spec, pts[i], pts[j]);
    return k;
}

} // namespace

TEST_SUITE_BEGIN("ocsvm");

TEST_CASE("kernel evaluations") {
    const test::Vec x{0.7, -1.3, 2.0};
    CHECK(kernel_eval(gaussian(1.0), x, x) == 1.0);
    CHECK(kernel_eval(gaussian(2.5), x, x) == 1.0);

    // Polynomial with exponent 1 is the dot product.
    const test::Vec a{1.0, 2.0}, b{3.0, -1.0};
    CHECK(kernel_eval(polynomial(1.0), a, b) == 1.0);
    CHECK(kernel_eval(polynomial(2.0), a, b) == 1.0);

    const test::Vec o{0.0, 0.0}, p{3.0, 4.0};
    CHECK(kernel_eval(gaussian(1.0), o, p) == doctest::Approx(std::exp(-12.5)).epsilon(1e-15));

    CHECK_THROWS_AS(kernel_eval(gaussian(1.0), a, x), std::invalid_argument);
}

TEST_CASE("gaussian kernel matrices are positive semi-definite") {
    SplitMix64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const test::Points pts = gaussian_cloud(rng, 10, 3);
        const auto k = kernel_matrix(gaussian(0.5 + 2.0 * rng.unit()), pts);
        CHECK(test::smallest_eigenvalue(k) >= -1e-8);
    }
}

TEST_CASE("nu = 1 forces every coefficient to 1/l") {
    SplitMix64 rng(22);
    const ExampleSet set = test::random_one_sided(rng, 10, 0, 2);
    const OcSvmClassifier model = train_ocsvm(IndexView::full(set), 1.0, gaussian(1.0));
    CHECK(model.support_vectors().size() == 10);
    double sum = 0.0;
    for (const double a : model.coefficients()) {
        CHECK(a == doctest::Approx(0.1).epsilon(1e-12));
        sum += a;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("dual feasibility after training") {
    SplitMix64 rng(23);
    for (const double nu : {0.05, 0.2, 0.5, 0.9}) {
        const ExampleSet set = test::random_one_sided(rng, 40, 0, 2);
        const OcSvmClassifier model = train_ocsvm(IndexView::full(set), nu, gaussian(1.0));
        const double box = 1.0 / (nu * 40.0);
        double sum = 0.0;
        for (const double a : model.coefficients()) {
            CHECK(a > 0.0);       // only support vectors are stored
            CHECK(a <= box);      // box bound exact
            sum += a;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("degenerate training set of identical points is accepted") {
    const ExampleSet set = test::make_set({{2.0, 2.0}, {2.0, 2.0}, {2.0, 2.0}},
                                          {kTargetToken, kTargetToken, kTargetToken});
    const OcSvmClassifier model = train_ocsvm(IndexView::full(set), 0.5, gaussian(1.0));
    CHECK(model.decision_value(std::vector<double>{2.0, 2.0}) >= 0.0);
    CHECK(model.predict(std::vector<double>{2.0, 2.0}) == Label::Target);
}

TEST_CASE("points far from all training data are rejected under the gaussian kernel") {
    SplitMix64 rng(24);
    const ExampleSet set = test::random_one_sided(rng, 30, 0, 2);
    const OcSvmClassifier model = train_ocsvm(IndexView::full(set), 0.2, gaussian(1.0));
    CHECK(model.predict(std::vector<double>{50.0, -40.0}) == Label::Other);
    CHECK(model.decision_value(std::vector<double>{50.0, -40.0}) < 0.0);
}

TEST_CASE("parameter validation") {
    SplitMix64 rng(25);
    const ExampleSet set = test::random_one_sided(rng, 5, 0, 2);
    const IndexView view = IndexView::full(set);
    CHECK_THROWS_AS(train_ocsvm(view, 0.0, gaussian(1.0)), std::invalid_argument);
    CHECK_THROWS_AS(train_ocsvm(view, 1.5, gaussian(1.0)), std::invalid_argument);
    CHECK_THROWS_AS(train_ocsvm(view, 0.5, gaussian(0.0)), std::invalid_argument);
    CHECK_THROWS_AS(train_ocsvm(view, 0.5, polynomial(0.5)), std::invalid_argument);
    const ExampleSet lone = test::targets_1d({1.0});
    CHECK_THROWS_AS(train_ocsvm(IndexView::full(lone), 0.5, gaussian(1.0)),
                    std::invalid_argument);
}

TEST_CASE("the dual objective never increases across SMO steps") {
    SplitMix64 rng(26);
    for (int trial = 0; trial < 10; ++trial) {
        const ExampleSet set = test::random_one_sided(rng, 25, 0, 2);
        std::vector<double> trace;
        OcSvmOptions opts;
        opts.objective_trace = &trace;
        (void)train_ocsvm(IndexView::full(set), 0.15, gaussian(1.0), {}, opts);
        REQUIRE(trace.size() >= 2);
        for (std::size_t i = 1; i < trace.size(); ++i)
            CHECK(trace[i] <= trace[i - 1] + 1e-10 * std::max(1.0, std::fabs(trace[i - 1])));
    }
}

TEST_CASE("unbounded support vectors sit on the boundary") {
    SplitMix64 rng(27);
    const ExampleSet set = test::random_one_sided(rng, 30, 0, 2);
    const OcSvmClassifier model = train_ocsvm(IndexView::full(set), 0.3, gaussian(1.0));
    const double box = 1.0 / (0.3 * 30.0);
    int checked = 0;
    for (std::size_t i = 0; i < model.coefficients().size(); ++i) {
        const double a = model.coefficients()[i];
        if (a > 1e-9 && a < box - 1e-9) {
            CHECK(std::fabs(model.decision_value(model.support_vectors()[i])) < 2e-3);
            ++checked;
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("SMO matches the projected-gradient dense-QP oracle on small instances") {
    SplitMix64 rng(28);
    for (int trial = 0; trial < 25; ++trial) {
        const int l = 4 + static_cast<int>(rng.below(7)); // up to 10 points
        const test::Points pts = gaussian_cloud(rng, l, 2);
        const double nu = 0.2 + 0.6 * rng.unit();
        const KernelSpec kernel = gaussian(1.0);

        const OcSvmClassifier model = train_ocsvm_points(pts, nu, kernel);
        const test::QpOracle oracle = test::solve_qp_oracle(kernel_matrix(kernel, pts), nu);

        // Match the sparse stored coefficients back to the full vector.
        std::vector<double> full(static_cast<std::size_t>(l), 0.0);
        for (std::size_t s = 0; s < model.support_vectors().size(); ++s) {
            const auto it = std::find(pts.begin(), pts.end(), model.support_vectors()[s]);
            REQUIRE(it != pts.end());
            full[static_cast<std::size_t>(it - pts.begin())] = model.coefficients()[s];
        }
        for (std::size_t i = 0; i < full.size(); ++i)
            CHECK(std::fabs(full[i] - oracle.alpha[i]) <= 1e-3);

        for (int probe = 0; probe < 5; ++probe) {
            const test::Vec q{rng.gaussian() * 1.5, rng.gaussian() * 1.5};
            double oracle_f = -oracle.rho;
            for (std::size_t i = 0; i < pts.size(); ++i)
                oracle_f += oracle.alpha[i] * kernel_eval(kernel, pts[i], q);
            CHECK(std::fabs(model.decision_value(q) - oracle_f) <= 1e-3);
        }
    }
}

TEST_CASE("multi-cluster with one cluster reduces to the plain machine") {
    SplitMix64 rng(29);
    const ExampleSet set = test::random_one_sided(rng, 20, 0, 2);
    const IndexView view = IndexView::full(set);
    const McOcSvmClassifier mc = train_mc_ocsvm(view, 1, 0.2, gaussian(1.0), 5);
    const OcSvmClassifier plain = train_ocsvm(view, 0.2, gaussian(1.0));
    for (int probe = 0; probe < 50; ++probe) {
        const test::Vec q{rng.gaussian() * 3, rng.gaussian() * 3};
        CHECK(mc.predict(q) == plain.predict(q));
    }
}

TEST_CASE("two well-separated blobs: members accepted, the far midpoint rejected") {
    SplitMix64 rng(30);
    std::vector<std::vector<double>> features;
    std::vector<std::string> labels;
    for (int i = 0; i < 15; ++i) {
        features.push_back({rng.gaussian() * 0.5, rng.gaussian() * 0.5});
        labels.push_back(kTargetToken);
    }
    for (int i = 0; i < 15; ++i) {
        features.push_back({40.0 + rng.gaussian() * 0.5, rng.gaussian() * 0.5});
        labels.push_back(kTargetToken);
    }
    const ExampleSet set = test::make_set(features, labels);
    const McOcSvmClassifier mc =
        train_mc_ocsvm(IndexView::full(set), 2, 0.2, gaussian(1.0), 3);
    REQUIRE(mc.clusters().size() == 2);
    CHECK(mc.predict(std::vector<double>{0.1, -0.2}) == Label::Target);
    CHECK(mc.predict(std::vector<double>{40.2, 0.1}) == Label::Target);
    CHECK(mc.predict(std::vector<double>{20.0, 0.0}) == Label::Other);

    // Union property: anything a single cluster accepts, the whole machine
    // accepts.
    for (int probe = 0; probe < 40; ++probe) {
        const test::Vec q{rng.unit() * 50 - 5, rng.gaussian()};
        bool any = false;
        for (const auto& c : mc.clusters()) any = any || c.svm.decision_value(q) >= 0.0;
        CHECK((mc.predict(q) == Label::Target) == any);
    }
}

TEST_CASE("multi-cluster requires two targets per requested cluster") {
    SplitMix64 rng(31);
    const ExampleSet set = test::random_one_sided(rng, 5, 0, 2);
    CHECK_THROWS_AS(train_mc_ocsvm(IndexView::full(set), 3, 0.2, gaussian(1.0), 1),
                    std::invalid_argument);
}

TEST_SUITE_END();
