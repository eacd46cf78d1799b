#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oscail/metrics.hpp"
#include "oscail/rng.hpp"

using namespace oscail;

namespace {

std::vector<double> random_vec(SplitMix64& rng, std::size_t d) {
    std::vector<double> v(d);
    for (auto& x : v) x = rng.gaussian();
    return v;
}

EvalReport report_of(std::int64_t tp, std::int64_t fn, std::int64_t fp, std::int64_t tn) {
    std::vector<Label> preds, truths;
    auto add = [&](std::int64_t n, Label truth, Label pred) {
        for (std::int64_t i = 0; i < n; ++i) {
            truths.push_back(truth);
            preds.push_back(pred);
        }
    };
    add(tp, Label::Target, Label::Target);
    add(fn, Label::Target, Label::Other);
    add(fp, Label::Other, Label::Target);
    add(tn, Label::Other, Label::Other);
    return evaluate(preds, truths);
}

} // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("hand-worked distances") {
    const std::vector<double> o{0, 0}, p{3, 4};
    CHECK(distance(Metric::Euclidean, o, p) == 5.0);
    CHECK(distance(Metric::Manhattan, std::vector<double>{1, 1}, std::vector<double>{4, 5}) ==
          7.0);
    const std::vector<double> x{1.0, -2.0, 0.5};
    std::vector<double> x2(x);
    for (auto& v : x2) v *= 2.0;
    CHECK(distance(Metric::Cosine, x, x2) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("distance errors") {
    CHECK_THROWS_AS(distance(Metric::Euclidean, std::vector<double>{1}, std::vector<double>{1, 2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(distance(Metric::Cosine, std::vector<double>{0, 0}, std::vector<double>{1, 2}),
                    std::invalid_argument);
}

TEST_CASE("metric axioms on random triples") {
    SplitMix64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_vec(rng, 6), b = random_vec(rng, 6), c = random_vec(rng, 6);
        for (const Metric m : {Metric::Euclidean, Metric::Manhattan, Metric::Cosine}) {
            CHECK(distance(m, a, b) == doctest::Approx(distance(m, b, a)).epsilon(1e-12));
            CHECK(distance(m, a, b) >= 0.0);
            CHECK(distance(m, a, a) == doctest::Approx(0.0).epsilon(1e-12));
        }
        // Triangle inequality for the true metrics.
        for (const Metric m : {Metric::Euclidean, Metric::Manhattan}) {
            CHECK(distance(m, a, c) <= distance(m, a, b) + distance(m, b, c) + 1e-12);
        }
    }
}

TEST_CASE("the printed error estimates are bit-exact") {
    const EvalReport r1 = report_of(17, 4, 2, 5);
    CHECK(r1.error == 0.21428571428571427);
    CHECK(r1.matrix.total() == 28);

    const EvalReport r2 = report_of(21, 0, 7, 0);
    CHECK(r2.error == 0.25);
}

TEST_CASE("sensitivity, specificity and BER from the 28-prediction matrix") {
    const EvalReport r = report_of(17, 4, 2, 5);
    CHECK(r.sensitivity == doctest::Approx(17.0 / 21.0).epsilon(1e-15));
    CHECK(r.specificity == doctest::Approx(5.0 / 7.0).epsilon(1e-15));
    CHECK(r.ber == doctest::Approx(1.0 - (17.0 / 21.0 + 5.0 / 7.0) / 2.0).epsilon(1e-15));
    CHECK(r.ber == doctest::Approx(0.238095).epsilon(1e-4));
    CHECK_FALSE(r.degenerate);
}

TEST_CASE("degenerate denominators report 1 and set the flag") {
    const EvalReport no_negatives = report_of(3, 1, 0, 0);
    CHECK(no_negatives.specificity == 1.0);
    CHECK(no_negatives.degenerate);
    const EvalReport no_positives = report_of(0, 0, 1, 3);
    CHECK(no_positives.sensitivity == 1.0);
    CHECK(no_positives.degenerate);
}

TEST_CASE("identities: accuracy, label swap, rate decomposition") {
    SplitMix64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const std::int64_t tp = static_cast<std::int64_t>(rng.below(20)) + 1;
        const std::int64_t fn = static_cast<std::int64_t>(rng.below(20));
        const std::int64_t fp = static_cast<std::int64_t>(rng.below(20));
        const std::int64_t tn = static_cast<std::int64_t>(rng.below(20)) + 1;
        const EvalReport r = report_of(tp, fn, fp, tn);

        // error + accuracy = 1
        const double accuracy = static_cast<double>(tp + tn) / static_cast<double>(r.matrix.total());
        CHECK(r.error + accuracy == doctest::Approx(1.0).epsilon(1e-12));

        // BER identity: mean of the two error rates.
        const double fn_rate = static_cast<double>(fn) / static_cast<double>(tp + fn);
        const double fp_rate = static_cast<double>(fp) / static_cast<double>(fp + tn);
        CHECK(r.ber == doctest::Approx((fn_rate + fp_rate) / 2.0).epsilon(1e-12));
        CHECK(r.ber == doctest::Approx(1.0 - r.bar).epsilon(1e-15));

        // Swapping predictions and truths together swaps the two rates.
        const EvalReport swapped = report_of(tn, fp, fn, tp);
        CHECK(swapped.sensitivity == doctest::Approx(r.specificity).epsilon(1e-12));
        CHECK(swapped.specificity == doctest::Approx(r.sensitivity).epsilon(1e-12));
        CHECK(swapped.ber == doctest::Approx(r.ber).epsilon(1e-12));
    }
}

TEST_CASE("all-correct predictions score zero error and zero BER") {
    const EvalReport r = report_of(5, 0, 0, 3);
    CHECK(r.error == 0.0);
    CHECK(r.ber == 0.0);
}

TEST_CASE("evaluate rejects bad input") {
    CHECK_THROWS_AS(evaluate(std::vector<Label>{}, std::vector<Label>{}), std::invalid_argument);
    CHECK_THROWS_AS(evaluate(std::vector<Label>{Label::Target},
                             std::vector<Label>{Label::Target, Label::Other}),
                    std::invalid_argument);
}

TEST_CASE("confusion table renders the prediction layout") {
    const std::string t = render_confusion({17, 4, 2, 5});
    CHECK(t.find("Target predictions") != std::string::npos);
    CHECK(t.find("Other Predictions") != std::string::npos);
    CHECK(t.find("17") != std::string::npos);
    CHECK(t.find("| Target") != std::string::npos);
    CHECK(t.find("| Other") != std::string::npos);
}

TEST_SUITE_END();
