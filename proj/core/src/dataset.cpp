#include "oscail/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "oscail/rng.hpp"

namespace oscail {

IndexView::IndexView(const ExampleSet& parent, std::vector<std::int32_t> indices)
    : parent_(&parent), indices_(std::move(indices)) {
    std::unordered_set<std::int32_t> seen;
    seen.reserve(indices_.size());
    for (std::int32_t idx : indices_) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= parent.size())
            throw std::out_of_range("IndexView: index " + std::to_string(idx) +
                                    " outside parent example set of size " +
                                    std::to_string(parent.size()));
        if (!seen.insert(idx).second)
            throw std::invalid_argument("IndexView: duplicate index " + std::to_string(idx));
    }
}

IndexView IndexView::full(const ExampleSet& parent) {
    std::vector<std::int32_t> idx(parent.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::int32_t>(i);
    return IndexView(parent, std::move(idx));
}

IndexView shuffle(const IndexView& view, std::uint64_t seed) {
    std::vector<std::int32_t> idx = view.indices();
    SplitMix64 rng(seed);
    rng.shuffle(idx);
    return IndexView(view.parent(), std::move(idx));
}

namespace {

// Strata in order of first appearance in the view, each keeping view order.
std::vector<std::vector<std::int32_t>> strata_of(const IndexView& view) {
    std::vector<std::string> labels;
    std::vector<std::vector<std::int32_t>> strata;
    for (std::size_t i = 0; i < view.size(); ++i) {
        const std::string& lab = view.label(i);
        std::size_t s = 0;
        for (; s < labels.size(); ++s)
            if (labels[s] == lab) break;
        if (s == labels.size()) {
            labels.push_back(lab);
            strata.emplace_back();
        }
        strata[s].push_back(view[i]);
    }
    return strata;
}

std::int32_t round_half_up(double x) {
    return static_cast<std::int32_t>(std::floor(x + 0.5));
}

} // namespace

SplitPlan stratified_percentage_split(const IndexView& view, double train_percent,
                                      std::uint64_t seed) {
    if (!(train_percent > 0.0 && train_percent < 100.0))
        throw std::invalid_argument("percentage split: percent must lie strictly between 0 and 100");
    if (view.size() < 2)
        throw std::invalid_argument(
            "percentage split: need at least 2 examples so both the training and "
            "testing sets are non-empty");

    SplitMix64 rng(seed);
    std::vector<std::int32_t> train, test;
    for (auto& stratum : strata_of(view)) {
        rng.shuffle(stratum);
        const auto want = round_half_up(train_percent / 100.0 *
                                        static_cast<double>(stratum.size()));
        const std::size_t k = static_cast<std::size_t>(
            std::clamp<std::int32_t>(want, 0, static_cast<std::int32_t>(stratum.size())));
        train.insert(train.end(), stratum.begin(), stratum.begin() + static_cast<std::ptrdiff_t>(k));
        test.insert(test.end(), stratum.begin() + static_cast<std::ptrdiff_t>(k), stratum.end());
    }
    // Rounding can drain one side entirely on tiny sets; repair by moving a
    // single element across so examples are present in both.
    if (train.empty()) {
        train.push_back(test.back());
        test.pop_back();
    } else if (test.empty()) {
        test.push_back(train.back());
        train.pop_back();
    }
    return SplitPlan{IndexView(view.parent(), std::move(train)),
                     IndexView(view.parent(), std::move(test))};
}

FoldPlan stratified_kfold(const IndexView& view, int n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("cross validation: need at least 2 folds");
    if (static_cast<std::size_t>(n) > view.size())
        throw std::invalid_argument("cross validation: " + std::to_string(n) +
                                    " folds requested but only " + std::to_string(view.size()) +
                                    " examples present");

    SplitMix64 rng(seed);
    std::vector<std::vector<std::int32_t>> folds(static_cast<std::size_t>(n));
    const std::size_t start = static_cast<std::size_t>(seed % static_cast<std::uint64_t>(n));
    for (auto& stratum : strata_of(view)) {
        rng.shuffle(stratum);
        for (std::size_t j = 0; j < stratum.size(); ++j)
            folds[(start + j) % static_cast<std::size_t>(n)].push_back(stratum[j]);
    }

    FoldPlan plan;
    plan.folds.reserve(folds.size());
    for (auto& f : folds) plan.folds.emplace_back(view.parent(), std::move(f));
    return plan;
}

SplitPlan cv_split(const FoldPlan& plan, std::size_t test_fold) {
    if (test_fold >= plan.folds.size())
        throw std::out_of_range("cv_split: fold index out of range");
    std::vector<std::int32_t> train;
    for (std::size_t i = 0; i < plan.folds.size(); ++i) {
        if (i == test_fold) continue;
        const auto& idx = plan.folds[i].indices();
        train.insert(train.end(), idx.begin(), idx.end());
    }
    return SplitPlan{IndexView(plan.folds[test_fold].parent(), std::move(train)),
                     plan.folds[test_fold]};
}

namespace {

IndexView filter_by_label(const IndexView& view, const std::string& token) {
    std::vector<std::int32_t> idx;
    for (std::size_t i = 0; i < view.size(); ++i)
        if (view.label(i) == token) idx.push_back(view[i]);
    return IndexView(view.parent(), std::move(idx));
}

} // namespace

IndexView targets_of(const IndexView& view) { return filter_by_label(view, kTargetToken); }

IndexView others_of(const IndexView& view) { return filter_by_label(view, kOtherToken); }

bool is_one_sided(const ExampleSet& set) {
    bool any_target = false;
    for (const Example& e : set.examples) {
        if (e.label == kTargetToken)
            any_target = true;
        else if (e.label != kOtherToken)
            return false;
    }
    return any_target;
}

} // namespace oscail
