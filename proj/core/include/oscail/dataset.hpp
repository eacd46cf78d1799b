#ifndef OSCAIL_DATASET_HPP
#define OSCAIL_DATASET_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace oscail {

// The two labels of a one-sided example set. Raw (not yet relabelled) sets
// keep their original tokens in Example::label; classifiers and metrics only
// ever see Label.
enum class Label { Target, Other };

inline const std::string kTargetToken = "Target";
inline const std::string kOtherToken = "Other";

enum class AttributeKind { Numeric, Nominal };

struct AttributeSpec {
    std::string name;
    AttributeKind kind = AttributeKind::Numeric;
    std::vector<std::string> values; // nominal domain, declaration order

    bool operator==(const AttributeSpec&) const = default;
};

struct Example {
    std::vector<double> features;
    std::string label;

    bool operator==(const Example&) const = default;
};

// The single in-memory dataset every split references. The last schema
// attribute is the class attribute; all preceding attributes are numeric
// features. Immutable once built: splits and folds are index views into it,
// never copies.
struct ExampleSet {
    std::string relation;
    std::vector<AttributeSpec> schema;
    std::vector<Example> examples;

    std::size_t feature_count() const {
        return schema.empty() ? 0 : schema.size() - 1;
    }
    const AttributeSpec& class_attribute() const { return schema.back(); }
    std::size_t size() const { return examples.size(); }

    bool operator==(const ExampleSet&) const = default;
};

// Ordered index references into a parent ExampleSet. All indices are in
// bounds and distinct within one view.
class IndexView {
public:
    IndexView() = default;
    IndexView(const ExampleSet& parent, std::vector<std::int32_t> indices);

    static IndexView full(const ExampleSet& parent);

    const ExampleSet& parent() const { return *parent_; }
    const std::vector<std::int32_t>& indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    std::int32_t operator[](std::size_t i) const { return indices_[i]; }

    const Example& example(std::size_t i) const {
        return parent_->examples[static_cast<std::size_t>(indices_[i])];
    }
    const std::vector<double>& features(std::size_t i) const {
        return example(i).features;
    }
    const std::string& label(std::size_t i) const { return example(i).label; }
    bool is_target(std::size_t i) const { return label(i) == kTargetToken; }

private:
    const ExampleSet* parent_ = nullptr;
    std::vector<std::int32_t> indices_;
};

struct SplitPlan {
    IndexView train;
    IndexView test;
};

struct FoldPlan {
    std::vector<IndexView> folds;
};

// Deterministic permutation of the view; identical (view, seed) pairs give
// identical output on every platform.
IndexView shuffle(const IndexView& view, std::uint64_t seed);

// Per label stratum: shuffle with the seed, round-half-up
// train_percent/100 of the stratum into train, rest into test. If either
// side ends up empty overall, one element moves across from the other side.
SplitPlan stratified_percentage_split(const IndexView& view, double train_percent,
                                      std::uint64_t seed);

// n stratified folds; per stratum the members are shuffled and dealt
// round-robin starting at fold (seed mod n), so per-stratum fold sizes
// differ by at most one.
FoldPlan stratified_kfold(const IndexView& view, int n, std::uint64_t seed);

// Train/test split for cross validation: fold i tests, the rest trains.
SplitPlan cv_split(const FoldPlan& plan, std::size_t test_fold);

IndexView targets_of(const IndexView& view);
IndexView others_of(const IndexView& view);

// True iff every label is Target/Other and at least one Target exists.
bool is_one_sided(const ExampleSet& set);

} // namespace oscail

#endif
