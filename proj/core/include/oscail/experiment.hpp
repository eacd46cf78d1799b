#ifndef OSCAIL_EXPERIMENT_HPP
#define OSCAIL_EXPERIMENT_HPP

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "oscail/classifier.hpp"
#include "oscail/grid.hpp"
#include "oscail/metrics.hpp"

namespace oscail {

enum class Technique { PerformanceEstimation, ModelSelection };
enum class SplitKind { PercentageSplit, CrossValidation };

struct SplitSpec {
    SplitKind kind = SplitKind::PercentageSplit;
    double percent = 50.0;
    int folds = 3;
};

// Defaults mirror the usage screen: KNN, performance estimation, percentage
// split, 1 run, 3 folds, seed 2, 50 percent, inner percentage split.
struct ExperimentConfig {
    std::string example_set_path;
    bool relabel = false;
    std::string relabel_target;
    bool normalize = false; // per-instance normalization when set
    Algorithm algorithm = Algorithm::OscKnn;
    Technique technique = Technique::PerformanceEstimation;
    SplitSpec outer;
    int runs = 1;
    std::uint64_t base_seed = 2;
    SplitSpec inner;
    ParamGrid grid; // empty -> the algorithm's defaults
    int workers = 1;
};

// Inner-validation result for one grid point during model selection.
struct InnerComboResult {
    ParamChoice params;
    ConfusionMatrix matrix; // summed over inner folds
    double mean_error = 0.0;
    std::string failure; // non-empty when the combination could not train
};

struct RunResult {
    int run_index = 0;
    std::uint64_t seed = 0; // base_seed + run_index
    ParamChoice chosen_params;
    double best_inner_error = 0.0; // model selection only
    EvalReport report;             // outer test; cv averages the folds
    std::vector<EvalReport> fold_reports;
    std::vector<std::int32_t> train_indices, test_indices;    // percentage split
    std::vector<std::vector<std::int32_t>> fold_index_lists;  // cross validation
    std::vector<std::vector<InnerComboResult>> inner_streams; // ms: one per outer fold/split
    std::vector<ParamChoice> fold_choices;                    // ms with outer cv
};

struct Aggregate {
    EvalReport mean;          // rates averaged over runs; matrix summed
    double error_sd = 0.0;    // sample standard deviation over runs
    double ber_sd = 0.0;
};

// Performance estimation evaluates every grid point (one ComboSummary
// each); model selection produces a single summary whose runs carry their
// per-run winning parameters.
struct ComboSummary {
    ParamChoice params; // empty for model selection (chosen per run)
    std::vector<RunResult> runs;
    Aggregate aggregate;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<ComboSummary> combos;
    const ComboSummary& headline() const { return combos.front(); }
};

struct ModelSelection {
    ParamChoice best;
    double best_error = 0.0;
    std::vector<InnerComboResult> combos;
};

// Enumerates the grid in declaration order, trains each combination on the
// inner-train portion(s) of the given view and scores classification error
// on inner validation; smallest mean error wins, ties go to the first
// combination enumerated.
ModelSelection model_selection(const IndexView& train, Algorithm algorithm,
                               const ParamGrid& grid, const SplitSpec& inner,
                               std::uint64_t seed, NormalizationKind norm);

// Trains one classifier from a grid point. The normalization mode is fitted
// on (and only on) the given training view.
std::unique_ptr<Classifier> train_classifier(Algorithm algorithm, const ParamChoice& params,
                                             const IndexView& train, NormalizationKind norm,
                                             std::uint64_t seed);

EvalReport evaluate_on(const Classifier& model, const IndexView& test);

// Runs the whole experiment: run r is seeded with base_seed + r, shuffles
// and splits, trains (selecting parameters first under model selection) and
// evaluates. Results stream to `sink` as runs finish, in run order, so the
// output is identical no matter how many workers are used.
ExperimentResult run_experiment(const ExampleSet& set, const ExperimentConfig& config,
                                std::ostream* sink = nullptr);

// The two settings echo blocks: classifier options and experiment options.
std::string render_settings_echo(const ExperimentConfig& config, const ParamGrid& grid);

// Full log text: settings echo, per-run split index lists, best parameters
// and error per run, confusion matrices per run. Identical to the streamed
// output.
std::string render_log(const ExperimentResult& result);
void write_log(const ExperimentConfig& config, const ExperimentResult& result,
               const std::string& path);

// Aggregation helper shared with the trend-study harness.
Aggregate aggregate_reports(const std::vector<EvalReport>& reports);

} // namespace oscail

#endif
