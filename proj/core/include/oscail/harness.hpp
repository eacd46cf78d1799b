#ifndef OSCAIL_HARNESS_HPP
#define OSCAIL_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "oscail/classifier.hpp"
#include "oscail/experiment.hpp"

namespace oscail {

// Primary and secondary example sets merged into one parent so that views
// can span both: primary rows first, then the secondary (unexpected
// outlier) rows. Views reference `merged`, so a MergedStudy must stay put
// while they live.
struct MergedStudy {
    ExampleSet merged;
    std::size_t primary_count = 0;
    std::size_t secondary_count = 0;

    IndexView primary_view() const;
};

// Checks that the schemas agree, the primary set is one-sided and every
// secondary example is labelled Other.
MergedStudy merge_for_study(const ExampleSet& primary, const ExampleSet& secondary);

// Appends the first `count` secondary examples to the test view under the
// seeded order. One seed is used for the whole study, so the injected sets
// are nested across increments.
IndexView inject_outliers(const IndexView& test, const MergedStudy& study, int count,
                          std::uint64_t seed);

struct RosterEntry {
    std::string name;
    std::string params_text; // echoed into the study manifest
    bool one_sided = true;   // trains on Target rows only
    // train view plus the run seed (seeded algorithms only use it).
    std::function<std::unique_ptr<Classifier>(const IndexView&, std::uint64_t)> train;
};

struct TrendStudyConfig {
    std::vector<int> increments; // ascending, starting at 0
    int runs = 100;
    std::uint64_t base_seed = 2;
    double train_percent = 67.0;
    int workers = 1;
    std::vector<RosterEntry> roster;
};

struct TrendCell {
    double mean_error_pct = 0.0;
    double error_sd_pct = 0.0;
    double mean_ber_pct = 0.0;
    double ber_sd_pct = 0.0;
};

struct TrendTable {
    std::vector<std::string> algorithms;
    std::vector<int> increments;
    std::vector<std::vector<TrendCell>> cells;                  // [algorithm][increment]
    std::vector<std::vector<std::vector<EvalReport>>> reports;  // [algorithm][increment][run]
};

// The unexpected-outlier protocol: per run, one stratified train/test split
// of the primary set (seed base+run) shared by every algorithm; each model
// is trained once and evaluated on the test view with each increment's
// injected outliers appended. Runs may execute on several workers, results
// are identical regardless.
TrendTable run_trend_study(const MergedStudy& study, const TrendStudyConfig& config);

// <base>_error.csv and <base>_ber.csv: header
// increment,<algo1>,<algo1_sd>,<algo2>,... with 6-decimal percentages.
void emit_trend_csv(const TrendTable& table, const std::string& base_path);
std::string render_trend_csv(const TrendTable& table, bool ber);

// Full configuration and seeds, for replaying a study.
void write_study_manifest(const TrendStudyConfig& config, const std::string& primary_path,
                          const std::string& secondary_path, const std::string& path);

// The fixed algorithm rosters of the two studies.
std::vector<RosterEntry> digit_roster();   // OSC-kNN M=3 K=3 T=1.5, k-Means C=10 T=2000, 1-NN; raw features
std::vector<RosterEntry> solvent_roster(); // OSC-kNN M=1 K=3 T=1.5, k-Means C=14 T=1.5, SVM S=1 N=0.01, 1-NN; instance-normalized

} // namespace oscail

#endif
