#include "oscail/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "oscail/kmeans.hpp"
#include "oscail/neighbors.hpp"
#include "oscail/numfmt.hpp"
#include "oscail/ocsvm.hpp"
#include "oscail/rng.hpp"

namespace oscail {

IndexView MergedStudy::primary_view() const {
    std::vector<std::int32_t> idx(primary_count);
    for (std::size_t i = 0; i < primary_count; ++i) idx[i] = static_cast<std::int32_t>(i);
    return IndexView(merged, std::move(idx));
}

MergedStudy merge_for_study(const ExampleSet& primary, const ExampleSet& secondary) {
    if (primary.feature_count() != secondary.feature_count())
        throw std::invalid_argument("trend study: primary set has " +
                                    std::to_string(primary.feature_count()) +
                                    " features but the secondary set has " +
                                    std::to_string(secondary.feature_count()));
    if (!is_one_sided(primary))
        throw std::invalid_argument("trend study: the primary set must be one-sided");
    for (const Example& e : secondary.examples)
        if (e.label != kOtherToken)
            throw std::invalid_argument(
                "trend study: every secondary (unexpected outlier) example must be labelled "
                "Other, found '" + e.label + "'");

    MergedStudy study;
    study.merged = primary;
    study.primary_count = primary.size();
    study.secondary_count = secondary.size();
    study.merged.examples.insert(study.merged.examples.end(), secondary.examples.begin(),
                                 secondary.examples.end());
    return study;
}

IndexView inject_outliers(const IndexView& test, const MergedStudy& study, int count,
                          std::uint64_t seed) {
    if (&test.parent() != &study.merged)
        throw std::invalid_argument("inject_outliers: the test view must reference the study's "
                                    "merged example set");
    if (count < 0 || static_cast<std::size_t>(count) > study.secondary_count)
        throw std::invalid_argument("inject_outliers: count " + std::to_string(count) +
                                    " exceeds the secondary set size " +
                                    std::to_string(study.secondary_count));
    std::vector<std::int32_t> order(study.secondary_count);
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = static_cast<std::int32_t>(study.primary_count + i);
    SplitMix64 rng(seed);
    rng.shuffle(order);

    std::vector<std::int32_t> idx = test.indices();
    idx.insert(idx.end(), order.begin(), order.begin() + count);
    return IndexView(study.merged, std::move(idx));
}

namespace {

void validate_config(const MergedStudy& study, const TrendStudyConfig& config) {
    if (config.roster.empty()) throw std::invalid_argument("trend study: empty algorithm roster");
    if (config.runs < 1) throw std::invalid_argument("trend study: runs must be >= 1");
    if (config.workers < 1) throw std::invalid_argument("trend study: workers must be >= 1");
    if (config.increments.empty() || config.increments.front() != 0)
        throw std::invalid_argument("trend study: increments must start at 0");
    for (std::size_t i = 1; i < config.increments.size(); ++i)
        if (config.increments[i] <= config.increments[i - 1])
            throw std::invalid_argument("trend study: increments must be strictly ascending");
    if (static_cast<std::size_t>(config.increments.back()) > study.secondary_count)
        throw std::invalid_argument("trend study: the largest increment exceeds the secondary "
                                    "set size");
}

void run_parallel(int jobs, int workers, const std::function<void(int)>& fn) {
    workers = std::max(1, std::min(workers, jobs));
    if (workers == 1) {
        for (int j = 0; j < jobs; ++j) fn(j);
        return;
    }
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (int j = w; j < jobs; j += workers) {
                try {
                    fn(j);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace

TrendTable run_trend_study(const MergedStudy& study, const TrendStudyConfig& config) {
    validate_config(study, config);

    TrendTable table;
    table.increments = config.increments;
    for (const RosterEntry& entry : config.roster) table.algorithms.push_back(entry.name);
    const std::size_t n_algos = config.roster.size();
    const std::size_t n_incs = config.increments.size();
    table.reports.assign(n_algos, std::vector<std::vector<EvalReport>>(
                                      n_incs, std::vector<EvalReport>(
                                                  static_cast<std::size_t>(config.runs))));

    const IndexView primary = study.primary_view();
    const int max_count = config.increments.back();

    run_parallel(config.runs, config.workers, [&](int r) {
        const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(r);
        const SplitPlan plan = stratified_percentage_split(primary, config.train_percent, seed);
        // One injection order for the whole study: increments are nested.
        const IndexView combined = inject_outliers(plan.test, study, max_count, config.base_seed);

        std::vector<Label> truths(combined.size());
        for (std::size_t i = 0; i < combined.size(); ++i)
            truths[i] = combined.is_target(i) ? Label::Target : Label::Other;

        for (std::size_t a = 0; a < n_algos; ++a) {
            // Every algorithm sees the identical train view; the model is
            // fixed across increments within the run.
            auto model = config.roster[a].train(plan.train, seed);
            std::vector<Label> preds(combined.size());
            for (std::size_t i = 0; i < combined.size(); ++i)
                preds[i] = model->predict(combined.features(i));

            for (std::size_t inc = 0; inc < n_incs; ++inc) {
                const std::size_t upto = plan.test.size() +
                                         static_cast<std::size_t>(config.increments[inc]);
                table.reports[a][inc][static_cast<std::size_t>(r)] =
                    evaluate(std::span(preds).first(upto), std::span(truths).first(upto));
            }
        }
    });

    table.cells.assign(n_algos, std::vector<TrendCell>(n_incs));
    for (std::size_t a = 0; a < n_algos; ++a)
        for (std::size_t inc = 0; inc < n_incs; ++inc) {
            const Aggregate agg = aggregate_reports(table.reports[a][inc]);
            TrendCell& cell = table.cells[a][inc];
            cell.mean_error_pct = 100.0 * agg.mean.error;
            cell.error_sd_pct = 100.0 * agg.error_sd;
            cell.mean_ber_pct = 100.0 * agg.mean.ber;
            cell.ber_sd_pct = 100.0 * agg.ber_sd;
        }
    return table;
}

std::string render_trend_csv(const TrendTable& table, bool ber) {
    if (table.algorithms.empty()) throw std::invalid_argument("trend CSV: empty table");
    std::ostringstream out;
    out << "increment";
    for (const std::string& a : table.algorithms) out << ',' << a << ',' << a << "_sd";
    out << '\n';
    out << std::fixed << std::setprecision(6);
    for (std::size_t inc = 0; inc < table.increments.size(); ++inc) {
        out << table.increments[inc];
        for (std::size_t a = 0; a < table.algorithms.size(); ++a) {
            const TrendCell& c = table.cells[a][inc];
            if (ber)
                out << ',' << c.mean_ber_pct << ',' << c.ber_sd_pct;
            else
                out << ',' << c.mean_error_pct << ',' << c.error_sd_pct;
        }
        out << '\n';
    }
    return out.str();
}

void emit_trend_csv(const TrendTable& table, const std::string& base_path) {
    for (const bool ber : {false, true}) {
        const std::string path = base_path + (ber ? "_ber.csv" : "_error.csv");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write CSV file: " + path);
        out << render_trend_csv(table, ber);
        if (!out) throw std::runtime_error("failed writing CSV file: " + path);
    }
}

void write_study_manifest(const TrendStudyConfig& config, const std::string& primary_path,
                          const std::string& secondary_path, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << "primary " << primary_path << '\n';
    out << "secondary " << secondary_path << '\n';
    out << "runs " << config.runs << '\n';
    out << "base_seed " << config.base_seed << '\n';
    out << "train_percent " << fmt_real(config.train_percent) << '\n';
    out << "workers " << config.workers << '\n';
    out << "increments";
    for (int i : config.increments) out << ' ' << i;
    out << '\n';
    for (const RosterEntry& e : config.roster)
        out << "algorithm " << e.name << " | " << e.params_text << '\n';
}

std::vector<RosterEntry> digit_roster() {
    std::vector<RosterEntry> roster;
    roster.push_back({"OSC-kNN", "M=3 K=3 T=1.5 metric=euclidean", true,
                      [](const IndexView& train, std::uint64_t) {
                          return std::make_unique<OsKnnClassifier>(
                              train_osknn(train, 3, 3, 1.5, Metric::Euclidean));
                      }});
    roster.push_back({"OSC-kMeans", "C=10 T=2000 metric=euclidean", true,
                      [](const IndexView& train, std::uint64_t seed) {
                          return std::make_unique<KMeansClassifier>(
                              train_kmeans(train, 10, 2000.0, seed));
                      }});
    roster.push_back({"2C-1NN", "K=1 metric=euclidean linear scan", false,
                      [](const IndexView& train, std::uint64_t) {
                          return std::make_unique<BinaryKnnClassifier>(
                              train_binary_knn(train, 1, Metric::Euclidean));
                      }});
    return roster;
}

std::vector<RosterEntry> solvent_roster() {
    NormalizationMode instance;
    instance.kind = NormalizationKind::PerInstance;
    std::vector<RosterEntry> roster;
    roster.push_back({"OSC-kNN", "M=1 K=3 T=1.5 metric=euclidean instance-normalized", true,
                      [instance](const IndexView& train, std::uint64_t) {
                          return std::make_unique<OsKnnClassifier>(
                              train_osknn(train, 1, 3, 1.5, Metric::Euclidean, instance));
                      }});
    roster.push_back({"OSC-kMeans", "C=14 T=1.5 metric=euclidean instance-normalized", true,
                      [instance](const IndexView& train, std::uint64_t seed) {
                          return std::make_unique<KMeansClassifier>(train_kmeans(
                              train, 14, 1.5, seed, Metric::Euclidean, instance));
                      }});
    roster.push_back({"OSC-SVM", "S=1 N=0.01 kernel=gaussian instance-normalized", true,
                      [instance](const IndexView& train, std::uint64_t) {
                          KernelSpec kernel;
                          kernel.kind = KernelSpec::Kind::Gaussian;
                          kernel.sigma = 1.0;
                          return std::make_unique<OcSvmClassifier>(
                              train_ocsvm(train, 0.01, kernel, instance));
                      }});
    roster.push_back({"2C-1NN", "K=1 metric=euclidean linear scan instance-normalized", false,
                      [instance](const IndexView& train, std::uint64_t) {
                          return std::make_unique<BinaryKnnClassifier>(
                              train_binary_knn(train, 1, Metric::Euclidean, instance));
                      }});
    return roster;
}

} // namespace oscail
