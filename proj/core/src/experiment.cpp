#include "oscail/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "oscail/kmeans.hpp"
#include "oscail/neighbors.hpp"
#include "oscail/numfmt.hpp"
#include "oscail/ocsvm.hpp"

namespace oscail {

namespace {

std::string value_or_default(Algorithm algorithm, const ParamChoice& params, char letter) {
    for (const auto& [l, v] : params)
        if (l == letter) return v;
    for (const GridSwitch& sw : switches_for(algorithm))
        if (sw.letter == letter) return sw.defaults.front();
    throw std::logic_error(std::string("no switch -") + letter + " for algorithm " +
                           algorithm_name(algorithm));
}

int int_param(Algorithm a, const ParamChoice& p, char letter) {
    return static_cast<int>(*parse_int(value_or_default(a, p, letter)));
}

double real_param(Algorithm a, const ParamChoice& p, char letter) {
    return *parse_double(value_or_default(a, p, letter));
}

Metric metric_param(Algorithm a, const ParamChoice& p, char letter) {
    return metric_from_letter(value_or_default(a, p, letter)[0]);
}

KernelSpec kernel_param(Algorithm a, const ParamChoice& p) {
    KernelSpec k;
    k.kind = value_or_default(a, p, 'K') == "p" ? KernelSpec::Kind::Polynomial
                                                : KernelSpec::Kind::Gaussian;
    k.sigma = real_param(a, p, 'S');
    k.exponent = real_param(a, p, 'E');
    return k;
}

NormalizationMode build_norm(NormalizationKind kind, const IndexView& train) {
    switch (kind) {
        case NormalizationKind::None: return {};
        case NormalizationKind::PerInstance: {
            NormalizationMode m;
            m.kind = NormalizationKind::PerInstance;
            return m;
        }
        case NormalizationKind::PerAttribute: return fit_attribute_norm(train);
    }
    throw std::logic_error("build_norm: bad kind");
}

// Display names on the per-combination result lines.
std::string param_label(char letter) {
    switch (letter) {
        case 'M': return "M";
        case 'K': return "K";
        case 'T': return "Threshold";
        case 'D': return "Dist metric";
        case 'C': return "Clusters";
        case 'S': return "Kernel width";
        case 'N': return "Nu";
        case 'E': return "Exponent";
    }
    return std::string(1, letter);
}

// Lower-case names inside the Model Selection Results block.
std::string selection_label(char letter) {
    switch (letter) {
        case 'M': return "m";
        case 'K': return "k";
        case 'T': return "threshold";
        case 'D': return "distance metric";
        case 'C': return "clusters";
        case 'S': return "kernel width";
        case 'N': return "nu";
        case 'E': return "exponent";
    }
    return std::string(1, letter);
}

std::string param_line(const ParamChoice& params) {
    std::string out;
    for (const auto& [letter, value] : params) {
        out += param_label(letter);
        out += ": ";
        out += value;
        out += ' ';
    }
    return out;
}

std::string selection_block(double best_error, const ParamChoice& best) {
    std::ostringstream out;
    out << "Model Selection Results:\n-----\n";
    out << "Smallest Error Estimate -> " << fmt_double(best_error) << '\n';
    for (const auto& [letter, value] : best) {
        const char* arrow = letter == 'D' ? "----> " : "-----> ";
        out << "Best " << selection_label(letter) << ' ' << arrow << value << '\n';
    }
    out << "-----\n";
    return out.str();
}

std::string indices_line(const std::vector<std::int32_t>& idx) {
    std::string out;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(idx[i]);
    }
    out += '\n';
    return out;
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
    pool.reserve(static_cast<std::size_t>(workers));
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

// Streams per-run fragments to the sink in run order no matter which worker
// finishes first, so worker count never changes the output.
class OrderedEmitter {
public:
    explicit OrderedEmitter(std::ostream* sink) : sink_(sink) {}

    void submit(std::size_t index, std::string text) {
        if (!sink_) return;
        std::lock_guard<std::mutex> lock(mutex_);
        pending_[index] = std::move(text);
        while (true) {
            auto it = pending_.find(next_);
            if (it == pending_.end()) break;
            (*sink_) << it->second;
            sink_->flush();
            pending_.erase(it);
            ++next_;
        }
    }

private:
    std::ostream* sink_;
    std::mutex mutex_;
    std::map<std::size_t, std::string> pending_;
    std::size_t next_ = 0;
};

EvalReport mean_of_folds(const std::vector<EvalReport>& folds) {
    EvalReport mean;
    for (const EvalReport& r : folds) {
        mean.matrix.tp += r.matrix.tp;
        mean.matrix.fn += r.matrix.fn;
        mean.matrix.fp += r.matrix.fp;
        mean.matrix.tn += r.matrix.tn;
        mean.degenerate = mean.degenerate || r.degenerate;
    }
    const double n = static_cast<double>(folds.size());
    double err = 0, sens = 0, spec = 0;
    for (const EvalReport& r : folds) {
        err += r.error;
        sens += r.sensitivity;
        spec += r.specificity;
    }
    mean.error = err / n;
    mean.sensitivity = sens / n;
    mean.specificity = spec / n;
    mean.bar = (mean.sensitivity + mean.specificity) / 2.0;
    mean.ber = 1.0 - mean.bar;
    return mean;
}

} // namespace

std::unique_ptr<Classifier> train_classifier(Algorithm algorithm, const ParamChoice& params,
                                             const IndexView& train, NormalizationKind norm,
                                             std::uint64_t seed) {
    const NormalizationMode mode = build_norm(norm, train);
    switch (algorithm) {
        case Algorithm::OscKnn:
            return std::make_unique<OsKnnClassifier>(
                train_osknn(train, int_param(algorithm, params, 'M'),
                            int_param(algorithm, params, 'K'), real_param(algorithm, params, 'T'),
                            metric_param(algorithm, params, 'D'), mode));
        case Algorithm::NnPc:
            return std::make_unique<NnPcClassifier>(
                train_nnpc(train, metric_param(algorithm, params, 'D'), mode));
        case Algorithm::KMeans:
            return std::make_unique<KMeansClassifier>(
                train_kmeans(train, int_param(algorithm, params, 'C'),
                             real_param(algorithm, params, 'T'), seed,
                             metric_param(algorithm, params, 'D'), mode));
        case Algorithm::OcSvm:
            return std::make_unique<OcSvmClassifier>(
                train_ocsvm(train, real_param(algorithm, params, 'N'),
                            kernel_param(algorithm, params), mode));
        case Algorithm::McOcSvm:
            return std::make_unique<McOcSvmClassifier>(
                train_mc_ocsvm(train, int_param(algorithm, params, 'C'),
                               real_param(algorithm, params, 'N'),
                               kernel_param(algorithm, params), seed, mode));
        case Algorithm::BinaryKnn:
            return std::make_unique<BinaryKnnClassifier>(
                train_binary_knn(train, int_param(algorithm, params, 'K'),
                                 metric_param(algorithm, params, 'D'), mode));
    }
    throw std::logic_error("train_classifier: bad algorithm");
}

EvalReport evaluate_on(const Classifier& model, const IndexView& test) {
    if (test.empty()) throw std::invalid_argument("evaluate_on: empty test view");
    std::vector<Label> predictions, truths;
    predictions.reserve(test.size());
    truths.reserve(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        const std::string& lab = test.label(i);
        if (lab != kTargetToken && lab != kOtherToken)
            throw std::invalid_argument("test label '" + lab + "' is neither Target nor Other");
        truths.push_back(lab == kTargetToken ? Label::Target : Label::Other);
        predictions.push_back(model.predict(test.features(i)));
    }
    return evaluate(predictions, truths);
}

ModelSelection model_selection(const IndexView& train, Algorithm algorithm,
                               const ParamGrid& grid, const SplitSpec& inner,
                               std::uint64_t seed, NormalizationKind norm) {
    const auto combos = expand_grid(grid);

    // A fresh view over the training indices: inner splits never see the
    // outer test rows.
    IndexView inner_view(train.parent(), train.indices());
    std::vector<SplitPlan> plans;
    if (inner.kind == SplitKind::PercentageSplit) {
        plans.push_back(stratified_percentage_split(inner_view, inner.percent, seed));
    } else {
        FoldPlan folds = stratified_kfold(inner_view, inner.folds, seed);
        for (std::size_t f = 0; f < folds.folds.size(); ++f)
            plans.push_back(cv_split(folds, f));
    }

    ModelSelection out;
    out.best_error = std::numeric_limits<double>::infinity();
    for (const ParamChoice& combo : combos) {
        InnerComboResult res;
        res.params = combo;
        double err_sum = 0.0;
        try {
            for (const SplitPlan& plan : plans) {
                auto model = train_classifier(algorithm, combo, plan.train, norm, seed);
                const EvalReport rep = evaluate_on(*model, plan.test);
                res.matrix.tp += rep.matrix.tp;
                res.matrix.fn += rep.matrix.fn;
                res.matrix.fp += rep.matrix.fp;
                res.matrix.tn += rep.matrix.tn;
                err_sum += rep.error;
            }
            res.mean_error = err_sum / static_cast<double>(plans.size());
        } catch (const std::exception& e) {
            res.failure = e.what();
            res.mean_error = std::numeric_limits<double>::infinity();
        }
        if (res.failure.empty() && res.mean_error < out.best_error) {
            out.best_error = res.mean_error;
            out.best = combo;
        }
        out.combos.push_back(std::move(res));
    }
    if (out.best.empty())
        throw std::runtime_error("model selection: no parameter combination could be trained");
    return out;
}

namespace {

std::string render_inner_stream(const std::vector<InnerComboResult>& stream) {
    std::ostringstream out;
    for (const InnerComboResult& c : stream) {
        if (!c.failure.empty()) {
            out << param_line(c.params) << "could not be trained: " << c.failure << "\n-----\n";
            continue;
        }
        out << render_confusion(c.matrix) << '\n'
            << param_line(c.params) << "Error estimate: " << fmt_double(c.mean_error)
            << "\n-----\n";
    }
    return out.str();
}

std::string render_run(const ExperimentConfig& config,
                       const std::vector<const RunResult*>& per_combo) {
    const RunResult& first = *per_combo.front();
    std::ostringstream out;
    out << "----- Run " << first.run_index << " (seed " << first.seed << ") -----\n";
    if (config.outer.kind == SplitKind::PercentageSplit) {
        out << "Training instance indices:\n" << indices_line(first.train_indices);
        out << "Testing instance indices:\n" << indices_line(first.test_indices);
    } else {
        for (std::size_t f = 0; f < first.fold_index_lists.size(); ++f)
            out << "Fold " << f + 1 << " instance indices:\n"
                << indices_line(first.fold_index_lists[f]);
    }
    out << '\n';

    if (config.technique == Technique::ModelSelection) {
        for (std::size_t s = 0; s < first.inner_streams.size(); ++s) {
            if (first.inner_streams.size() > 1) out << "--- Outer fold " << s + 1 << " ---\n";
            out << render_inner_stream(first.inner_streams[s]);
            const ParamChoice& chosen = first.inner_streams.size() > 1 && s < first.fold_choices.size()
                                            ? first.fold_choices[s]
                                            : first.chosen_params;
            double inner_err = first.best_inner_error;
            for (const InnerComboResult& c : first.inner_streams[s])
                if (c.params == chosen && c.failure.empty()) inner_err = c.mean_error;
            out << selection_block(inner_err, chosen);
        }
        out << render_confusion(first.report.matrix) << '\n'
            << param_line(first.chosen_params)
            << "Error estimate: " << fmt_double(first.report.error) << '\n';
    } else {
        for (const RunResult* rr : per_combo) {
            out << render_confusion(rr->report.matrix) << '\n'
                << param_line(rr->chosen_params)
                << "Error estimate: " << fmt_double(rr->report.error) << "\n-----\n";
        }
    }
    out << '\n';
    return out.str();
}

std::string render_summary(const ExperimentResult& result) {
    std::ostringstream out;
    out << "----- Summary over " << result.config.runs << " run"
        << (result.config.runs == 1 ? "" : "s") << " -----\n";
    for (const ComboSummary& combo : result.combos) {
        if (!combo.params.empty()) out << param_line(combo.params);
        out << "Mean error estimate: " << fmt_double(combo.aggregate.mean.error)
            << " (std dev " << fmt_double(combo.aggregate.error_sd) << ")\n";
        out << "Mean BER: " << fmt_double(combo.aggregate.mean.ber) << " (std dev "
            << fmt_double(combo.aggregate.ber_sd) << ")\n";
        out << "Mean sensitivity: " << fmt_double(combo.aggregate.mean.sensitivity)
            << "  Mean specificity: " << fmt_double(combo.aggregate.mean.specificity) << '\n';
        out << "Total confusion matrix over all runs:\n"
            << render_confusion(combo.aggregate.mean.matrix) << '\n';
    }
    return out.str();
}

} // namespace

Aggregate aggregate_reports(const std::vector<EvalReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("aggregate_reports: no reports");
    Aggregate agg;
    agg.mean = mean_of_folds(reports);
    if (reports.size() > 1) {
        double verr = 0, vber = 0;
        for (const EvalReport& r : reports) {
            verr += (r.error - agg.mean.error) * (r.error - agg.mean.error);
            vber += (r.ber - agg.mean.ber) * (r.ber - agg.mean.ber);
        }
        const double n1 = static_cast<double>(reports.size() - 1);
        agg.error_sd = std::sqrt(verr / n1);
        agg.ber_sd = std::sqrt(vber / n1);
    }
    return agg;
}

std::string render_settings_echo(const ExperimentConfig& config, const ParamGrid& grid) {
    std::ostringstream out;
    auto pad = [](const std::string& s, std::size_t width) {
        std::string p = s;
        while (p.size() < width) p += ' ';
        return p;
    };

    out << algorithm_name(config.algorithm) << " Classifier Options selected:-\n\n";
    const auto& table = switches_for(config.algorithm);
    for (const GridSwitch& sw : table) {
        const auto* values = grid.values_for(sw.letter);
        std::string joined;
        if (values)
            for (const std::string& v : *values) {
                if (!joined.empty()) joined += ' ';
                joined += v;
            }
        out << '-' << sw.letter << ' ' << pad("(" + sw.description + ")", 26) << "---> "
            << joined << '\n';
    }

    if (config.algorithm == Algorithm::OcSvm || config.algorithm == Algorithm::McOcSvm) {
        const auto* kernels = grid.values_for('K');
        if (kernels && std::find(kernels->begin(), kernels->end(), "p") != kernels->end())
            out << "\nWarning: polynomial kernels in one-class training are sensitive to the "
                   "norms of the input vectors; results may be poor.\n";
    }

    const bool outer_ps = config.outer.kind == SplitKind::PercentageSplit;
    const bool inner_ps = config.inner.kind == SplitKind::PercentageSplit;
    out << "\nExperiment Options selected:-\n\n";
    auto line = [&](char letter, const std::string& label, const std::string& value) {
        out << '-' << letter << ' ' << pad("(" + label + ")", 26) << "---> " << value << '\n';
    };
    line('E', "Example set path", config.example_set_path);
    line('R', "Relabeled?", config.relabel ? "true" : "false");
    line('N', "Normalized?", config.normalize ? "true" : "false");
    line('A', "Algorithm to use?", algorithm_name(config.algorithm));
    line('T', "Technique to use?", config.technique == Technique::PerformanceEstimation
                                       ? "Performance Estimation"
                                       : "Model Selection");
    line('S', "Example set split?", outer_ps ? "Percentage Split" : "Cross Validation");
    line('r', "Number of runs?", std::to_string(config.runs));
    line('F', "Number of folds?", std::to_string(outer_ps ? 0 : config.outer.folds));
    line('s', "Random number seed?", std::to_string(config.base_seed));
    line('P', "Percentage for split?", fmt_real(config.outer.percent));
    line('t', "Training set split?", inner_ps ? "Percentage Split" : "Cross Validation");
    line('f', "Training split folds?", std::to_string(inner_ps ? 0 : config.inner.folds));
    line('p', "Training split %?", fmt_real(config.inner.percent));
    out << '\n';
    return out.str();
}

ExperimentResult run_experiment(const ExampleSet& set, const ExperimentConfig& config,
                                std::ostream* sink) {
    if (config.runs < 1)
        throw std::invalid_argument("experiment: the number of runs must be at least 1");
    if (config.workers < 1) throw std::invalid_argument("experiment: workers must be >= 1");
    if (!is_one_sided(set))
        throw std::invalid_argument(
            "experiment: the example set is not one-sided (labels must be Target/Other "
            "with at least one Target); relabel it first");

    ExperimentResult result;
    result.config = config;
    if (result.config.grid.entries.empty())
        result.config.grid = default_grid(config.algorithm);
    const ParamGrid& grid = result.config.grid;
    const bool ms = config.technique == Technique::ModelSelection;
    const std::vector<ParamChoice> combos = ms ? std::vector<ParamChoice>{} : expand_grid(grid);

    const std::size_t combo_count = ms ? 1 : combos.size();
    result.combos.resize(combo_count);
    for (std::size_t c = 0; c < combo_count; ++c) {
        if (!ms) result.combos[c].params = combos[c];
        result.combos[c].runs.resize(static_cast<std::size_t>(config.runs));
    }

    // The settings echo block is printed by the caller (and render_log);
    // the stream carries the per-run results and the summary.
    OrderedEmitter emitter(sink);

    const IndexView full = IndexView::full(set);
    const NormalizationKind norm =
        config.normalize ? NormalizationKind::PerInstance : NormalizationKind::None;

    run_parallel(config.runs, config.workers, [&](int r) {
        const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(r);

        std::vector<SplitPlan> plans;
        std::vector<std::vector<std::int32_t>> fold_lists;
        if (config.outer.kind == SplitKind::PercentageSplit) {
            plans.push_back(stratified_percentage_split(full, config.outer.percent, seed));
        } else {
            FoldPlan folds = stratified_kfold(full, config.outer.folds, seed);
            for (std::size_t f = 0; f < folds.folds.size(); ++f) {
                plans.push_back(cv_split(folds, f));
                fold_lists.push_back(folds.folds[f].indices());
            }
        }

        auto fill_common = [&](RunResult& rr) {
            rr.run_index = r;
            rr.seed = seed;
            if (config.outer.kind == SplitKind::PercentageSplit) {
                rr.train_indices = plans.front().train.indices();
                rr.test_indices = plans.front().test.indices();
            } else {
                rr.fold_index_lists = fold_lists;
            }
        };

        if (ms) {
            RunResult& rr = result.combos[0].runs[static_cast<std::size_t>(r)];
            fill_common(rr);
            double best_inner = std::numeric_limits<double>::infinity();
            for (const SplitPlan& plan : plans) {
                ModelSelection sel =
                    model_selection(plan.train, config.algorithm, grid, config.inner, seed, norm);
                auto model = train_classifier(config.algorithm, sel.best, plan.train, norm, seed);
                rr.fold_reports.push_back(evaluate_on(*model, plan.test));
                rr.inner_streams.push_back(std::move(sel.combos));
                rr.fold_choices.push_back(sel.best);
                if (sel.best_error < best_inner) {
                    best_inner = sel.best_error;
                    rr.chosen_params = sel.best;
                    rr.best_inner_error = sel.best_error;
                }
            }
            rr.report = mean_of_folds(rr.fold_reports);
            emitter.submit(static_cast<std::size_t>(r),
                           render_run(result.config, {&rr}));
        } else {
            std::vector<const RunResult*> run_ptrs;
            for (std::size_t c = 0; c < combos.size(); ++c) {
                RunResult& rr = result.combos[c].runs[static_cast<std::size_t>(r)];
                fill_common(rr);
                rr.chosen_params = combos[c];
                for (const SplitPlan& plan : plans) {
                    auto model =
                        train_classifier(config.algorithm, combos[c], plan.train, norm, seed);
                    rr.fold_reports.push_back(evaluate_on(*model, plan.test));
                }
                rr.report = mean_of_folds(rr.fold_reports);
                run_ptrs.push_back(&rr);
            }
            emitter.submit(static_cast<std::size_t>(r), render_run(result.config, run_ptrs));
        }
    });

    for (ComboSummary& combo : result.combos) {
        std::vector<EvalReport> reports;
        reports.reserve(combo.runs.size());
        for (const RunResult& rr : combo.runs) reports.push_back(rr.report);
        combo.aggregate = aggregate_reports(reports);
    }

    if (sink) {
        (*sink) << render_summary(result);
        sink->flush();
    }
    return result;
}

std::string render_log(const ExperimentResult& result) {
    std::ostringstream out;
    out << render_settings_echo(result.config, result.config.grid);
    const std::size_t runs = result.combos.front().runs.size();
    for (std::size_t r = 0; r < runs; ++r) {
        std::vector<const RunResult*> per_combo;
        per_combo.reserve(result.combos.size());
        for (const ComboSummary& combo : result.combos) per_combo.push_back(&combo.runs[r]);
        out << render_run(result.config, per_combo);
    }
    out << render_summary(result);
    return out.str();
}

void write_log(const ExperimentConfig& config, const ExperimentResult& result,
               const std::string& path) {
    if (config.runs < 1) throw std::invalid_argument("write_log: zero-run configuration");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write log file: " + path);
    out << render_log(result);
    if (!out) throw std::runtime_error("failed writing log file: " + path);
}

} // namespace oscail
