#include "oscail/cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "oscail/arff.hpp"
#include "oscail/model_io.hpp"
#include "oscail/numfmt.hpp"

namespace oscail {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool yes_no(const std::string& s, bool fallback) {
    const std::string v = lower(s);
    if (v == "yes" || v == "y" || v == "true") return true;
    if (v == "no" || v == "n" || v == "false") return false;
    return fallback;
}

std::optional<std::string> prompt(std::istream& in, std::ostream& out, const std::string& text) {
    out << text;
    out.flush();
    std::string line;
    if (!std::getline(in, line)) return std::nullopt;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // Trim edges.
    std::size_t b = 0, e = line.size();
    while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
    return line.substr(b, e - b);
}

} // namespace

CliInvocation parse_cli(const std::vector<std::string>& args) {
    CliInvocation inv;
    if (args.empty()) {
        inv.show_usage = true;
        return inv;
    }
    ExperimentConfig& cfg = inv.config;
    auto note = [&inv](const std::string& msg) { inv.notifications.push_back(msg); };

    std::size_t i = 0;
    auto next_value = [&](const std::string& sw) -> std::optional<std::string> {
        if (i + 1 >= args.size() || (args[i + 1].size() == 2 && args[i + 1][0] == '-' &&
                                     std::isalpha(static_cast<unsigned char>(args[i + 1][1])))) {
            note(sw + ": no value supplied; using default");
            return std::nullopt;
        }
        return args[++i];
    };

    for (; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (!(a.size() == 2 && a[0] == '-' && std::isalpha(static_cast<unsigned char>(a[1])))) {
            note("ignored stray input '" + a + "' (expected a -X switch)");
            continue;
        }
        switch (a[1]) {
            case 'E': {
                if (auto v = next_value("-E")) cfg.example_set_path = *v;
                break;
            }
            case 'R': {
                if (auto v = next_value("-R")) {
                    const std::string s = lower(*v);
                    if (s == "yes" || s == "no")
                        cfg.relabel = s == "yes";
                    else
                        note("-R: unknown value '" + *v + "'; using default no");
                }
                break;
            }
            case 'N': {
                if (auto v = next_value("-N")) {
                    const std::string s = lower(*v);
                    if (s == "yes" || s == "no")
                        cfg.normalize = s == "yes";
                    else
                        note("-N: unknown value '" + *v + "'; using default no");
                }
                break;
            }
            case 'A': {
                if (auto v = next_value("-A")) {
                    if (auto alg = algorithm_from_name(*v))
                        cfg.algorithm = *alg;
                    else
                        note("-A: unknown algorithm '" + *v + "'; using default KNN");
                }
                break;
            }
            case 'T': {
                if (auto v = next_value("-T")) {
                    const std::string s = lower(*v);
                    if (s == "pe")
                        cfg.technique = Technique::PerformanceEstimation;
                    else if (s == "ms")
                        cfg.technique = Technique::ModelSelection;
                    else
                        note("-T: unknown technique '" + *v + "'; using default pe");
                }
                break;
            }
            case 'S': {
                if (auto v = next_value("-S")) {
                    const std::string s = lower(*v);
                    if (s == "ps")
                        cfg.outer.kind = SplitKind::PercentageSplit;
                    else if (s == "cv")
                        cfg.outer.kind = SplitKind::CrossValidation;
                    else
                        note("-S: unknown split '" + *v + "'; using default ps");
                }
                break;
            }
            case 'r': {
                if (auto v = next_value("-r")) {
                    auto n = parse_int(*v);
                    if (n && *n >= 1)
                        cfg.runs = static_cast<int>(*n);
                    else
                        note("-r: invalid run count '" + *v + "'; using default 1");
                }
                break;
            }
            case 'F': {
                if (auto v = next_value("-F")) {
                    auto n = parse_int(*v);
                    if (n && *n >= 2)
                        cfg.outer.folds = static_cast<int>(*n);
                    else
                        note("-F: invalid fold count '" + *v + "'; using default 3");
                }
                break;
            }
            case 's': {
                if (auto v = next_value("-s")) {
                    auto n = parse_int(*v);
                    if (n && *n >= 0)
                        cfg.base_seed = static_cast<std::uint64_t>(*n);
                    else
                        note("-s: invalid seed '" + *v + "'; using default 2");
                }
                break;
            }
            case 'P': {
                if (auto v = next_value("-P")) {
                    auto p = parse_double(*v);
                    if (p && *p > 0.0 && *p < 100.0)
                        cfg.outer.percent = *p;
                    else
                        note("-P: invalid percentage '" + *v + "'; using default 50");
                }
                break;
            }
            case 't': {
                if (auto v = next_value("-t")) {
                    const std::string s = lower(*v);
                    if (s == "ps")
                        cfg.inner.kind = SplitKind::PercentageSplit;
                    else if (s == "cv")
                        cfg.inner.kind = SplitKind::CrossValidation;
                    else
                        note("-t: unknown split '" + *v + "'; using default ps");
                }
                break;
            }
            case 'f': {
                if (auto v = next_value("-f")) {
                    auto n = parse_int(*v);
                    if (n && *n >= 2)
                        cfg.inner.folds = static_cast<int>(*n);
                    else
                        note("-f: invalid fold count '" + *v + "'; using default 3");
                }
                break;
            }
            case 'p': {
                if (auto v = next_value("-p")) {
                    auto p = parse_double(*v);
                    if (p && *p > 0.0 && *p < 100.0)
                        cfg.inner.percent = *p;
                    else
                        note("-p: invalid percentage '" + *v + "'; using default 50");
                }
                break;
            }
            default:
                note("unknown switch " + a + "; ignored");
                // Swallow the switch's value too, if one follows.
                if (i + 1 < args.size() &&
                    !(args[i + 1].size() == 2 && args[i + 1][0] == '-' &&
                      std::isalpha(static_cast<unsigned char>(args[i + 1][1]))))
                    ++i;
        }
    }
    return inv;
}

std::string usage_text() {
    return
        "-----\n"
        "--- OSCAIL - One Sided Classification and Inductive Learning ---\n"
        "-----\n"
        "----- Experimentor Version 1.0 -----\n"
        "-----\n"
        "OSCAIL option usage details:\n"
        "\n"
        "-E <Path to the example set>\n"
        "    The example set to use in the experiment.\n"
        "-R <yes/no>\n"
        "    Relabel the example set after loading? (default: no).\n"
        "-N <yes/no>\n"
        "    Normalize the example set? (default: no).\n"
        "-A <algorithm name?>\n"
        "    Which algorithm to use?: (default:KNN)\n"
        "-T <technique choice?>\n"
        "    Enter pe for Performance Estimation or ms for Model Selection (default: pe).\n"
        "-S <ps/cv>\n"
        "    Enter ps for percentage split or cv for cross validation (default: ps).\n"
        "-r <Number of runs>\n"
        "    The amount of runs in the experiment (default: 1).\n"
        "-F <Number of folds>\n"
        "    The amount of folds in the experiment (for cross validation) (default: 3).\n"
        "-s <Initial random number seed>\n"
        "    The initial random number generator seed for shuffling (default: 2)\n"
        "-P <Percentage split percent>\n"
        "    The percent used for the percentage split of the example set (default: 50)\n"
        "-t <Training split used?>\n"
        "    Which way the training set with be split (percentage split or cross validation) (default: 1)\n"
        "-f <Training split folds?>\n"
        "    Amount of folds used for the split of the training examples (default: 3)\n"
        "-p <Training split percentage?>\n"
        "    Percentage used for the split of the training examples (default: 50)\n"
        "\n";
}

std::string grid_help_text(Algorithm algorithm) {
    std::ostringstream out;
    for (const GridSwitch& sw : switches_for(algorithm)) {
        out << '-' << sw.letter << " sequence <start> <increment> <end>\n"
            << "or\n"
            << '-' << sw.letter << " individual <" << sw.letter << " value1> <" << sw.letter
            << " value2>...\n";
        if (sw.letter == 'D') {
            out << "    The distance metric to use (Euclidean=e, Manhattan=m, Cosine=c) "
                   "(default: "
                << sw.defaults.front() << ").\n";
        } else if (sw.type == SwitchType::Token) {
            out << "    " << sw.description << " (";
            for (std::size_t i = 0; i < sw.tokens.size(); ++i)
                out << (i ? ", " : "") << sw.tokens[i];
            out << ") (default: " << sw.defaults.front() << ").\n";
        } else {
            out << "    " << sw.description << " (default: " << sw.defaults.front() << ").\n";
        }
    }
    out << "\nExample usage below;\nType: ";
    if (algorithm == Algorithm::OscKnn) {
        out << "-M individual 1 2 -K individual 3 2 -T individual 9.0 7.0 -D individual c m";
    } else {
        bool first = true;
        for (const GridSwitch& sw : switches_for(algorithm)) {
            if (!first) out << ' ';
            first = false;
            out << '-' << sw.letter << " individual " << sw.defaults.front();
        }
    }
    out << "\n\nPlease type out a single string to set the options,\n"
           "as described above. Otherwise, the defaults will be chosen.\n"
           "(Press Enter with no text to skip this step.)\n:\n";
    return out.str();
}

ParamGrid prompt_grid(Algorithm algorithm, const ExperimentConfig& config, std::istream& in,
                      std::ostream& out) {
    out << grid_help_text(algorithm);
    out.flush();
    std::string line;
    if (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
    } else {
        line.clear();
    }
    GridParseResult parsed = line.empty() ? GridParseResult{default_grid(algorithm), {}}
                                          : parse_param_grid(line, algorithm);
    for (const std::string& n : parsed.notifications) out << "Note: " << n << '\n';
    out << '\n' << render_settings_echo(config, parsed.grid);
    return parsed.grid;
}

namespace {

std::optional<ParsedArff> prompt_for_arff(std::istream& in, std::ostream& out,
                                          std::string first_path) {
    std::string path = std::move(first_path);
    for (;;) {
        if (!path.empty()) {
            try {
                ParsedArff parsed = parse_arff_file(path);
                for (const ArffWarning& w : parsed.warnings)
                    out << "Warning: line " << w.line << ": " << w.message << '\n';
                return parsed;
            } catch (const std::exception& e) {
                out << "Could not load '" << path << "': " << e.what() << '\n';
            }
        }
        auto answer = prompt(in, out, "Please enter the path to the example set: ");
        if (!answer) return std::nullopt; // input exhausted
        path = *answer;
    }
}

// Prompt for the target class until relabelling succeeds.
std::optional<std::pair<ExampleSet, RelabelProvenance>> prompt_relabel(const ExampleSet& set,
                                                                       std::istream& in,
                                                                       std::ostream& out) {
    out << "The class attribute values are:";
    for (const std::string& v : set.class_attribute().values) out << ' ' << v;
    out << '\n';
    for (;;) {
        auto answer = prompt(in, out, "Enter the name of the target class: ");
        if (!answer) return std::nullopt;
        try {
            return relabel(set, *answer);
        } catch (const std::exception& e) {
            out << e.what() << '\n';
        }
    }
}

} // namespace

EvalReport saved_classifier_flow(std::istream& in, std::ostream& out) {
    std::unique_ptr<Classifier> model;
    for (;;) {
        auto path = prompt(in, out, "Enter the path to the saved classifier: ");
        if (!path) throw std::runtime_error("no classifier path supplied");
        try {
            model = load_model(*path);
            break;
        } catch (const std::exception& e) {
            out << e.what() << '\n';
        }
    }
    out << "Loaded a " << model->algorithm_id() << " classifier expecting " << model->arity()
        << " features.\n";

    for (;;) {
        auto path = prompt(in, out, "Enter the path to the test example set: ");
        if (!path) throw std::runtime_error("no test set supplied");
        ParsedArff parsed;
        try {
            parsed = parse_arff_file(*path);
        } catch (const std::exception& e) {
            out << e.what() << '\n';
            continue;
        }
        ExampleSet set = std::move(parsed.set);
        if (!is_one_sided(set)) {
            auto relabelled = prompt_relabel(set, in, out);
            if (!relabelled) throw std::runtime_error("no target class supplied");
            set = std::move(relabelled->first);
        }
        if (set.feature_count() != model->arity()) {
            out << "Example set has " << set.feature_count()
                << " features but the classifier expects " << model->arity() << ".\n";
            continue;
        }
        const EvalReport report = evaluate_on(*model, IndexView::full(set));
        out << '\n' << render_confusion(report.matrix) << '\n';
        out << "Error estimate: " << fmt_double(report.error) << '\n';
        out << "Sensitivity: " << fmt_double(report.sensitivity) << '\n';
        out << "Specificity: " << fmt_double(report.specificity) << '\n';
        out << "Balanced Accuracy Rate: " << fmt_double(report.bar) << '\n';
        out << "Balanced Error Rate: " << fmt_double(report.ber) << '\n';
        return report;
    }
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out) {
    try {
        CliInvocation inv = parse_cli(args);
        if (inv.show_usage) {
            out << usage_text();
            auto answer =
                prompt(in, out, "Would you like to load a previously saved classifier? (yes/no):");
            if (answer && yes_no(*answer, false)) {
                saved_classifier_flow(in, out);
            } else {
                out << "\nRun again with -E <path to example set> to start an experiment.\n";
            }
            return 0;
        }
        for (const std::string& n : inv.notifications) out << "Note: " << n << '\n';

        auto parsed = prompt_for_arff(in, out, inv.config.example_set_path);
        if (!parsed) {
            out << "No example set supplied.\n";
            return 1;
        }
        ExampleSet set = std::move(parsed->set);
        out << "Loaded example set '" << set.relation << "' with " << set.size()
            << " examples and " << set.feature_count() << " features.\n";

        if (inv.config.relabel || !is_one_sided(set)) {
            if (!inv.config.relabel)
                out << "The example set contains more than just a Target and Other class and "
                       "must be relabelled for one-sided classification.\n";
            auto result = prompt_relabel(set, in, out);
            if (!result) return 1;
            set = std::move(result->first);
            inv.config.relabel = true;
            inv.config.relabel_target = result->second.target_label;
            auto save = prompt(in, out, "Would you like to save the relabelled example set? (yes/no):");
            if (save && yes_no(*save, false)) {
                auto path = prompt(in, out, "Enter the output path for the relabelled set: ");
                if (path && !path->empty()) {
                    write_arff_file(set, *path, result->second);
                    out << "Relabelled example set written to " << *path << '\n';
                }
            }
        }

        inv.config.grid = prompt_grid(inv.config.algorithm, inv.config, in, out);

        ExperimentResult result = run_experiment(set, inv.config, &out);

        std::filesystem::create_directories("logs");
        const std::string log_path = "logs/oscail_" + utc_timestamp() + ".log";
        write_log(inv.config, result, log_path);
        out << "Log written to " << log_path << '\n';

        if (inv.config.technique == Technique::ModelSelection) {
            auto answer = prompt(in, out, "Would you like to save this classifier?(yes/no):");
            if (answer && yes_no(*answer, false)) {
                // Train the saved classifier on the whole set with the
                // winning parameters of the best run (ties: earliest run).
                const auto& runs = result.headline().runs;
                std::size_t best = 0;
                for (std::size_t r = 1; r < runs.size(); ++r)
                    if (runs[r].report.error < runs[best].report.error) best = r;
                const NormalizationKind norm = inv.config.normalize
                                                   ? NormalizationKind::PerInstance
                                                   : NormalizationKind::None;
                auto model = train_classifier(inv.config.algorithm, runs[best].chosen_params,
                                              IndexView::full(set), norm, runs[best].seed);
                const std::string path = save_model(*model, "models");
                out << "Classifier saved to " << path << '\n';
            }
        }
        return 0;
    } catch (const std::exception& e) {
        out << "Error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace oscail
