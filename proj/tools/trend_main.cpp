// Unexpected-outlier trend studies: dataset preparation and the study
// runner. Produces per-metric CSV tables and a replayable manifest.
//
//   oscail-trend digits-convert <mfeat-fac file> <output dir>
//   oscail-trend synth <output dir> [--seed N]
//   oscail-trend run --primary <arff> --secondary <arff> --out <base path>
//                    [--roster digits|solvent] [--increments a,b,c,...]
//                    [--runs N] [--seed N] [--percent P] [--workers W]

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oscail/arff.hpp"
#include "oscail/datagen.hpp"
#include "oscail/harness.hpp"
#include "oscail/numfmt.hpp"

namespace {

int usage() {
    std::cerr << "usage:\n"
              << "  oscail-trend digits-convert <mfeat-fac file> <output dir>\n"
              << "  oscail-trend synth <output dir> [--seed N]\n"
              << "  oscail-trend run --primary <arff> --secondary <arff> --out <base path>\n"
              << "                   [--roster digits|solvent] [--increments a,b,c,...]\n"
              << "                   [--runs N] [--seed N] [--percent P] [--workers W]\n";
    return 2;
}

std::vector<int> parse_increments(const std::string& text) {
    std::vector<int> out;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        auto v = oscail::parse_int(tok);
        if (!v) throw std::invalid_argument("bad increment '" + tok + "'");
        out.push_back(static_cast<int>(*v));
    }
    return out;
}

int require_int(const std::string& flag, const std::string& text) {
    auto v = oscail::parse_int(text);
    if (!v) throw std::invalid_argument(flag + " needs an integer, got '" + text + "'");
    return static_cast<int>(*v);
}

double require_double(const std::string& flag, const std::string& text) {
    auto v = oscail::parse_double(text);
    if (!v) throw std::invalid_argument(flag + " needs a number, got '" + text + "'");
    return *v;
}

int cmd_digits_convert(const std::vector<std::string>& args) {
    if (args.size() != 2) return usage();
    const auto sets = oscail::convert_mfeat_fac_file(args[0]);
    std::filesystem::create_directories(args[1]);
    const auto dir = std::filesystem::path(args[1]);
    oscail::write_arff_file(sets.primary, (dir / "digits_primary.arff").string());
    oscail::write_arff_file(sets.secondary, (dir / "digits_secondary.arff").string());
    std::cout << "wrote " << (dir / "digits_primary.arff").string() << " ("
              << sets.primary.size() << " examples)\n";
    std::cout << "wrote " << (dir / "digits_secondary.arff").string() << " ("
              << sets.secondary.size() << " examples)\n";
    return 0;
}

int cmd_synth(const std::vector<std::string>& args) {
    std::uint64_t seed = 7;
    std::string dir_arg;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--seed" && i + 1 < args.size()) {
            seed = static_cast<std::uint64_t>(require_int("--seed", args[++i]));
        } else if (dir_arg.empty()) {
            dir_arg = args[i];
        } else {
            return usage();
        }
    }
    if (dir_arg.empty()) return usage();
    const auto sets = oscail::generate_synthetic_solvent_study(seed);
    std::filesystem::create_directories(dir_arg);
    const auto dir = std::filesystem::path(dir_arg);
    oscail::write_arff_file(sets.primary, (dir / "synth_primary.arff").string());
    oscail::write_arff_file(sets.secondary, (dir / "synth_secondary.arff").string());
    std::cout << "wrote " << (dir / "synth_primary.arff").string() << " ("
              << sets.primary.size() << " examples)\n";
    std::cout << "wrote " << (dir / "synth_secondary.arff").string() << " ("
              << sets.secondary.size() << " examples)\n";
    return 0;
}

int cmd_run(const std::vector<std::string>& args) {
    std::string primary_path, secondary_path, out_base, roster_name = "digits";
    oscail::TrendStudyConfig config;
    config.increments.clear();

    for (std::size_t i = 0; i < args.size(); ++i) {
        auto value = [&]() -> std::string {
            if (i + 1 >= args.size())
                throw std::invalid_argument("missing value after " + args[i]);
            return args[++i];
        };
        if (args[i] == "--primary") primary_path = value();
        else if (args[i] == "--secondary") secondary_path = value();
        else if (args[i] == "--out") out_base = value();
        else if (args[i] == "--roster") roster_name = value();
        else if (args[i] == "--increments") config.increments = parse_increments(value());
        else if (args[i] == "--runs") config.runs = require_int("--runs", value());
        else if (args[i] == "--seed")
            config.base_seed = static_cast<std::uint64_t>(require_int("--seed", value()));
        else if (args[i] == "--percent") config.train_percent = require_double("--percent", value());
        else if (args[i] == "--workers") config.workers = require_int("--workers", value());
        else {
            std::cerr << "unknown option " << args[i] << '\n';
            return usage();
        }
    }
    if (primary_path.empty() || secondary_path.empty() || out_base.empty()) return usage();

    if (roster_name == "digits")
        config.roster = oscail::digit_roster();
    else if (roster_name == "solvent")
        config.roster = oscail::solvent_roster();
    else {
        std::cerr << "unknown roster '" << roster_name << "' (expected digits or solvent)\n";
        return 2;
    }

    const auto primary = oscail::parse_arff_file(primary_path);
    const auto secondary = oscail::parse_arff_file(secondary_path);
    const auto study = oscail::merge_for_study(primary.set, secondary.set);

    if (config.increments.empty()) {
        const int step = roster_name == "digits" ? 25 : 10;
        for (int c = 0; c <= static_cast<int>(study.secondary_count); c += step)
            config.increments.push_back(c);
    }

    const auto table = oscail::run_trend_study(study, config);
    oscail::emit_trend_csv(table, out_base);
    oscail::write_study_manifest(config, primary_path, secondary_path, out_base + "_manifest.txt");

    std::cout << "increment";
    for (const auto& a : table.algorithms) std::cout << "  " << a;
    std::cout << "  (mean error %)\n";
    for (std::size_t inc = 0; inc < table.increments.size(); ++inc) {
        std::cout << table.increments[inc];
        for (std::size_t a = 0; a < table.algorithms.size(); ++a)
            std::cout << "  " << table.cells[a][inc].mean_error_pct;
        std::cout << '\n';
    }
    std::cout << "wrote " << out_base << "_error.csv, " << out_base << "_ber.csv and "
              << out_base << "_manifest.txt\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty()) return usage();
    const std::string cmd = args.front();
    args.erase(args.begin());
    try {
        if (cmd == "digits-convert") return cmd_digits_convert(args);
        if (cmd == "synth") return cmd_synth(args);
        if (cmd == "run") return cmd_run(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return usage();
}
