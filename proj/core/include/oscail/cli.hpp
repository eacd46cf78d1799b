#ifndef OSCAIL_CLI_HPP
#define OSCAIL_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "oscail/experiment.hpp"
#include "oscail/metrics.hpp"

namespace oscail {

struct CliInvocation {
    ExperimentConfig config;
    std::vector<std::string> notifications; // one per substituted option
    bool show_usage = false;                // no arguments at all
};

// Recognizes -E -R -N -A -T -S -r -F -s -P -t -f -p (case sensitive).
// Malformed or unknown values never fail: the option falls back to its
// default and a notification is recorded. Zero arguments sets show_usage.
CliInvocation parse_cli(const std::vector<std::string>& args);

// The banner and option usage block shown when no arguments are given.
std::string usage_text();

// The per-algorithm option help shown before the grid prompt.
std::string grid_help_text(Algorithm algorithm);

// Prints the option help, reads one line of grid options (an empty line
// keeps the defaults), reports substitutions and echoes the two settings
// blocks.
ParamGrid prompt_grid(Algorithm algorithm, const ExperimentConfig& config, std::istream& in,
                      std::ostream& out);

// Loads a saved .oscal classifier and a test example set (both paths are
// re-prompted until valid), classifies the set and prints the report.
EvalReport saved_classifier_flow(std::istream& in, std::ostream& out);

// The whole interactive front. Prompt answers are read from `in`, so the
// flow is scriptable by piping or by the tool's --answers file.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out);

} // namespace oscail

#endif
