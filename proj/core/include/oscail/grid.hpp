#ifndef OSCAIL_GRID_HPP
#define OSCAIL_GRID_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oscail/dataset.hpp"

namespace oscail {

enum class Algorithm { OscKnn, NnPc, KMeans, OcSvm, McOcSvm, BinaryKnn };

// Canonical -A tokens: KNN NNPC KMEANS SVM MCSVM 2CKNN.
const char* algorithm_name(Algorithm a);
// Case-insensitive; nullopt for unknown names.
std::optional<Algorithm> algorithm_from_name(const std::string& name);

enum class SwitchType { Integer, Real, Token };

// One classifier option switch: its letter, the help line, its value type,
// defaults and the valid range. The per-algorithm tables drive parsing, the
// help print-out and the echo blocks alike; out-of-range values count as
// unknown input and fall back to the default.
struct GridSwitch {
    char letter;
    std::string description;
    SwitchType type = SwitchType::Real;
    std::vector<std::string> defaults;     // canonical value strings
    std::vector<std::string> tokens;       // valid values when type == Token
    double min_value = -1e308;             // inclusive bounds for numeric switches
    double max_value = 1e308;
};

const std::vector<GridSwitch>& switches_for(Algorithm a);

// Expanded option values per switch, in switch declaration order. Values
// are canonical strings: integers bare, reals with a decimal point, tokens
// verbatim.
struct ParamGrid {
    std::vector<std::pair<char, std::vector<std::string>>> entries;

    const std::vector<std::string>* values_for(char letter) const;
    bool operator==(const ParamGrid&) const = default;
};

// One point of the grid: switch letter -> chosen value.
using ParamChoice = std::vector<std::pair<char, std::string>>;

struct GridParseResult {
    ParamGrid grid;
    // One message per substituted or ignored group ("-M: ... using default").
    std::vector<std::string> notifications;
};

ParamGrid default_grid(Algorithm a);

// Parses "-X individual v1 v2 ..." / "-X sequence start increment end"
// groups against the algorithm's switch table. Malformed or unknown groups
// fall back to that switch's defaults with a notification; switches not
// mentioned also get their defaults.
GridParseResult parse_param_grid(const std::string& args, Algorithm algorithm);

// Full cartesian product in declaration order: the last switch varies
// fastest. Size is the product of the per-switch list lengths.
std::vector<ParamChoice> expand_grid(const ParamGrid& grid);

// "start, start+inc, ..." up to and including end when a step lands on it.
std::vector<double> expand_sequence(double start, double increment, double end);

} // namespace oscail

#endif
