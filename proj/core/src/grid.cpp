#include "oscail/grid.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "oscail/numfmt.hpp"

namespace oscail {

const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::OscKnn: return "KNN";
        case Algorithm::NnPc: return "NNPC";
        case Algorithm::KMeans: return "KMEANS";
        case Algorithm::OcSvm: return "SVM";
        case Algorithm::McOcSvm: return "MCSVM";
        case Algorithm::BinaryKnn: return "2CKNN";
    }
    throw std::logic_error("algorithm_name: bad algorithm");
}

std::optional<Algorithm> algorithm_from_name(const std::string& name) {
    std::string up = name;
    std::transform(up.begin(), up.end(), up.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (up == "KNN") return Algorithm::OscKnn;
    if (up == "NNPC") return Algorithm::NnPc;
    if (up == "KMEANS") return Algorithm::KMeans;
    if (up == "SVM") return Algorithm::OcSvm;
    if (up == "MCSVM") return Algorithm::McOcSvm;
    if (up == "2CKNN") return Algorithm::BinaryKnn;
    return std::nullopt;
}

namespace {

const std::vector<std::string> kMetricTokens = {"e", "m", "c"};
const std::vector<std::string> kKernelTokens = {"g", "p"};
constexpr double kPositive = 1e-12; // smallest accepted strictly-positive value

const std::vector<GridSwitch> kKnnSwitches = {
    {'M', "M neighbours used", SwitchType::Integer, {"1"}, {}, 1},
    {'K', "K neighbours of M", SwitchType::Integer, {"1"}, {}, 1},
    {'T', "Threshold used", SwitchType::Real, {"1.0"}, {}, kPositive},
    {'D', "Distance metric used", SwitchType::Token, {"e"}, kMetricTokens},
};

const std::vector<GridSwitch> kNnPcSwitches = {
    {'D', "Distance metric used", SwitchType::Token, {"e"}, kMetricTokens},
};

const std::vector<GridSwitch> kKMeansSwitches = {
    {'C', "Number of clusters", SwitchType::Integer, {"2"}, {}, 1},
    {'T', "Threshold used", SwitchType::Real, {"1.0"}, {}, kPositive},
    {'D', "Distance metric used", SwitchType::Token, {"e"}, kMetricTokens},
};

const std::vector<GridSwitch> kSvmSwitches = {
    {'S', "Kernel width used", SwitchType::Real, {"1.0"}, {}, kPositive},
    {'N', "Nu regularisation used", SwitchType::Real, {"0.1"}, {}, kPositive, 1.0},
    {'K', "Kernel used", SwitchType::Token, {"g"}, kKernelTokens},
    {'E', "Polynomial exponent used", SwitchType::Real, {"1.0"}, {}, 1.0},
};

const std::vector<GridSwitch> kMcSvmSwitches = {
    {'C', "Number of clusters", SwitchType::Integer, {"2"}, {}, 1},
    {'S', "Kernel width used", SwitchType::Real, {"1.0"}, {}, kPositive},
    {'N', "Nu regularisation used", SwitchType::Real, {"0.1"}, {}, kPositive, 1.0},
    {'K', "Kernel used", SwitchType::Token, {"g"}, kKernelTokens},
    {'E', "Polynomial exponent used", SwitchType::Real, {"1.0"}, {}, 1.0},
};

const std::vector<GridSwitch> kBinaryKnnSwitches = {
    {'K', "K neighbours used", SwitchType::Integer, {"1"}, {}, 1},
    {'D', "Distance metric used", SwitchType::Token, {"e"}, kMetricTokens},
};

bool is_integer_text(const std::string& s) { return parse_int(s).has_value(); }

// Canonical form: integers bare, reals java-style with a decimal point.
// Out-of-range values are rejected like any other unknown input.
std::optional<std::string> canonical_value(const GridSwitch& sw, const std::string& raw) {
    switch (sw.type) {
        case SwitchType::Integer: {
            auto v = parse_int(raw);
            if (!v) return std::nullopt;
            const double d = static_cast<double>(*v);
            if (d < sw.min_value || d > sw.max_value) return std::nullopt;
            return std::to_string(*v);
        }
        case SwitchType::Real: {
            auto v = parse_double(raw);
            if (!v) return std::nullopt;
            if (*v < sw.min_value || *v > sw.max_value) return std::nullopt;
            return fmt_real(*v);
        }
        case SwitchType::Token: {
            std::string low = raw;
            std::transform(low.begin(), low.end(), low.begin(), [](unsigned char c) {
                return static_cast<char>(std::tolower(c));
            });
            if (std::find(sw.tokens.begin(), sw.tokens.end(), low) == sw.tokens.end())
                return std::nullopt;
            return low;
        }
    }
    return std::nullopt;
}

} // namespace

const std::vector<GridSwitch>& switches_for(Algorithm a) {
    switch (a) {
        case Algorithm::OscKnn: return kKnnSwitches;
        case Algorithm::NnPc: return kNnPcSwitches;
        case Algorithm::KMeans: return kKMeansSwitches;
        case Algorithm::OcSvm: return kSvmSwitches;
        case Algorithm::McOcSvm: return kMcSvmSwitches;
        case Algorithm::BinaryKnn: return kBinaryKnnSwitches;
    }
    throw std::logic_error("switches_for: bad algorithm");
}

const std::vector<std::string>* ParamGrid::values_for(char letter) const {
    for (const auto& [l, vs] : entries)
        if (l == letter) return &vs;
    return nullptr;
}

ParamGrid default_grid(Algorithm a) {
    ParamGrid grid;
    for (const GridSwitch& sw : switches_for(a)) grid.entries.emplace_back(sw.letter, sw.defaults);
    return grid;
}

std::vector<double> expand_sequence(double start, double increment, double end) {
    if (!(increment > 0.0)) throw std::invalid_argument("sequence increment must be positive");
    std::vector<double> out;
    // Tolerate representation error so e.g. 1.0 0.1 1.3 still includes 1.3.
    const double slack = increment * 1e-9;
    for (int k = 0;; ++k) {
        const double v = start + increment * static_cast<double>(k);
        if (v > end + slack) break;
        out.push_back(std::min(v, end));
    }
    if (out.empty()) throw std::invalid_argument("sequence produces no values");
    return out;
}

GridParseResult parse_param_grid(const std::string& args, Algorithm algorithm) {
    const auto& table = switches_for(algorithm);
    GridParseResult result;

    std::vector<std::string> words;
    {
        std::istringstream in(args);
        std::string w;
        while (in >> w) words.push_back(w);
    }

    // Gather the raw word groups per switch first.
    struct Group {
        char letter;
        std::vector<std::string> words; // keyword + values
    };
    std::vector<Group> groups;
    std::size_t i = 0;
    while (i < words.size()) {
        const std::string& w = words[i];
        const bool is_switch = w.size() == 2 && w[0] == '-' &&
                               std::isalpha(static_cast<unsigned char>(w[1]));
        if (!is_switch) {
            result.notifications.push_back("ignored stray input '" + w + "' (expected a -X switch)");
            ++i;
            continue;
        }
        Group g;
        g.letter = w[1];
        ++i;
        while (i < words.size() &&
               !(words[i].size() == 2 && words[i][0] == '-' &&
                 std::isalpha(static_cast<unsigned char>(words[i][1]))))
            g.words.push_back(words[i++]);
        groups.push_back(std::move(g));
    }

    auto find_switch = [&table](char letter) -> const GridSwitch* {
        for (const GridSwitch& sw : table)
            if (sw.letter == letter) return &sw;
        return nullptr;
    };

    // Resolve each group; later groups for the same switch override earlier
    // ones. Anything malformed falls back to the defaults with a message.
    std::vector<std::pair<char, std::vector<std::string>>> resolved;
    auto set_values = [&resolved](char letter, std::vector<std::string> values) {
        for (auto& [l, vs] : resolved)
            if (l == letter) {
                vs = std::move(values);
                return;
            }
        resolved.emplace_back(letter, std::move(values));
    };

    for (const Group& g : groups) {
        const GridSwitch* sw = find_switch(g.letter);
        if (!sw) {
            result.notifications.push_back(std::string("unknown switch -") + g.letter +
                                           " for this algorithm; ignored");
            continue;
        }
        const std::string prefix = std::string("-") + g.letter + ": ";
        if (g.words.empty()) {
            result.notifications.push_back(prefix + "no keyword given; using default");
            continue;
        }
        const std::string& keyword = g.words.front();
        if (keyword == "individual") {
            std::vector<std::string> values;
            bool ok = g.words.size() > 1;
            for (std::size_t v = 1; v < g.words.size() && ok; ++v) {
                auto c = canonical_value(*sw, g.words[v]);
                if (!c) {
                    result.notifications.push_back(prefix + "invalid value '" + g.words[v] +
                                                   "'; using default");
                    ok = false;
                } else {
                    values.push_back(*c);
                }
            }
            if (!ok) {
                if (g.words.size() <= 1)
                    result.notifications.push_back(prefix +
                                                   "individual needs at least one value; using default");
                continue;
            }
            set_values(g.letter, std::move(values));
        } else if (keyword == "sequence") {
            if (sw->type == SwitchType::Token) {
                result.notifications.push_back(prefix + "sequence cannot be used with " +
                                               sw->description + "; using default");
                continue;
            }
            if (g.words.size() != 4) {
                result.notifications.push_back(prefix +
                                               "sequence needs exactly 3 numeric arguments; using default");
                continue;
            }
            auto start = parse_double(g.words[1]);
            auto inc = parse_double(g.words[2]);
            auto end = parse_double(g.words[3]);
            if (!start || !inc || !end) {
                result.notifications.push_back(prefix + "sequence arguments must be numeric; using default");
                continue;
            }
            if (!(*inc > 0.0)) {
                result.notifications.push_back(prefix + "sequence increment must be positive; using default");
                continue;
            }
            if (sw->type == SwitchType::Integer &&
                !(is_integer_text(g.words[1]) && is_integer_text(g.words[2]) &&
                  is_integer_text(g.words[3]))) {
                result.notifications.push_back(prefix + "sequence values must be integers; using default");
                continue;
            }
            std::vector<double> seq;
            try {
                seq = expand_sequence(*start, *inc, *end);
            } catch (const std::exception& e) {
                result.notifications.push_back(prefix + e.what() + std::string("; using default"));
                continue;
            }
            std::vector<std::string> values;
            values.reserve(seq.size());
            bool ok = true;
            for (double v : seq) {
                const std::string text = sw->type == SwitchType::Integer
                                             ? std::to_string(static_cast<long long>(std::llround(v)))
                                             : fmt_real(v);
                auto c = canonical_value(*sw, text);
                if (!c) {
                    result.notifications.push_back(prefix + "sequence value '" + text +
                                                   "' is out of range; using default");
                    ok = false;
                    break;
                }
                values.push_back(*c);
            }
            if (!ok) continue;
            set_values(g.letter, std::move(values));
        } else {
            result.notifications.push_back(prefix + "unknown keyword '" + keyword +
                                           "' (expected individual or sequence); using default");
        }
    }

    // Emit in switch declaration order, defaults where nothing resolved.
    for (const GridSwitch& sw : table) {
        bool found = false;
        for (auto& [l, vs] : resolved)
            if (l == sw.letter) {
                result.grid.entries.emplace_back(sw.letter, std::move(vs));
                found = true;
                break;
            }
        if (!found) result.grid.entries.emplace_back(sw.letter, sw.defaults);
    }
    return result;
}

std::vector<ParamChoice> expand_grid(const ParamGrid& grid) {
    if (grid.entries.empty()) throw std::invalid_argument("empty parameter grid");
    for (const auto& [letter, values] : grid.entries)
        if (values.empty())
            throw std::invalid_argument(std::string("parameter grid: switch -") + letter +
                                        " has no values");
    std::vector<ParamChoice> out;
    std::size_t total = 1;
    for (const auto& [letter, values] : grid.entries) total *= values.size();
    out.reserve(total);

    ParamChoice current(grid.entries.size());
    for (std::size_t i = 0; i < grid.entries.size(); ++i)
        current[i].first = grid.entries[i].first;

    // Odometer enumeration: last switch varies fastest.
    std::vector<std::size_t> pos(grid.entries.size(), 0);
    for (;;) {
        for (std::size_t i = 0; i < grid.entries.size(); ++i)
            current[i].second = grid.entries[i].second[pos[i]];
        out.push_back(current);
        std::size_t i = grid.entries.size();
        for (;;) {
            if (i == 0) return out; // carried past the first switch
            --i;
            if (++pos[i] < grid.entries[i].second.size()) break;
            pos[i] = 0;
        }
    }
}

} // namespace oscail
