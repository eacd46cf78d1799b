#include "oscail/datagen.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "oscail/numfmt.hpp"
#include "oscail/rng.hpp"

namespace oscail {

namespace {

constexpr int kMfeatFeatures = 216;

std::vector<AttributeSpec> numeric_schema(int features, const std::string& prefix) {
    std::vector<AttributeSpec> schema;
    schema.reserve(static_cast<std::size_t>(features) + 1);
    for (int i = 1; i <= features; ++i)
        schema.push_back({prefix + std::to_string(i), AttributeKind::Numeric, {}});
    schema.push_back({"class", AttributeKind::Nominal, {kOtherToken, kTargetToken}});
    return schema;
}

} // namespace

StudySets convert_mfeat_fac(const std::string& text, int rows_per_digit,
                            int secondary_per_digit) {
    if (rows_per_digit < 1 || secondary_per_digit < 1 || secondary_per_digit > rows_per_digit)
        throw std::invalid_argument("mfeat conversion: bad row counts");

    std::vector<std::vector<double>> rows;
    {
        std::istringstream in(text);
        std::string word;
        std::vector<double> row;
        row.reserve(kMfeatFeatures);
        while (in >> word) {
            auto v = parse_double(word);
            if (!v) throw std::runtime_error("mfeat conversion: non-numeric value '" + word + "'");
            row.push_back(*v);
            if (row.size() == kMfeatFeatures) {
                rows.push_back(std::move(row));
                row.clear();
                row.reserve(kMfeatFeatures);
            }
        }
        if (!row.empty())
            throw std::runtime_error("mfeat conversion: the file does not contain a whole "
                                     "number of 216-value rows");
    }
    const std::size_t expect = static_cast<std::size_t>(rows_per_digit) * 10;
    if (rows.size() != expect)
        throw std::runtime_error("mfeat conversion: expected " + std::to_string(expect) +
                                 " rows (10 digit blocks), found " + std::to_string(rows.size()));

    StudySets out;
    out.primary.relation = "mfeat-fac-digit2";
    out.primary.schema = numeric_schema(kMfeatFeatures, "att");
    out.secondary.relation = "mfeat-fac-unexpected";
    out.secondary.schema = out.primary.schema;

    auto block = [&](int digit) { return static_cast<std::size_t>(digit * rows_per_digit); };
    for (int i = 0; i < rows_per_digit; ++i)
        out.primary.examples.push_back({rows[block(2) + static_cast<std::size_t>(i)], kTargetToken});
    for (int i = 0; i < rows_per_digit; ++i)
        out.primary.examples.push_back({rows[block(3) + static_cast<std::size_t>(i)], kOtherToken});
    for (int digit : {0, 1, 4, 5, 6, 7, 8, 9})
        for (int i = 0; i < secondary_per_digit; ++i)
            out.secondary.examples.push_back(
                {rows[block(digit) + static_cast<std::size_t>(i)], kOtherToken});
    return out;
}

StudySets convert_mfeat_fac_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open digits file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return convert_mfeat_fac(buf.str());
}

namespace {

struct Peak {
    double position;
    double amplitude;
    double width;
};

// One noisy spectrum: sum of jittered Gaussian peaks on a sloping baseline,
// under a random overall intensity scale (which the per-instance
// normalization later removes).
std::vector<double> make_spectrum(SplitMix64& rng, const std::vector<Peak>& peaks, int points) {
    const double scale = std::exp(0.4 * rng.gaussian());
    std::vector<double> x(static_cast<std::size_t>(points), 0.0);
    std::vector<Peak> jittered;
    jittered.reserve(peaks.size());
    for (const Peak& p : peaks)
        jittered.push_back({p.position + 1.5 * rng.gaussian(),
                            p.amplitude * (1.0 + 0.15 * rng.gaussian()), p.width});
    for (int i = 0; i < points; ++i) {
        double v = 0.05 + 0.0005 * i; // baseline
        for (const Peak& p : jittered) {
            const double d = (i - p.position) / p.width;
            v += p.amplitude * std::exp(-0.5 * d * d);
        }
        v += 0.02 * rng.gaussian();
        x[static_cast<std::size_t>(i)] = scale * v;
    }
    return x;
}

} // namespace

StudySets generate_synthetic_solvent_study(std::uint64_t seed, int targets, int expected_others,
                                           int unexpected) {
    constexpr int kPoints = 100;
    // Target and expected-outlier shapes share their strongest peak, so the
    // classes overlap; the unexpected shape is displaced, with only a faint
    // echo of the target's secondary peak.
    const std::vector<Peak> target_peaks = {{25.0, 1.0, 5.0}, {60.0, 0.7, 7.0}};
    const std::vector<Peak> other_peaks = {{25.0, 0.9, 5.0}, {70.0, 0.8, 7.0}};
    const std::vector<Peak> unexpected_peaks = {
        {15.0, 0.9, 4.0}, {60.0, 0.5, 5.0}, {85.0, 0.9, 4.0}};

    SplitMix64 rng(seed);
    StudySets out;
    out.primary.relation = "synthetic-solvents";
    out.primary.schema = numeric_schema(kPoints, "wn");
    out.secondary.relation = "synthetic-solvents-unexpected";
    out.secondary.schema = out.primary.schema;

    for (int i = 0; i < targets; ++i)
        out.primary.examples.push_back({make_spectrum(rng, target_peaks, kPoints), kTargetToken});
    for (int i = 0; i < expected_others; ++i)
        out.primary.examples.push_back({make_spectrum(rng, other_peaks, kPoints), kOtherToken});
    for (int i = 0; i < unexpected; ++i)
        out.secondary.examples.push_back(
            {make_spectrum(rng, unexpected_peaks, kPoints), kOtherToken});
    return out;
}

} // namespace oscail
