#ifndef OSCAIL_DATAGEN_HPP
#define OSCAIL_DATAGEN_HPP

#include <cstdint>
#include <string>

#include "oscail/dataset.hpp"

namespace oscail {

struct StudySets {
    ExampleSet primary;   // Target plus expected Other examples
    ExampleSet secondary; // unexpected outliers, all Other
};

// Converts the multi-feature digits "profile correlations" file (rows of
// 216 whitespace-separated values, 10 digit blocks in order) into the digit
// study pair: digit '2' becomes the Target class, digit '3' the expected
// Other class, and the secondary set takes the first `secondary_per_digit`
// rows of each remaining digit.
StudySets convert_mfeat_fac(const std::string& text, int rows_per_digit = 200,
                            int secondary_per_digit = 25);
StudySets convert_mfeat_fac_file(const std::string& path);

// Synthetic Raman-like spectra for the solvent-protocol study: the target
// and expected-outlier classes are overlapping peak mixtures, the
// unexpected class a displaced third shape. Deterministic in the seed.
StudySets generate_synthetic_solvent_study(std::uint64_t seed, int targets = 154,
                                           int expected_others = 76, int unexpected = 50);

} // namespace oscail

#endif
