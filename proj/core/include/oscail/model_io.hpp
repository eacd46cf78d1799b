#ifndef OSCAIL_MODEL_IO_HPP
#define OSCAIL_MODEL_IO_HPP

#include <iosfwd>
#include <memory>
#include <string>

#include "oscail/classifier.hpp"

namespace oscail {

// .oscal files are versioned text: a header (format version, algorithm id,
// creation timestamp) followed by [hyperparameters], [normalization] and
// [state] sections with full-precision decimal numbers. A loaded model
// predicts identically to the one that was saved.

void save_model_to(const Classifier& model, std::ostream& out);
std::unique_ptr<Classifier> load_model_from(std::istream& in);

// Writes <algorithm>_<UTC timestamp>.oscal into the directory and returns
// the path; a collision within the same second gets a numeric suffix.
std::string save_model(const Classifier& model, const std::string& directory);
std::unique_ptr<Classifier> load_model(const std::string& path);

// YYYYMMDDThhmmssZ.
std::string utc_timestamp();

} // namespace oscail

#endif
