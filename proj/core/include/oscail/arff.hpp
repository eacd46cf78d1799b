#ifndef OSCAIL_ARFF_HPP
#define OSCAIL_ARFF_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "oscail/dataset.hpp"

namespace oscail {

class ArffError : public std::runtime_error {
public:
    ArffError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct ArffWarning {
    std::size_t line;
    std::string message;
};

struct ParsedArff {
    ExampleSet set;
    std::vector<ArffWarning> warnings; // e.g. rows skipped for '?' values
};

// Recorded when a multi-class set is rewritten to Target/Other; reproduced
// as the commented banner at the top of the written file.
struct RelabelProvenance {
    std::string original_relation;
    std::string target_label;
    std::vector<std::string> original_class_values;
};

// @relation/@attribute/@data are recognized case-insensitively, '%' starts a
// comment, the last attribute is the class attribute and must be nominal,
// all other attributes must be numeric. Rows containing '?' are skipped with
// a warning. Every error carries its line number.
ParsedArff parse_arff_text(std::string_view source);
inline ExampleSet parse_arff(std::string_view source) { return parse_arff_text(source).set; }
ParsedArff parse_arff_file(const std::string& path);

std::string write_arff(const ExampleSet& set,
                       const std::optional<RelabelProvenance>& prov = std::nullopt);
void write_arff_file(const ExampleSet& set, const std::string& path,
                     const std::optional<RelabelProvenance>& prov = std::nullopt);

// Every example labelled target_label becomes Target, all others Other; the
// class domain becomes exactly {Other, Target}. Feature values and example
// order are untouched.
std::pair<ExampleSet, RelabelProvenance> relabel(const ExampleSet& set,
                                                 const std::string& target_label);

} // namespace oscail

#endif
