#ifndef OSCAIL_STATE_IO_HPP
#define OSCAIL_STATE_IO_HPP

// Internal helpers shared by the classifiers' write_state implementations
// and the .oscal reader.

#include <ostream>
#include <span>

#include "oscail/numfmt.hpp"
#include "oscail/preprocess.hpp"

namespace oscail::detail {

inline const char* norm_kind_name(NormalizationKind k) {
    switch (k) {
        case NormalizationKind::None: return "none";
        case NormalizationKind::PerInstance: return "instance";
        case NormalizationKind::PerAttribute: return "attribute";
    }
    return "none";
}

inline void write_vector_row(std::ostream& out, std::span<const double> v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ' ';
        out << fmt_double(v[i]);
    }
    out << '\n';
}

inline void write_normalization(std::ostream& out, const NormalizationMode& norm) {
    out << "[normalization]\n";
    out << "kind " << norm_kind_name(norm.kind) << '\n';
    if (norm.kind == NormalizationKind::PerAttribute) {
        out << "mins ";
        write_vector_row(out, norm.mins);
        out << "maxs ";
        write_vector_row(out, norm.maxs);
    }
}

} // namespace oscail::detail

#endif
