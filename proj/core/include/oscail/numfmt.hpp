#ifndef OSCAIL_NUMFMT_HPP
#define OSCAIL_NUMFMT_HPP

#include <charconv>
#include <optional>
#include <string>
#include <string_view>

namespace oscail {

// Shortest decimal form that parses back to the same double. Used for the
// result streams (error estimates print with up to 17 significant digits)
// and for the .oscal/ARFF writers so serialized values round-trip exactly.
inline std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

// Same, but real-valued options echo like "4.0" rather than "4".
inline std::string fmt_real(double v) {
    std::string s = fmt_double(v);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
        s += ".0";
    }
    return s;
}

inline std::optional<double> parse_double(std::string_view s) {
    if (s.empty()) return std::nullopt;
    double v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::optional<long long> parse_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    long long v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

} // namespace oscail

#endif
