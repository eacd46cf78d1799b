#include "oscail/arff.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "oscail/numfmt.hpp"

namespace oscail {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool starts_with_keyword(const std::string& line, const std::string& keyword) {
    if (line.size() < keyword.size()) return false;
    return lower(line.substr(0, keyword.size())) == keyword;
}

std::string unquote(std::string token) {
    if (token.size() >= 2) {
        const char f = token.front(), b = token.back();
        if ((f == '"' && b == '"') || (f == '\'' && b == '\''))
            return token.substr(1, token.size() - 2);
    }
    return token;
}

// Split on commas, honouring double/single quotes; whitespace around the
// separators is ignored.
std::vector<std::string> split_csv(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    char quote = '\0';
    for (char c : s) {
        if (quote != '\0') {
            cur += c;
            if (c == quote) quote = '\0';
        } else if (c == '"' || c == '\'') {
            quote = c;
            cur += c;
        } else if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::vector<std::string> parse_nominal_domain(const std::string& body, std::size_t line_no) {
    auto tokens = split_csv(body);
    // Tolerate one trailing comma ("{a, b, }").
    if (!tokens.empty() && tokens.back().empty()) tokens.pop_back();
    if (tokens.empty())
        throw ArffError(line_no, "nominal attribute needs at least one value");
    std::vector<std::string> values;
    std::unordered_set<std::string> seen;
    for (auto& t : tokens) {
        if (t.empty()) throw ArffError(line_no, "empty value in nominal list");
        std::string v = unquote(t);
        if (!seen.insert(v).second)
            throw ArffError(line_no, "duplicate nominal value '" + v + "'");
        values.push_back(std::move(v));
    }
    return values;
}

AttributeSpec parse_attribute(const std::string& rest, std::size_t line_no) {
    std::string body = trim(rest);
    if (body.empty()) throw ArffError(line_no, "@attribute needs a name and a type");

    std::string name;
    std::size_t pos = 0;
    if (body[0] == '"' || body[0] == '\'') {
        const char q = body[0];
        std::size_t close = body.find(q, 1);
        if (close == std::string::npos)
            throw ArffError(line_no, "unterminated quoted attribute name");
        name = body.substr(1, close - 1);
        pos = close + 1;
    } else {
        std::size_t ws = body.find_first_of(" \t");
        if (ws == std::string::npos)
            throw ArffError(line_no, "@attribute is missing its type");
        name = body.substr(0, ws);
        pos = ws;
    }
    std::string type = trim(body.substr(pos));
    if (name.empty()) throw ArffError(line_no, "empty attribute name");
    if (type.empty()) throw ArffError(line_no, "@attribute is missing its type");

    AttributeSpec spec;
    spec.name = name;
    if (type.front() == '{') {
        if (type.back() != '}')
            throw ArffError(line_no, "nominal value list is missing its closing '}'");
        spec.kind = AttributeKind::Nominal;
        spec.values = parse_nominal_domain(type.substr(1, type.size() - 2), line_no);
        return spec;
    }
    const std::string t = lower(type);
    if (t == "numeric" || t == "real" || t == "integer") {
        spec.kind = AttributeKind::Numeric;
        return spec;
    }
    if (t == "string" || t.rfind("date", 0) == 0)
        throw ArffError(line_no, "attribute '" + name + "' has unsupported type '" + type +
                                     "' (this toolkit handles numeric features only)");
    throw ArffError(line_no, "unknown attribute type '" + type + "'");
}

bool quoting_needed(const std::string& token) {
    if (token.empty()) return true;
    return token.find_first_of(" ,{}%'\"\t") != std::string::npos;
}

std::string write_token(const std::string& token) {
    if (!quoting_needed(token)) return token;
    return '"' + token + '"';
}

bool is_relabelled_domain(const AttributeSpec& cls) {
    return cls.kind == AttributeKind::Nominal && cls.values.size() == 2 &&
           cls.values[0] == kOtherToken && cls.values[1] == kTargetToken;
}

} // namespace

ParsedArff parse_arff_text(std::string_view source) {
    ParsedArff result;
    ExampleSet& set = result.set;

    bool seen_relation = false, seen_data = false;
    std::unordered_set<std::string> attr_names;
    std::size_t line_no = 0;

    std::istringstream in{std::string(source)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '%') continue;

        if (!seen_data) {
            if (starts_with_keyword(line, "@relation")) {
                if (seen_relation) throw ArffError(line_no, "duplicate @relation");
                set.relation = unquote(trim(line.substr(9)));
                seen_relation = true;
            } else if (starts_with_keyword(line, "@attribute")) {
                if (!seen_relation)
                    throw ArffError(line_no, "@attribute before @relation");
                AttributeSpec spec = parse_attribute(line.substr(10), line_no);
                if (!attr_names.insert(spec.name).second)
                    throw ArffError(line_no, "attribute '" + spec.name + "' redeclared");
                set.schema.push_back(std::move(spec));
            } else if (starts_with_keyword(line, "@data")) {
                if (!seen_relation) throw ArffError(line_no, "@data before @relation");
                if (set.schema.empty())
                    throw ArffError(line_no, "@data with no attributes declared");
                if (set.schema.back().kind != AttributeKind::Nominal)
                    throw ArffError(line_no,
                                    "the last attribute is the class attribute and must be nominal");
                for (std::size_t i = 0; i + 1 < set.schema.size(); ++i)
                    if (set.schema[i].kind != AttributeKind::Numeric)
                        throw ArffError(line_no, "feature attribute '" + set.schema[i].name +
                                                     "' must be numeric");
                seen_data = true;
            } else {
                throw ArffError(line_no, "unrecognized header line: " + line);
            }
            continue;
        }

        // Data row.
        if (line.find('?') != std::string::npos) {
            result.warnings.push_back(
                {line_no, "row skipped: missing value marker '?' is not supported"});
            continue;
        }
        auto fields = split_csv(line);
        if (fields.size() != set.schema.size())
            throw ArffError(line_no, "row has " + std::to_string(fields.size()) +
                                         " values but the schema declares " +
                                         std::to_string(set.schema.size()) + " attributes");
        Example ex;
        ex.features.reserve(set.schema.size() - 1);
        for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
            auto v = parse_double(unquote(fields[i]));
            if (!v)
                throw ArffError(line_no, "non-numeric value '" + fields[i] + "' in numeric column '" +
                                             set.schema[i].name + "'");
            ex.features.push_back(*v);
        }
        ex.label = unquote(fields.back());
        const auto& domain = set.schema.back().values;
        if (std::find(domain.begin(), domain.end(), ex.label) == domain.end())
            throw ArffError(line_no, "class value '" + ex.label +
                                         "' is not in the declared nominal domain");
        set.examples.push_back(std::move(ex));
    }

    if (!seen_relation) throw ArffError(line_no, "missing @relation declaration");
    if (!seen_data) throw ArffError(line_no, "missing @data declaration");
    return result;
}

ParsedArff parse_arff_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open ARFF file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_arff_text(buf.str());
}

std::string write_arff(const ExampleSet& set, const std::optional<RelabelProvenance>& prov) {
    std::ostringstream out;
    if (prov) {
        out << "%##### O S C A I L #####\n"
            << "%#One-Sided Classification and Inductive Learning#\n"
            << "%#####\n"
            << "%\n"
            << "%The " << prov->original_relation << " example set has been relabeled to\n"
            << "%only contain one Target class and one Other class.\n"
            << "%\n"
            << "%[Target Class = \"" << prov->target_label << "\"], [Other Class = All others]\n"
            << "%\n"
            << "%The old class options were written as follows:\n"
            << "%@attribute " << set.class_attribute().name << " { ";
        for (const auto& v : prov->original_class_values) out << v << ", ";
        out << "}\n%\n%\n%\n";
    }

    out << "@relation " << set.relation << '\n';
    for (const AttributeSpec& a : set.schema) {
        out << "@attribute " << write_token(a.name) << ' ';
        if (a.kind == AttributeKind::Numeric) {
            out << "numeric";
        } else if (is_relabelled_domain(a)) {
            out << "{\"Other\", \"Target\"}"; // exact relabelled form
        } else {
            out << '{';
            for (std::size_t i = 0; i < a.values.size(); ++i) {
                if (i) out << ", ";
                out << write_token(a.values[i]);
            }
            out << '}';
        }
        out << '\n';
    }
    out << "@data\n";
    for (const Example& e : set.examples) {
        for (double v : e.features) out << fmt_double(v) << ", ";
        out << write_token(e.label) << '\n';
    }
    return out.str();
}

void write_arff_file(const ExampleSet& set, const std::string& path,
                     const std::optional<RelabelProvenance>& prov) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write ARFF file: " + path);
    out << write_arff(set, prov);
    if (!out) throw std::runtime_error("failed writing ARFF file: " + path);
}

std::pair<ExampleSet, RelabelProvenance> relabel(const ExampleSet& set,
                                                 const std::string& target_label) {
    const auto& domain = set.class_attribute().values;
    if (std::find(domain.begin(), domain.end(), target_label) == domain.end())
        throw std::invalid_argument("relabel: '" + target_label +
                                    "' is not a value of the class attribute");

    RelabelProvenance prov;
    prov.original_relation = set.relation;
    prov.target_label = target_label;
    prov.original_class_values = domain;

    ExampleSet out = set;
    out.schema.back().values = {kOtherToken, kTargetToken};
    for (Example& e : out.examples)
        e.label = (e.label == target_label) ? kTargetToken : kOtherToken;
    return {std::move(out), std::move(prov)};
}

} // namespace oscail
