#include "oscail/model_io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "oscail/kmeans.hpp"
#include "oscail/neighbors.hpp"
#include "oscail/numfmt.hpp"
#include "oscail/ocsvm.hpp"

namespace oscail {

namespace {

constexpr int kFormatVersion = 1;

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next non-empty line, or throws with the given context.
    std::string expect_line(const std::string& context) {
        std::string line;
        while (std::getline(in_, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return line;
        }
        throw std::runtime_error("truncated model file: expected " + context);
    }

    // Splits "key rest..." on the first space.
    static std::pair<std::string, std::string> key_value(const std::string& line) {
        const std::size_t sp = line.find(' ');
        if (sp == std::string::npos) return {line, ""};
        return {line.substr(0, sp), line.substr(sp + 1)};
    }

private:
    std::istream& in_;
};

std::vector<double> parse_row(const std::string& text, std::size_t expect,
                              const std::string& context) {
    std::istringstream in(text);
    std::vector<double> out;
    std::string w;
    while (in >> w) {
        auto v = parse_double(w);
        if (!v) throw std::runtime_error("bad number '" + w + "' in " + context);
        out.push_back(*v);
    }
    if (expect != 0 && out.size() != expect)
        throw std::runtime_error(context + ": expected " + std::to_string(expect) +
                                 " numbers, found " + std::to_string(out.size()));
    return out;
}

// [hyperparameters] and [normalization] as a flat key -> value-text map.
struct Sections {
    std::map<std::string, std::string> fields;
    LineReader* reader = nullptr; // positioned just past the "[state]" line
};

Sections read_until_state(LineReader& reader) {
    Sections s;
    s.reader = &reader;
    std::string line = reader.expect_line("[hyperparameters]");
    if (line != "[hyperparameters]")
        throw std::runtime_error("model file: expected [hyperparameters], found '" + line + "'");
    for (;;) {
        line = reader.expect_line("model sections");
        if (line == "[normalization]" || line == "[state]") break;
        auto [k, v] = LineReader::key_value(line);
        s.fields[k] = v;
    }
    if (line == "[normalization]") {
        for (;;) {
            line = reader.expect_line("normalization section");
            if (line == "[state]") break;
            auto [k, v] = LineReader::key_value(line);
            s.fields["norm." + k] = v;
        }
    }
    return s;
}

const std::string& field(const Sections& s, const std::string& key) {
    auto it = s.fields.find(key);
    if (it == s.fields.end())
        throw std::runtime_error("model file: missing field '" + key + "'");
    return it->second;
}

double field_double(const Sections& s, const std::string& key) {
    auto v = parse_double(field(s, key));
    if (!v) throw std::runtime_error("model file: field '" + key + "' is not a number");
    return *v;
}

int field_int(const Sections& s, const std::string& key) {
    auto v = parse_int(field(s, key));
    if (!v) throw std::runtime_error("model file: field '" + key + "' is not an integer");
    return static_cast<int>(*v);
}

Metric field_metric(const Sections& s) {
    const std::string& m = field(s, "metric");
    if (m.size() != 1) throw std::runtime_error("model file: bad metric field '" + m + "'");
    return metric_from_letter(m[0]);
}

NormalizationMode norm_from(const Sections& s) {
    NormalizationMode norm;
    const std::string kind = field(s, "norm.kind");
    if (kind == "none") {
        norm.kind = NormalizationKind::None;
    } else if (kind == "instance") {
        norm.kind = NormalizationKind::PerInstance;
    } else if (kind == "attribute") {
        norm.kind = NormalizationKind::PerAttribute;
        norm.mins = parse_row(field(s, "norm.mins"), 0, "normalization mins");
        norm.maxs = parse_row(field(s, "norm.maxs"), 0, "normalization maxs");
        if (norm.mins.size() != norm.maxs.size())
            throw std::runtime_error("model file: normalization mins/maxs lengths differ");
    } else {
        throw std::runtime_error("model file: unknown normalization kind '" + kind + "'");
    }
    return norm;
}

std::vector<std::vector<double>> read_rows(LineReader& reader, std::size_t count,
                                           std::size_t arity, const std::string& context) {
    std::vector<std::vector<double>> rows;
    rows.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        rows.push_back(parse_row(reader.expect_line(context), arity, context));
    return rows;
}

std::pair<std::size_t, std::size_t> counts_from(const std::string& text,
                                                const std::string& context) {
    std::istringstream in(text);
    long long n = -1, d = -1;
    in >> n >> d;
    if (n < 0 || d <= 0) throw std::runtime_error("model file: bad counts in " + context);
    return {static_cast<std::size_t>(n), static_cast<std::size_t>(d)};
}

KernelSpec kernel_from(const Sections& s) {
    KernelSpec k;
    const std::string kind = field(s, "kernel");
    if (kind == "gaussian")
        k.kind = KernelSpec::Kind::Gaussian;
    else if (kind == "polynomial")
        k.kind = KernelSpec::Kind::Polynomial;
    else
        throw std::runtime_error("model file: unknown kernel '" + kind + "'");
    k.sigma = field_double(s, "sigma");
    k.exponent = field_double(s, "exponent");
    return k;
}

// "key n d" state-section header read from the line stream.
std::pair<std::size_t, std::size_t> expect_counts(LineReader& reader, const std::string& key) {
    auto [k, rest] = LineReader::key_value(reader.expect_line(key + " counts"));
    if (k != key) throw std::runtime_error("model file: expected '" + key + "' line");
    return counts_from(rest, key);
}

std::unique_ptr<Classifier> load_knn(Sections& s) {
    auto [n, d] = expect_counts(*s.reader, "targets");
    auto rows = read_rows(*s.reader, n, d, "stored target row");
    return std::make_unique<OsKnnClassifier>(std::move(rows), field_int(s, "m"),
                                             field_int(s, "k"), field_double(s, "threshold"),
                                             field_metric(s),
                                             norm_from(s));
}

std::unique_ptr<Classifier> load_nnpc(Sections& s) {
    auto [kd, delta_text] = LineReader::key_value(s.reader->expect_line("delta"));
    if (kd != "delta") throw std::runtime_error("model file: expected delta line");
    auto recorded = parse_double(delta_text);
    if (!recorded) throw std::runtime_error("model file: bad delta value");
    auto [n, d] = expect_counts(*s.reader, "targets");
    auto rows = read_rows(*s.reader, n, d, "stored target row");
    auto model = std::make_unique<NnPcClassifier>(std::move(rows),
                                                  field_metric(s),
                                                  norm_from(s));
    // delta is recomputed from the stored vectors; check it matches.
    if (std::abs(*recorded - model->delta()) > 1e-9 * std::max(1.0, std::abs(*recorded)))
        throw std::runtime_error("model file: recorded delta does not match the stored targets");
    return model;
}

std::unique_ptr<Classifier> load_kmeans(Sections& s) {
    auto [n, d] = expect_counts(*s.reader, "centroids");
    auto rows = read_rows(*s.reader, n, d, "centroid row");
    if (static_cast<std::size_t>(field_int(s, "clusters")) != n)
        throw std::runtime_error("model file: cluster count does not match centroid rows");
    return std::make_unique<KMeansClassifier>(std::move(rows), field_double(s, "threshold"),
                                              field_metric(s),
                                              norm_from(s));
}

std::unique_ptr<Classifier> load_binary_knn(Sections& s) {
    auto [n, d] = expect_counts(*s.reader, "stored");
    std::vector<std::pair<std::vector<double>, Label>> stored;
    stored.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string line = s.reader->expect_line("stored example row");
        auto [lab, rest] = LineReader::key_value(line);
        Label label;
        if (lab == kTargetToken)
            label = Label::Target;
        else if (lab == kOtherToken)
            label = Label::Other;
        else
            throw std::runtime_error("model file: bad label '" + lab + "' in stored row");
        stored.emplace_back(parse_row(rest, d, "stored example row"), label);
    }
    return std::make_unique<BinaryKnnClassifier>(std::move(stored), field_int(s, "k"),
                                                 field_metric(s),
                                                 norm_from(s));
}

std::pair<std::vector<std::vector<double>>, std::vector<double>> read_support(
    LineReader& reader, const std::string& counts_text) {
    auto [n, d] = counts_from(counts_text, "support");
    if (n == 0) throw std::runtime_error("model file: empty support vector set");
    std::vector<std::vector<double>> sv;
    std::vector<double> alpha;
    sv.reserve(n);
    alpha.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = parse_row(reader.expect_line("support row"), d + 1, "support row");
        alpha.push_back(row.front());
        sv.emplace_back(row.begin() + 1, row.end());
    }
    return {std::move(sv), std::move(alpha)};
}

std::unique_ptr<Classifier> load_svm(Sections& s) {
    auto [k, rest] = LineReader::key_value(s.reader->expect_line("rho"));
    if (k != "rho") throw std::runtime_error("model file: expected rho line");
    auto rho = parse_double(rest);
    if (!rho) throw std::runtime_error("model file: bad rho value");
    auto [k2, counts] = LineReader::key_value(s.reader->expect_line("support counts"));
    if (k2 != "support") throw std::runtime_error("model file: expected support line");
    auto [sv, alpha] = read_support(*s.reader, counts);
    return std::make_unique<OcSvmClassifier>(std::move(sv), std::move(alpha), *rho,
                                             field_double(s, "nu"), kernel_from(s),
                                             norm_from(s));
}

std::unique_ptr<Classifier> load_mcsvm(Sections& s) {
    const int clusters = field_int(s, "clusters");
    const KernelSpec kernel = kernel_from(s);
    const double nu = field_double(s, "nu");
    std::vector<McOcSvmClassifier::Cluster> built;
    for (int c = 0; c < clusters; ++c) {
        auto [k0, idx] = LineReader::key_value(s.reader->expect_line("cluster header"));
        if (k0 != "cluster") throw std::runtime_error("model file: expected cluster line");
        auto [k1, cen] = LineReader::key_value(s.reader->expect_line("centroid"));
        if (k1 != "centroid") throw std::runtime_error("model file: expected centroid line");
        auto centroid = parse_row(cen, 0, "centroid");
        auto [k2, rho_text] = LineReader::key_value(s.reader->expect_line("rho"));
        if (k2 != "rho") throw std::runtime_error("model file: expected rho line");
        auto rho = parse_double(rho_text);
        if (!rho) throw std::runtime_error("model file: bad rho value");
        auto [k3, counts] = LineReader::key_value(s.reader->expect_line("support counts"));
        if (k3 != "support") throw std::runtime_error("model file: expected support line");
        auto [sv, alpha] = read_support(*s.reader, counts);
        OcSvmClassifier svm(std::move(sv), std::move(alpha), *rho, nu, kernel,
                            NormalizationMode{});
        built.push_back({std::move(centroid), std::move(svm)});
    }
    return std::make_unique<McOcSvmClassifier>(std::move(built), nu, kernel, norm_from(s));
}

} // namespace

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

void save_model_to(const Classifier& model, std::ostream& out) {
    out << "oscal " << kFormatVersion << '\n';
    out << "algorithm " << model.algorithm_id() << '\n';
    out << "created " << utc_timestamp() << '\n';
    model.write_state(out);
}

std::unique_ptr<Classifier> load_model_from(std::istream& in) {
    LineReader reader(in);
    auto [magic, version] = LineReader::key_value(reader.expect_line("oscal header"));
    if (magic != "oscal")
        throw std::runtime_error("not a .oscal model file (missing header)");
    auto v = parse_int(version);
    if (!v || *v != kFormatVersion)
        throw std::runtime_error("unsupported .oscal format version '" + version + "' (expected " +
                                 std::to_string(kFormatVersion) + ")");
    auto [k1, algorithm] = LineReader::key_value(reader.expect_line("algorithm"));
    if (k1 != "algorithm") throw std::runtime_error("model file: expected algorithm line");
    auto [k2, created] = LineReader::key_value(reader.expect_line("created"));
    if (k2 != "created") throw std::runtime_error("model file: expected created line");
    (void)created;

    Sections s = read_until_state(reader);
    if (algorithm == "KNN") return load_knn(s);
    if (algorithm == "NNPC") return load_nnpc(s);
    if (algorithm == "KMEANS") return load_kmeans(s);
    if (algorithm == "2CKNN") return load_binary_knn(s);
    if (algorithm == "SVM") return load_svm(s);
    if (algorithm == "MCSVM") return load_mcsvm(s);
    throw std::runtime_error("model file: unknown algorithm '" + algorithm + "'");
}

std::string save_model(const Classifier& model, const std::string& directory) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);
    const std::string stem = std::string(model.algorithm_id()) + "_" + utc_timestamp();
    fs::path path = fs::path(directory) / (stem + ".oscal");
    for (int n = 2; fs::exists(path); ++n)
        path = fs::path(directory) / (stem + "_" + std::to_string(n) + ".oscal");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model file: " + path.string());
    save_model_to(model, out);
    if (!out) throw std::runtime_error("failed writing model file: " + path.string());
    return path.string();
}

std::unique_ptr<Classifier> load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    return load_model_from(in);
}

} // namespace oscail
