#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "oscail/datagen.hpp"
#include "oscail/harness.hpp"
#include "oscail/neighbors.hpp"
#include "oscail/numfmt.hpp"
#include "test_helpers.hpp"

using namespace oscail;

namespace {

// A small, fast study: well-separated targets/others plus a displaced
// unexpected cluster.
struct SmallStudy {
    ExampleSet primary;
    ExampleSet secondary;
};

SmallStudy small_study(std::uint64_t seed = 3, int targets = 30, int others = 18,
                       int unexpected = 12) {
    SplitMix64 rng(seed);
    std::vector<std::vector<double>> pf;
    std::vector<std::string> pl;
    for (int i = 0; i < targets; ++i) {
        pf.push_back({rng.gaussian(), rng.gaussian()});
        pl.push_back(kTargetToken);
    }
    for (int i = 0; i < others; ++i) {
        pf.push_back({4.0 + rng.gaussian(), rng.gaussian()});
        pl.push_back(kOtherToken);
    }
    std::vector<std::vector<double>> sf;
    std::vector<std::string> sl;
    for (int i = 0; i < unexpected; ++i) {
        sf.push_back({rng.gaussian(), 30.0 + rng.gaussian()});
        sl.push_back(kOtherToken);
    }
    SmallStudy s;
    s.primary = test::make_set(pf, pl);
    s.secondary = test::make_set(sf, sl);
    return s;
}

TrendStudyConfig small_config(int runs = 6) {
    TrendStudyConfig cfg;
    cfg.increments = {0, 4, 8, 12};
    cfg.runs = runs;
    cfg.base_seed = 2;
    cfg.train_percent = 67.0;
    cfg.roster.push_back({"OSC-kNN", "M=1 K=1 T=1.5", true,
                          [](const IndexView& train, std::uint64_t) {
                              return std::make_unique<OsKnnClassifier>(
                                  train_osknn(train, 1, 1, 1.5, Metric::Euclidean));
                          }});
    cfg.roster.push_back({"2C-1NN", "K=1", false,
                          [](const IndexView& train, std::uint64_t) {
                              return std::make_unique<BinaryKnnClassifier>(
                                  train_binary_knn(train, 1, Metric::Euclidean));
                          }});
    return cfg;
}

} // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("merge validation") {
    SmallStudy s = small_study();
    CHECK_NOTHROW(merge_for_study(s.primary, s.secondary));

    SUBCASE("arity mismatch") {
        ExampleSet bad = s.secondary;
        bad.schema.insert(bad.schema.begin(), {"extra", AttributeKind::Numeric, {}});
        for (auto& e : bad.examples) e.features.push_back(0.0);
        CHECK_THROWS_WITH_AS(merge_for_study(s.primary, bad), doctest::Contains("features"),
                             std::invalid_argument);
    }
    SUBCASE("secondary must be all Other") {
        ExampleSet bad = s.secondary;
        bad.examples[0].label = kTargetToken;
        CHECK_THROWS_AS(merge_for_study(s.primary, bad), std::invalid_argument);
    }
    SUBCASE("primary must be one-sided") {
        ExampleSet bad = s.primary;
        for (auto& e : bad.examples) e.label = kOtherToken;
        CHECK_THROWS_AS(merge_for_study(bad, s.secondary), std::invalid_argument);
    }
}

TEST_CASE("injection preserves the base view and nests across increments") {
    SmallStudy s = small_study();
    const MergedStudy study = merge_for_study(s.primary, s.secondary);
    const SplitPlan plan = stratified_percentage_split(study.primary_view(), 67.0, 2);

    const IndexView zero = inject_outliers(plan.test, study, 0, 2);
    CHECK(zero.indices() == plan.test.indices());

    const IndexView five = inject_outliers(plan.test, study, 5, 2);
    const IndexView nine = inject_outliers(plan.test, study, 9, 2);
    CHECK(five.size() == plan.test.size() + 5);
    // Nesting: the 5-set is a prefix of the 9-set.
    for (std::size_t i = 0; i < five.size(); ++i) CHECK(five[i] == nine[i]);
    // All injected labels are Other.
    for (std::size_t i = plan.test.size(); i < nine.size(); ++i)
        CHECK(nine.label(i) == kOtherToken);

    CHECK_THROWS_AS(inject_outliers(plan.test, study, 13, 2), std::invalid_argument);
    CHECK_THROWS_AS(inject_outliers(plan.test, study, -1, 2), std::invalid_argument);
}

TEST_CASE("trend study: shared splits, one-sided invariance, baseline sensitivity") {
    SmallStudy s = small_study();
    const MergedStudy study = merge_for_study(s.primary, s.secondary);
    const TrendStudyConfig cfg = small_config();
    const TrendTable table = run_trend_study(study, cfg);

    REQUIRE(table.algorithms.size() == 2);
    REQUIRE(table.increments.size() == 4);
    for (const auto& per_algo : table.cells)
        for (const TrendCell& c : per_algo) {
            CHECK(c.mean_error_pct >= 0.0);
            CHECK(c.mean_error_pct <= 100.0);
            CHECK(c.mean_ber_pct >= 0.0);
            CHECK(c.mean_ber_pct <= 100.0);
        }

    SUBCASE("one-sided rows are invariant to Other training rows; the baseline is not") {
        // Remove every Other row from the primary set: one-sided results
        // must not move. The baseline cannot even train (one label only),
        // so instead change the Other rows and require its table to change.
        ExampleSet moved = s.primary;
        for (auto& e : moved.examples)
            if (e.label == kOtherToken)
                for (auto& v : e.features) v += 0.8;
        const MergedStudy study2 = merge_for_study(moved, s.secondary);
        const TrendTable table2 = run_trend_study(study2, cfg);

        for (std::size_t inc = 0; inc < table.increments.size(); ++inc) {
            // OSC-kNN trains on targets only: identical cells.
            CHECK(table.cells[0][inc].mean_error_pct == table2.cells[0][inc].mean_error_pct);
            CHECK(table.cells[0][inc].mean_ber_pct == table2.cells[0][inc].mean_ber_pct);
        }
        bool baseline_changed = false;
        for (std::size_t inc = 0; inc < table.increments.size(); ++inc)
            baseline_changed = baseline_changed ||
                               table.cells[1][inc].mean_error_pct !=
                                   table2.cells[1][inc].mean_error_pct;
        CHECK(baseline_changed);
    }
}

TEST_CASE("increment-0 study reduces to plain performance estimation") {
    SmallStudy s = small_study();
    const MergedStudy study = merge_for_study(s.primary, s.secondary);
    TrendStudyConfig cfg = small_config(4);
    cfg.increments = {0};
    const TrendTable table = run_trend_study(study, cfg);

    // Recompute by hand: same split, same model, no injection.
    for (int r = 0; r < cfg.runs; ++r) {
        const SplitPlan plan =
            stratified_percentage_split(study.primary_view(), 67.0, cfg.base_seed + r);
        const OsKnnClassifier model = train_osknn(plan.train, 1, 1, 1.5, Metric::Euclidean);
        const EvalReport direct = evaluate_on(model, plan.test);
        CHECK(table.reports[0][0][static_cast<std::size_t>(r)].matrix == direct.matrix);
    }
}

TEST_CASE("per-increment reports recombine the fixed model's predictions") {
    SmallStudy s = small_study();
    const MergedStudy study = merge_for_study(s.primary, s.secondary);
    TrendStudyConfig cfg = small_config(3);
    const TrendTable table = run_trend_study(study, cfg);

    for (int r = 0; r < cfg.runs; ++r) {
        const SplitPlan plan =
            stratified_percentage_split(study.primary_view(), 67.0, cfg.base_seed + r);
        const OsKnnClassifier model = train_osknn(plan.train, 1, 1, 1.5, Metric::Euclidean);
        const EvalReport base = evaluate_on(model, plan.test);
        for (std::size_t inc = 0; inc < cfg.increments.size(); ++inc) {
            const IndexView injected =
                inject_outliers(plan.test, study, cfg.increments[inc], cfg.base_seed);
            // Injected rows are all Other: the matrix is the base matrix
            // plus the injected rejections/acceptances.
            std::int64_t fp = 0, tn = 0;
            for (std::size_t i = plan.test.size(); i < injected.size(); ++i)
                (model.predict(injected.features(i)) == Label::Target ? fp : tn)++;
            const ConfusionMatrix& got = table.reports[0][inc][static_cast<std::size_t>(r)].matrix;
            CHECK(got.tp == base.matrix.tp);
            CHECK(got.fn == base.matrix.fn);
            CHECK(got.fp == base.matrix.fp + fp);
            CHECK(got.tn == base.matrix.tn + tn);
        }
    }
}

TEST_CASE("the study is deterministic under 1 and 8 workers") {
    SmallStudy s = small_study();
    const MergedStudy study = merge_for_study(s.primary, s.secondary);
    TrendStudyConfig cfg = small_config(8);
    cfg.workers = 1;
    const TrendTable a = run_trend_study(study, cfg);
    cfg.workers = 8;
    const TrendTable b = run_trend_study(study, cfg);
    CHECK(render_trend_csv(a, false) == render_trend_csv(b, false));
    CHECK(render_trend_csv(a, true) == render_trend_csv(b, true));
    for (std::size_t x = 0; x < a.cells.size(); ++x)
        for (std::size_t y = 0; y < a.cells[x].size(); ++y) {
            CHECK(a.cells[x][y].mean_error_pct == b.cells[x][y].mean_error_pct);
            CHECK(a.cells[x][y].ber_sd_pct == b.cells[x][y].ber_sd_pct);
        }
}

TEST_CASE("CSV round trip at six decimals") {
    SmallStudy s = small_study();
    const MergedStudy study = merge_for_study(s.primary, s.secondary);
    const TrendTable table = run_trend_study(study, small_config(3));
    const std::string base = "trend_tmp";
    emit_trend_csv(table, base);

    for (const bool ber : {false, true}) {
        const std::string path = base + (ber ? "_ber.csv" : "_error.csv");
        std::ifstream in(path);
        REQUIRE(in.good());
        std::string header;
        std::getline(in, header);
        CHECK(header == "increment,OSC-kNN,OSC-kNN_sd,2C-1NN,2C-1NN_sd");
        for (std::size_t inc = 0; inc < table.increments.size(); ++inc) {
            std::string line;
            REQUIRE(std::getline(in, line));
            std::istringstream cells(line);
            std::string cell;
            std::getline(cells, cell, ',');
            CHECK(*parse_int(cell) == table.increments[inc]);
            for (std::size_t a = 0; a < table.algorithms.size(); ++a) {
                std::getline(cells, cell, ',');
                const double mean = ber ? table.cells[a][inc].mean_ber_pct
                                        : table.cells[a][inc].mean_error_pct;
                CHECK(*parse_double(cell) == doctest::Approx(mean).epsilon(1e-6));
                std::getline(cells, cell, ',');
                const double sd =
                    ber ? table.cells[a][inc].ber_sd_pct : table.cells[a][inc].error_sd_pct;
                CHECK(*parse_double(cell) == doctest::Approx(sd).epsilon(1e-6));
            }
        }
        std::filesystem::remove(path);
    }
}

TEST_CASE("config validation: roster, increments, counts") {
    SmallStudy s = small_study();
    const MergedStudy study = merge_for_study(s.primary, s.secondary);
    TrendStudyConfig cfg = small_config();
    cfg.roster.clear();
    CHECK_THROWS_AS(run_trend_study(study, cfg), std::invalid_argument);

    cfg = small_config();
    cfg.increments = {5, 10};
    CHECK_THROWS_AS(run_trend_study(study, cfg), std::invalid_argument);

    cfg = small_config();
    cfg.increments = {0, 10, 10};
    CHECK_THROWS_AS(run_trend_study(study, cfg), std::invalid_argument);

    cfg = small_config();
    cfg.increments = {0, 500};
    CHECK_THROWS_AS(run_trend_study(study, cfg), std::invalid_argument);

    CHECK_THROWS_AS(render_trend_csv(TrendTable{}, false), std::invalid_argument);
}

TEST_CASE("manifest echoes the full study configuration") {
    const TrendStudyConfig cfg = small_config(12);
    const std::string path = "manifest_tmp.txt";
    write_study_manifest(cfg, "p.arff", "s.arff", path);
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    CHECK(text.find("primary p.arff") != std::string::npos);
    CHECK(text.find("secondary s.arff") != std::string::npos);
    CHECK(text.find("runs 12") != std::string::npos);
    CHECK(text.find("base_seed 2") != std::string::npos);
    CHECK(text.find("train_percent 67.0") != std::string::npos);
    CHECK(text.find("increments 0 4 8 12") != std::string::npos);
    CHECK(text.find("algorithm OSC-kNN | M=1 K=1 T=1.5") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("mfeat conversion builds the digit study pair") {
    // A miniature file in the same format: 10 digit blocks of 4 rows each,
    // 216 values per row; value = digit * 1000 + row.
    std::ostringstream file;
    for (int digit = 0; digit < 10; ++digit)
        for (int row = 0; row < 4; ++row)
            for (int f = 0; f < 216; ++f)
                file << digit * 1000 + row << (f + 1 == 216 ? "\n" : " ");

    const StudySets sets = convert_mfeat_fac(file.str(), 4, 2);
    CHECK(sets.primary.size() == 8); // 4 targets (digit 2) + 4 others (digit 3)
    CHECK(sets.primary.feature_count() == 216);
    int targets = 0;
    for (const auto& e : sets.primary.examples)
        if (e.label == kTargetToken) {
            ++targets;
            CHECK(e.features[0] == doctest::Approx(2000 + (&e - sets.primary.examples.data())));
        }
    CHECK(targets == 4);
    // Secondary: first 2 rows of each remaining digit, all Other.
    CHECK(sets.secondary.size() == 16);
    for (const auto& e : sets.secondary.examples) CHECK(e.label == kOtherToken);
    CHECK(sets.secondary.examples[0].features[0] == 0.0); // digit 0, row 0
    CHECK(sets.secondary.examples[2].features[0] == 1000.0); // digit 1, row 0

    CHECK_THROWS_AS(convert_mfeat_fac("1 2 3", 4, 2), std::runtime_error);
}

TEST_CASE("the synthetic solvent analogue is reproducible and well-formed") {
    const StudySets a = generate_synthetic_solvent_study(7);
    const StudySets b = generate_synthetic_solvent_study(7);
    CHECK(a.primary == b.primary);
    CHECK(a.secondary == b.secondary);
    CHECK(a.primary.size() == 230);
    CHECK(a.secondary.size() == 50);
    CHECK(a.primary.feature_count() == 100);
    CHECK(is_one_sided(a.primary));
    int targets = 0;
    for (const auto& e : a.primary.examples)
        if (e.label == kTargetToken) ++targets;
    CHECK(targets == 154);
    const StudySets c = generate_synthetic_solvent_study(8);
    CHECK(a.primary != c.primary);
}

TEST_SUITE_END();
