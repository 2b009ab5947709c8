#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "lmssc/bench.hpp"

using namespace lmssc;
namespace fs = std::filesystem;

namespace {

ExperimentConfig synthetic_config() {
    ExperimentConfig config;
    SyntheticSpec spec;
    spec.n_samples = 80;
    spec.n_classes = 2;
    spec.latent_dim = 3;
    spec.view_dims = {10, 8};
    spec.rng_seed = 5;
    config.synthetic = spec;
    config.methods = {"lmssc"};
    config.label_rates = {0.2};
    config.trials = 1;
    config.lmssc.gamma = 0.1;  // operating point for the planted family
    config.lmssc.latent_dim = 5;
    config.lmssc.neighbor_count = 8;
    config.lmssc.max_iters = 25;
    return config;
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("single cell: one record whose aggregate equals it") {
    const ExperimentReport report = run(synthetic_config());
    REQUIRE(report.records.size() == 1);
    REQUIRE(report.aggregates.size() == 1);
    CHECK(report.records[0].ok);
    CHECK(report.aggregates[0].mean == doctest::Approx(report.records[0].accuracy));
    CHECK(report.aggregates[0].stddev == 0.0);
    CHECK(report.aggregates[0].count == 1);
}

TEST_CASE("planted synthetic reaches 90% at a low rate") {
    ExperimentConfig config = synthetic_config();
    config.trials = 2;
    config.label_rates = {0.1, 0.3};
    const ExperimentReport report = run(config);
    for (const CellAggregate& agg : report.aggregates) {
        CHECK(agg.count == 2);
        CHECK(agg.mean >= 0.90);
    }
}

TEST_CASE("rerun with the same config is byte-identical without timing") {
    ExperimentConfig config = synthetic_config();
    config.methods = {"lmssc", "gfhf", "amgl", "mlan"};
    config.trials = 2;
    const std::string a = records_json(run(config), false).dump();
    const std::string b = records_json(run(config), false).dump();
    CHECK(a == b);
}

TEST_CASE("parallel execution gives the same records as serial") {
    ExperimentConfig config = synthetic_config();
    config.methods = {"lmssc", "gfhf"};
    config.trials = 3;
    ExperimentConfig parallel = config;
    parallel.jobs = 4;
    CHECK(records_json(run(config), false).dump() ==
          records_json(run(parallel), false).dump());
}

TEST_CASE("adding a method does not change other methods' cells") {
    ExperimentConfig base = synthetic_config();
    base.methods = {"mlan"};
    base.trials = 2;
    ExperimentConfig extended = base;
    extended.methods = {"lmssc", "mlan"};

    const ExperimentReport small = run(base);
    const ExperimentReport big = run(extended);
    for (const CellRecord& rec : small.records) {
        const auto it = std::find_if(big.records.begin(), big.records.end(),
                                     [&](const CellRecord& other) {
                                         return other.method == rec.method &&
                                                other.rate == rec.rate &&
                                                other.trial == rec.trial;
                                     });
        REQUIRE(it != big.records.end());
        CHECK(it->accuracy == rec.accuracy);
        CHECK(it->seed == rec.seed);
    }
}

TEST_CASE("accuracies stay in [0,1] and stds are nonnegative") {
    ExperimentConfig config = synthetic_config();
    config.methods = {"lmssc", "gfhf", "amgl", "mlan"};
    config.trials = 2;
    const ExperimentReport report = run(config);
    for (const CellRecord& rec : report.records) {
        CHECK(rec.ok);
        CHECK(rec.accuracy >= 0.0);
        CHECK(rec.accuracy <= 1.0);
    }
    for (const CellAggregate& agg : report.aggregates) CHECK(agg.stddev >= 0.0);
}

TEST_CASE("every method is non-decreasing in label rate within one std") {
    ExperimentConfig config = synthetic_config();
    config.methods = {"lmssc", "gfhf:0", "amgl", "mlan"};
    config.label_rates = {0.1, 0.5};
    config.trials = 3;
    const ExperimentReport report = run(config);
    for (const std::string& method : {"lmssc", "gfhf(0)", "amgl", "mlan"}) {
        const CellAggregate* low = nullptr;
        const CellAggregate* high = nullptr;
        for (const CellAggregate& agg : report.aggregates) {
            if (agg.method != method) continue;
            (agg.rate == 0.1 ? low : high) = &agg;
        }
        REQUIRE(low != nullptr);
        REQUIRE(high != nullptr);
        CHECK(high->mean >= low->mean - std::max(low->stddev, high->stddev));
    }
}

TEST_CASE("cell formatting matches the two-decimal percent style") {
    CHECK(format_cell(0.9359, 0.0185) == "93.59(1.85)");
    CHECK(format_cell(1.0, 0.0) == "100.00(0.00)");
    CHECK(format_cell(0.69845, 0.05539) == "69.84(5.54)");  // rounds toward even digits per printf
}

TEST_CASE("aggregates recompute exactly from emitted records") {
    ExperimentConfig config = synthetic_config();
    config.trials = 3;
    const ExperimentReport report = run(config);
    const nlohmann::json body = records_json(report, true);

    std::vector<CellRecord> parsed;
    for (const auto& r : body.at("records")) {
        CellRecord rec;
        rec.method = r.at("method").get<std::string>();
        rec.rate = r.at("rate").get<double>();
        rec.trial = r.at("trial").get<int>();
        rec.ok = r.at("ok").get<bool>();
        rec.accuracy = r.at("accuracy").get<double>();
        parsed.push_back(rec);
    }
    const auto recomputed = aggregate_records(parsed);
    REQUIRE(recomputed.size() == report.aggregates.size());
    for (std::size_t i = 0; i < recomputed.size(); ++i) {
        CHECK(recomputed[i].mean == report.aggregates[i].mean);
        CHECK(recomputed[i].stddev == report.aggregates[i].stddev);
    }
}

TEST_CASE("empty method list yields a header-only table") {
    ExperimentConfig config = synthetic_config();
    config.methods = {};
    const ExperimentReport report = run(config);
    CHECK(report.records.empty());
    const std::string table = format_table(report);
    CHECK(table.find("method") != std::string::npos);
    CHECK(std::count(table.begin(), table.end(), '\n') == 2);  // title + header
}

TEST_CASE("a failing cell is recorded and the grid continues") {
    ExperimentConfig config = synthetic_config();
    // 0.02 * 20 per class rounds to zero and the budget of one cannot
    // cover two classes; the second rate is healthy
    config.label_rates = {0.02, 0.3};
    config.synthetic->n_samples = 40;
    const ExperimentReport report = run(config);
    REQUIRE(report.records.size() == 2);
    CHECK_FALSE(report.records[0].ok);
    CHECK(!report.records[0].error.empty());
    CHECK(report.records[1].ok);
    CHECK(report.any_errors());
}

TEST_CASE("one-point sweep equals a plain run") {
    ExperimentConfig config = synthetic_config();
    SweepGrid grid;
    grid.betas = {1.0};
    grid.gammas = {1.0};
    grid.latent_dims = {config.lmssc.latent_dim};
    config.sweep = grid;
    const SweepReport swept = sweep(config);
    REQUIRE(swept.rows.size() == 1);

    ExperimentConfig plain = config;
    plain.sweep.reset();
    const ExperimentReport direct = run(plain);
    CHECK(swept.rows[0].mean == direct.aggregates[0].mean);
    REQUIRE(swept.best.has_value());
    CHECK(swept.best->mean == swept.rows[0].mean);
}

TEST_CASE("five latent dims give five sweep rows") {
    ExperimentConfig config = synthetic_config();
    SweepGrid grid;
    grid.latent_dims = {5, 10, 15, 20, 25};
    config.sweep = grid;
    const SweepReport swept = sweep(config);
    CHECK(swept.rows.size() == 5);
    const std::string csv = format_sweep_csv(swept);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);  // header + 5 rows
}

TEST_CASE("emit writes records, table, and resolved config") {
    const fs::path dir = fs::temp_directory_path() / "lmssc_test_emit";
    fs::remove_all(dir);
    const ExperimentReport report = run(synthetic_config());
    emit(report, dir);
    CHECK(fs::exists(dir / "records.json"));
    CHECK(fs::exists(dir / "table.txt"));
    CHECK(fs::exists(dir / "config.json"));

    std::ifstream in(dir / "config.json");
    nlohmann::json j;
    in >> j;
    const ExperimentConfig restored = config_from_json(j);
    CHECK(restored.trials == 1);
    CHECK(restored.synthetic.has_value());
    CHECK(restored.synthetic->n_samples == 80);
    fs::remove_all(dir);
}

}  // TEST_SUITE
