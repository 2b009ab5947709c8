#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lmssc/data_io.hpp"
#include "lmssc/types.hpp"

namespace lmssc {

struct SweepGrid {
    std::vector<double> betas{1.0};
    std::vector<double> gammas{1.0};
    std::vector<Index> latent_dims{10};

    std::size_t size() const { return betas.size() * gammas.size() * latent_dims.size(); }
};

// Full experiment description. Exactly one of `manifest` / `synthetic` is
// set. Methods: "lmssc", "amgl", "mlan", "gfhf" (expands to one run per
// view) or "gfhf:<v>" for a single view.
struct ExperimentConfig {
    std::optional<DatasetManifest> manifest;
    std::filesystem::path manifest_dir;  // base for the manifest's relative paths
    std::optional<SyntheticSpec> synthetic;

    std::vector<std::string> methods{"lmssc"};
    std::vector<double> label_rates{0.1, 0.2, 0.3, 0.5};
    int trials = 20;
    LmsscConfig lmssc;
    std::uint64_t base_seed = 0;
    int jobs = 1;
    std::optional<SweepGrid> sweep;
};

void validate(const ExperimentConfig& config);

struct CellRecord {
    std::string method;
    double rate = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    double accuracy = 0.0;
    int iterations = 0;
    double wall_time = 0.0;  // seconds; excluded from the determinism body
    std::vector<std::string> warnings;
    std::string error;
};

struct CellAggregate {
    std::string method;
    double rate = 0.0;
    double mean = 0.0;
    double stddev = 0.0;  // sample std over trials, 0 when a single trial
    int count = 0;
};

struct ExperimentReport {
    std::vector<CellRecord> records;
    std::vector<CellAggregate> aggregates;
    nlohmann::json resolved_config;

    bool any_errors() const;
};

/// Runs the (method x rate x trial) grid. The labeled split of a cell
/// depends only on (rate, trial): seed = base_seed + trial, so adding a
/// method never disturbs the others. Per-cell failures are recorded in the
/// report and the grid keeps going.
ExperimentReport run(const ExperimentConfig& config);

struct SweepRow {
    double beta = 0.0;
    double gamma = 0.0;
    Index latent_dim = 0;
    std::string method;
    double rate = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    int count = 0;
};

struct SweepReport {
    std::vector<SweepRow> rows;  // long format, one row per grid cell
    std::optional<SweepRow> best;
    nlohmann::json resolved_config;
    bool any_errors = false;
};

/// Cartesian sweep over the grid's beta x gamma x latent_dim, each point
/// evaluated with `run`.
SweepReport sweep(const ExperimentConfig& config);

/// "93.59(1.85)"-style cell, accuracies as percentages with two decimals.
std::string format_cell(double mean, double stddev);

/// Plain-text table: one row per method, one column per label rate.
std::string format_table(const ExperimentReport& report);

/// Long-format CSV of the sweep rows, ready for surface plots.
std::string format_sweep_csv(const SweepReport& report);

/// Records as JSON. With include_timing=false the body is byte-stable across
/// reruns of the same config and is what determinism checks compare.
nlohmann::json records_json(const ExperimentReport& report, bool include_timing = true);

nlohmann::json config_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Writes records.json, table.txt, and the resolved config.json beside them.
void emit(const ExperimentReport& report, const std::filesystem::path& out_dir);
void emit(const SweepReport& report, const std::filesystem::path& out_dir);

/// Fraction of unlabeled points (raw-order mask false) predicted correctly.
double unlabeled_accuracy(const std::vector<int>& predictions_raw_order,
                          const std::vector<int>& truth_raw_order,
                          const std::vector<bool>& labeled_mask);

/// Aggregates recomputed from the records (mean and sample std per cell).
std::vector<CellAggregate> aggregate_records(const std::vector<CellRecord>& records);

}  // namespace lmssc
