#include "lmssc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "lmssc/baselines.hpp"
#include "lmssc/propagate.hpp"
#include "lmssc/solver.hpp"

namespace lmssc {

namespace {

using nlohmann::json;

struct ResolvedMethod {
    std::string label;   // e.g. "lmssc", "gfhf(2)"
    std::string kind;    // "lmssc" | "gfhf" | "amgl" | "mlan"
    Index view = -1;     // for gfhf
};

std::vector<ResolvedMethod> resolve_methods(const std::vector<std::string>& methods,
                                            Index view_count) {
    std::vector<ResolvedMethod> out;
    for (const std::string& m : methods) {
        if (m == "lmssc" || m == "amgl" || m == "mlan") {
            out.push_back({m, m, -1});
        } else if (m == "gfhf") {
            for (Index v = 0; v < view_count; ++v)
                out.push_back({"gfhf(" + std::to_string(v) + ")", "gfhf", v});
        } else if (m.rfind("gfhf:", 0) == 0) {
            const Index v = static_cast<Index>(std::stol(m.substr(5)));
            if (v < 0 || v >= view_count)
                throw Error("method '" + m + "' names a view outside 0.." +
                            std::to_string(view_count - 1));
            out.push_back({"gfhf(" + std::to_string(v) + ")", "gfhf", v});
        } else {
            throw Error("unknown method '" + m +
                        "' (expected lmssc, amgl, mlan, gfhf, or gfhf:<view>)");
        }
    }
    return out;
}

RawDataset resolve_dataset(const ExperimentConfig& config) {
    if (config.manifest && config.synthetic)
        throw Error("config sets both a manifest and a synthetic spec");
    if (config.manifest) return load(*config.manifest, config.manifest_dir);
    if (config.synthetic) return generate_synthetic(*config.synthetic).data;
    throw Error("config names no dataset");
}

double sample_std(const std::vector<double>& values, double mean) {
    if (values.size() < 2) return 0.0;
    double accum = 0.0;
    for (double v : values) accum += (v - mean) * (v - mean);
    return std::sqrt(accum / static_cast<double>(values.size() - 1));
}

json lmssc_config_json(const LmsscConfig& c) {
    return {{"beta", c.beta},         {"gamma", c.gamma},
            {"latent_dim", c.latent_dim}, {"neighbor_count", c.neighbor_count},
            {"max_iters", c.max_iters},   {"f_rel_tol", c.f_rel_tol},
            {"rng_seed", c.rng_seed}};
}

LmsscConfig lmssc_config_from_json(const json& j) {
    LmsscConfig c;
    c.beta = j.at("beta").get<double>();
    c.gamma = j.at("gamma").get<double>();
    c.latent_dim = j.at("latent_dim").get<Index>();
    c.neighbor_count = j.at("neighbor_count").get<Index>();
    c.max_iters = j.at("max_iters").get<int>();
    c.f_rel_tol = j.at("f_rel_tol").get<double>();
    c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    return c;
}

}  // namespace

void validate(const ExperimentConfig& config) {
    if (config.trials < 1) throw Error("trials must be >= 1");
    for (double rate : config.label_rates)
        if (!(rate > 0.0 && rate < 1.0)) throw Error("label rates must lie in (0,1)");
    if (config.jobs < 1) throw Error("jobs must be >= 1");
}

bool ExperimentReport::any_errors() const {
    return std::any_of(records.begin(), records.end(),
                       [](const CellRecord& r) { return !r.ok; });
}

double unlabeled_accuracy(const std::vector<int>& predictions_raw_order,
                          const std::vector<int>& truth_raw_order,
                          const std::vector<bool>& labeled_mask) {
    if (predictions_raw_order.size() != truth_raw_order.size() ||
        truth_raw_order.size() != labeled_mask.size())
        throw DimensionMismatchError("accuracy inputs disagree on length");
    std::size_t correct = 0, total = 0;
    for (std::size_t i = 0; i < truth_raw_order.size(); ++i) {
        if (labeled_mask[i]) continue;
        ++total;
        if (predictions_raw_order[i] == truth_raw_order[i]) ++correct;
    }
    if (total == 0) throw Error("no unlabeled points to score");
    return static_cast<double>(correct) / static_cast<double>(total);
}

std::vector<CellAggregate> aggregate_records(const std::vector<CellRecord>& records) {
    std::vector<CellAggregate> aggregates;
    for (const CellRecord& rec : records) {
        auto it = std::find_if(aggregates.begin(), aggregates.end(), [&](const CellAggregate& a) {
            return a.method == rec.method && a.rate == rec.rate;
        });
        if (it == aggregates.end()) {
            aggregates.push_back({rec.method, rec.rate, 0.0, 0.0, 0});
        }
    }
    for (CellAggregate& agg : aggregates) {
        std::vector<double> values;
        for (const CellRecord& rec : records)
            if (rec.ok && rec.method == agg.method && rec.rate == agg.rate)
                values.push_back(rec.accuracy);
        agg.count = static_cast<int>(values.size());
        if (!values.empty()) {
            agg.mean = std::accumulate(values.begin(), values.end(), 0.0) /
                       static_cast<double>(values.size());
            agg.stddev = sample_std(values, agg.mean);
        }
    }
    return aggregates;
}

ExperimentReport run(const ExperimentConfig& config) {
    validate(config);
    const RawDataset raw = resolve_dataset(config);
    const Index view_count = static_cast<Index>(raw.views.size());
    const auto methods = resolve_methods(config.methods, view_count);

    struct Cell {
        ResolvedMethod method;
        double rate;
        int trial;
    };
    std::vector<Cell> cells;
    for (const auto& method : methods)
        for (double rate : config.label_rates)
            for (int trial = 0; trial < config.trials; ++trial)
                cells.push_back({method, rate, trial});

    std::vector<CellRecord> records(cells.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        while (true) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= cells.size()) break;
            const Cell& cell = cells[idx];
            CellRecord& rec = records[idx];
            rec.method = cell.method.label;
            rec.rate = cell.rate;
            rec.trial = cell.trial;
            rec.seed = config.base_seed + static_cast<std::uint64_t>(cell.trial);
            const auto t0 = std::chrono::steady_clock::now();
            try {
                // Split depends on (rate, trial) only; methods share it.
                const auto mask = make_split(raw.labels, cell.rate, rec.seed);
                const MultiViewDataset data = permute_labeled_first(raw.views, raw.labels, mask);
                std::vector<int> predictions;
                std::vector<Warning> warnings;
                if (cell.method.kind == "lmssc") {
                    LmsscConfig fit_config = config.lmssc;
                    fit_config.rng_seed = rec.seed;
                    const SolverState state = fit(data, fit_config);
                    predictions = predict(state, data);
                    rec.iterations = state.iterations;
                    warnings = state.warnings;
                } else if (cell.method.kind == "gfhf") {
                    const Matrix y_l = one_hot(data.labels, data.labeled_count, data.class_count());
                    const auto unlabeled =
                        gfhf_baseline(data.views[static_cast<std::size_t>(cell.method.view)], y_l,
                                      config.lmssc.neighbor_count, &warnings);
                    predictions = map_to_original(unlabeled, data);
                    rec.iterations = 1;
                } else if (cell.method.kind == "amgl") {
                    const AmglResult result =
                        amgl_fit(data, config.lmssc.neighbor_count, config.lmssc.max_iters,
                                 config.lmssc.f_rel_tol);
                    predictions = map_to_original(result.predictions, data);
                    rec.iterations = result.iterations;
                    warnings = result.warnings;
                } else {
                    const MlanResult result =
                        mlan_fit(data, config.lmssc.neighbor_count, config.lmssc.max_iters,
                                 config.lmssc.f_rel_tol, config.lmssc.beta, config.lmssc.gamma);
                    predictions = map_to_original(result.predictions, data);
                    rec.iterations = result.iterations;
                    warnings = result.warnings;
                }
                rec.accuracy = unlabeled_accuracy(predictions, raw.labels, mask);
                rec.ok = true;
                for (const Warning& w : warnings) rec.warnings.push_back(w.where + ": " + w.message);
            } catch (const std::exception& e) {
                rec.ok = false;
                rec.error = e.what();
            }
            rec.wall_time =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    };

    const int thread_count =
        std::min<int>(config.jobs, static_cast<int>(cells.size()));
    if (thread_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(thread_count));
        for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    ExperimentReport report;
    report.records = std::move(records);  // already in (method, rate, trial) order
    report.aggregates = aggregate_records(report.records);
    report.resolved_config = config_json(config);
    return report;
}

SweepReport sweep(const ExperimentConfig& config) {
    if (!config.sweep) throw Error("sweep called without a grid");
    const SweepGrid& grid = *config.sweep;
    if (grid.betas.empty() || grid.gammas.empty() || grid.latent_dims.empty())
        throw Error("sweep grid has an empty axis");

    SweepReport report;
    report.resolved_config = config_json(config);
    for (double beta : grid.betas) {
        for (double gamma : grid.gammas) {
            for (Index r : grid.latent_dims) {
                ExperimentConfig point = config;
                point.sweep.reset();
                point.lmssc.beta = beta;
                point.lmssc.gamma = gamma;
                point.lmssc.latent_dim = r;
                const ExperimentReport cell = run(point);
                report.any_errors = report.any_errors || cell.any_errors();
                for (const CellAggregate& agg : cell.aggregates) {
                    SweepRow row{beta, gamma, r, agg.method, agg.rate,
                                 agg.mean, agg.stddev, agg.count};
                    report.rows.push_back(row);
                    if (agg.count > 0 && (!report.best || row.mean > report.best->mean))
                        report.best = row;
                }
            }
        }
    }
    return report;
}

std::string format_cell(double mean, double stddev) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.2f(%.2f)", 100.0 * mean, 100.0 * stddev);
    return buffer;
}

std::string format_table(const ExperimentReport& report) {
    std::vector<std::string> methods;
    std::vector<double> rates;
    for (const CellAggregate& agg : report.aggregates) {
        if (std::find(methods.begin(), methods.end(), agg.method) == methods.end())
            methods.push_back(agg.method);
        if (std::find(rates.begin(), rates.end(), agg.rate) == rates.end())
            rates.push_back(agg.rate);
    }
    std::sort(rates.begin(), rates.end());

    std::ostringstream out;
    out << "accuracy (%) as mean(std) over trials\n";
    out << std::left;
    out.width(12);
    out << "method";
    for (double rate : rates) {
        char head[32];
        std::snprintf(head, sizeof(head), "rate=%.2f", rate);
        out.width(16);
        out << head;
    }
    out << "\n";
    for (const std::string& method : methods) {
        out.width(12);
        out << method;
        for (double rate : rates) {
            const auto it = std::find_if(
                report.aggregates.begin(), report.aggregates.end(),
                [&](const CellAggregate& a) { return a.method == method && a.rate == rate; });
            out.width(16);
            if (it != report.aggregates.end() && it->count > 0)
                out << format_cell(it->mean, it->stddev);
            else
                out << "-";
        }
        out << "\n";
    }
    return out.str();
}

std::string format_sweep_csv(const SweepReport& report) {
    std::ostringstream out;
    out << "beta,gamma,r,method,rate,mean,std,trials\n";
    for (const SweepRow& row : report.rows) {
        char line[256];
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%lld,%s,%.17g,%.17g,%.17g,%d\n", row.beta,
                      row.gamma, static_cast<long long>(row.latent_dim), row.method.c_str(),
                      row.rate, row.mean, row.stddev, row.count);
        out << line;
    }
    return out.str();
}

json records_json(const ExperimentReport& report, bool include_timing) {
    json records = json::array();
    for (const CellRecord& rec : report.records) {
        json r = {{"method", rec.method},   {"rate", rec.rate},       {"trial", rec.trial},
                  {"seed", rec.seed},       {"ok", rec.ok},           {"accuracy", rec.accuracy},
                  {"iterations", rec.iterations}, {"warnings", rec.warnings}};
        if (!rec.error.empty()) r["error"] = rec.error;
        if (include_timing) r["wall_time"] = rec.wall_time;
        records.push_back(std::move(r));
    }
    json aggregates = json::array();
    for (const CellAggregate& agg : report.aggregates)
        aggregates.push_back({{"method", agg.method},
                              {"rate", agg.rate},
                              {"mean", agg.mean},
                              {"std", agg.stddev},
                              {"trials", agg.count}});
    return {{"records", records}, {"aggregates", aggregates}};
}

json config_json(const ExperimentConfig& config) {
    json j;
    if (config.manifest) {
        json dims = json::array();
        for (const auto& [d, n] : config.manifest->expected_dims) dims.push_back({d, n});
        j["manifest"] = {{"name", config.manifest->name},
                         {"views", config.manifest->view_files},
                         {"labels", config.manifest->label_file},
                         {"dims", dims},
                         {"classes", config.manifest->class_count}};
        j["manifest_dir"] = config.manifest_dir.string();
    }
    if (config.synthetic) {
        const SyntheticSpec& s = *config.synthetic;
        j["synthetic"] = {{"n_samples", s.n_samples},
                          {"n_classes", s.n_classes},
                          {"latent_dim", s.latent_dim},
                          {"view_dims", s.view_dims},
                          {"cluster_separation", s.cluster_separation},
                          {"noise_sigma", s.noise_sigma},
                          {"rng_seed", s.rng_seed}};
    }
    j["methods"] = config.methods;
    j["label_rates"] = config.label_rates;
    j["trials"] = config.trials;
    j["lmssc"] = lmssc_config_json(config.lmssc);
    j["base_seed"] = config.base_seed;
    j["jobs"] = config.jobs;
    if (config.sweep)
        j["sweep"] = {{"betas", config.sweep->betas},
                      {"gammas", config.sweep->gammas},
                      {"latent_dims", config.sweep->latent_dims}};
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig config;
    if (j.contains("manifest")) {
        const json& m = j.at("manifest");
        DatasetManifest manifest;
        manifest.name = m.at("name").get<std::string>();
        manifest.view_files = m.at("views").get<std::vector<std::string>>();
        manifest.label_file = m.at("labels").get<std::string>();
        for (const auto& dims : m.at("dims"))
            manifest.expected_dims.emplace_back(dims[0].get<Index>(), dims[1].get<Index>());
        manifest.class_count = m.at("classes").get<int>();
        config.manifest = std::move(manifest);
        config.manifest_dir = j.value("manifest_dir", std::string{});
    }
    if (j.contains("synthetic")) {
        const json& s = j.at("synthetic");
        SyntheticSpec spec;
        spec.n_samples = s.at("n_samples").get<Index>();
        spec.n_classes = s.at("n_classes").get<int>();
        spec.latent_dim = s.at("latent_dim").get<Index>();
        spec.view_dims = s.at("view_dims").get<std::vector<Index>>();
        spec.cluster_separation = s.at("cluster_separation").get<double>();
        spec.noise_sigma = s.at("noise_sigma").get<double>();
        spec.rng_seed = s.at("rng_seed").get<std::uint64_t>();
        config.synthetic = spec;
    }
    config.methods = j.value("methods", std::vector<std::string>{"lmssc"});
    config.label_rates = j.value("label_rates", std::vector<double>{0.1, 0.2, 0.3, 0.5});
    config.trials = j.value("trials", 20);
    if (j.contains("lmssc")) config.lmssc = lmssc_config_from_json(j.at("lmssc"));
    config.base_seed = j.value("base_seed", std::uint64_t{0});
    config.jobs = j.value("jobs", 1);
    if (j.contains("sweep")) {
        SweepGrid grid;
        grid.betas = j.at("sweep").at("betas").get<std::vector<double>>();
        grid.gammas = j.at("sweep").at("gammas").get<std::vector<double>>();
        grid.latent_dims = j.at("sweep").at("latent_dims").get<std::vector<Index>>();
        config.sweep = grid;
    }
    return config;
}

void emit(const ExperimentReport& report, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(out_dir / "records.json");
        if (!out) throw IoError("cannot write " + (out_dir / "records.json").string());
        out << records_json(report, true).dump(2) << "\n";
    }
    {
        std::ofstream out(out_dir / "table.txt");
        if (!out) throw IoError("cannot write " + (out_dir / "table.txt").string());
        out << format_table(report);
    }
    {
        std::ofstream out(out_dir / "config.json");
        if (!out) throw IoError("cannot write " + (out_dir / "config.json").string());
        out << report.resolved_config.dump(2) << "\n";
    }
}

void emit(const SweepReport& report, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(out_dir / "sweep.csv");
        if (!out) throw IoError("cannot write " + (out_dir / "sweep.csv").string());
        out << format_sweep_csv(report);
    }
    {
        std::ofstream out(out_dir / "config.json");
        if (!out) throw IoError("cannot write " + (out_dir / "config.json").string());
        out << report.resolved_config.dump(2) << "\n";
    }
    if (report.best) {
        std::ofstream out(out_dir / "best.txt");
        char line[256];
        std::snprintf(line, sizeof(line),
                      "best cell: method=%s rate=%.2f beta=%g gamma=%g r=%lld -> %s\n",
                      report.best->method.c_str(), report.best->rate, report.best->beta,
                      report.best->gamma, static_cast<long long>(report.best->latent_dim),
                      format_cell(report.best->mean, report.best->stddev).c_str());
        out << line;
    }
}

}  // namespace lmssc
