// Command-line front end: synth / run / sweep / check.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lmssc/baselines.hpp"
#include "lmssc/bench.hpp"
#include "lmssc/data_io.hpp"
#include "lmssc/propagate.hpp"
#include "lmssc/solver.hpp"

namespace {

using namespace lmssc;
namespace fs = std::filesystem;

// --data accepts either a dataset manifest or a synthetic spec; the keys
// tell them apart.
void attach_dataset(ExperimentConfig& config, const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (j.contains("views")) {
        config.manifest = read_manifest(path);
        config.manifest_dir = path.parent_path();
    } else if (j.contains("n_samples")) {
        config.synthetic = read_synthetic_spec(path);
    } else {
        throw ParseError(path.string() + ": neither a manifest (views) nor a spec (n_samples)");
    }
}

struct CommonFlags {
    std::string data;
    std::string out = "out";
    std::vector<std::string> methods{"lmssc"};
    std::vector<double> rates{0.1, 0.2, 0.3, 0.5};
    int trials = 20;
    double beta = 1.0;
    double gamma = 1.0;
    long latent_dim = 10;
    long k = 15;
    int max_iters = 100;
    double f_tol = 1e-5;
    std::uint64_t seed = 0;
    int jobs = 1;
};

void add_common_flags(CLI::App& cmd, CommonFlags& flags) {
    cmd.add_option("--data", flags.data, "dataset manifest or synthetic spec (json)")
        ->required();
    cmd.add_option("--out", flags.out, "output directory");
    cmd.add_option("--methods", flags.methods,
                   "methods: lmssc, amgl, mlan, gfhf (all views), gfhf:<v>")
        ->delimiter(',');
    cmd.add_option("--rates", flags.rates, "label rates in (0,1)")->delimiter(',');
    cmd.add_option("--trials", flags.trials, "trials per cell");
    cmd.add_option("--beta", flags.beta, "graph trade-off");
    cmd.add_option("--gamma", flags.gamma, "label trade-off");
    cmd.add_option("--latent-dim,-r", flags.latent_dim, "latent dimension r");
    cmd.add_option("--k", flags.k, "neighbor count for the alpha rule and k-NN graphs");
    cmd.add_option("--max-iters", flags.max_iters, "outer iteration cap");
    cmd.add_option("--f-tol", flags.f_tol, "relative F-change stopping tolerance");
    cmd.add_option("--seed", flags.seed, "base seed for the trial schedule");
    cmd.add_option("--jobs", flags.jobs, "parallel trials");
}

ExperimentConfig to_config(const CommonFlags& flags) {
    ExperimentConfig config;
    attach_dataset(config, flags.data);
    config.methods = flags.methods;
    config.label_rates = flags.rates;
    config.trials = flags.trials;
    config.lmssc.beta = flags.beta;
    config.lmssc.gamma = flags.gamma;
    config.lmssc.latent_dim = flags.latent_dim;
    config.lmssc.neighbor_count = flags.k;
    config.lmssc.max_iters = flags.max_iters;
    config.lmssc.f_rel_tol = flags.f_tol;
    config.base_seed = flags.seed;
    config.jobs = flags.jobs;
    return config;
}

int cmd_synth(const SyntheticSpec& spec, const std::string& out_dir, const std::string& name) {
    const SyntheticDataset synthetic = generate_synthetic(spec);
    const fs::path manifest = save_dataset(out_dir, name, synthetic.data);
    write_synthetic_spec(fs::path(out_dir) / (name + "_spec.json"), spec);
    std::printf("wrote %s (%lld samples, %zu views, %d classes)\n", manifest.c_str(),
                static_cast<long long>(synthetic.data.sample_count()),
                synthetic.data.views.size(), class_count(synthetic.data.labels));
    return 0;
}

int cmd_run(const CommonFlags& flags) {
    const ExperimentConfig config = to_config(flags);
    const ExperimentReport report = run(config);
    emit(report, flags.out);
    std::cout << format_table(report);
    for (const CellRecord& rec : report.records)
        if (!rec.ok)
            std::fprintf(stderr, "cell %s rate=%.2f trial=%d failed: %s\n", rec.method.c_str(),
                         rec.rate, rec.trial, rec.error.c_str());
    std::printf("report written to %s\n", flags.out.c_str());
    return report.any_errors() ? 1 : 0;
}

int cmd_sweep(const CommonFlags& flags, const std::vector<double>& betas,
              const std::vector<double>& gammas, const std::vector<long>& rs) {
    ExperimentConfig config = to_config(flags);
    SweepGrid grid;
    if (!betas.empty()) grid.betas = betas;
    if (!gammas.empty()) grid.gammas = gammas;
    if (!rs.empty()) grid.latent_dims.assign(rs.begin(), rs.end());
    config.sweep = grid;
    const SweepReport report = sweep(config);
    emit(report, flags.out);
    std::cout << format_sweep_csv(report);
    if (report.best)
        std::printf("best: method=%s rate=%.2f beta=%g gamma=%g r=%lld -> %s\n",
                    report.best->method.c_str(), report.best->rate, report.best->beta,
                    report.best->gamma, static_cast<long long>(report.best->latent_dim),
                    format_cell(report.best->mean, report.best->stddev).c_str());
    return report.any_errors ? 1 : 0;
}

bool report_check(const char* what, bool ok) {
    std::printf("%s %s\n", ok ? "[ok]  " : "[FAIL]", what);
    return ok;
}

int cmd_check(const CommonFlags& flags, double rate) {
    ExperimentConfig config = to_config(flags);
    const RawDataset raw =
        config.manifest ? load(*config.manifest, config.manifest_dir)
                        : generate_synthetic(*config.synthetic).data;
    const Index n = raw.sample_count();
    const int classes = class_count(raw.labels);
    std::printf("dataset: %lld samples, %zu views, %d classes\n", static_cast<long long>(n),
                raw.views.size(), classes);
    for (std::size_t v = 0; v < raw.views.size(); ++v)
        std::printf("  view %zu: %lld features\n", v, static_cast<long long>(raw.views[v].rows()));

    bool all_ok = true;
    const auto mask = make_split(raw.labels, rate, flags.seed);
    const MultiViewDataset data = permute_labeled_first(raw.views, raw.labels, mask);
    all_ok &= report_check("dataset invariants", true);  // permute_labeled_first validates
    std::printf("  split at rate %.2f: %lld labeled / %lld unlabeled\n", rate,
                static_cast<long long>(data.labeled_count),
                static_cast<long long>(data.unlabeled_count()));

    for (std::size_t v = 0; v < data.views.size(); ++v) {
        const Laplacian lap = gaussian_knn_laplacian(data.views[v], flags.k);
        const auto comps = component_labels(lap.adjacency, 0.0);
        const int count = comps.empty() ? 0 : 1 + *std::max_element(comps.begin(), comps.end());
        std::printf("  view %zu symmetric %ld-NN graph: %d component(s)\n", v, flags.k, count);
    }

    LmsscConfig fit_config = config.lmssc;
    fit_config.max_iters = std::min(config.lmssc.max_iters, 5);
    fit_config.rng_seed = flags.seed;
    const SolverState state = fit(data, fit_config);

    bool graph_ok = true;
    try {
        validate(state.graph);
        const Laplacian lap = laplacian(state.graph);
        validate(lap);
    } catch (const std::exception& e) {
        std::printf("  graph violation: %s\n", e.what());
        graph_ok = false;
    }
    all_ok &= report_check("learned graph invariants (simplex rows, Laplacian PSD)", graph_ok);

    bool labels_ok = true;
    try {
        validate(state.labels, data.labels);
    } catch (const std::exception& e) {
        std::printf("  label violation: %s\n", e.what());
        labels_ok = false;
    }
    all_ok &= report_check("label indicator invariants (clamp, simplex rows)", labels_ok);

    bool descent_ok = true;
    for (const IterationTrace& t : state.iteration_trace) {
        const double slack = 1e-8 * std::max(1.0, std::abs(t.obj_start));
        descent_ok &= t.obj_after_w <= t.obj_start + slack;
        descent_ok &= t.obj_after_h <= t.obj_after_w + slack;
        descent_ok &= t.obj_after_s <= t.obj_after_h + slack;
        descent_ok &= t.obj_after_f <= t.obj_after_s + slack;
    }
    all_ok &= report_check("per-sub-step objective descent", descent_ok);

    const int comps = connected_components(state.graph, 1e-8);
    const int eig_mult = zero_eigenvalue_multiplicity(laplacian(state.graph), 1e-8);
    std::printf("  learned graph: %d component(s), zero-eigenvalue multiplicity %d\n", comps,
                eig_mult);
    all_ok &= report_check("component count matches zero-eigenvalue multiplicity",
                           comps == eig_mult);

    if (!state.warnings.empty()) {
        std::printf("  %zu warning(s):\n", state.warnings.size());
        for (const Warning& w : state.warnings)
            std::printf("    %s: %s\n", w.where.c_str(), w.message.c_str());
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"latent multi-view semi-supervised classification toolkit"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic multi-view dataset");
    SyntheticSpec spec;
    std::string synth_out = "synth_data";
    std::string synth_name = "synth";
    std::vector<long> synth_dims{30, 20, 25};
    synth->add_option("--out", synth_out, "output directory");
    synth->add_option("--name", synth_name, "dataset name prefix");
    synth->add_option("--n", spec.n_samples, "sample count");
    synth->add_option("--classes", spec.n_classes, "class count");
    synth->add_option("--latent-dim", spec.latent_dim, "true latent dimension");
    synth->add_option("--view-dims", synth_dims, "feature count per view")->delimiter(',');
    synth->add_option("--separation", spec.cluster_separation, "center separation in noise units");
    synth->add_option("--noise", spec.noise_sigma, "noise standard deviation");
    synth->add_option("--seed", spec.rng_seed, "generator seed");

    // run
    auto* run_cmd = app.add_subcommand("run", "run the method x rate x trial grid");
    CommonFlags run_flags;
    add_common_flags(*run_cmd, run_flags);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "grid sweep over beta, gamma, r");
    CommonFlags sweep_flags;
    add_common_flags(*sweep_cmd, sweep_flags);
    std::vector<double> sweep_betas;
    std::vector<double> sweep_gammas;
    std::vector<long> sweep_rs;
    sweep_cmd->add_option("--betas", sweep_betas, "beta grid")->delimiter(',');
    sweep_cmd->add_option("--gammas", sweep_gammas, "gamma grid")->delimiter(',');
    sweep_cmd->add_option("--rs", sweep_rs, "latent dimension grid")->delimiter(',');

    // check
    auto* check_cmd = app.add_subcommand("check", "validate a dataset and the solver invariants on it");
    CommonFlags check_flags;
    add_common_flags(*check_cmd, check_flags);
    double check_rate = 0.1;
    check_cmd->add_option("--rate", check_rate, "label rate for the diagnostic split");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            spec.view_dims.assign(synth_dims.begin(), synth_dims.end());
            return cmd_synth(spec, synth_out, synth_name);
        }
        if (run_cmd->parsed()) return cmd_run(run_flags);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_flags, sweep_betas, sweep_gammas, sweep_rs);
        if (check_cmd->parsed()) return cmd_check(check_flags, check_rate);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
