#include "lmssc/solver.hpp"

#include <algorithm>
#include <cmath>

#include "lmssc/latent.hpp"
#include "lmssc/propagate.hpp"
#include "lmssc/rng.hpp"

#include <string>

namespace lmssc {

namespace {

double factorization_term(const std::vector<Matrix>& views, const std::vector<Matrix>& factors,
                          const Matrix& h) {
    double total = 0.0;
    for (std::size_t v = 0; v < views.size(); ++v)
        total += (views[v] - factors[v] * h).squaredNorm();
    return total;
}

double trace_quadratic(const Matrix& embedding_cols, const Matrix& lap) {
    // Tr(M L M^T) for M with samples as columns.
    return (embedding_cols * lap * embedding_cols.transpose()).trace();
}

}  // namespace

double objective(const std::vector<Matrix>& views, const LatentModel& model,
                 const SimilarityGraph& graph, const LabelIndicator& labels, double beta,
                 double gamma, double alpha) {
    const Laplacian lap = laplacian(graph);
    const double fact = factorization_term(views, model.view_factors, model.shared);
    const double smooth = trace_quadratic(model.shared, lap.matrix);
    const double reg = graph.weights.squaredNorm();
    const double label_term =
        (labels.scores.transpose() * lap.matrix * labels.scores).trace();
    return fact + beta * (smooth + alpha * reg) + gamma * label_term;
}

SolverState fit(const MultiViewDataset& data, const LmsscConfig& config) {
    validate(data);
    validate(config, data.sample_count());
    const Index n = data.sample_count();
    const Index l = data.labeled_count;
    const Index r = config.latent_dim;
    const Index k = config.neighbor_count;
    const double beta = config.beta;
    const double gamma = config.gamma;
    if (k > n - 2)
        throw Error("neighbor_count must be <= N-2 for the alpha rule (k=" + std::to_string(k) +
                    ", N=" + std::to_string(n) + ")");

    const int classes = data.class_count();
    const Matrix y_labeled = one_hot(data.labels, l, classes);

    SolverState state;

    // Random start for H, drawn in raw sample order and permuted into
    // storage order so that a reshuffled dataset follows the same
    // trajectory up to permutation.
    Rng rng(config.rng_seed);
    Matrix h_raw(r, n);
    for (Index col = 0; col < n; ++col)
        for (Index row = 0; row < r; ++row) h_raw(row, col) = rng.uniform();
    Matrix h(r, n);
    for (Index i = 0; i < n; ++i) h.col(i) = h_raw.col(data.permutation[static_cast<std::size_t>(i)]);

    // Uniform off-diagonal start for S; F starts as [Y_l; 0].
    SimilarityGraph graph;
    graph.neighbor_count_hint = k;
    graph.weights = Matrix::Constant(n, n, 1.0 / static_cast<double>(n - 1));
    graph.weights.diagonal().setZero();

    LabelIndicator labels;
    labels.labeled_count = l;
    labels.scores = Matrix::Zero(n, classes);
    labels.scores.topRows(l) = y_labeled;

    std::vector<Matrix> factors;
    factors.reserve(data.views.size());
    for (const Matrix& view : data.views) factors.push_back(Matrix::Zero(view.rows(), r));

    Laplacian lap = laplacian(graph);

    for (int iter = 0; iter < config.max_iters; ++iter) {
        IterationTrace trace;

        const double fact_start = factorization_term(data.views, factors, h);
        const double smooth_start = trace_quadratic(h, lap.matrix);
        const double reg_start = graph.weights.squaredNorm();
        const double label_start = trace_quadratic(labels.scores.transpose(), lap.matrix);

        factors = update_view_factors(data.views, h);
        const double fact_w = factorization_term(data.views, factors, h);

        const SylvesterSystem sys = assemble_sylvester(data.views, factors, beta, lap);
        h = update_shared_factor(sys, &state.warnings);
        const double fact_h = factorization_term(data.views, factors, h);
        const double smooth_h = trace_quadratic(h, lap.matrix);

        const PairwiseDistances dist_latent = squared_distances(h, "latent");
        const PairwiseDistances dist_labels = squared_distances(labels.scores.transpose(), "labels");
        const PairwiseDistances combined =
            combined_distances(dist_latent, dist_labels, beta, gamma);
        const AlphaStats alpha_stats = alpha_from_k(combined, k, beta);
        double alpha = alpha_stats.alpha;
        if (alpha_stats.degenerate) {
            alpha = std::max(alpha, 1e-12);
            state.warnings.push_back(
                {"fit", "alpha <= 0 at iteration " + std::to_string(iter + 1) +
                            " (duplicate-point degeneracy); clamped to 1e-12"});
        }

        graph = update_similarity(dist_latent, dist_labels, beta, gamma, alpha, k);
        lap = laplacian(graph);

        // Connectivity guard: the harmonic step needs every component of
        // the learned graph to touch a labeled point. The flat-start label
        // distances (F_u = 0) can decouple the labeled block from the rest
        // when alpha is small; raising alpha widens every row's support,
        // which is the same dial the neighbor count k turns. Doubling is
        // retried a bounded number of times and recorded; if the graph
        // still strands unlabeled nodes, the harmonic solve below reports
        // them.
        int alpha_doublings = 0;
        while (!unlabeled_component_nodes(lap, l).empty() && alpha_doublings < 60) {
            alpha *= 2.0;
            ++alpha_doublings;
            graph = update_similarity(dist_latent, dist_labels, beta, gamma, alpha, k);
            lap = laplacian(graph);
        }
        if (alpha_doublings > 0)
            state.warnings.push_back(
                {"fit", "alpha doubled " + std::to_string(alpha_doublings) + "x at iteration " +
                            std::to_string(iter + 1) +
                            " to keep every graph component labeled"});

        const double smooth_s = trace_quadratic(h, lap.matrix);
        const double reg_s = graph.weights.squaredNorm();
        const double label_s = trace_quadratic(labels.scores.transpose(), lap.matrix);

        LabelIndicator next_labels;
        try {
            next_labels = harmonic_solve(lap, y_labeled, &state.warnings);
        } catch (const DisconnectedUnlabeledError& e) {
            throw DisconnectedUnlabeledError(
                "iteration " + std::to_string(iter + 1) + ": " + e.what(), e.component_nodes);
        }
        const double label_f = trace_quadratic(next_labels.scores.transpose(), lap.matrix);

        const double f_delta = (next_labels.scores - labels.scores).norm();
        const double f_norm = std::max(1.0, labels.scores.norm());
        trace.f_rel_change = f_delta / f_norm;

        trace.alpha = alpha;
        trace.alpha_raw = alpha_stats.alpha;
        trace.obj_start = fact_start + beta * (smooth_start + alpha * reg_start) + gamma * label_start;
        trace.obj_after_w = fact_w + beta * (smooth_start + alpha * reg_start) + gamma * label_start;
        trace.obj_after_h = fact_h + beta * (smooth_h + alpha * reg_start) + gamma * label_start;
        trace.obj_after_s = fact_h + beta * (smooth_s + alpha * reg_s) + gamma * label_s;
        trace.obj_after_f = fact_h + beta * (smooth_s + alpha * reg_s) + gamma * label_f;

        labels = std::move(next_labels);
        state.iteration_trace.push_back(trace);
        state.alpha_trace.push_back(alpha);
        state.objective_trace.push_back(trace.obj_after_w);
        state.objective_trace.push_back(trace.obj_after_h);
        state.objective_trace.push_back(trace.obj_after_s);
        state.objective_trace.push_back(trace.obj_after_f);
        state.iterations = iter + 1;

#ifndef NDEBUG
        validate(graph);
        validate(lap);
        validate(labels, data.labels);
#endif

        if (trace.f_rel_change < config.f_rel_tol) {
            state.converged = true;
            break;
        }
    }

    state.model.view_factors = std::move(factors);
    state.model.shared = std::move(h);
    state.model.latent_dim = r;
    state.graph = std::move(graph);
    state.labels = std::move(labels);
    return state;
}

std::vector<int> map_to_original(const std::vector<int>& unlabeled_predictions,
                                 const MultiViewDataset& data) {
    const Index n = data.sample_count();
    const Index l = data.labeled_count;
    if (static_cast<Index>(unlabeled_predictions.size()) != n - l)
        throw DimensionMismatchError("prediction count does not match unlabeled count");
    std::vector<int> out(static_cast<std::size_t>(n), -1);
    for (Index i = 0; i < n; ++i) {
        const Index raw = data.permutation[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(raw)] =
            (i < l) ? data.labels[static_cast<std::size_t>(i)]
                    : unlabeled_predictions[static_cast<std::size_t>(i - l)];
    }
    return out;
}

std::vector<int> predict(const SolverState& state, const MultiViewDataset& data) {
    return map_to_original(decide(state.labels), data);
}

}  // namespace lmssc
