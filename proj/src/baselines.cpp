#include "lmssc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lmssc/graph.hpp"
#include "lmssc/propagate.hpp"

namespace lmssc {

namespace {

constexpr double kWeightGuard = 1e-12;

Matrix append_row(const Matrix& history, const Vector& row) {
    Matrix grown(history.rows() + 1, row.size());
    if (history.rows() > 0) grown.topRows(history.rows()) = history;
    grown.row(history.rows()) = row.transpose();
    return grown;
}

}  // namespace

void validate(const ViewWeights& weights) {
    for (Index v = 0; v < weights.w.size(); ++v)
        if (!(weights.w(v) > 0.0) || !std::isfinite(weights.w(v)))
            throw Error("view weight " + std::to_string(v) + " is not positive and finite");
}

AmglResult amgl_fit(const MultiViewDataset& data, Index k, int max_iters, double tol) {
    validate(data);
    if (max_iters < 1) throw Error("max_iters must be >= 1");
    const Index n = data.sample_count();
    const Index l = data.labeled_count;
    const Index v_count = data.view_count();
    const int classes = data.class_count();
    const Matrix y_labeled = one_hot(data.labels, l, classes);

    AmglResult result;

    // Per-view graphs are built once with the same k-NN Gaussian
    // construction the single-view baseline uses, then held fixed.
    std::vector<Laplacian> view_laps;
    view_laps.reserve(static_cast<std::size_t>(v_count));
    for (const Matrix& view : data.views) view_laps.push_back(gaussian_knn_laplacian(view, k));

    Vector weights = Vector::Ones(v_count);
    Matrix prev_scores = Matrix::Zero(n, classes);
    prev_scores.topRows(l) = y_labeled;

    for (int iter = 0; iter < max_iters; ++iter) {
        Matrix combined_l = Matrix::Zero(n, n);
        Matrix combined_a = Matrix::Zero(n, n);
        for (Index v = 0; v < v_count; ++v) {
            combined_l += weights(v) * view_laps[static_cast<std::size_t>(v)].matrix;
            combined_a += weights(v) * view_laps[static_cast<std::size_t>(v)].adjacency;
        }
        result.combined = Laplacian{combined_l, combined_a};
        result.weight_history = append_row(result.weight_history, weights);
#ifndef NDEBUG
        validate(result.combined);
#endif

        const LabelIndicator labels =
            harmonic_solve(result.combined, y_labeled, &result.warnings);

        for (Index v = 0; v < v_count; ++v) {
            const double trace_v = (labels.scores.transpose() *
                                    view_laps[static_cast<std::size_t>(v)].matrix * labels.scores)
                                       .trace();
            weights(v) = 1.0 / (2.0 * std::max(std::sqrt(std::max(trace_v, 0.0)), kWeightGuard));
        }
        // the harmonic solution only sees weight ratios; normalizing keeps
        // the combined Laplacian at unit scale even when a trace term hits
        // the guard floor
        weights /= weights.sum();

        const double rel = (labels.scores - prev_scores).norm() / std::max(1.0, prev_scores.norm());
        prev_scores = labels.scores;
        result.labels = labels;
        result.iterations = iter + 1;
        if (iter > 0 && rel < tol) {
            result.converged = true;
            break;
        }
    }

    result.view_weights.w = weights;
    validate(result.view_weights);
    result.predictions = decide(result.labels);
    return result;
}

MlanResult mlan_fit(const MultiViewDataset& data, Index k, int max_iters, double tol, double beta,
                    double gamma) {
    validate(data);
    if (max_iters < 1) throw Error("max_iters must be >= 1");
    const Index n = data.sample_count();
    const Index l = data.labeled_count;
    const Index v_count = data.view_count();
    const int classes = data.class_count();
    if (k < 1 || k > n - 2) throw Error("mlan_fit requires 1 <= k <= N-2");
    const Matrix y_labeled = one_hot(data.labels, l, classes);

    MlanResult result;

    std::vector<PairwiseDistances> view_dists;
    view_dists.reserve(static_cast<std::size_t>(v_count));
    for (const Matrix& view : data.views)
        view_dists.push_back(squared_distances(view, "raw"));

    Vector weights = Vector::Ones(v_count);

    LabelIndicator labels;
    labels.labeled_count = l;
    labels.scores = Matrix::Zero(n, classes);
    labels.scores.topRows(l) = y_labeled;
    Matrix prev_scores = labels.scores;

    for (int iter = 0; iter < max_iters; ++iter) {
        result.weight_history = append_row(result.weight_history, weights);

        PairwiseDistances combined_raw{Matrix::Zero(n, n), "weighted-raw"};
        for (Index v = 0; v < v_count; ++v)
            combined_raw.matrix += weights(v) * view_dists[static_cast<std::size_t>(v)].matrix;
        const PairwiseDistances dist_labels =
            squared_distances(labels.scores.transpose(), "labels");

        const PairwiseDistances for_alpha =
            combined_distances(combined_raw, dist_labels, beta, gamma);
        const AlphaStats alpha_stats = alpha_from_k(for_alpha, k, beta);
        double alpha = alpha_stats.alpha;
        if (alpha_stats.degenerate) {
            alpha = std::max(alpha, 1e-12);
            result.warnings.push_back(
                {"mlan_fit", "alpha <= 0 at iteration " + std::to_string(iter + 1) +
                                 "; clamped to 1e-12"});
        }
        result.alpha = alpha;
        result.graph = update_similarity(combined_raw, dist_labels, beta, gamma, alpha, k);

        // same connectivity guard as the main solver: widen supports until
        // every component of the learned graph touches a labeled point
        Laplacian lap = laplacian(result.graph);
        int alpha_doublings = 0;
        while (!unlabeled_component_nodes(lap, l).empty() && alpha_doublings < 60) {
            alpha *= 2.0;
            ++alpha_doublings;
            result.graph = update_similarity(combined_raw, dist_labels, beta, gamma, alpha, k);
            lap = laplacian(result.graph);
        }
        if (alpha_doublings > 0) {
            result.alpha = alpha;
            result.warnings.push_back(
                {"mlan_fit", "alpha doubled " + std::to_string(alpha_doublings) +
                                 "x at iteration " + std::to_string(iter + 1) +
                                 " to keep every graph component labeled"});
        }

        for (Index v = 0; v < v_count; ++v) {
            const double mass =
                (view_dists[static_cast<std::size_t>(v)].matrix.array() *
                 result.graph.weights.array())
                    .sum();
            weights(v) = 1.0 / (2.0 * std::max(std::sqrt(std::max(mass, 0.0)), kWeightGuard));
        }

        labels = harmonic_solve(lap, y_labeled, &result.warnings);

        const double rel = (labels.scores - prev_scores).norm() / std::max(1.0, prev_scores.norm());
        prev_scores = labels.scores;
        result.labels = labels;
        result.iterations = iter + 1;
        if (rel < tol) {
            result.converged = true;
            break;
        }
    }

    result.view_weights.w = weights;
    validate(result.view_weights);
    result.predictions = decide(result.labels);
    return result;
}

}  // namespace lmssc
