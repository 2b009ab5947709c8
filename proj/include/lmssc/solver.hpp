#pragma once

#include <vector>

#include "lmssc/graph.hpp"
#include "lmssc/types.hpp"

namespace lmssc {

// Objective values around one alternating iteration, all evaluated with that
// iteration's alpha. The alpha-dependent term is constant across the W and H
// sub-steps, so evaluating them at the later-computed alpha is exact.
struct IterationTrace {
    double alpha = 0.0;      // clamped value used by the S-update
    double alpha_raw = 0.0;  // formula value before clamping
    double obj_start = 0.0;
    double obj_after_w = 0.0;
    double obj_after_h = 0.0;
    double obj_after_s = 0.0;
    double obj_after_f = 0.0;
    double f_rel_change = 0.0;
};

struct SolverState {
    LatentModel model;
    SimilarityGraph graph;
    LabelIndicator labels;
    int iterations = 0;
    bool converged = false;
    std::vector<IterationTrace> iteration_trace;
    std::vector<double> objective_trace;  // four entries per iteration (after W/H/S/F)
    std::vector<double> alpha_trace;      // one entry per iteration
    std::vector<Warning> warnings;
};

/// Value of the full objective
///   sum_v ||X^v - W^v H||_F^2 + beta (Tr(H L H^T) + alpha ||S||_F^2)
///                             + gamma Tr(F^T L F)
/// with L the symmetrized Laplacian of `graph`.
double objective(const std::vector<Matrix>& views, const LatentModel& model,
                 const SimilarityGraph& graph, const LabelIndicator& labels, double beta,
                 double gamma, double alpha);

/// Alternating solve: W by row-wise NNLS, H by the Sylvester system, alpha
/// by the k rule on the combined latent/label distances, S row-wise in
/// closed form, F by the harmonic solve. Stops when the relative Frobenius
/// change of F drops below config.f_rel_tol or after max_iters passes.
/// Deterministic for a fixed config.rng_seed; the random H start is keyed to
/// raw sample identity, so storage order does not change the outcome.
SolverState fit(const MultiViewDataset& data, const LmsscConfig& config);

/// Class ids in raw input order; labeled points keep their given labels.
std::vector<int> predict(const SolverState& state, const MultiViewDataset& data);

/// Places storage-order unlabeled predictions back into raw order alongside
/// the clamped labeled points.
std::vector<int> map_to_original(const std::vector<int>& unlabeled_predictions,
                                 const MultiViewDataset& data);

}  // namespace lmssc
