#pragma once

#include <vector>

#include "lmssc/types.hpp"

namespace lmssc {

// Positive per-view weights learned by the auto-weighted baselines.
struct ViewWeights {
    Vector w;
};

void validate(const ViewWeights& weights);

struct AmglResult {
    LabelIndicator labels;
    ViewWeights view_weights;
    Matrix weight_history;          // iterations x V, weights used per pass
    Laplacian combined;             // final weighted Laplacian
    int iterations = 0;
    bool converged = false;
    std::vector<int> predictions;   // unlabeled, storage order
    std::vector<Warning> warnings;
};

/// Auto-weighted multiple graph learning: fixed per-view Gaussian k-NN
/// Laplacians, alternating the harmonic solve on sum_v w^v L^v with the
/// weight rule w^v = 1 / (2 sqrt(Tr(F^T L^v F))), guarded at 1e-12.
AmglResult amgl_fit(const MultiViewDataset& data, Index k, int max_iters, double tol);

struct MlanResult {
    LabelIndicator labels;
    SimilarityGraph graph;
    ViewWeights view_weights;
    Matrix weight_history;
    int iterations = 0;
    bool converged = false;
    double alpha = 0.0;             // last alpha used by the S-update
    std::vector<int> predictions;
    std::vector<Warning> warnings;
};

/// Adaptive-neighbor multi-view baseline on raw features: the graph update
/// runs on d = beta * sum_v w^v d^{x,v} + gamma * d^f with alpha from the
/// same k rule, view weights w^v = 1 / (2 sqrt(sum_ij d^{x,v}_ij s_ij))
/// guarded at 1e-12, and labels from the harmonic solve on the learned
/// graph.
MlanResult mlan_fit(const MultiViewDataset& data, Index k, int max_iters, double tol,
                    double beta = 1.0, double gamma = 1.0);

}  // namespace lmssc
