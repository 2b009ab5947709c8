#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lmssc/errors.hpp"

namespace lmssc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Multi-view data with a labeled-first sample order. Views store samples as
// columns (X^v is d_v x N); files on disk are row-per-sample and transposed
// on load. `permutation[i]` maps storage position i back to the position the
// sample had in the raw input, so predictions can be reported in raw order.
struct MultiViewDataset {
    std::vector<Matrix> views;          // d_v x N each
    std::vector<int> labels;            // storage order, values 0..c-1
    Index labeled_count = 0;            // first l storage columns are labeled
    std::vector<Index> permutation;     // storage index -> raw index

    Index sample_count() const { return views.empty() ? 0 : views.front().cols(); }
    Index view_count() const { return static_cast<Index>(views.size()); }
    Index unlabeled_count() const { return sample_count() - labeled_count; }
    int class_count() const;
};

/// Number of classes implied by a label vector (max label + 1).
int class_count(const std::vector<int>& labels);

/// One-hot rows for the first `count` labels.
Matrix one_hot(const std::vector<int>& labels, Index count, int classes);

/// Throws unless every MultiViewDataset invariant holds.
void validate(const MultiViewDataset& data);

/// Reorders raw samples so the masked (labeled) ones come first, recording
/// the permutation. Relative order is preserved within each group.
MultiViewDataset permute_labeled_first(const std::vector<Matrix>& raw_views,
                                       const std::vector<int>& raw_labels,
                                       const std::vector<bool>& labeled_mask);

// Row-stochastic similarity matrix with a zero diagonal. Row i weighs how
// strongly each other sample influences sample i.
struct SimilarityGraph {
    Matrix weights;                 // N x N
    Index neighbor_count_hint = 0;  // k used when the graph was built

    Index size() const { return weights.rows(); }
};

void validate(const SimilarityGraph& graph);

// Symmetrized graph Laplacian L = D - A with A = (S + S^T)/2. `adjacency`
// keeps the A the Laplacian was assembled from; component detection and
// diagnostics read it back.
struct Laplacian {
    Matrix matrix;
    Matrix adjacency;

    Index size() const { return matrix.rows(); }
};

void validate(const Laplacian& lap);

// Nonnegative view factors W^v (d_v x r) plus the shared representation
// H (r x N) they all project from.
struct LatentModel {
    std::vector<Matrix> view_factors;
    Matrix shared;
    Index latent_dim = 0;
};

void validate(const LatentModel& model);

// Label scores F = [Y_l; F_u], N x c. The labeled block is clamped to the
// ground-truth one-hot rows for the dataset it was solved on.
struct LabelIndicator {
    Matrix scores;
    Index labeled_count = 0;

    Index sample_count() const { return scores.rows(); }
    Index class_count_of() const { return scores.cols(); }
    Eigen::Block<const Matrix> labeled() const { return scores.topRows(labeled_count); }
    Eigen::Block<const Matrix> unlabeled() const {
        return scores.bottomRows(scores.rows() - labeled_count);
    }
};

/// Checks the clamp against `labels` (storage order) and the simplex-row
/// property of the unlabeled block.
void validate(const LabelIndicator& indicator, const std::vector<int>& labels);

struct LmsscConfig {
    double beta = 1.0;
    double gamma = 1.0;
    Index latent_dim = 10;
    Index neighbor_count = 15;
    int max_iters = 100;
    double f_rel_tol = 1e-5;
    std::uint64_t rng_seed = 0;
};

void validate(const LmsscConfig& config, Index n_samples);

}  // namespace lmssc
