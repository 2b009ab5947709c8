#pragma once

#include <vector>

#include "lmssc/types.hpp"

namespace lmssc {

// The labeled/unlabeled partition of a Laplacian.
struct HarmonicBlocks {
    Matrix ll;  // l x l
    Matrix lu;  // l x u
    Matrix ul;  // u x l
    Matrix uu;  // u x u
};

HarmonicBlocks split_blocks(const Matrix& lap, Index labeled_count);

/// Harmonic label propagation: F = [Y_l; F_u] with L_uu F_u = -L_ul Y_l.
/// If L_uu is (near-)singular the solve retries once with a 1e-8 ridge and
/// records a warning; when the singularity comes from a graph component with
/// no labeled node, or the ridge would exceed 1e-6 of the mean diagonal,
/// DisconnectedUnlabeledError is raised instead.
LabelIndicator harmonic_solve(const Laplacian& lap, const Matrix& y_labeled,
                              std::vector<Warning>* warnings = nullptr);

/// Arg-max decision per unlabeled row; ties resolve to the smallest class
/// index. Returns u class ids in storage order.
std::vector<int> decide(const LabelIndicator& indicator);

/// Symmetric k-NN graph (union of per-point neighbor lists) with Gaussian
/// weights exp(-d^2/(2 sigma^2)), sigma = median Euclidean distance over
/// the retained edges. Identical points (sigma ~ 0) fall back to uniform
/// unit weights.
Laplacian gaussian_knn_laplacian(const Matrix& view, Index k);

/// Nodes of graph components that contain no labeled point (labeled =
/// storage index < labeled_count); empty when the harmonic system is
/// well-posed.
std::vector<Index> unlabeled_component_nodes(const Laplacian& lap, Index labeled_count);

/// Classic single-view harmonic classifier on the symmetric k-NN graph.
/// `view` is d x N with the first y_labeled.rows() columns labeled.
std::vector<int> gfhf_baseline(const Matrix& view, const Matrix& y_labeled, Index k,
                               std::vector<Warning>* warnings = nullptr);

}  // namespace lmssc
