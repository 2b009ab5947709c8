#pragma once

#include <string>
#include <vector>

#include "lmssc/types.hpp"

namespace lmssc {

// Squared Euclidean distances between the columns of some embedding.
// source_tag records which embedding ("latent", "labels", ...).
struct PairwiseDistances {
    Matrix matrix;
    std::string source_tag;

    Index size() const { return matrix.rows(); }
};

void validate(const PairwiseDistances& d);

/// d(i,j) = ||p_i - p_j||^2 for columns p_i of `points`. Exact symmetry is
/// enforced by averaging with the transpose; tiny negative values from the
/// Gram expansion are clamped to zero.
PairwiseDistances squared_distances(const Matrix& points, std::string source_tag = {});

/// beta * dh + gamma * df, the combined distance the graph update ranks by.
PairwiseDistances combined_distances(const PairwiseDistances& dh, const PairwiseDistances& df,
                                     double beta, double gamma);

// Result of the neighbor-count rule. `alpha` is the raw averaged value (it
// can be <= 0 on duplicate-point data, in which case `degenerate` is set and
// callers clamp); `per_point` holds each alpha_i at its upper bound.
struct AlphaStats {
    double alpha = 0.0;
    Vector per_point;
    bool degenerate = false;
};

/// Computes alpha so that a k-neighbor row support is optimal:
///   alpha_i = ((k/2) d_{i,k+1} - (1/2) sum_{j<=k} d_{ij}) / (2 beta),
/// with each row's distances sorted ascending over the N-1 off-diagonal
/// entries (the self-distance is excluded), and alpha the mean of alpha_i.
AlphaStats alpha_from_k(const PairwiseDistances& combined, Index k, double beta);

/// Euclidean projection of v onto {s : s >= 0, sum s = 1} by sort and
/// threshold. The upper bound s <= 1 is implied by the other constraints.
Vector project_row_to_simplex(const Vector& v);

/// Row-wise closed-form graph update: row i is the simplex projection of
/// -d_i / (4 alpha beta) over the off-diagonal coordinates, with
/// d = beta*dh + gamma*df and the diagonal forced to zero.
SimilarityGraph update_similarity(const PairwiseDistances& dh, const PairwiseDistances& df,
                                  double beta, double gamma, double alpha,
                                  Index neighbor_count_hint = 0);

/// Same update with one alpha_i per row. Test surface for the k-support
/// property; the production path uses the averaged alpha.
SimilarityGraph update_similarity(const PairwiseDistances& dh, const PairwiseDistances& df,
                                  double beta, double gamma, const Vector& alpha_per_point,
                                  Index neighbor_count_hint = 0);

/// L = diag(A 1) - A with A = (S + S^T)/2.
Laplacian laplacian(const SimilarityGraph& graph);

/// Laplacian of an explicit symmetric nonnegative adjacency (k-NN builders).
Laplacian laplacian_from_adjacency(const Matrix& adjacency);

/// Component id per node of the support graph; edges with symmetrized
/// weight <= weight_tol are treated as absent. Union-find.
std::vector<int> component_labels(const Matrix& adjacency, double weight_tol);

/// Number of connected components of the thresholded support graph.
int connected_components(const SimilarityGraph& graph, double weight_tol);

/// Multiplicity of (near-)zero eigenvalues of L. Equal to the component
/// count for valid Laplacians; the two routes are cross-checked in tests.
int zero_eigenvalue_multiplicity(const Laplacian& lap, double tol = 1e-8);

}  // namespace lmssc
