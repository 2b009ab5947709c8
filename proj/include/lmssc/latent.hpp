#pragma once

#include <vector>

#include "lmssc/types.hpp"

namespace lmssc {

// Assembled system  A H + scale * H L = B  with A = sum_v (W^v)^T W^v and
// B = sum_v (W^v)^T X^v. A is r x r symmetric PSD, L is the N x N Laplacian.
struct SylvesterSystem {
    Matrix a;
    double scale = 0.0;
    Matrix laplacian;
    Matrix rhs;
};

void validate(const SylvesterSystem& sys);

/// min_{w >= 0} ||x - w H||^2 for a row vector w of length r, x of length N.
/// Active-set iteration; the result satisfies the KKT conditions of the
/// nonnegative least-squares problem to ~1e-10. Throws MaxIterationsError if
/// the active set cycles past 10*r swaps.
Vector nnls_row(const Vector& x, const Matrix& h);

/// Solves min_{w >= 0} 0.5 w^T G w - b^T w given the Gram matrix G = H H^T
/// and b = H x. Shared core of nnls_row and update_view_factors.
Vector nnls_gram(const Matrix& gram, const Vector& b);

/// Row-wise exact minimizer of sum_v ||X^v - W^v H||_F^2 over W^v >= 0.
std::vector<Matrix> update_view_factors(const std::vector<Matrix>& views, const Matrix& h);

SylvesterSystem assemble_sylvester(const std::vector<Matrix>& views,
                                   const std::vector<Matrix>& view_factors, double beta,
                                   const Laplacian& lap);

/// Solves A H + scale * H L = B through the symmetric eigendecomposition
/// L = U Lambda U^T: one r x r solve (A + scale*lambda_j I) per transformed
/// column. A gets a 1e-10 ridge when its smallest eigenvalue is below 1e-12
/// (the Laplacian always has a zero eigenvalue, so A alone must carry that
/// column).
Matrix update_shared_factor(const SylvesterSystem& sys, std::vector<Warning>* warnings = nullptr);

}  // namespace lmssc
