#include "lmssc/latent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace lmssc {

namespace {

// Equality-constrained solve on the passive set. Falls back to a tiny ridge
// if the subset Gram is numerically rank-deficient.
Vector solve_passive(const Matrix& gram, const Vector& b, const std::vector<Index>& passive) {
    const Index p = static_cast<Index>(passive.size());
    Matrix gp(p, p);
    Vector bp(p);
    for (Index a = 0; a < p; ++a) {
        bp(a) = b(passive[static_cast<std::size_t>(a)]);
        for (Index c = 0; c < p; ++c)
            gp(a, c) = gram(passive[static_cast<std::size_t>(a)], passive[static_cast<std::size_t>(c)]);
    }
    Vector y = gp.ldlt().solve(bp);
    if (!y.allFinite()) {
        gp.diagonal().array() += 1e-12 * std::max(1.0, gp.diagonal().maxCoeff());
        y = gp.ldlt().solve(bp);
    }
    return y;
}

}  // namespace

void validate(const SylvesterSystem& sys) {
    if (sys.a.rows() != sys.a.cols()) throw DimensionMismatchError("A not square");
    if ((sys.a - sys.a.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw Error("A not symmetric");
    if (sys.laplacian.rows() != sys.laplacian.cols())
        throw DimensionMismatchError("L not square");
    if (sys.rhs.rows() != sys.a.rows() || sys.rhs.cols() != sys.laplacian.rows())
        throw DimensionMismatchError("right-hand side shape mismatch");
}

// Lawson-Hanson active set on the normal equations. The passive set grows by
// the most violated gradient coordinate; inner steps clip at the boundary
// and drop coordinates that hit zero. Exact minimizer at this scale, which
// the per-sub-step descent guarantees rely on.
Vector nnls_gram(const Matrix& gram, const Vector& b) {
    const Index r = gram.rows();
    if (gram.cols() != r || b.size() != r)
        throw DimensionMismatchError("nnls_gram shape mismatch");

    Vector w = Vector::Zero(r);
    std::vector<bool> in_passive(static_cast<std::size_t>(r), false);
    std::vector<Index> passive;
    const double entry_tol = 1e-12 * std::max(1.0, b.cwiseAbs().maxCoeff());
    const int max_swaps = 10 * static_cast<int>(r);
    int swaps = 0;

    while (true) {
        const Vector neg_grad = b - gram * w;
        Index best = -1;
        double best_value = entry_tol;
        for (Index j = 0; j < r; ++j) {
            if (in_passive[static_cast<std::size_t>(j)]) continue;
            if (neg_grad(j) > best_value) {
                best_value = neg_grad(j);
                best = j;
            }
        }
        if (best < 0) break;

        in_passive[static_cast<std::size_t>(best)] = true;
        passive.push_back(best);
        if (++swaps > max_swaps)
            throw MaxIterationsError("nnls active set exceeded " + std::to_string(max_swaps) +
                                     " swaps");

        while (true) {
            const Vector y = solve_passive(gram, b, passive);
            double min_y = std::numeric_limits<double>::infinity();
            for (Index a = 0; a < y.size(); ++a) min_y = std::min(min_y, y(a));
            if (min_y > 0.0) {
                w.setZero();
                for (std::size_t a = 0; a < passive.size(); ++a) w(passive[a]) = y(static_cast<Index>(a));
                break;
            }

            // Step toward y until the first passive coordinate hits zero.
            double step = 1.0;
            for (std::size_t a = 0; a < passive.size(); ++a) {
                const double yi = y(static_cast<Index>(a));
                if (yi > 0.0) continue;
                const double wi = w(passive[a]);
                const double denom = wi - yi;
                if (denom > 0.0) step = std::min(step, wi / denom);
            }
            for (std::size_t a = 0; a < passive.size(); ++a) {
                const Index j = passive[a];
                w(j) += step * (y(static_cast<Index>(a)) - w(j));
            }

            std::vector<Index> kept;
            for (Index j : passive) {
                if (w(j) <= 1e-14) {
                    w(j) = 0.0;
                    in_passive[static_cast<std::size_t>(j)] = false;
                    if (++swaps > max_swaps)
                        throw MaxIterationsError("nnls active set exceeded " +
                                                 std::to_string(max_swaps) + " swaps");
                } else {
                    kept.push_back(j);
                }
            }
            passive = std::move(kept);
            if (passive.empty()) break;
        }
    }
    return w;
}

Vector nnls_row(const Vector& x, const Matrix& h) {
    if (h.cols() != x.size())
        throw DimensionMismatchError("nnls_row: x length must match H column count");
    const Matrix gram = h * h.transpose();
    const Vector b = h * x;
    return nnls_gram(gram, b);
}

std::vector<Matrix> update_view_factors(const std::vector<Matrix>& views, const Matrix& h) {
    const Index r = h.rows();
    const Matrix gram = h * h.transpose();
    std::vector<Matrix> factors;
    factors.reserve(views.size());
    for (std::size_t v = 0; v < views.size(); ++v) {
        const Matrix& x = views[v];
        if (x.cols() != h.cols())
            throw DimensionMismatchError("view " + std::to_string(v) +
                                         " sample count does not match H");
        const Matrix b_all = h * x.transpose();  // r x d_v, column i = H x_i
        Matrix w(x.rows(), r);
        for (Index i = 0; i < x.rows(); ++i) {
            try {
                w.row(i) = nnls_gram(gram, b_all.col(i)).transpose();
            } catch (const MaxIterationsError& e) {
                throw MaxIterationsError("view " + std::to_string(v) + ", row " +
                                         std::to_string(i) + ": " + e.what());
            }
        }
        factors.push_back(std::move(w));
    }
    return factors;
}

SylvesterSystem assemble_sylvester(const std::vector<Matrix>& views,
                                   const std::vector<Matrix>& view_factors, double beta,
                                   const Laplacian& lap) {
    if (views.size() != view_factors.size())
        throw DimensionMismatchError("views/factors count mismatch");
    if (views.empty()) throw DimensionMismatchError("no views");
    const Index r = view_factors.front().cols();
    const Index n = views.front().cols();

    SylvesterSystem sys;
    sys.scale = beta;
    sys.laplacian = lap.matrix;
    sys.a = Matrix::Zero(r, r);
    sys.rhs = Matrix::Zero(r, n);
    for (std::size_t v = 0; v < views.size(); ++v) {
        sys.a.noalias() += view_factors[v].transpose() * view_factors[v];
        sys.rhs.noalias() += view_factors[v].transpose() * views[v];
    }
    sys.a = 0.5 * (sys.a + sys.a.transpose()).eval();
    return sys;
}

Matrix update_shared_factor(const SylvesterSystem& sys, std::vector<Warning>* warnings) {
    validate(sys);
    const Index r = sys.a.rows();
    const Index n = sys.laplacian.rows();

    Matrix a = sys.a;
    {
        Eigen::SelfAdjointEigenSolver<Matrix> probe(a, Eigen::EigenvaluesOnly);
        if (probe.eigenvalues().minCoeff() < 1e-12) {
            a.diagonal().array() += 1e-10;
            if (warnings)
                warnings->push_back({"update_shared_factor",
                                     "Gram matrix near-singular; 1e-10 ridge applied"});
        }
    }

    Eigen::SelfAdjointEigenSolver<Matrix> eigen(sys.laplacian);
    if (eigen.info() != Eigen::Success)
        throw SingularSystemError("Laplacian eigendecomposition failed");
    const Matrix& basis = eigen.eigenvectors();
    const Vector values = eigen.eigenvalues().cwiseMax(0.0);

    const Matrix rhs_t = sys.rhs * basis;  // r x N
    Matrix h_t(r, n);
    for (Index j = 0; j < n; ++j) {
        Matrix shifted = a;
        shifted.diagonal().array() += sys.scale * values(j);
        h_t.col(j) = shifted.ldlt().solve(rhs_t.col(j));
    }
    if (!h_t.allFinite())
        throw SingularSystemError("per-column Sylvester solve produced non-finite values");
    return h_t * basis.transpose();
}

}  // namespace lmssc
