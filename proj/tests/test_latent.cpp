#include <doctest.h>

#include <cmath>

#include "lmssc/graph.hpp"
#include "lmssc/latent.hpp"
#include "lmssc/rng.hpp"

#include "oracles.hpp"

using namespace lmssc;

namespace {

double kkt_violation(const Matrix& gram, const Vector& b, const Vector& w) {
    const Vector grad = gram * w - b;
    double worst = 0.0;
    for (Index j = 0; j < w.size(); ++j) {
        if (w(j) > 0.0)
            worst = std::max(worst, std::abs(grad(j)));
        else
            worst = std::max(worst, std::max(0.0, -grad(j)));
    }
    return worst;
}

}  // namespace

TEST_SUITE("latent") {

TEST_CASE("nnls with identity design returns the clamped input") {
    const Matrix h = Matrix::Identity(4, 4);
    Vector x(4);
    x << 1.0, 2.0, 0.5, 3.0;
    CHECK((nnls_row(x, h) - x).cwiseAbs().maxCoeff() < 1e-12);

    x(2) = -0.7;
    const Vector w = nnls_row(x, h);
    CHECK(w(2) == 0.0);
    CHECK(w(0) == doctest::Approx(1.0));
    CHECK(w(3) == doctest::Approx(3.0));
}

TEST_CASE("nnls matches the exhaustive-support oracle") {
    Rng rng(61);
    for (int round = 0; round < 40; ++round) {
        const Matrix h = oracles::random_matrix(rng, 4, 8);
        const Vector x = oracles::random_matrix(rng, 8, 1).col(0);
        const Vector mine = nnls_row(x, h);
        const Matrix gram = h * h.transpose();
        const Vector b = h * x;
        const Vector reference = oracles::nnls(gram, b);
        CHECK((mine - reference).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(kkt_violation(gram, b, mine) < 1e-8);
    }
}

TEST_CASE("view factor update recovers a planted nonnegative factor") {
    Rng rng(67);
    const Index r = 4, n = 30, d = 6;
    const Matrix w0 = oracles::random_matrix(rng, d, r, 0.0, 1.0);
    const Matrix h = oracles::random_matrix(rng, r, n);
    const Matrix x = w0 * h;
    const auto factors = update_view_factors({x}, h);
    CHECK((factors[0] - w0).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("view factor update with identity H clamps negatives") {
    Rng rng(71);
    const Matrix x = oracles::random_matrix(rng, 5, 4);
    const auto factors = update_view_factors({x}, Matrix::Identity(4, 4));
    CHECK((factors[0] - x.cwiseMax(0.0)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single view single row reduces to nnls_row") {
    Rng rng(73);
    const Matrix h = oracles::random_matrix(rng, 3, 9);
    const Matrix x = oracles::random_matrix(rng, 1, 9);
    const auto factors = update_view_factors({x}, h);
    const Vector direct = nnls_row(x.row(0).transpose(), h);
    CHECK((factors[0].row(0).transpose() - direct).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("view factor update never increases the fit term") {
    Rng rng(79);
    const Index r = 3, n = 12;
    const Matrix h = oracles::random_matrix(rng, r, n);
    const std::vector<Matrix> views{oracles::random_matrix(rng, 5, n),
                                    oracles::random_matrix(rng, 4, n)};
    const std::vector<Matrix> before{oracles::random_matrix(rng, 5, r, 0.0, 1.0),
                                     oracles::random_matrix(rng, 4, r, 0.0, 1.0)};
    double cost_before = 0.0;
    for (std::size_t v = 0; v < views.size(); ++v)
        cost_before += (views[v] - before[v] * h).squaredNorm();
    const auto after = update_view_factors(views, h);
    double cost_after = 0.0;
    for (std::size_t v = 0; v < views.size(); ++v)
        cost_after += (views[v] - after[v] * h).squaredNorm();
    CHECK(cost_after <= cost_before + 1e-10);
}

TEST_CASE("shared factor solve degenerates to a linear solve at scale zero") {
    Rng rng(83);
    const Index r = 4, n = 6;
    Matrix a = oracles::random_matrix(rng, r, r);
    a = (a * a.transpose()).eval();
    a.diagonal().array() += 0.5;  // invertible
    const Matrix b = oracles::random_matrix(rng, r, n);

    SylvesterSystem sys{a, 0.0, Matrix::Zero(n, n), b};
    const Matrix h = update_shared_factor(sys);
    CHECK((a * h - b).cwiseAbs().maxCoeff() < 1e-8);

    // a zero Laplacian with beta > 0 is the same system
    SylvesterSystem sys2{a, 2.0, Matrix::Zero(n, n), b};
    CHECK((update_shared_factor(sys2) - h).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Sylvester residual stays below 1e-8 on random systems") {
    Rng rng(89);
    for (int round = 0; round < 20; ++round) {
        const Index r = 2 + static_cast<Index>(rng.integer(6));
        const Index n = 4 + static_cast<Index>(rng.integer(26));
        const std::vector<Matrix> views{oracles::random_matrix(rng, 5, n),
                                        oracles::random_matrix(rng, 3, n)};
        const std::vector<Matrix> factors{oracles::random_matrix(rng, 5, r, 0.0, 1.0),
                                          oracles::random_matrix(rng, 3, r, 0.0, 1.0)};
        const double beta = 0.2 + 2.0 * rng.uniform();
        const Laplacian lap = laplacian(oracles::random_similarity(rng, n, 3));
        const SylvesterSystem sys = assemble_sylvester(views, factors, beta, lap);
        const Matrix h = update_shared_factor(sys);
        const double residual = (sys.a * h + beta * h * lap.matrix - sys.rhs).norm();
        CHECK(residual <= 1e-8 * std::max(1.0, sys.rhs.norm()));
    }
}

TEST_CASE("shared factor update never increases its quadratic objective") {
    Rng rng(97);
    const Index r = 3, n = 10;
    const std::vector<Matrix> views{oracles::random_matrix(rng, 6, n)};
    const std::vector<Matrix> factors{oracles::random_matrix(rng, 6, r, 0.0, 1.0)};
    const Matrix h_before = oracles::random_matrix(rng, r, n);
    const double beta = 1.3;
    const Laplacian lap = laplacian(oracles::random_similarity(rng, n, 3));

    auto cost = [&](const Matrix& h) {
        return (views[0] - factors[0] * h).squaredNorm() +
               beta * (h * lap.matrix * h.transpose()).trace();
    };
    const SylvesterSystem sys = assemble_sylvester(views, factors, beta, lap);
    const Matrix h_after = update_shared_factor(sys);
    CHECK(cost(h_after) <= cost(h_before) + 1e-8 * std::max(1.0, std::abs(cost(h_before))));
}

TEST_CASE("singular Gram matrices are handled by the ridge") {
    Rng rng(101);
    const Index r = 4, n = 8;
    // rank-deficient factors: one latent coordinate unused
    Matrix w = oracles::random_matrix(rng, 5, r, 0.0, 1.0);
    w.col(r - 1).setZero();
    const Matrix h_true = oracles::random_matrix(rng, r, n);
    const Matrix x = w * h_true;
    const Laplacian lap = laplacian(oracles::random_similarity(rng, n, 3));
    const SylvesterSystem sys = assemble_sylvester({x}, {w}, 1.0, lap);
    std::vector<Warning> warnings;
    const Matrix h = update_shared_factor(sys, &warnings);
    CHECK(h.allFinite());
    CHECK(!warnings.empty());
    const double residual = (sys.a * h + 1.0 * h * lap.matrix - sys.rhs).norm();
    CHECK(residual <= 1e-6 * std::max(1.0, sys.rhs.norm()));
}

}  // TEST_SUITE
