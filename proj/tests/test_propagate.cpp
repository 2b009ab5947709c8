#include <doctest.h>

#include <cmath>

#include "lmssc/graph.hpp"
#include "lmssc/propagate.hpp"
#include "lmssc/rng.hpp"

#include "oracles.hpp"

using namespace lmssc;

TEST_SUITE("propagate") {

TEST_CASE("split_blocks tiles the Laplacian exactly") {
    Rng rng(97);
    const Matrix lap = laplacian_from_adjacency(oracles::random_connected_adjacency(rng, 7)).matrix;
    const HarmonicBlocks blocks = split_blocks(lap, 3);
    Matrix rebuilt(7, 7);
    rebuilt.topLeftCorner(3, 3) = blocks.ll;
    rebuilt.topRightCorner(3, 4) = blocks.lu;
    rebuilt.bottomLeftCorner(4, 3) = blocks.ul;
    rebuilt.bottomRightCorner(4, 4) = blocks.uu;
    CHECK(rebuilt == lap);
    CHECK((blocks.uu - blocks.uu.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single neighbor copies the label") {
    Matrix a(2, 2);
    a << 0, 1, 1, 0;
    Matrix y(1, 2);
    y << 1, 0;
    const LabelIndicator f = harmonic_solve(laplacian_from_adjacency(a), y);
    CHECK(f.scores(1, 0) == doctest::Approx(1.0));
    CHECK(f.scores(1, 1) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("path graph midpoint interpolates to one half") {
    // path 0-1-2 with unit weights, endpoints labeled; storage order puts
    // the labeled endpoints first: [0, 2, 1]
    Matrix a = Matrix::Zero(3, 3);
    a(0, 2) = a(2, 0) = 1.0;  // edge 0-1 in raw terms
    a(1, 2) = a(2, 1) = 1.0;  // edge 1-2
    Matrix y(2, 2);
    y << 1, 0,
         0, 1;
    const LabelIndicator f = harmonic_solve(laplacian_from_adjacency(a), y);
    CHECK(f.scores(2, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f.scores(2, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("harmonic solve matches the dense oracle on random connected graphs") {
    Rng rng(103);
    for (int round = 0; round < 10; ++round) {
        const Index n = 12;
        const Matrix a = oracles::random_connected_adjacency(rng, n);
        const Laplacian lap = laplacian_from_adjacency(a);
        const Index l = 2 + static_cast<Index>(rng.integer(3));
        Matrix y = Matrix::Zero(l, 2);
        for (Index i = 0; i < l; ++i) y(i, static_cast<Index>(rng.integer(2))) = 1.0;

        const LabelIndicator f = harmonic_solve(lap, y);
        const Matrix reference = oracles::harmonic_unlabeled(lap.matrix, y);
        CHECK((f.unlabeled() - reference).cwiseAbs().maxCoeff() < 1e-10);

        const Vector row_sums = f.unlabeled().rowwise().sum();
        CHECK((row_sums.array() - 1.0).abs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("harmonic property, maximum principle, and row sums") {
    Rng rng(107);
    for (int round = 0; round < 10; ++round) {
        const Index n = 8 + static_cast<Index>(rng.integer(20));
        const Matrix a = oracles::random_connected_adjacency(rng, n);
        const Laplacian lap = laplacian_from_adjacency(a);
        const Index l = 1 + static_cast<Index>(rng.integer(4));
        Matrix y = Matrix::Zero(l, 3);
        for (Index i = 0; i < l; ++i) y(i, static_cast<Index>(rng.integer(3))) = 1.0;

        const LabelIndicator f = harmonic_solve(lap, y);
        const Matrix residual = (lap.matrix * f.scores).bottomRows(n - l);
        CHECK(residual.cwiseAbs().maxCoeff() < 1e-8);
        CHECK(f.unlabeled().minCoeff() > -1e-9);
        CHECK(f.unlabeled().maxCoeff() < 1.0 + 1e-9);
    }
}

TEST_CASE("decide picks the arg-max and breaks ties low") {
    LabelIndicator f;
    f.labeled_count = 0;
    f.scores.resize(2, 3);
    f.scores << 0.2, 0.7, 0.1,
                0.5, 0.5, 0.0;
    const auto picks = decide(f);
    CHECK(picks[0] == 1);
    CHECK(picks[1] == 0);  // tie resolves to the smaller class id
}

TEST_CASE("decide is invariant under positive row rescaling") {
    Rng rng(109);
    LabelIndicator f;
    f.labeled_count = 0;
    f.scores = oracles::random_matrix(rng, 20, 4, 0.0, 1.0);
    const auto base = decide(f);
    LabelIndicator scaled = f;
    for (Index i = 0; i < scaled.scores.rows(); ++i)
        scaled.scores.row(i) *= 0.1 + 3.0 * rng.uniform();
    CHECK(decide(scaled) == base);
}

TEST_CASE("disconnected unlabeled component raises with its node set") {
    // nodes 0 (labeled), 1 connected to 0; nodes 2,3 form an island
    Matrix a = Matrix::Zero(4, 4);
    a(0, 1) = a(1, 0) = 1.0;
    a(2, 3) = a(3, 2) = 1.0;
    Matrix y(1, 2);
    y << 1, 0;
    try {
        harmonic_solve(laplacian_from_adjacency(a), y);
        FAIL("expected DisconnectedUnlabeledError");
    } catch (const DisconnectedUnlabeledError& e) {
        CHECK(e.component_nodes == std::vector<Index>{2, 3});
    }
}

TEST_CASE("gfhf separates two well-separated blobs with one label each") {
    Rng rng(113);
    const Index per_class = 20;
    Matrix points(2, 2 * per_class);
    std::vector<int> labels(static_cast<std::size_t>(2 * per_class));
    for (Index i = 0; i < 2 * per_class; ++i) {
        const int c = (i < per_class) ? 0 : 1;
        labels[static_cast<std::size_t>(i)] = c;
        points(0, i) = (c == 0 ? 0.0 : 10.0) + 0.3 * rng.normal();
        points(1, i) = 0.3 * rng.normal();
    }
    // one label per blob, moved to the front
    std::vector<bool> mask(static_cast<std::size_t>(2 * per_class), false);
    mask[0] = mask[static_cast<std::size_t>(per_class)] = true;
    const MultiViewDataset data = permute_labeled_first({points}, labels, mask);

    const Matrix y = one_hot(data.labels, data.labeled_count, 2);
    const auto predictions = gfhf_baseline(data.views[0], y, 5);
    for (Index i = 0; i < data.unlabeled_count(); ++i)
        CHECK(predictions[static_cast<std::size_t>(i)] ==
              data.labels[static_cast<std::size_t>(data.labeled_count + i)]);
}

TEST_CASE("identical points give uniform weights and label-proportion scores") {
    Matrix points = Matrix::Zero(2, 3);  // three identical points
    const Laplacian lap = gaussian_knn_laplacian(points, 2);
    // complete graph with unit weights
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 3; ++j)
            if (i != j) CHECK(lap.adjacency(i, j) == doctest::Approx(1.0));
    Matrix y(2, 2);
    y << 1, 0,
         0, 1;
    const LabelIndicator f = harmonic_solve(lap, y);
    CHECK(f.scores(2, 0) == doctest::Approx(0.5));
    CHECK(f.scores(2, 1) == doctest::Approx(0.5));
}

TEST_CASE("gfhf equals harmonic_solve composed with decide on the same graph") {
    Rng rng(127);
    const Matrix points = oracles::random_matrix(rng, 3, 15);
    Matrix y = Matrix::Zero(3, 2);
    y(0, 0) = y(1, 1) = y(2, 0) = 1.0;
    const Laplacian lap = gaussian_knn_laplacian(points, 4);
    const auto direct = decide(harmonic_solve(lap, y));
    const auto composed = gfhf_baseline(points, y, 4);
    CHECK(direct == composed);
}

}  // TEST_SUITE
