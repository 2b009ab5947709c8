#include "lmssc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

namespace lmssc {

namespace {

struct UnionFind {
    explicit UnionFind(Index n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), Index{0});
    }

    Index find(Index x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }

    void merge(Index a, Index b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(b)] = a;
    }

    std::vector<Index> parent;
};

// Row update shared by both alpha modes: project -d_i/(4 alpha beta) over
// the off-diagonal coordinates and pin s_ii = 0.
void fill_similarity_row(const Matrix& d, Index i, double alpha_i, double beta, Matrix& weights) {
    const Index n = d.rows();
    Vector v(n - 1);
    Index out = 0;
    const double denom = 4.0 * alpha_i * beta;
    for (Index j = 0; j < n; ++j) {
        if (j == i) continue;
        v(out++) = -d(i, j) / denom;
    }
    const Vector projected = project_row_to_simplex(v);
    out = 0;
    for (Index j = 0; j < n; ++j) weights(i, j) = (j == i) ? 0.0 : projected(out++);
}

}  // namespace

void validate(const PairwiseDistances& d) {
    const Index n = d.matrix.rows();
    if (d.matrix.cols() != n) throw DimensionMismatchError("distance matrix not square");
    if ((d.matrix - d.matrix.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw Error("distance matrix not symmetric");
    for (Index i = 0; i < n; ++i)
        if (d.matrix(i, i) != 0.0) throw Error("distance diagonal not zero");
    if (n > 0 && d.matrix.minCoeff() < 0.0) throw Error("negative squared distance");
}

PairwiseDistances squared_distances(const Matrix& points, std::string source_tag) {
    const Index n = points.cols();
    if (n < 2) throw DimensionMismatchError("squared_distances needs at least two points");
    const Vector sq = points.colwise().squaredNorm();
    Matrix d = -2.0 * (points.transpose() * points);
    d.colwise() += sq;
    d.rowwise() += sq.transpose();
    d = 0.5 * (d + d.transpose()).eval();
    d = d.cwiseMax(0.0);
    d.diagonal().setZero();
    return {std::move(d), std::move(source_tag)};
}

PairwiseDistances combined_distances(const PairwiseDistances& dh, const PairwiseDistances& df,
                                     double beta, double gamma) {
    if (dh.matrix.rows() != df.matrix.rows())
        throw DimensionMismatchError("distance matrices disagree on size");
    return {beta * dh.matrix + gamma * df.matrix,
            dh.source_tag + "+" + df.source_tag};
}

AlphaStats alpha_from_k(const PairwiseDistances& combined, Index k, double beta) {
    const Index n = combined.matrix.rows();
    if (k < 1 || k > n - 2)
        throw Error("alpha_from_k requires 1 <= k <= N-2, got k=" + std::to_string(k) +
                    " with N=" + std::to_string(n));
    if (!(beta > 0.0)) throw Error("alpha_from_k requires beta > 0");

    AlphaStats stats;
    stats.per_point.resize(n);
    std::vector<double> row(static_cast<std::size_t>(n - 1));
    for (Index i = 0; i < n; ++i) {
        Index out = 0;
        for (Index j = 0; j < n; ++j) {
            if (j == i) continue;
            row[static_cast<std::size_t>(out++)] = combined.matrix(i, j);
        }
        std::sort(row.begin(), row.end());
        double head = 0.0;
        for (Index j = 0; j < k; ++j) head += row[static_cast<std::size_t>(j)];
        // Upper bound of the alpha_i interval that makes the row support
        // exactly k: ((k/2) d_{i,k+1} - (1/2) sum_{j<=k} d_{ij}) / (2 beta).
        stats.per_point(i) =
            (0.5 * static_cast<double>(k) * row[static_cast<std::size_t>(k)] - 0.5 * head) /
            (2.0 * beta);
    }
    stats.alpha = stats.per_point.mean();
    stats.degenerate = !(stats.alpha > 0.0);
    return stats;
}

Vector project_row_to_simplex(const Vector& v) {
    const Index m = v.size();
    if (m < 1) throw DimensionMismatchError("cannot project an empty vector");
    std::vector<double> sorted(v.data(), v.data() + m);
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double cumulative = 0.0;
    double threshold = 1.0 - sorted.front();  // j = 1 always admits a positive entry
    for (Index j = 0; j < m; ++j) {
        cumulative += sorted[static_cast<std::size_t>(j)];
        const double t = (1.0 - cumulative) / static_cast<double>(j + 1);
        if (sorted[static_cast<std::size_t>(j)] + t > 0.0) threshold = t;
    }
    Vector s(m);
    // the upper clamp only strips rounding dust: sum-1 plus nonnegativity
    // already bound every entry by 1
    for (Index i = 0; i < m; ++i) s(i) = std::min(std::max(v(i) + threshold, 0.0), 1.0);
    return s;
}

SimilarityGraph update_similarity(const PairwiseDistances& dh, const PairwiseDistances& df,
                                  double beta, double gamma, double alpha,
                                  Index neighbor_count_hint) {
    if (!(alpha > 0.0))
        throw DegenerateDistancesError("similarity update needs alpha > 0; got " +
                                       std::to_string(alpha));
    if (!(beta > 0.0) || gamma < 0.0)
        throw Error("similarity update needs beta > 0 and gamma >= 0");
    const Matrix d = beta * dh.matrix + gamma * df.matrix;
    const Index n = d.rows();
    if (n < 2 || d.cols() != n || df.matrix.rows() != n)
        throw DimensionMismatchError("distance matrices disagree on size");

    SimilarityGraph graph;
    graph.neighbor_count_hint = neighbor_count_hint;
    graph.weights.resize(n, n);
    for (Index i = 0; i < n; ++i) fill_similarity_row(d, i, alpha, beta, graph.weights);
    return graph;
}

SimilarityGraph update_similarity(const PairwiseDistances& dh, const PairwiseDistances& df,
                                  double beta, double gamma, const Vector& alpha_per_point,
                                  Index neighbor_count_hint) {
    if (!(beta > 0.0) || gamma < 0.0)
        throw Error("similarity update needs beta > 0 and gamma >= 0");
    const Matrix d = beta * dh.matrix + gamma * df.matrix;
    const Index n = d.rows();
    if (alpha_per_point.size() != n)
        throw DimensionMismatchError("alpha_per_point length does not match sample count");

    SimilarityGraph graph;
    graph.neighbor_count_hint = neighbor_count_hint;
    graph.weights.resize(n, n);
    for (Index i = 0; i < n; ++i) {
        if (!(alpha_per_point(i) > 0.0))
            throw DegenerateDistancesError("alpha_i <= 0 at row " + std::to_string(i));
        fill_similarity_row(d, i, alpha_per_point(i), beta, graph.weights);
    }
    return graph;
}

Laplacian laplacian(const SimilarityGraph& graph) {
    Matrix a = 0.5 * (graph.weights + graph.weights.transpose());
    return laplacian_from_adjacency(a);
}

Laplacian laplacian_from_adjacency(const Matrix& adjacency) {
    const Index n = adjacency.rows();
    if (adjacency.cols() != n) throw DimensionMismatchError("adjacency not square");
    Laplacian lap;
    lap.adjacency = adjacency;
    lap.matrix = -adjacency;
    lap.matrix.diagonal() += adjacency.rowwise().sum();
    return lap;
}

std::vector<int> component_labels(const Matrix& adjacency, double weight_tol) {
    const Index n = adjacency.rows();
    UnionFind uf(n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            if (0.5 * (adjacency(i, j) + adjacency(j, i)) > weight_tol) uf.merge(i, j);

    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (Index i = 0; i < n; ++i) {
        const Index root = uf.find(i);
        if (labels[static_cast<std::size_t>(root)] < 0)
            labels[static_cast<std::size_t>(root)] = next++;
        labels[static_cast<std::size_t>(i)] = labels[static_cast<std::size_t>(root)];
    }
    return labels;
}

int connected_components(const SimilarityGraph& graph, double weight_tol) {
    if (weight_tol < 0.0) throw Error("weight_tol must be >= 0");
    const auto labels = component_labels(graph.weights, weight_tol);
    return labels.empty() ? 0 : 1 + *std::max_element(labels.begin(), labels.end());
}

int zero_eigenvalue_multiplicity(const Laplacian& lap, double tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> eigen(lap.matrix, Eigen::EigenvaluesOnly);
    const Vector& values = eigen.eigenvalues();
    int count = 0;
    for (Index i = 0; i < values.size(); ++i)
        if (values(i) < tol) ++count;
    return count;
}

}  // namespace lmssc
