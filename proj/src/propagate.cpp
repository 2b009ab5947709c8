#include "lmssc/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Cholesky>

#include "lmssc/graph.hpp"

namespace lmssc {

namespace {

constexpr double kRidge = 1e-8;
constexpr double kPivotTol = 1e-12;
constexpr double kRidgeScaleLimit = 1e-6;

std::string format_nodes(const std::vector<Index>& nodes) {
    std::ostringstream out;
    out << "{";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i) out << ",";
        out << nodes[i];
    }
    out << "}";
    return out.str();
}

}  // namespace

std::vector<Index> unlabeled_component_nodes(const Laplacian& lap, Index labeled_count) {
    const auto comps = component_labels(lap.adjacency, 1e-12);
    const int count = comps.empty() ? 0 : 1 + *std::max_element(comps.begin(), comps.end());
    std::vector<bool> has_label(static_cast<std::size_t>(count), false);
    for (Index i = 0; i < labeled_count; ++i)
        has_label[static_cast<std::size_t>(comps[static_cast<std::size_t>(i)])] = true;
    std::vector<Index> nodes;
    for (std::size_t i = 0; i < comps.size(); ++i)
        if (!has_label[static_cast<std::size_t>(comps[i])]) nodes.push_back(static_cast<Index>(i));
    return nodes;
}

HarmonicBlocks split_blocks(const Matrix& lap, Index labeled_count) {
    const Index n = lap.rows();
    if (labeled_count < 1 || labeled_count >= n)
        throw DimensionMismatchError("labeled block must satisfy 1 <= l < N");
    const Index u = n - labeled_count;
    return {lap.topLeftCorner(labeled_count, labeled_count),
            lap.topRightCorner(labeled_count, u),
            lap.bottomLeftCorner(u, labeled_count),
            lap.bottomRightCorner(u, u)};
}

LabelIndicator harmonic_solve(const Laplacian& lap, const Matrix& y_labeled,
                              std::vector<Warning>* warnings) {
    const Index n = lap.matrix.rows();
    const Index l = y_labeled.rows();
    const Index c = y_labeled.cols();
    const HarmonicBlocks blocks = split_blocks(lap.matrix, l);
    const Index u = n - l;

    const Matrix rhs = -blocks.ul * y_labeled;
    Eigen::LDLT<Matrix> factor(blocks.uu);
    Matrix f_u;
    bool near_singular = factor.info() != Eigen::Success;
    if (!near_singular) {
        const Vector pivots = factor.vectorD();
        const double pivot_scale = std::max(1.0, pivots.cwiseAbs().maxCoeff());
        if (pivots.minCoeff() < kPivotTol * pivot_scale) near_singular = true;
    }
    if (!near_singular) {
        f_u = factor.solve(rhs);
        const double residual = (blocks.uu * f_u - rhs).norm();
        if (!f_u.allFinite() || residual > 1e-10 * std::max(1.0, rhs.norm()))
            near_singular = true;
    }

    if (near_singular) {
        // A component with no labeled node makes L_uu structurally
        // singular; no ridge can give those rows meaning.
        const auto stranded = unlabeled_component_nodes(lap, l);
        if (!stranded.empty())
            throw DisconnectedUnlabeledError(
                "graph nodes " + format_nodes(stranded) +
                    " lie in components with no labeled point",
                stranded);
        const double diag_scale = blocks.uu.diagonal().mean();
        if (kRidge > kRidgeScaleLimit * diag_scale) {
            std::vector<Index> all_unlabeled(static_cast<std::size_t>(u));
            std::iota(all_unlabeled.begin(), all_unlabeled.end(), l);
            throw DisconnectedUnlabeledError(
                "unlabeled block is numerically decoupled (mean degree " +
                    std::to_string(diag_scale) + ")",
                all_unlabeled);
        }
        if (warnings)
            warnings->push_back({"harmonic_solve", "L_uu near-singular; 1e-8 ridge applied"});
        Matrix ridged = blocks.uu;
        ridged.diagonal().array() += kRidge;
        f_u = ridged.ldlt().solve(rhs);
        if (!f_u.allFinite())
            throw SingularSystemError("harmonic system unsolvable even with ridge");
    }

    LabelIndicator indicator;
    indicator.labeled_count = l;
    indicator.scores.resize(n, c);
    indicator.scores.topRows(l) = y_labeled;
    indicator.scores.bottomRows(u) = f_u;
    return indicator;
}

std::vector<int> decide(const LabelIndicator& indicator) {
    const Index u = indicator.sample_count() - indicator.labeled_count;
    const Index c = indicator.class_count_of();
    std::vector<int> out(static_cast<std::size_t>(u));
    for (Index i = 0; i < u; ++i) {
        const Index row = indicator.labeled_count + i;
        int best = 0;
        double best_score = indicator.scores(row, 0);
        for (Index j = 1; j < c; ++j) {
            if (indicator.scores(row, j) > best_score) {  // strict: ties keep the smaller id
                best_score = indicator.scores(row, j);
                best = static_cast<int>(j);
            }
        }
        out[static_cast<std::size_t>(i)] = best;
    }
    return out;
}

Laplacian gaussian_knn_laplacian(const Matrix& view, Index k) {
    const Index n = view.cols();
    if (k < 1 || k > n - 1) throw Error("gaussian_knn_laplacian needs 1 <= k <= N-1");
    const PairwiseDistances d2 = squared_distances(view, "raw");

    // k nearest per point, ties broken by index for determinism.
    std::vector<std::vector<Index>> neighbors(static_cast<std::size_t>(n));
    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        order.clear();
        for (Index j = 0; j < n; ++j)
            if (j != i) order.push_back(j);
        std::sort(order.begin(), order.end(), [&](Index a, Index b) {
            const double da = d2.matrix(i, a), db = d2.matrix(i, b);
            return da < db || (da == db && a < b);
        });
        neighbors[static_cast<std::size_t>(i)].assign(order.begin(), order.begin() + k);
    }

    std::vector<std::vector<bool>> is_neighbor(static_cast<std::size_t>(n),
                                               std::vector<bool>(static_cast<std::size_t>(n), false));
    for (Index i = 0; i < n; ++i)
        for (Index j : neighbors[static_cast<std::size_t>(i)])
            is_neighbor[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;

    // symmetric union: an edge survives when either endpoint lists the
    // other. The intersection variant routinely isolates nodes at this
    // scale, which leaves unlabeled components no harmonic solve can serve.
    std::vector<std::pair<Index, Index>> edges;
    std::vector<double> edge_distances;
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            if (is_neighbor[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ||
                is_neighbor[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]) {
                edges.emplace_back(i, j);
                edge_distances.push_back(std::sqrt(d2.matrix(i, j)));
            }
        }
    }

    double sigma = 0.0;
    if (!edge_distances.empty()) {
        std::vector<double> sorted = edge_distances;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t mid = sorted.size() / 2;
        sigma = (sorted.size() % 2) ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    }

    Matrix weights = Matrix::Zero(n, n);
    const bool degenerate_scale = !(sigma > 1e-300);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [i, j] = edges[e];
        const double w =
            degenerate_scale ? 1.0 : std::exp(-d2.matrix(i, j) / (2.0 * sigma * sigma));
        weights(i, j) = w;
        weights(j, i) = w;
    }
    return laplacian_from_adjacency(weights);
}

std::vector<int> gfhf_baseline(const Matrix& view, const Matrix& y_labeled, Index k,
                               std::vector<Warning>* warnings) {
    const Laplacian lap = gaussian_knn_laplacian(view, k);
    const LabelIndicator indicator = harmonic_solve(lap, y_labeled, warnings);
    return decide(indicator);
}

}  // namespace lmssc
