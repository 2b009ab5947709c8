#include "lmssc/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace lmssc {

int class_count(const std::vector<int>& labels) {
    int maximum = -1;
    for (int label : labels) maximum = std::max(maximum, label);
    return maximum + 1;
}

int MultiViewDataset::class_count() const { return lmssc::class_count(labels); }

Matrix one_hot(const std::vector<int>& labels, Index count, int classes) {
    if (count > static_cast<Index>(labels.size()))
        throw DimensionMismatchError("one_hot: count exceeds label vector length");
    Matrix y = Matrix::Zero(count, classes);
    for (Index i = 0; i < count; ++i) {
        const int label = labels[static_cast<std::size_t>(i)];
        if (label < 0 || label >= classes)
            throw IndexError("one_hot: label " + std::to_string(label) + " outside 0.." +
                             std::to_string(classes - 1));
        y(i, label) = 1.0;
    }
    return y;
}

void validate(const MultiViewDataset& data) {
    if (data.views.empty()) throw DimensionMismatchError("dataset has no views");
    const Index n = data.views.front().cols();
    for (std::size_t v = 0; v < data.views.size(); ++v) {
        if (data.views[v].cols() != n) {
            std::ostringstream msg;
            msg << "view " << v << " has " << data.views[v].cols() << " samples, expected " << n;
            throw DimensionMismatchError(msg.str());
        }
        if (data.views[v].rows() < 1)
            throw DimensionMismatchError("view " + std::to_string(v) + " has no features");
    }
    if (static_cast<Index>(data.labels.size()) != n)
        throw DimensionMismatchError("label vector length does not match sample count");
    if (data.labeled_count < 1 || data.labeled_count >= n)
        throw DimensionMismatchError("labeled_count must satisfy 1 <= l < N");

    const int classes = data.class_count();
    if (classes < 2) throw LabelCoverageError("dataset must contain at least two classes");
    for (int label : data.labels)
        if (label < 0) throw IndexError("negative class id");

    std::vector<bool> covered(static_cast<std::size_t>(classes), false);
    for (Index i = 0; i < data.labeled_count; ++i)
        covered[static_cast<std::size_t>(data.labels[static_cast<std::size_t>(i)])] = true;
    for (int c = 0; c < classes; ++c) {
        if (!covered[static_cast<std::size_t>(c)])
            throw LabelCoverageError("class " + std::to_string(c) +
                                     " has no labeled representative");
    }

    if (static_cast<Index>(data.permutation.size()) != n)
        throw IndexError("permutation length does not match sample count");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (Index idx : data.permutation) {
        if (idx < 0 || idx >= n) throw IndexError("permutation entry out of range");
        if (seen[static_cast<std::size_t>(idx)]) throw IndexError("permutation is not a bijection");
        seen[static_cast<std::size_t>(idx)] = true;
    }
}

MultiViewDataset permute_labeled_first(const std::vector<Matrix>& raw_views,
                                       const std::vector<int>& raw_labels,
                                       const std::vector<bool>& labeled_mask) {
    if (raw_views.empty()) throw DimensionMismatchError("no views given");
    const Index n = raw_views.front().cols();
    if (static_cast<Index>(raw_labels.size()) != n || static_cast<Index>(labeled_mask.size()) != n)
        throw DimensionMismatchError("labels/mask length does not match sample count");

    std::vector<Index> order;
    order.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
        if (labeled_mask[static_cast<std::size_t>(i)]) order.push_back(i);
    const Index labeled = static_cast<Index>(order.size());
    for (Index i = 0; i < n; ++i)
        if (!labeled_mask[static_cast<std::size_t>(i)]) order.push_back(i);

    MultiViewDataset data;
    data.labeled_count = labeled;
    data.permutation = order;
    data.labels.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
        data.labels[static_cast<std::size_t>(i)] = raw_labels[static_cast<std::size_t>(order[i])];
    data.views.reserve(raw_views.size());
    for (const Matrix& view : raw_views) {
        if (view.cols() != n)
            throw DimensionMismatchError("views disagree on sample count");
        Matrix reordered(view.rows(), n);
        for (Index i = 0; i < n; ++i) reordered.col(i) = view.col(order[i]);
        data.views.push_back(std::move(reordered));
    }
    validate(data);
    return data;
}

void validate(const SimilarityGraph& graph) {
    const Index n = graph.weights.rows();
    if (graph.weights.cols() != n) throw DimensionMismatchError("similarity matrix not square");
    for (Index i = 0; i < n; ++i) {
        if (graph.weights(i, i) != 0.0)
            throw Error("similarity diagonal must be exactly zero at row " + std::to_string(i));
        double sum = 0.0;
        for (Index j = 0; j < n; ++j) {
            const double w = graph.weights(i, j);
            if (w < 0.0 || w > 1.0)
                throw Error("similarity entry outside [0,1] at (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-8)
            throw Error("similarity row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
}

void validate(const Laplacian& lap) {
    const Index n = lap.matrix.rows();
    if (lap.matrix.cols() != n) throw DimensionMismatchError("Laplacian not square");
    if ((lap.matrix - lap.matrix.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw Error("Laplacian not symmetric");
    const Vector row_sums = lap.matrix.rowwise().sum();
    if (row_sums.cwiseAbs().maxCoeff() > 1e-8) throw Error("Laplacian rows do not sum to zero");
    Eigen::SelfAdjointEigenSolver<Matrix> eigen(lap.matrix, Eigen::EigenvaluesOnly);
    if (eigen.eigenvalues().minCoeff() < -1e-8)
        throw Error("Laplacian has an eigenvalue below -1e-8");
}

void validate(const LatentModel& model) {
    if (model.shared.rows() != model.latent_dim)
        throw DimensionMismatchError("shared factor row count != latent_dim");
    for (std::size_t v = 0; v < model.view_factors.size(); ++v) {
        const Matrix& w = model.view_factors[v];
        if (w.cols() != model.latent_dim)
            throw DimensionMismatchError("view factor " + std::to_string(v) +
                                         " column count != latent_dim");
        if (w.size() > 0 && w.minCoeff() < -1e-12)
            throw Error("view factor " + std::to_string(v) + " has a negative entry");
    }
}

void validate(const LabelIndicator& indicator, const std::vector<int>& labels) {
    const Index n = indicator.scores.rows();
    const Index c = indicator.scores.cols();
    const Index l = indicator.labeled_count;
    if (l < 0 || l > n) throw DimensionMismatchError("labeled_count out of range");
    if (static_cast<Index>(labels.size()) < l)
        throw DimensionMismatchError("label vector shorter than labeled block");
    for (Index i = 0; i < l; ++i) {
        for (Index j = 0; j < c; ++j) {
            const double expected = (labels[static_cast<std::size_t>(i)] == j) ? 1.0 : 0.0;
            if (indicator.scores(i, j) != expected)
                throw Error("labeled row " + std::to_string(i) + " is not the one-hot of class " +
                            std::to_string(labels[static_cast<std::size_t>(i)]));
        }
    }
    for (Index i = l; i < n; ++i) {
        double sum = 0.0;
        for (Index j = 0; j < c; ++j) {
            const double s = indicator.scores(i, j);
            if (s < -1e-9 || s > 1.0 + 1e-9)
                throw Error("score outside [0,1] at unlabeled row " + std::to_string(i));
            sum += s;
        }
        if (std::abs(sum - 1.0) > 1e-6)
            throw Error("unlabeled row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
}

void validate(const LmsscConfig& config, Index n_samples) {
    if (!(config.beta > 0.0)) throw Error("beta must be positive");
    if (!(config.gamma > 0.0)) throw Error("gamma must be positive");
    if (config.latent_dim < 1) throw Error("latent_dim must be >= 1");
    if (config.neighbor_count < 1 || config.neighbor_count >= n_samples)
        throw Error("neighbor_count must satisfy 1 <= k < N");
    if (config.max_iters < 1) throw Error("max_iters must be >= 1");
    if (!(config.f_rel_tol > 0.0)) throw Error("f_rel_tol must be positive");
}

}  // namespace lmssc
