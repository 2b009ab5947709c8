#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "lmssc/types.hpp"

namespace lmssc {

// Dataset description: one numeric CSV per view (one sample per row, no
// header) plus a label file with one integer per line.
struct DatasetManifest {
    std::string name;
    std::vector<std::string> view_files;
    std::string label_file;
    std::vector<std::pair<Index, Index>> expected_dims;  // (d_v, N) per view
    int class_count = 0;
};

DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

// Views in column-per-sample layout plus raw-order labels; no split applied.
struct RawDataset {
    std::vector<Matrix> views;  // d_v x N
    std::vector<int> labels;    // raw order

    Index sample_count() const { return views.empty() ? 0 : views.front().cols(); }
};

/// Numeric CSV as written on disk: one sample per row. Callers transpose.
Matrix read_csv_matrix(const std::filesystem::path& path);

std::vector<int> read_labels(const std::filesystem::path& path);

/// Loads every view and the labels, cross-checking shapes against the
/// manifest. Relative paths resolve against the manifest's directory.
RawDataset load(const DatasetManifest& manifest, const std::filesystem::path& base_dir);

/// Writes the views/labels/manifest for `data` under `dir` with 17
/// significant digits, returning the manifest path.
std::filesystem::path save_dataset(const std::filesystem::path& dir, const std::string& name,
                                   const RawDataset& data);

/// Stratified labeled mask: per class round(rate * class_size) samples with
/// a minimum of one, drawn without replacement from the seeded stream.
/// Throws RateTooLowError when some class rounds to zero and the one-per-
/// class minimum cannot fit the rate*N budget.
std::vector<bool> make_split(const std::vector<int>& labels, double rate, std::uint64_t seed);

struct SyntheticSpec {
    Index n_samples = 200;
    int n_classes = 4;
    Index latent_dim = 5;                    // true r0
    std::vector<Index> view_dims = {30, 20, 25};
    double cluster_separation = 10.0;
    double noise_sigma = 0.1;
    std::uint64_t rng_seed = 0;
};

void validate(const SyntheticSpec& spec);

SyntheticSpec read_synthetic_spec(const std::filesystem::path& path);
void write_synthetic_spec(const std::filesystem::path& path, const SyntheticSpec& spec);

// Generated data plus the planted factors, kept for recovery tests.
struct SyntheticDataset {
    RawDataset data;
    Matrix latent;                  // H0, r0 x N
    std::vector<Matrix> factors;    // W0^v, d_v x r0
};

/// Plants class centers `cluster_separation * noise_sigma` apart in latent
/// space, draws H0 columns around them, W0^v entries uniform [0,1], and sets
/// X^v = W0^v H0 + N(0, noise_sigma^2) noise.
SyntheticDataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace lmssc
