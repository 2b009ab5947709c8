#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "lmssc/data_io.hpp"
#include "lmssc/rng.hpp"

#include "oracles.hpp"

using namespace lmssc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("lmssc_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE("data_io") {

TEST_CASE("save and load round-trip a sonar-shaped dataset") {
    TempDir dir("roundtrip");
    Rng rng(211);
    RawDataset data;
    for (int v = 0; v < 3; ++v) data.views.push_back(oracles::random_matrix(rng, 20, 208));
    data.labels.resize(208);
    for (std::size_t i = 0; i < 208; ++i) data.labels[i] = static_cast<int>(i % 2);

    const fs::path manifest_path = save_dataset(dir.path, "sonarish", data);
    const DatasetManifest manifest = read_manifest(manifest_path);
    CHECK(manifest.view_files.size() == 3);
    CHECK(manifest.class_count == 2);
    CHECK(manifest.expected_dims[0] == std::pair<Index, Index>{20, 208});

    const RawDataset loaded = load(manifest, dir.path);
    CHECK(loaded.sample_count() == 208);
    for (int v = 0; v < 3; ++v)
        CHECK((loaded.views[static_cast<std::size_t>(v)] -
               data.views[static_cast<std::size_t>(v)])
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    CHECK(loaded.labels == data.labels);
}

TEST_CASE("dimension disagreement names the offending view") {
    TempDir dir("dims");
    Rng rng(223);
    RawDataset data;
    data.views.push_back(oracles::random_matrix(rng, 5, 12));
    data.labels.assign(12, 0);
    for (std::size_t i = 0; i < 6; ++i) data.labels[i] = 1;
    const fs::path manifest_path = save_dataset(dir.path, "tiny", data);
    DatasetManifest manifest = read_manifest(manifest_path);
    manifest.expected_dims[0] = {7, 12};  // wrong feature count
    try {
        load(manifest, dir.path);
        FAIL("expected DimensionMismatchError");
    } catch (const DimensionMismatchError& e) {
        CHECK(std::string(e.what()).find("tiny_view0.csv") != std::string::npos);
    }
}

TEST_CASE("empty label file is a parse error") {
    TempDir dir("empty");
    std::ofstream(dir.path / "labels.csv").close();
    CHECK_THROWS_AS(read_labels(dir.path / "labels.csv"), ParseError);
}

TEST_CASE("malformed numeric field reports its line") {
    TempDir dir("badnum");
    {
        std::ofstream out(dir.path / "view.csv");
        out << "1.0,2.0\n3.0,oops\n";
    }
    try {
        read_csv_matrix(dir.path / "view.csv");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
}

TEST_CASE("split takes one per class at rate 0.1 on ten-per-class data") {
    std::vector<int> labels(20);
    for (std::size_t i = 0; i < 20; ++i) labels[i] = static_cast<int>(i / 10);
    const auto mask = make_split(labels, 0.1, 5);
    int count0 = 0, count1 = 0;
    for (std::size_t i = 0; i < 20; ++i) {
        if (!mask[i]) continue;
        (labels[i] == 0 ? count0 : count1)++;
    }
    CHECK(count0 == 1);
    CHECK(count1 == 1);
}

TEST_CASE("rate 0.5 on a balanced 208-sample set labels 104 points") {
    std::vector<int> labels(208);
    for (std::size_t i = 0; i < 208; ++i) labels[i] = static_cast<int>(i % 2);
    const auto mask = make_split(labels, 0.5, 7);
    int labeled = 0;
    for (bool m : mask) labeled += m ? 1 : 0;
    CHECK(labeled == 104);
}

TEST_CASE("equal seeds give identical masks") {
    std::vector<int> labels(50);
    for (std::size_t i = 0; i < 50; ++i) labels[i] = static_cast<int>(i % 3);
    CHECK(make_split(labels, 0.2, 11) == make_split(labels, 0.2, 11));
    CHECK(make_split(labels, 0.2, 11) != make_split(labels, 0.2, 12));
}

TEST_CASE("labeled counts stay within c of rate*N across the rate grid") {
    Rng rng(227);
    std::vector<int> labels(140);
    for (auto& label : labels) label = static_cast<int>(rng.integer(4));
    for (int c = 0; c < 4; ++c) labels[static_cast<std::size_t>(c)] = c;
    for (double rate : {0.1, 0.2, 0.3, 0.5}) {
        const auto mask = make_split(labels, rate, 13);
        int labeled = 0;
        for (bool m : mask) labeled += m ? 1 : 0;
        CHECK(std::abs(labeled - rate * 140.0) <= 4.0);
    }
}

TEST_CASE("a rate below one label per class is rejected") {
    std::vector<int> labels(100);
    for (std::size_t i = 0; i < 100; ++i) labels[i] = static_cast<int>(i % 10);
    CHECK_THROWS_AS(make_split(labels, 0.02, 3), RateTooLowError);
}

TEST_CASE("synthetic generator: nearest-center classification of H0 is perfect") {
    SyntheticSpec spec;
    spec.rng_seed = 31;
    const SyntheticDataset synthetic = generate_synthetic(spec);
    const Index n = spec.n_samples;
    const Index r0 = spec.latent_dim;
    Matrix centers = Matrix::Zero(r0, spec.n_classes);
    std::vector<int> counts(static_cast<std::size_t>(spec.n_classes), 0);
    for (Index i = 0; i < n; ++i) {
        const int c = synthetic.data.labels[static_cast<std::size_t>(i)];
        centers.col(c) += synthetic.latent.col(i);
        counts[static_cast<std::size_t>(c)]++;
    }
    for (int c = 0; c < spec.n_classes; ++c) centers.col(c) /= counts[static_cast<std::size_t>(c)];
    for (Index i = 0; i < n; ++i) {
        int best = 0;
        double best_distance = (synthetic.latent.col(i) - centers.col(0)).squaredNorm();
        for (int c = 1; c < spec.n_classes; ++c) {
            const double distance = (synthetic.latent.col(i) - centers.col(c)).squaredNorm();
            if (distance < best_distance) {
                best_distance = distance;
                best = c;
            }
        }
        CHECK(best == synthetic.data.labels[static_cast<std::size_t>(i)]);
    }
}

TEST_CASE("zero noise factors exactly") {
    SyntheticSpec spec;
    spec.noise_sigma = 0.0;
    spec.rng_seed = 37;
    const SyntheticDataset synthetic = generate_synthetic(spec);
    CHECK(synthetic.latent.cwiseAbs().maxCoeff() > 0.0);
    for (std::size_t v = 0; v < synthetic.data.views.size(); ++v)
        CHECK((synthetic.data.views[v] - synthetic.factors[v] * synthetic.latent)
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
}

TEST_CASE("different seeds give different data of the same shape") {
    SyntheticSpec spec;
    const SyntheticDataset a = generate_synthetic(spec);
    SyntheticSpec spec_b = spec;
    spec_b.rng_seed = 1;
    const SyntheticDataset b = generate_synthetic(spec_b);
    CHECK(a.data.views[0].rows() == b.data.views[0].rows());
    CHECK(a.data.views[0].cols() == b.data.views[0].cols());
    CHECK((a.data.views[0] - b.data.views[0]).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("synthetic spec json round-trips") {
    TempDir dir("spec");
    SyntheticSpec spec;
    spec.n_samples = 123;
    spec.view_dims = {7, 8, 9};
    spec.rng_seed = 99;
    write_synthetic_spec(dir.path / "spec.json", spec);
    const SyntheticSpec loaded = read_synthetic_spec(dir.path / "spec.json");
    CHECK(loaded.n_samples == 123);
    CHECK(loaded.view_dims == std::vector<Index>{7, 8, 9});
    CHECK(loaded.rng_seed == 99);
}

}  // TEST_SUITE
