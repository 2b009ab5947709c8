#include "lmssc/data_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lmssc/rng.hpp"

namespace lmssc {

namespace {

using nlohmann::json;

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

}  // namespace

DatasetManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in = open_for_read(path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    DatasetManifest manifest;
    try {
        manifest.name = j.at("name").get<std::string>();
        manifest.view_files = j.at("views").get<std::vector<std::string>>();
        manifest.label_file = j.at("labels").get<std::string>();
        for (const auto& dims : j.at("dims")) {
            if (dims.size() != 2) throw ParseError(path.string() + ": dims entries must be pairs");
            manifest.expected_dims.emplace_back(dims[0].get<Index>(), dims[1].get<Index>());
        }
        manifest.class_count = j.at("classes").get<int>();
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (manifest.view_files.empty()) throw ParseError(path.string() + ": manifest lists no views");
    if (manifest.view_files.size() != manifest.expected_dims.size())
        throw ParseError(path.string() + ": dims count does not match views count");
    for (const auto& [d, n] : manifest.expected_dims)
        if (d < 1 || n < 1) throw ParseError(path.string() + ": non-positive dimension");
    return manifest;
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
    json dims = json::array();
    for (const auto& [d, n] : manifest.expected_dims) dims.push_back({d, n});
    const json j = {{"name", manifest.name},
                    {"views", manifest.view_files},
                    {"labels", manifest.label_file},
                    {"dims", dims},
                    {"classes", manifest.class_count}};
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

Matrix read_csv_matrix(const std::filesystem::path& path) {
    std::ifstream in = open_for_read(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_number = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) {
            try {
                std::size_t consumed = 0;
                row.push_back(std::stod(field, &consumed));
                while (consumed < field.size() && std::isspace(static_cast<unsigned char>(field[consumed])))
                    ++consumed;
                if (consumed != field.size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw ParseError(path.string() + ":" + std::to_string(line_number) +
                                 ": cannot parse '" + field + "' as a number");
            }
        }
        if (row.empty())
            throw ParseError(path.string() + ":" + std::to_string(line_number) + ": empty row");
        if (width == 0) width = row.size();
        if (row.size() != width)
            throw ParseError(path.string() + ":" + std::to_string(line_number) + ": expected " +
                             std::to_string(width) + " fields, got " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path.string() + ": file holds no data rows");
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < width; ++j)
            m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return m;
}

std::vector<int> read_labels(const std::filesystem::path& path) {
    std::ifstream in = open_for_read(path);
    std::vector<int> labels;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        try {
            std::size_t consumed = 0;
            labels.push_back(std::stoi(line, &consumed));
            while (consumed < line.size() && std::isspace(static_cast<unsigned char>(line[consumed])))
                ++consumed;
            if (consumed != line.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ParseError(path.string() + ":" + std::to_string(line_number) +
                             ": cannot parse '" + line + "' as a class id");
        }
    }
    if (labels.empty()) throw ParseError(path.string() + ": label file holds no labels");
    return labels;
}

RawDataset load(const DatasetManifest& manifest, const std::filesystem::path& base_dir) {
    RawDataset data;
    data.views.reserve(manifest.view_files.size());
    for (std::size_t v = 0; v < manifest.view_files.size(); ++v) {
        const Matrix by_row = read_csv_matrix(base_dir / manifest.view_files[v]);
        const auto [d, n] = manifest.expected_dims[v];
        if (by_row.rows() != n || by_row.cols() != d) {
            std::ostringstream msg;
            msg << "view '" << manifest.view_files[v] << "' is " << by_row.rows() << "x"
                << by_row.cols() << " (samples x features), manifest expects " << n << "x" << d;
            throw DimensionMismatchError(msg.str());
        }
        data.views.push_back(by_row.transpose());
    }
    data.labels = read_labels(base_dir / manifest.label_file);
    if (static_cast<Index>(data.labels.size()) != data.views.front().cols())
        throw DimensionMismatchError("label count does not match sample count");
    const int found_classes = class_count(data.labels);
    if (found_classes != manifest.class_count)
        throw DimensionMismatchError("label file implies " + std::to_string(found_classes) +
                                     " classes, manifest says " +
                                     std::to_string(manifest.class_count));
    return data;
}

std::filesystem::path save_dataset(const std::filesystem::path& dir, const std::string& name,
                                   const RawDataset& data) {
    std::filesystem::create_directories(dir);
    DatasetManifest manifest;
    manifest.name = name;
    manifest.class_count = class_count(data.labels);

    for (std::size_t v = 0; v < data.views.size(); ++v) {
        const std::string file = name + "_view" + std::to_string(v) + ".csv";
        std::ofstream out(dir / file);
        if (!out) throw IoError("cannot write " + (dir / file).string());
        const Matrix& view = data.views[v];
        for (Index i = 0; i < view.cols(); ++i) {  // one sample per row on disk
            for (Index j = 0; j < view.rows(); ++j) {
                if (j) out << ",";
                out << format_double(view(j, i));
            }
            out << "\n";
        }
        manifest.view_files.push_back(file);
        manifest.expected_dims.emplace_back(view.rows(), view.cols());
    }

    const std::string label_file = name + "_labels.csv";
    std::ofstream out(dir / label_file);
    if (!out) throw IoError("cannot write " + (dir / label_file).string());
    for (int label : data.labels) out << label << "\n";
    manifest.label_file = label_file;

    const std::filesystem::path manifest_path = dir / (name + "_manifest.json");
    write_manifest(manifest_path, manifest);
    return manifest_path;
}

std::vector<bool> make_split(const std::vector<int>& labels, double rate, std::uint64_t seed) {
    if (!(rate > 0.0 && rate < 1.0)) throw Error("label rate must lie in (0,1)");
    const std::size_t n = labels.size();
    const int classes = class_count(labels);
    if (classes < 2) throw LabelCoverageError("need at least two classes to split");

    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(classes));
    for (std::size_t i = 0; i < n; ++i)
        members[static_cast<std::size_t>(labels[i])].push_back(i);

    // Per class round(rate * size) with a floor of one; if some class rounds
    // to zero while the total budget round(rate*N) cannot even fit one per
    // class, the rate is too low to honor and we report instead of fixing.
    const long budget = std::lround(rate * static_cast<double>(n));
    std::vector<std::size_t> take(static_cast<std::size_t>(classes));
    for (int c = 0; c < classes; ++c) {
        const auto& group = members[static_cast<std::size_t>(c)];
        if (group.empty()) throw LabelCoverageError("class " + std::to_string(c) + " is empty");
        const long count = std::lround(rate * static_cast<double>(group.size()));
        if (count == 0 && budget < classes)
            throw RateTooLowError("rate " + std::to_string(rate) + " gives class " +
                                  std::to_string(c) + " zero labeled samples and the budget " +
                                  std::to_string(budget) + " cannot cover " +
                                  std::to_string(classes) + " classes");
        take[static_cast<std::size_t>(c)] =
            std::min(group.size(), static_cast<std::size_t>(std::max(count, 1L)));
    }

    std::size_t total = 0;
    for (std::size_t t : take) total += t;
    if (total >= n) throw Error("split leaves no unlabeled points");

    Rng rng(seed);
    std::vector<bool> mask(n, false);
    for (int c = 0; c < classes; ++c) {
        auto group = members[static_cast<std::size_t>(c)];
        rng.shuffle(group);
        for (std::size_t i = 0; i < take[static_cast<std::size_t>(c)]; ++i) mask[group[i]] = true;
    }
    return mask;
}

void validate(const SyntheticSpec& spec) {
    if (spec.n_classes < 2) throw Error("synthetic spec needs at least two classes");
    if (spec.n_samples < 2 * static_cast<Index>(spec.n_classes))
        throw Error("synthetic spec needs n_samples >= 2 * n_classes");
    if (spec.latent_dim < 1) throw Error("synthetic latent_dim must be >= 1");
    if (spec.view_dims.empty()) throw Error("synthetic spec needs at least one view");
    for (Index d : spec.view_dims)
        if (d < 1) throw Error("synthetic view dims must be >= 1");
    if (spec.noise_sigma < 0.0) throw Error("noise_sigma must be >= 0");
    if (spec.cluster_separation < 0.0) throw Error("cluster_separation must be >= 0");
}

SyntheticSpec read_synthetic_spec(const std::filesystem::path& path) {
    std::ifstream in = open_for_read(path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    SyntheticSpec spec;
    try {
        spec.n_samples = j.at("n_samples").get<Index>();
        spec.n_classes = j.at("n_classes").get<int>();
        spec.latent_dim = j.at("latent_dim").get<Index>();
        spec.view_dims = j.at("view_dims").get<std::vector<Index>>();
        spec.cluster_separation = j.at("cluster_separation").get<double>();
        spec.noise_sigma = j.at("noise_sigma").get<double>();
        spec.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    validate(spec);
    return spec;
}

void write_synthetic_spec(const std::filesystem::path& path, const SyntheticSpec& spec) {
    const json j = {{"n_samples", spec.n_samples},
                    {"n_classes", spec.n_classes},
                    {"latent_dim", spec.latent_dim},
                    {"view_dims", spec.view_dims},
                    {"cluster_separation", spec.cluster_separation},
                    {"noise_sigma", spec.noise_sigma},
                    {"rng_seed", spec.rng_seed}};
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

SyntheticDataset generate_synthetic(const SyntheticSpec& spec) {
    validate(spec);
    Rng rng(spec.rng_seed);
    const Index n = spec.n_samples;
    const Index r0 = spec.latent_dim;
    const int classes = spec.n_classes;

    // Class centers sit cluster_separation * noise_sigma apart: on distinct
    // latent axes when they fit, otherwise on scaled random directions.
    // Separation is measured in noise units, so the noise-free limit keeps
    // the raw separation.
    const double radius =
        spec.noise_sigma > 0.0 ? spec.cluster_separation * spec.noise_sigma
                               : spec.cluster_separation;
    Matrix centers = Matrix::Zero(r0, classes);
    if (static_cast<Index>(classes) <= r0) {
        for (int c = 0; c < classes; ++c) centers(c, c) = radius;
    } else {
        for (int c = 0; c < classes; ++c) {
            Vector direction(r0);
            for (Index d = 0; d < r0; ++d) direction(d) = rng.normal();
            centers.col(c) = radius * direction / std::max(direction.norm(), 1e-12);
        }
    }

    SyntheticDataset out;
    out.data.labels.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
        out.data.labels[static_cast<std::size_t>(i)] = static_cast<int>(i % classes);

    out.latent.resize(r0, n);
    for (Index i = 0; i < n; ++i) {
        const int c = out.data.labels[static_cast<std::size_t>(i)];
        for (Index d = 0; d < r0; ++d)
            out.latent(d, i) = centers(d, c) + spec.noise_sigma * rng.normal();
    }

    out.factors.reserve(spec.view_dims.size());
    out.data.views.reserve(spec.view_dims.size());
    for (Index dim : spec.view_dims) {
        Matrix w(dim, r0);
        for (Index i = 0; i < dim; ++i)
            for (Index j = 0; j < r0; ++j) w(i, j) = rng.uniform();
        Matrix x = w * out.latent;
        for (Index i = 0; i < x.rows(); ++i)
            for (Index j = 0; j < x.cols(); ++j) x(i, j) += spec.noise_sigma * rng.normal();
        out.factors.push_back(std::move(w));
        out.data.views.push_back(std::move(x));
    }
    return out;
}

}  // namespace lmssc
