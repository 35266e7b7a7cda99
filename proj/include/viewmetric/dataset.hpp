#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace viewmetric {

/// A point cloud with optional aligned labels, manifold parameter, and
/// feature names. Rows of `points` are samples.
struct Dataset {
    std::string name;
    Eigen::MatrixXd points;
    std::optional<std::vector<int>> labels;
    std::optional<Eigen::VectorXd> t;
    std::optional<std::vector<std::string>> feature_names;
    /// Original label text per dense id (first-appearance order); empty
    /// when the dataset has no labels.
    std::vector<std::string> label_names;

    Eigen::Index n() const { return points.rows(); }
    Eigen::Index dim() const { return points.cols(); }
};

/// S-curve sampler: t = 3π(u − 0.5), point = (sin t, 2v, sign(t)(cos t − 1))
/// plus isotropic Gaussian noise. u, v uniform on [0,1), one (u, v, noise)
/// block per point in row order, so outputs are reproducible given the seed.
Dataset gen_s_curve(Eigen::Index n, double noise, std::uint64_t seed);

/// Swiss-roll sampler: t = 1.5π(1 + 2u), point = (t cos t, 21v, t sin t)
/// plus isotropic Gaussian noise; same drawing scheme as gen_s_curve.
Dataset gen_swiss_roll(Eigen::Index n, double noise, std::uint64_t seed);

/// Identifies a CSV column, either by 0-based index or by header name.
using ColumnRef = std::variant<Eigen::Index, std::string>;

struct CsvOptions {
    bool has_header = true;
    /// Column holding class labels. Defaults to the header column named
    /// "label" when present.
    std::optional<ColumnRef> label_column;
    /// Column holding the manifold parameter. Defaults to the header
    /// column named "t" when present.
    std::optional<ColumnRef> t_column;
};

/// Parses an RFC-4180-style CSV into a Dataset. Numeric columns become
/// coordinates; the label column (which may be categorical text) is mapped
/// to dense integers 0..c−1 in first-appearance order, with the original
/// text kept in `label_names` and echoed in `name`. Throws on missing
/// files, ragged rows (with the row number), and non-numeric feature cells
/// (with the cell address).
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Writes features, then a `label` column when labels are present, then a
/// `t` column when the parameter is present. Always writes a header row;
/// floats are printed with 17 significant digits so load_csv ∘ save_csv
/// round-trips bit-exactly.
void save_csv(const Dataset& dataset, const std::filesystem::path& path);

/// Shifts every feature to mean 0 and scales to population standard
/// deviation 1 (divisor n). Zero-variance features pass through unchanged;
/// labels and t are untouched. Requires n ≥ 2.
Dataset standardize(const Dataset& dataset);

/// Expected shape of a named dataset: size, dimension, and class
/// distribution (empty for unlabeled sets).
struct DatasetManifest {
    std::string name;
    Eigen::Index n = 0;
    Eigen::Index dim = 0;
    std::vector<Eigen::Index> class_distribution;
};

/// The ten reference datasets with their published sizes, dimensions, and
/// class distributions.
const std::vector<DatasetManifest>& builtin_manifests();

/// Reads manifests from a JSON array of
/// {name, n, dim, class_distribution} objects.
std::vector<DatasetManifest> load_manifests(const std::filesystem::path& path);

/// Case-insensitive lookup by name; nullptr when absent.
const DatasetManifest* find_manifest(const std::vector<DatasetManifest>& manifests,
                                     const std::string& name);

/// Throws std::runtime_error describing the first mismatch between the
/// dataset and the manifest (n, dim, or class distribution as a multiset).
void validate_against_manifest(const Dataset& dataset, const DatasetManifest& manifest);

}  // namespace viewmetric
