#include "viewmetric/dataset.hpp"

#include "viewmetric/rng.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace viewmetric {

namespace {

constexpr double kPi = std::numbers::pi;

Dataset gen_manifold(Eigen::Index n, double noise, std::uint64_t seed, bool swiss_roll) {
    if (n < 0) throw std::invalid_argument("generator: n must be nonnegative");
    if (noise < 0.0) throw std::invalid_argument("generator: noise must be nonnegative");

    Dataset d;
    d.name = swiss_roll ? "swiss-roll" : "s-curve";
    d.points.resize(n, 3);
    d.t = Eigen::VectorXd(n);
    d.feature_names = std::vector<std::string>{"x", "y", "z"};

    SplitMix64 rng(seed);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double u = rng.next_double();
        const double v = rng.next_double();
        double t, x, y, z;
        if (swiss_roll) {
            t = 1.5 * kPi * (1.0 + 2.0 * u);
            x = t * std::cos(t);
            y = 21.0 * v;
            z = t * std::sin(t);
        } else {
            t = 3.0 * kPi * (u - 0.5);
            x = std::sin(t);
            y = 2.0 * v;
            z = (t < 0.0 ? -1.0 : 1.0) * (std::cos(t) - 1.0);
        }
        if (noise > 0.0) {
            x += noise * rng.next_gaussian();
            y += noise * rng.next_gaussian();
            z += noise * rng.next_gaussian();
        }
        d.points(i, 0) = x;
        d.points(i, 1) = y;
        d.points(i, 2) = z;
        (*d.t)(i) = t;
    }
    return d;
}

/// Splits one CSV record into fields, honoring double-quoted fields with
/// "" escapes. `line` must already have any trailing CR stripped.
std::vector<std::string> split_record(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted)
        throw std::runtime_error("load_csv: unterminated quote on line " + std::to_string(line_no));
    fields.push_back(std::move(cur));
    return fields;
}

std::string trimmed(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_cell(const std::string& raw, std::size_t line_no, std::size_t col) {
    const std::string s = trimmed(raw);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::runtime_error("load_csv: non-numeric cell \"" + raw + "\" at line " +
                                 std::to_string(line_no) + ", column " + std::to_string(col + 1));
    if (!std::isfinite(value))
        throw std::runtime_error("load_csv: non-finite cell at line " + std::to_string(line_no) +
                                 ", column " + std::to_string(col + 1));
    return value;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quoted_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

/// Resolves a ColumnRef against the header (or column count when headerless).
Eigen::Index resolve_column(const ColumnRef& ref, const std::vector<std::string>& header,
                            std::size_t width, const char* what) {
    if (std::holds_alternative<Eigen::Index>(ref)) {
        const Eigen::Index idx = std::get<Eigen::Index>(ref);
        if (idx < 0 || static_cast<std::size_t>(idx) >= width)
            throw std::runtime_error(std::string("load_csv: ") + what + " column index " +
                                     std::to_string(idx) + " out of range for " +
                                     std::to_string(width) + " columns");
        return idx;
    }
    const std::string& name = std::get<std::string>(ref);
    for (std::size_t j = 0; j < header.size(); ++j)
        if (trimmed(header[j]) == name) return static_cast<Eigen::Index>(j);
    throw std::runtime_error(std::string("load_csv: ") + what + " column \"" + name +
                             "\" not found in header");
}

}  // namespace

Dataset gen_s_curve(Eigen::Index n, double noise, std::uint64_t seed) {
    return gen_manifold(n, noise, seed, false);
}

Dataset gen_swiss_roll(Eigen::Index n, double noise, std::uint64_t seed) {
    return gen_manifold(n, noise, seed, true);
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path.string());

    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && rows.empty() && header.empty()) continue;  // leading blank lines
        if (line.empty()) continue;
        auto fields = split_record(line, line_no);
        if (line_no == 1 && options.has_header) {
            header = std::move(fields);
            continue;
        }
        if (!rows.empty() && fields.size() != rows.front().size())
            throw std::runtime_error("load_csv: ragged row at line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(rows.front().size()) +
                                     " fields, got " + std::to_string(fields.size()));
        rows.push_back(std::move(fields));
    }
    if (rows.empty()) throw std::runtime_error("load_csv: no data rows in " + path.string());
    const std::size_t width = rows.front().size();
    if (!header.empty() && header.size() != width)
        throw std::runtime_error("load_csv: header has " + std::to_string(header.size()) +
                                 " fields but body rows have " + std::to_string(width));

    std::optional<Eigen::Index> label_col, t_col;
    if (options.label_column) {
        label_col = resolve_column(*options.label_column, header, width, "label");
    } else if (!header.empty()) {
        for (std::size_t j = 0; j < width; ++j)
            if (trimmed(header[j]) == "label") label_col = static_cast<Eigen::Index>(j);
    }
    if (options.t_column) {
        t_col = resolve_column(*options.t_column, header, width, "t");
    } else if (!header.empty()) {
        for (std::size_t j = 0; j < width; ++j)
            if (trimmed(header[j]) == "t") t_col = static_cast<Eigen::Index>(j);
    }
    if (label_col && t_col && *label_col == *t_col)
        throw std::runtime_error("load_csv: label and t both mapped to column " +
                                 std::to_string(*label_col));

    // A labels-only file (no feature columns) is fine: points become n×0.
    std::vector<Eigen::Index> feature_cols;
    for (std::size_t j = 0; j < width; ++j) {
        const auto idx = static_cast<Eigen::Index>(j);
        if ((label_col && idx == *label_col) || (t_col && idx == *t_col)) continue;
        feature_cols.push_back(idx);
    }

    Dataset d;
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto m = static_cast<Eigen::Index>(feature_cols.size());
    d.points.resize(n, m);
    if (!header.empty()) {
        std::vector<std::string> names;
        names.reserve(feature_cols.size());
        for (Eigen::Index c : feature_cols) names.push_back(trimmed(header[static_cast<std::size_t>(c)]));
        d.feature_names = std::move(names);
    }

    std::map<std::string, int> label_ids;
    std::vector<int> labels;
    Eigen::VectorXd tvals(t_col ? n : 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        const std::size_t file_line = static_cast<std::size_t>(i) + (options.has_header ? 2 : 1);
        for (Eigen::Index j = 0; j < m; ++j) {
            const auto col = static_cast<std::size_t>(feature_cols[static_cast<std::size_t>(j)]);
            d.points(i, j) = parse_cell(row[col], file_line, col);
        }
        if (label_col) {
            const std::string text = trimmed(row[static_cast<std::size_t>(*label_col)]);
            auto [it, inserted] = label_ids.emplace(text, static_cast<int>(label_ids.size()));
            if (inserted) d.label_names.push_back(text);
            labels.push_back(it->second);
        }
        if (t_col)
            tvals(i) = parse_cell(row[static_cast<std::size_t>(*t_col)], file_line,
                                  static_cast<std::size_t>(*t_col));
    }
    if (label_col) d.labels = std::move(labels);
    if (t_col) d.t = std::move(tvals);

    d.name = path.stem().string();
    if (!d.label_names.empty()) {
        std::string mapping;
        for (std::size_t i = 0; i < d.label_names.size(); ++i) {
            if (i) mapping += ",";
            mapping += d.label_names[i] + "=" + std::to_string(i);
        }
        d.name += " [labels: " + mapping + "]";
    }
    return d;
}

void save_csv(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_csv: cannot open " + path.string() + " for writing");

    const Eigen::Index n = dataset.n(), m = dataset.dim();
    if (dataset.labels && static_cast<Eigen::Index>(dataset.labels->size()) != n)
        throw std::runtime_error("save_csv: labels length mismatch");
    if (dataset.t && dataset.t->size() != n) throw std::runtime_error("save_csv: t length mismatch");

    for (Eigen::Index j = 0; j < m; ++j) {
        if (j) out << ',';
        if (dataset.feature_names && static_cast<Eigen::Index>(dataset.feature_names->size()) == m)
            out << quoted_if_needed((*dataset.feature_names)[static_cast<std::size_t>(j)]);
        else
            out << 'f' << j;
    }
    if (dataset.labels) out << (m ? "," : "") << "label";
    if (dataset.t) out << ",t";
    out << '\n';

    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            if (j) out << ',';
            out << format_double(dataset.points(i, j));
        }
        if (dataset.labels) out << (m ? "," : "") << (*dataset.labels)[static_cast<std::size_t>(i)];
        if (dataset.t) out << ',' << format_double((*dataset.t)(i));
        out << '\n';
    }
    if (!out) throw std::runtime_error("save_csv: write failed for " + path.string());
}

Dataset standardize(const Dataset& dataset) {
    const Eigen::Index n = dataset.n();
    if (n < 2) throw std::invalid_argument("standardize: need at least 2 points");

    Dataset out = dataset;
    const Eigen::RowVectorXd mean = dataset.points.colwise().mean();
    const Eigen::RowVectorXd var =
        (dataset.points.rowwise() - mean).array().square().colwise().sum() /
        static_cast<double>(n);
    for (Eigen::Index j = 0; j < dataset.dim(); ++j) {
        if (var(j) == 0.0) continue;  // constant feature passes through
        const double sd = std::sqrt(var(j));
        out.points.col(j) = (dataset.points.col(j).array() - mean(j)) / sd;
    }
    return out;
}

const std::vector<DatasetManifest>& builtin_manifests() {
    static const std::vector<DatasetManifest> manifests = {
        {"s-curve", 1500, 3, {}},
        {"swiss-roll", 1500, 3, {}},
        {"iris", 150, 4, {50, 50, 50}},
        {"breast", 106, 9, {22, 21, 14, 15, 16, 18}},
        {"seeds", 210, 7, {70, 70, 70}},
        {"glass", 214, 9, {70, 76, 17, 13, 9, 29}},
        {"wine", 178, 13, {59, 71, 48}},
        {"titanic", 2201, 3, {1490, 711}},
        {"yeast", 1484, 8, {5, 20, 30, 35, 44, 51, 163, 244, 429, 463}},
        {"wdbc", 569, 30, {212, 357}},
    };
    return manifests;
}

std::vector<DatasetManifest> load_manifests(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_manifests: cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("load_manifests: " + path.string() + ": " + e.what());
    }
    if (!doc.is_array()) throw std::runtime_error("load_manifests: expected a JSON array");

    std::vector<DatasetManifest> manifests;
    for (const auto& item : doc) {
        DatasetManifest m;
        m.name = item.at("name").get<std::string>();
        m.n = item.at("n").get<Eigen::Index>();
        m.dim = item.at("dim").get<Eigen::Index>();
        if (item.contains("class_distribution"))
            m.class_distribution = item["class_distribution"].get<std::vector<Eigen::Index>>();
        manifests.push_back(std::move(m));
    }
    return manifests;
}

const DatasetManifest* find_manifest(const std::vector<DatasetManifest>& manifests,
                                     const std::string& name) {
    const std::string key = lower(name);
    for (const auto& m : manifests)
        if (lower(m.name) == key) return &m;
    return nullptr;
}

void validate_against_manifest(const Dataset& dataset, const DatasetManifest& manifest) {
    if (dataset.n() != manifest.n)
        throw std::runtime_error("manifest \"" + manifest.name + "\": expected n=" +
                                 std::to_string(manifest.n) + ", got " +
                                 std::to_string(dataset.n()));
    if (dataset.dim() != manifest.dim)
        throw std::runtime_error("manifest \"" + manifest.name + "\": expected dim=" +
                                 std::to_string(manifest.dim) + ", got " +
                                 std::to_string(dataset.dim()));
    if (manifest.class_distribution.empty()) return;

    if (!dataset.labels)
        throw std::runtime_error("manifest \"" + manifest.name +
                                 "\": expected labels but the dataset has none");
    std::map<int, Eigen::Index> counts;
    for (int l : *dataset.labels) ++counts[l];
    std::vector<Eigen::Index> got;
    for (const auto& [label, count] : counts) got.push_back(count);
    std::vector<Eigen::Index> want = manifest.class_distribution;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    if (got != want) {
        const auto render = [](const std::vector<Eigen::Index>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i)
                s += (i ? "/" : "") + std::to_string(v[i]);
            return s;
        };
        throw std::runtime_error("manifest \"" + manifest.name +
                                 "\": class distribution mismatch: expected " + render(want) +
                                 ", got " + render(got));
    }
}

}  // namespace viewmetric
