// Command-line front end: dataset generation, clustering, classification,
// evaluation, spectral diagnostics, contour-grid export, and the benchmark
// harness. Exit codes: 0 success, 1 usage, 2 data/format error, 3 numerical
// failure.

#include "viewmetric/dataset.hpp"
#include "viewmetric/eval.hpp"
#include "viewmetric/kmeans.hpp"
#include "viewmetric/knn.hpp"
#include "viewmetric/metric.hpp"
#include "viewmetric/parallel.hpp"
#include "viewmetric/spectral.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
namespace vm = viewmetric;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void write_output(const std::string& out, const std::string& content) {
    if (out.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + out + " for writing");
    f << content;
    if (!f) throw std::runtime_error("write failed for " + out);
}

vm::MetricKind metric_from(const std::string& name) {
    const auto m = vm::parse_metric(name);
    if (!m) throw std::runtime_error("unknown metric: " + name);
    return *m;
}

/// "3" -> index 3, anything else -> header name.
vm::ColumnRef column_ref_from(const std::string& s) {
    if (!s.empty() && std::all_of(s.begin(), s.end(),
                                  [](unsigned char c) { return std::isdigit(c); }))
        return static_cast<Eigen::Index>(std::stoll(s));
    return s;
}

/// Flags shared by every subcommand that reads a dataset file.
struct InputOptions {
    std::string path;
    bool no_header = false;
    std::string label_column;
    std::string t_column;
    bool standardize = false;
};

void add_input_flags(CLI::App* cmd, InputOptions& in) {
    cmd->add_option("--input", in.path, "Input CSV file")->required();
    cmd->add_flag("--no-header", in.no_header, "Input file has no header row");
    cmd->add_option("--label-column", in.label_column,
                    "Label column (index or header name; default: header column named 'label')");
    cmd->add_option("--t-column", in.t_column,
                    "Manifold-parameter column (index or header name; default: header column "
                    "named 't')");
    cmd->add_flag("--standardize", in.standardize,
                  "Shift features to mean 0, population standard deviation 1");
}

vm::Dataset load_input(const InputOptions& in) {
    vm::CsvOptions opt;
    opt.has_header = !in.no_header;
    if (!in.label_column.empty()) opt.label_column = column_ref_from(in.label_column);
    if (!in.t_column.empty()) opt.t_column = column_ref_from(in.t_column);
    vm::Dataset d = vm::load_csv(in.path, opt);
    if (in.standardize) d = vm::standardize(d);
    return d;
}

json dataset_to_json(const vm::Dataset& d) {
    json j;
    j["name"] = d.name;
    j["n"] = static_cast<std::int64_t>(d.n());
    j["dim"] = static_cast<std::int64_t>(d.dim());
    if (d.feature_names) j["feature_names"] = *d.feature_names;
    json points = json::array();
    for (Eigen::Index i = 0; i < d.n(); ++i) {
        json row = json::array();
        for (Eigen::Index c = 0; c < d.dim(); ++c) row.push_back(d.points(i, c));
        points.push_back(std::move(row));
    }
    j["points"] = std::move(points);
    if (d.labels) j["labels"] = *d.labels;
    if (d.t) {
        json t = json::array();
        for (Eigen::Index i = 0; i < d.t->size(); ++i) t.push_back((*d.t)(i));
        j["t"] = std::move(t);
    }
    return j;
}

// ---------------------------------------------------------------- gen ----

struct GenOptions {
    std::string dataset;
    Eigen::Index n = 1500;
    double noise = 0.0;
    std::uint64_t seed = 0;
    bool standardize = false;
    std::string format = "csv";
    std::string out;
};

void run_gen(const GenOptions& g) {
    vm::Dataset d = g.dataset == "swiss-roll" ? vm::gen_swiss_roll(g.n, g.noise, g.seed)
                                              : vm::gen_s_curve(g.n, g.noise, g.seed);
    if (g.standardize) d = vm::standardize(d);
    if (g.format == "csv") {
        if (g.out.empty()) throw std::runtime_error("gen --format csv requires --out");
        vm::save_csv(d, g.out);
    } else {
        write_output(g.out, dataset_to_json(d).dump(2) + "\n");
    }
    std::cerr << "gen: " << d.name << ", n=" << d.n() << ", dim=" << d.dim();
    if (!g.out.empty()) std::cerr << " -> " << g.out;
    std::cerr << "\n";
}

// ------------------------------------------------------------- kmeans ----

struct KMeansOptions {
    InputOptions in;
    int k = 0;
    std::string metric = "euclidean";
    std::string init = "kmeanspp";
    std::uint64_t seed = 0;
    int restarts = 10;
    int max_iter = 300;
    double tol = 1e-6;
    std::string format = "csv";
    std::string out;
};

void run_kmeans(const KMeansOptions& o) {
    const vm::Dataset d = load_input(o.in);
    vm::KMeansConfig config;
    config.k = o.k;
    config.metric = metric_from(o.metric);
    config.init = o.init == "random" ? vm::KMeansInit::RandomPoints : vm::KMeansInit::KMeansPP;
    config.seed = o.seed;
    config.restarts = o.restarts;
    config.max_iter = o.max_iter;
    config.tol = o.tol;
    const vm::KMeansModel model = vm::kmeans_fit(d.points, config);

    if (o.format == "csv") {
        vm::Dataset out = d;
        out.labels = model.labels;  // predicted cluster ids
        out.label_names.clear();
        if (o.out.empty()) throw std::runtime_error("kmeans --format csv requires --out");
        vm::save_csv(out, o.out);
    } else {
        json j;
        j["input"] = d.name;
        j["config"] = {{"k", o.k},
                       {"metric", vm::to_string(config.metric)},
                       {"init", o.init},
                       {"seed", o.seed},
                       {"restarts", o.restarts},
                       {"max_iter", o.max_iter},
                       {"tol", o.tol},
                       {"standardize", o.in.standardize}};
        j["inertia"] = model.inertia;
        j["iterations"] = model.iterations;
        j["converged"] = model.converged;
        j["labels"] = model.labels;
        json cents = json::array();
        for (Eigen::Index i = 0; i < model.centroids.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index c = 0; c < model.centroids.cols(); ++c)
                row.push_back(model.centroids(i, c));
            cents.push_back(std::move(row));
        }
        j["centroids"] = std::move(cents);
        write_output(o.out, j.dump(2) + "\n");
    }
    std::cerr << "kmeans: k=" << o.k << ", metric=" << o.metric << ", inertia=" << model.inertia
              << ", iterations=" << model.iterations
              << (model.converged ? ", converged" : ", max_iter reached") << "\n";
}

// ---------------------------------------------------------------- knn ----

struct KnnOptions {
    InputOptions in;
    int k = 5;
    std::string metric = "euclidean";
    std::string protocol = "loo";
    int folds = 5;
    double fraction = 0.2;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string out;
};

void run_knn(const KnnOptions& o) {
    const vm::Dataset d = load_input(o.in);
    vm::KnnConfig config;
    config.k = o.k;
    config.metric = metric_from(o.metric);
    if (o.protocol == "kfold")
        config.protocol = vm::KnnProtocol::k_fold(o.folds, o.seed);
    else if (o.protocol == "holdout")
        config.protocol = vm::KnnProtocol::hold_out(o.fraction, o.seed);
    else
        config.protocol = vm::KnnProtocol::leave_one_out();

    const vm::KnnEvaluation result = vm::knn_evaluate(d, config);

    if (o.format == "csv") {
        std::ostringstream csv;
        csv << "fold,test_size,correct,accuracy\n";
        for (const auto& f : result.folds)
            csv << f.fold << ',' << f.test_size << ',' << f.correct << ',' << fmt6(f.accuracy)
                << '\n';
        csv << "-1," << result.total << ',' << result.correct << ',' << fmt6(result.accuracy)
            << '\n';
        write_output(o.out, csv.str());
    } else {
        json j;
        j["input"] = d.name;
        j["config"] = {{"k", o.k},
                       {"metric", o.metric},
                       {"protocol", o.protocol},
                       {"folds", o.folds},
                       {"fraction", o.fraction},
                       {"seed", o.seed},
                       {"standardize", o.in.standardize}};
        j["accuracy"] = result.accuracy;
        j["correct"] = static_cast<std::int64_t>(result.correct);
        j["total"] = static_cast<std::int64_t>(result.total);
        json folds = json::array();
        for (const auto& f : result.folds)
            folds.push_back({{"fold", f.fold},
                             {"test_size", static_cast<std::int64_t>(f.test_size)},
                             {"correct", static_cast<std::int64_t>(f.correct)},
                             {"accuracy", f.accuracy}});
        j["folds"] = std::move(folds);
        write_output(o.out, j.dump(2) + "\n");
    }
    std::cerr << "knn: k=" << o.k << ", metric=" << o.metric << ", protocol=" << o.protocol
              << ", accuracy=" << fmt6(result.accuracy) << "\n";
}

// --------------------------------------------------------------- eval ----

struct EvalOptions {
    std::string truth_path;
    std::string pred_path;
    std::string truth_column;
    std::string pred_column;
    bool no_header = false;
    std::string format = "json";
    std::string out;
};

std::vector<int> load_labels(const std::string& path, const std::string& column, bool no_header) {
    vm::CsvOptions opt;
    opt.has_header = !no_header;
    if (!column.empty()) opt.label_column = column_ref_from(column);
    const vm::Dataset d = vm::load_csv(path, opt);
    if (!d.labels)
        throw std::runtime_error(path +
                                 ": no label column found (name one with --truth-column / "
                                 "--pred-column, or add a 'label' header)");
    return *d.labels;
}

void run_eval(const EvalOptions& o) {
    const std::vector<int> truth = load_labels(o.truth_path, o.truth_column, o.no_header);
    const std::vector<int> pred = load_labels(o.pred_path, o.pred_column, o.no_header);

    const vm::ContingencyTable table = vm::contingency(truth, pred);
    const auto [homogeneity, completeness] = vm::homogeneity_completeness(table);
    const double ari = vm::adjusted_rand_index(table);
    const double v = vm::v_measure(table);
    const double ami = vm::adjusted_mutual_info(table);
    const double fmi = vm::fowlkes_mallows(table);
    const double bma = vm::best_map_accuracy(truth, pred);

    if (o.format == "csv") {
        std::ostringstream csv;
        csv << "ari,homogeneity,completeness,v_measure,ami,fmi,best_map_accuracy\n"
            << fmt6(ari) << ',' << fmt6(homogeneity) << ',' << fmt6(completeness) << ','
            << fmt6(v) << ',' << fmt6(ami) << ',' << fmt6(fmi) << ',' << fmt6(bma) << '\n';
        write_output(o.out, csv.str());
    } else {
        // Hand-rendered so every value carries exactly 6 decimal places.
        std::ostringstream js;
        js << "{\n"
           << "  \"ari\": " << fmt6(ari) << ",\n"
           << "  \"homogeneity\": " << fmt6(homogeneity) << ",\n"
           << "  \"completeness\": " << fmt6(completeness) << ",\n"
           << "  \"v_measure\": " << fmt6(v) << ",\n"
           << "  \"ami\": " << fmt6(ami) << ",\n"
           << "  \"fmi\": " << fmt6(fmi) << ",\n"
           << "  \"best_map_accuracy\": " << fmt6(bma) << "\n"
           << "}\n";
        write_output(o.out, js.str());
    }
}

// ------------------------------------------------------------ distmat ----

struct DistmatOptions {
    InputOptions in;
    std::string metric = "euclidean";
    bool force = false;
    std::string format = "json";
    std::string out;
};

json side_to_json(const Eigen::VectorXd& eigenvalues, int positive_count, double rho,
                  double trace, bool nsd_pass) {
    json j;
    json evs = json::array();
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) evs.push_back(eigenvalues(i));
    j["eigenvalues"] = std::move(evs);
    j["positive_count"] = positive_count;
    j["rho"] = rho;
    j["trace"] = trace;
    j["conditional_nsd_pass"] = nsd_pass;
    return j;
}

void run_distmat(const DistmatOptions& o) {
    const vm::Dataset d = load_input(o.in);
    // Dense eigendecomposition is cubic; refuse surprisingly large inputs.
    if (d.n() > 2000 && !o.force)
        throw CLI::ValidationError("distmat", "n=" + std::to_string(d.n()) +
                                                  " exceeds 2000; pass --force to proceed");

    if (o.format == "csv") {
        const vm::DistanceMatrix dm = vm::pairwise_distances(d.points, metric_from(o.metric));
        std::ostringstream csv;
        for (Eigen::Index j = 0; j < dm.n(); ++j) csv << (j ? "," : "") << 'd' << j;
        csv << '\n';
        for (Eigen::Index i = 0; i < dm.n(); ++i) {
            for (Eigen::Index j = 0; j < dm.n(); ++j)
                csv << (j ? "," : "") << fmt17(dm.entries(i, j));
            csv << '\n';
        }
        write_output(o.out, csv.str());
        return;
    }

    const vm::SpectralReport report = vm::spectral_report(d.points);
    json j;
    j["input"] = d.name;
    j["n"] = static_cast<std::int64_t>(d.n());
    j["dim"] = static_cast<std::int64_t>(d.dim());
    j["view"] = side_to_json(report.eigenvalues_view, report.positive_count_view, report.rho_view,
                             report.trace_view, report.conditional_nsd_pass_view);
    j["euclidean"] =
        side_to_json(report.eigenvalues_euclid, report.positive_count_euclid, report.rho_euclid,
                     report.trace_euclid, report.conditional_nsd_pass_euclid);
    j["rho_view_over_euclidean"] =
        report.rho_euclid > 0.0 ? report.rho_view / report.rho_euclid : 0.0;
    write_output(o.out, j.dump(2) + "\n");
}

// ------------------------------------------------------------ contour ----

struct ContourOptions {
    int dim = 2;
    std::vector<int> axes{0, 1};
    std::vector<std::string> fixed;
    std::vector<double> range{-4.0, 4.0};
    int steps = 51;
    std::string metric = "view";
    std::string format = "csv";
    std::string out;
};

void run_contour(const ContourOptions& o) {
    std::map<int, double> fixed;
    for (const std::string& spec : o.fixed) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("--fixed expects INDEX=VALUE, got \"" + spec + "\"");
        int idx = 0;
        double value = 0.0;
        try {
            idx = std::stoi(spec.substr(0, eq));
            value = std::stod(spec.substr(eq + 1));
        } catch (const std::exception&) {
            throw std::runtime_error("--fixed expects INDEX=VALUE, got \"" + spec + "\"");
        }
        if (!fixed.emplace(idx, value).second)
            throw std::runtime_error("--fixed repeats coordinate " + std::to_string(idx));
    }

    const vm::ContourGrid grid =
        vm::contour_grid(o.dim, fixed, {o.axes[0], o.axes[1]}, {o.range[0], o.range[1]}, o.steps,
                         metric_from(o.metric));

    if (o.format == "csv") {
        std::ostringstream csv;
        csv << "x,y,value\n";
        for (Eigen::Index i = 0; i < grid.xs.size(); ++i)
            for (Eigen::Index j = 0; j < grid.ys.size(); ++j)
                csv << fmt17(grid.xs(i)) << ',' << fmt17(grid.ys(j)) << ','
                    << fmt17(grid.values(i, j)) << '\n';
        write_output(o.out, csv.str());
    } else {
        json j;
        j["dim"] = o.dim;
        j["metric"] = o.metric;
        j["axis_x"] = grid.axis_x;
        j["axis_y"] = grid.axis_y;
        json jf;
        for (const auto& [idx, value] : fixed) jf[std::to_string(idx)] = value;
        j["fixed"] = std::move(jf);
        json xs = json::array(), ys = json::array(), values = json::array();
        for (Eigen::Index i = 0; i < grid.xs.size(); ++i) xs.push_back(grid.xs(i));
        for (Eigen::Index i = 0; i < grid.ys.size(); ++i) ys.push_back(grid.ys(i));
        for (Eigen::Index i = 0; i < grid.values.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index c = 0; c < grid.values.cols(); ++c) row.push_back(grid.values(i, c));
            values.push_back(std::move(row));
        }
        j["xs"] = std::move(xs);
        j["ys"] = std::move(ys);
        j["values"] = std::move(values);
        write_output(o.out, j.dump(2) + "\n");
    }
}

// -------------------------------------------------------------- bench ----

struct BenchOptions {
    std::string suite = "table2";
    std::string data_dir = "datasets";
    std::string manifests_path;
    bool no_validate = false;
    std::uint64_t seed = 1;
    std::string format = "json";
    std::string out;
};

struct Table2Ref {
    // Negative = not published for this dataset.
    double kmeans = -1, view_kmeans = -1, knn = -1, view_knn = -1;
};

struct Table3Ref {
    double ari, homo, ami, v_measure, fmi;
};

const std::vector<std::string>& bench_dataset_names() {
    static const std::vector<std::string> names = {"iris", "breast", "seeds", "glass",
                                                   "wine", "titanic", "yeast", "wdbc"};
    return names;
}

// Published accuracy table (fractions of the printed percentages).
const std::map<std::string, Table2Ref>& table2_refs() {
    static const std::map<std::string, Table2Ref> refs = {
        {"iris", {0.9667, 0.9667, 0.98, 0.98}},
        {"breast", {0.5283, 0.5283, 0.8113, 0.8585}},
        {"seeds", {0.9095, 0.9190, 0.8857, 0.9381}},
        {"glass", {0.5421, 0.5514, 0.7897, 0.8318}},
        {"wine", {0.7022, 0.7079, 0.9775, 0.9775}},
        {"titanic", {0.7833, 0.7833, 0.5720, 0.7792}},
        {"yeast", {-1, -1, 0.6853, 0.6873}},
        {"wdbc", {0.8875, 0.9016, 0.942, 0.9508}},
    };
    return refs;
}

// Published clustering-index table: {plain K-Means, view-K-Means} pairs.
const std::map<std::string, std::pair<Table3Ref, Table3Ref>>& table3_refs() {
    static const std::map<std::string, std::pair<Table3Ref, Table3Ref>> refs = {
        {"iris", {{0.9039, 0.8983, 0.7315, 0.7337, 0.7715},
                  {0.9039, 0.8983, 0.8984, 0.8997, 0.9356}}},
        {"breast", {{0.3454, 0.5345, 0.5789, 0.6084, 0.5298},
                    {0.3894, 0.5596, 0.5936, 0.6259, 0.5436}}},
        {"seeds", {{0.6898, 0.5962, 0.6410, 0.6492, 0.7877},
                   {0.7109, 0.6188, 0.6664, 0.6740, 0.8024}}},
        {"glass", {{0.2993, 0.4043, 0.4642, 0.4860, 0.5733},
                   {0.3114, 0.4094, 0.4673, 0.4892, 0.5755}}},
        {"wine", {{0.3470, 0.3762, 0.3756, 0.3823, 0.5750},
                  {0.3563, 0.3961, 0.3995, 0.4060, 0.5852}}},
        {"titanic", {{0.2932, 0.1715, 0.0774, 0.0777, 0.5997},
                     {0.2932, 0.1715, 0.0774, 0.0777, 0.5997}}},
        {"yeast", {{0.1360, 0.2679, 0.2089, 0.2164, 0.3703},
                   {0.1738, 0.2865, 0.2475, 0.2566, 0.3746}}},
        {"wdbc", {{0.5951, 0.4875, 0.5126, 0.5132, 0.8238},
                  {0.6413, 0.5202, 0.5337, 0.5344, 0.8390}}},
    };
    return refs;
}

struct IndexSet {
    double ari, homo, ami, v_measure, fmi, accuracy;
};

IndexSet indices_for(const std::vector<int>& truth, const std::vector<int>& pred) {
    const vm::ContingencyTable table = vm::contingency(truth, pred);
    IndexSet s{};
    s.ari = vm::adjusted_rand_index(table);
    s.homo = vm::homogeneity_completeness(table).first;
    s.ami = vm::adjusted_mutual_info(table);
    s.v_measure = vm::v_measure(table);
    s.fmi = vm::fowlkes_mallows(table);
    s.accuracy = vm::best_map_accuracy(truth, pred);
    return s;
}

void run_bench(const BenchOptions& o) {
    std::vector<vm::DatasetManifest> manifests;
    if (!o.manifests_path.empty()) {
        manifests = vm::load_manifests(o.manifests_path);
    } else if (std::filesystem::exists(std::filesystem::path(o.data_dir) / "manifests.json")) {
        manifests = vm::load_manifests(std::filesystem::path(o.data_dir) / "manifests.json");
    } else {
        manifests = vm::builtin_manifests();
    }

    const bool table2 = o.suite == "table2";
    const std::array<vm::MetricKind, 2> metrics{vm::MetricKind::Euclidean, vm::MetricKind::View};
    const std::array<const char*, 2> preps{"raw", "standardized"};
    const std::vector<int> knn_ks = {1, 3, 5, 7};

    json rows = json::array();
    std::ostringstream csv;
    if (table2) {
        for (vm::MetricKind metric : metrics)
            for (const char* prep : preps)
                csv << "kmeans_" << vm::to_string(metric) << '_' << prep << ',';
        for (vm::MetricKind metric : metrics)
            for (const char* prep : preps)
                for (int k : knn_ks)
                    csv << "knn_" << vm::to_string(metric) << '_' << prep << "_k" << k << ',';
        csv << "paper_kmeans,paper_view_kmeans,paper_knn,paper_view_knn,label\n";
    } else {
        for (vm::MetricKind metric : metrics)
            for (const char* prep : preps)
                csv << "ari_" << vm::to_string(metric) << '_' << prep << ","
                    << "homo_" << vm::to_string(metric) << '_' << prep << ","
                    << "ami_" << vm::to_string(metric) << '_' << prep << ","
                    << "v_measure_" << vm::to_string(metric) << '_' << prep << ","
                    << "fmi_" << vm::to_string(metric) << '_' << prep << ',';
        csv << "paper_ari_kmeans,paper_homo_kmeans,paper_ami_kmeans,paper_v_measure_kmeans,"
               "paper_fmi_kmeans,paper_ari_view,paper_homo_view,paper_ami_view,"
               "paper_v_measure_view,paper_fmi_view,label\n";
    }

    for (const std::string& name : bench_dataset_names()) {
        const std::filesystem::path file = std::filesystem::path(o.data_dir) / (name + ".csv");
        json row;
        row["dataset"] = name;
        if (!std::filesystem::exists(file)) {
            row["status"] = "skipped";
            row["reason"] = file.string() + " not found";
            rows.push_back(std::move(row));
            std::cerr << "bench: " << name << ": skipped (" << file.string() << " not found)\n";
            continue;
        }

        try {
            vm::Dataset raw = vm::load_csv(file);
            const vm::DatasetManifest* manifest = vm::find_manifest(manifests, name);
            if (manifest && !o.no_validate) vm::validate_against_manifest(raw, *manifest);
            if (!raw.labels) throw std::runtime_error("dataset has no label column");
            const std::vector<int>& truth = *raw.labels;
            const int k_classes =
                manifest && !manifest->class_distribution.empty()
                    ? static_cast<int>(manifest->class_distribution.size())
                    : static_cast<int>(raw.label_names.size());
            const vm::Dataset std_d = vm::standardize(raw);

            row["status"] = "ok";
            row["protocol"] = {
                {"kmeans", "k-means++ init, 10 restarts, k=" + std::to_string(k_classes) +
                               ", seed=" + std::to_string(o.seed) + ", max_iter=300, tol=1e-06"},
                {"knn", "leave-one-out, k in {1,3,5,7}"},
                {"preprocessing", {"raw", "standardized"}}};

            json measured;
            std::vector<double> csv_cells;
            // K-Means index/accuracy block, both metrics, raw and standardized.
            std::map<std::string, IndexSet> km;
            for (vm::MetricKind metric : metrics) {
                for (const char* prep : preps) {
                    const vm::Dataset& d = std::string(prep) == "raw" ? raw : std_d;
                    vm::KMeansConfig config;
                    config.k = k_classes;
                    config.metric = metric;
                    config.seed = o.seed;
                    const vm::KMeansModel model = vm::kmeans_fit(d.points, config);
                    km[std::string(vm::to_string(metric)) + "_" + prep] =
                        indices_for(truth, model.labels);
                }
            }

            if (table2) {
                for (vm::MetricKind metric : metrics)
                    for (const char* prep : preps) {
                        const IndexSet& s = km.at(std::string(vm::to_string(metric)) + "_" + prep);
                        measured["kmeans"][vm::to_string(metric)][prep] = s.accuracy;
                        csv_cells.push_back(s.accuracy);
                    }
                for (vm::MetricKind metric : metrics)
                    for (const char* prep : preps) {
                        const vm::Dataset& d = std::string(prep) == "raw" ? raw : std_d;
                        for (int k : knn_ks) {
                            vm::KnnConfig config;
                            config.k = k;
                            config.metric = metric;
                            config.protocol = vm::KnnProtocol::leave_one_out();
                            const double acc = vm::knn_evaluate(d, config).accuracy;
                            measured["knn"][vm::to_string(metric)][prep]["k" + std::to_string(k)] =
                                acc;
                            csv_cells.push_back(acc);
                        }
                    }

                const Table2Ref& ref = table2_refs().at(name);
                json paper;
                if (ref.kmeans >= 0) paper["kmeans"] = ref.kmeans;
                if (ref.view_kmeans >= 0) paper["view_kmeans"] = ref.view_kmeans;
                if (ref.knn >= 0) paper["knn"] = ref.knn;
                if (ref.view_knn >= 0) paper["view_knn"] = ref.view_knn;
                row["paper_reference"] = std::move(paper);
                csv_cells.push_back(ref.kmeans >= 0 ? ref.kmeans : -9);
                csv_cells.push_back(ref.view_kmeans >= 0 ? ref.view_kmeans : -9);
                csv_cells.push_back(ref.knn >= 0 ? ref.knn : -9);
                csv_cells.push_back(ref.view_knn >= 0 ? ref.view_knn : -9);

                // Best measured per paper column, for the delta report.
                const auto best_km = [&](vm::MetricKind metric) {
                    double best = -1;
                    for (const char* prep : preps)
                        best = std::max(
                            best,
                            km.at(std::string(vm::to_string(metric)) + "_" + prep).accuracy);
                    return best;
                };
                const auto best_knn = [&](vm::MetricKind metric) {
                    double best = -1;
                    for (const char* prep : preps)
                        for (int k : knn_ks)
                            best = std::max(best, measured["knn"][vm::to_string(metric)][prep]
                                                          ["k" + std::to_string(k)]
                                                              .get<double>());
                    return best;
                };
                json delta;
                std::ostringstream note;
                note << "bench: " << name << ":";
                const auto add_delta = [&](const char* key, double paper_v, double measured_v) {
                    if (paper_v < 0) {
                        note << ' ' << key << " best=" << fmt6(measured_v) << " (no paper value);";
                        return;
                    }
                    delta[key] = measured_v - paper_v;
                    note << ' ' << key << " best=" << fmt6(measured_v) << " paper="
                         << fmt6(paper_v) << " delta=" << fmt6(measured_v - paper_v) << ";";
                };
                add_delta("kmeans", ref.kmeans, best_km(vm::MetricKind::Euclidean));
                add_delta("view_kmeans", ref.view_kmeans, best_km(vm::MetricKind::View));
                add_delta("knn", ref.knn, best_knn(vm::MetricKind::Euclidean));
                add_delta("view_knn", ref.view_knn, best_knn(vm::MetricKind::View));
                row["delta_vs_paper"] = std::move(delta);
                std::cerr << note.str() << "\n";
            } else {
                for (vm::MetricKind metric : metrics)
                    for (const char* prep : preps) {
                        const IndexSet& s = km.at(std::string(vm::to_string(metric)) + "_" + prep);
                        json block;
                        block["ari"] = s.ari;
                        block["homo"] = s.homo;
                        block["ami"] = s.ami;
                        block["v_measure"] = s.v_measure;
                        block["fmi"] = s.fmi;
                        measured["kmeans"][vm::to_string(metric)][prep] = std::move(block);
                        csv_cells.insert(csv_cells.end(),
                                         {s.ari, s.homo, s.ami, s.v_measure, s.fmi});
                    }
                const auto& [ref_km, ref_view] = table3_refs().at(name);
                row["paper_reference"] = {
                    {"kmeans",
                     {{"ari", ref_km.ari},
                      {"homo", ref_km.homo},
                      {"ami", ref_km.ami},
                      {"v_measure", ref_km.v_measure},
                      {"fmi", ref_km.fmi}}},
                    {"view_kmeans",
                     {{"ari", ref_view.ari},
                      {"homo", ref_view.homo},
                      {"ami", ref_view.ami},
                      {"v_measure", ref_view.v_measure},
                      {"fmi", ref_view.fmi}}}};
                csv_cells.insert(csv_cells.end(), {ref_km.ari, ref_km.homo, ref_km.ami,
                                                   ref_km.v_measure, ref_km.fmi, ref_view.ari,
                                                   ref_view.homo, ref_view.ami,
                                                   ref_view.v_measure, ref_view.fmi});

                std::ostringstream note;
                note << "bench: " << name << ": raw kmeans ari=" << fmt6(km.at("euclidean_raw").ari)
                     << " (paper " << fmt6(ref_km.ari) << "), view ari="
                     << fmt6(km.at("view_raw").ari) << " (paper " << fmt6(ref_view.ari) << ")";
                std::cerr << note.str() << "\n";
            }
            row["measured"] = std::move(measured);

            for (double cell : csv_cells) csv << fmt6(cell) << ',';
            csv << name << '\n';
        } catch (const std::exception& e) {
            row["status"] = "error";
            row["reason"] = e.what();
            std::cerr << "bench: " << name << ": error: " << e.what() << "\n";
        }
        rows.push_back(std::move(row));
    }

    if (o.format == "csv") {
        write_output(o.out, csv.str());
    } else {
        json report;
        report["suite"] = o.suite;
        report["data_dir"] = o.data_dir;
        report["seed"] = o.seed;
        report["datasets"] = std::move(rows);
        write_output(o.out, report.dump(2) + "\n");
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("VIEWMETRIC_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1)
            vm::set_thread_cap(cap);
        else
            std::cerr << "ignoring invalid VIEWMETRIC_THREADS value \"" << env << "\"\n";
    }

    CLI::App app{"view-distance metric toolkit"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* cgen = app.add_subcommand("gen", "Generate a synthetic manifold dataset");
    cgen->add_option("--dataset", gen.dataset, "Which generator to use")
        ->required()
        ->check(CLI::IsMember({"s-curve", "swiss-roll"}));
    cgen->add_option("--n", gen.n, "Number of points")->check(CLI::NonNegativeNumber);
    cgen->add_option("--noise", gen.noise, "Gaussian noise scale")->check(CLI::NonNegativeNumber);
    cgen->add_option("--seed", gen.seed, "Generator seed");
    cgen->add_flag("--standardize", gen.standardize, "Standardize features before writing");
    cgen->add_option("--format", gen.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cgen->add_option("--out", gen.out, "Output file (stdout for json if omitted)");
    cgen->callback([&] { run_gen(gen); });

    KMeansOptions km;
    auto* ckm = app.add_subcommand("kmeans", "Cluster a dataset with K-Means");
    add_input_flags(ckm, km.in);
    ckm->add_option("--k", km.k, "Number of clusters")->required()->check(CLI::PositiveNumber);
    ckm->add_option("--metric", km.metric, "Distance metric")
        ->check(CLI::IsMember({"euclidean", "view"}));
    ckm->add_option("--init", km.init, "Initialization scheme")
        ->check(CLI::IsMember({"kmeanspp", "random"}));
    ckm->add_option("--seed", km.seed, "Base seed; restarts use seed, seed+1, ...");
    ckm->add_option("--restarts", km.restarts, "Independent restarts")
        ->check(CLI::PositiveNumber);
    ckm->add_option("--max-iter", km.max_iter, "Iteration cap per restart")
        ->check(CLI::PositiveNumber);
    ckm->add_option("--tol", km.tol, "Centroid-shift stop threshold")
        ->check(CLI::NonNegativeNumber);
    ckm->add_option("--format", km.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    ckm->add_option("--out", km.out, "Output file");
    ckm->callback([&] { run_kmeans(km); });

    KnnOptions knn;
    auto* cknn = app.add_subcommand("knn", "Evaluate a KNN classifier");
    add_input_flags(cknn, knn.in);
    cknn->add_option("--k", knn.k, "Neighbor count")->check(CLI::PositiveNumber);
    cknn->add_option("--metric", knn.metric, "Distance metric")
        ->check(CLI::IsMember({"euclidean", "view"}));
    cknn->add_option("--protocol", knn.protocol, "Evaluation protocol")
        ->check(CLI::IsMember({"loo", "kfold", "holdout"}));
    cknn->add_option("--folds", knn.folds, "Fold count for kfold")->check(CLI::PositiveNumber);
    cknn->add_option("--fraction", knn.fraction, "Test fraction for holdout");
    cknn->add_option("--seed", knn.seed, "Split seed for kfold/holdout");
    cknn->add_option("--format", knn.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cknn->add_option("--out", knn.out, "Output file (stdout if omitted)");
    cknn->callback([&] { run_knn(knn); });

    EvalOptions ev;
    auto* cev = app.add_subcommand("eval", "Compare two labelings with clustering indices");
    cev->add_option("--truth", ev.truth_path, "CSV holding the reference labels")->required();
    cev->add_option("--pred", ev.pred_path, "CSV holding the predicted labels")->required();
    cev->add_option("--truth-column", ev.truth_column,
                    "Label column in --truth (index or name; default 'label')");
    cev->add_option("--pred-column", ev.pred_column,
                    "Label column in --pred (index or name; default 'label')");
    cev->add_flag("--no-header", ev.no_header, "Input files have no header row");
    cev->add_option("--format", ev.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cev->add_option("--out", ev.out, "Output file (stdout if omitted)");
    cev->callback([&] { run_eval(ev); });

    DistmatOptions dm;
    auto* cdm = app.add_subcommand("distmat", "Pairwise distances and spectral diagnostics");
    add_input_flags(cdm, dm.in);
    cdm->add_option("--metric", dm.metric, "Metric for the csv matrix output")
        ->check(CLI::IsMember({"euclidean", "view"}));
    cdm->add_flag("--force", dm.force, "Allow n > 2000 (dense eigendecomposition is cubic)");
    cdm->add_option("--format", dm.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cdm->add_option("--out", dm.out, "Output file (stdout if omitted)");
    cdm->callback([&] { run_distmat(dm); });

    ContourOptions co;
    auto* cco = app.add_subcommand("contour", "Sample a distance-to-origin grid");
    cco->add_option("--dim", co.dim, "Point dimension")->check(CLI::Range(2, 1000));
    cco->add_option("--axes", co.axes, "Two swept coordinate indices, e.g. 0,1")
        ->delimiter(',')
        ->expected(2);
    cco->add_option("--fixed", co.fixed, "Pinned coordinates as INDEX=VALUE")
        ->delimiter(',');
    cco->add_option("--range", co.range, "Axis range lo,hi")->delimiter(',')->expected(2);
    cco->add_option("--steps", co.steps, "Samples per axis")->check(CLI::Range(2, 100000));
    cco->add_option("--metric", co.metric, "Distance metric")
        ->check(CLI::IsMember({"euclidean", "view"}));
    cco->add_option("--format", co.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cco->add_option("--out", co.out, "Output file (stdout if omitted)");
    cco->callback([&] { run_contour(co); });

    BenchOptions be;
    auto* cbe = app.add_subcommand("bench", "Benchmark harness for the published tables");
    cbe->add_option("--suite", be.suite, "Which table to reproduce")
        ->check(CLI::IsMember({"table2", "table3"}));
    cbe->add_option("--data-dir", be.data_dir, "Directory holding <name>.csv datasets");
    cbe->add_option("--manifests", be.manifests_path,
                    "Manifest JSON (default: <data-dir>/manifests.json, else built-in)");
    cbe->add_flag("--no-validate", be.no_validate, "Skip manifest validation");
    cbe->add_option("--seed", be.seed, "K-Means base seed");
    cbe->add_option("--format", be.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cbe->add_option("--out", be.out, "Output file (stdout if omitted)");
    cbe->callback([&] { run_bench(be); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const vm::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
