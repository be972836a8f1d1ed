#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyclust/clustering.hpp"
#include "polyclust/errors.hpp"
#include "polyclust/features.hpp"
#include "polyclust/io.hpp"
#include "polyclust/metrics.hpp"
#include "polyclust/simulate.hpp"
#include "polyclust/validation.hpp"
#include "polyclust/version.hpp"

namespace polyclust {

using json = nlohmann::json;

struct RunConfig {
    std::string input_dir;     // directory of per-stock CSVs
    std::string features_csv;  // pre-extracted features, skips ingestion
    int scenario = 0;          // > 0: simulate this scenario as the input
    std::vector<int> group_sizes;
    int series_length = 100;
    int window_days = 1000;
    int k = 5;
    std::string algorithm = "kmeans";
    std::uint64_t seed = 1;
    int k_min = 2;
    int k_max = 10;
    int gap_B = 100;
    int hopkins_reps = 100;
    int n_init = 25;
    std::vector<WeightFunction> weights = default_weights();
    std::string output_dir = ".";
};

inline json weights_to_json(const std::vector<WeightFunction>& weights) {
    json arr = json::array();
    for (const auto& w : weights) {
        json jw;
        jw["order"] = w.order;
        jw["kind"] = to_string(w.kind);
        jw["params"] = w.params;
        jw["label"] = w.label;
        arr.push_back(jw);
    }
    return arr;
}

inline std::vector<WeightFunction> weights_from_json(const json& arr) {
    std::vector<WeightFunction> out;
    for (const auto& jw : arr) {
        WeightFunction w;
        w.order = jw.at("order").get<int>();
        w.kind = weight_kind_from_string(jw.at("kind").get<std::string>());
        w.params = jw.at("params").get<std::vector<double>>();
        w.label = jw.value("label", std::string());
        validate_weight(w);
        out.push_back(std::move(w));
    }
    return out;
}

inline json config_to_json(const RunConfig& c) {
    json j;
    j["input_dir"] = c.input_dir;
    j["features_csv"] = c.features_csv;
    j["scenario"] = c.scenario;
    j["group_sizes"] = c.group_sizes;
    j["series_length"] = c.series_length;
    j["window_days"] = c.window_days;
    j["k"] = c.k;
    j["algorithm"] = c.algorithm;
    j["seed"] = c.seed;
    j["k_min"] = c.k_min;
    j["k_max"] = c.k_max;
    j["gap_B"] = c.gap_B;
    j["hopkins_reps"] = c.hopkins_reps;
    j["n_init"] = c.n_init;
    j["weights"] = weights_to_json(c.weights);
    j["output_dir"] = c.output_dir;
    return j;
}

inline RunConfig config_from_json(const json& j) {
    RunConfig c;
    c.input_dir = j.value("input_dir", std::string());
    c.features_csv = j.value("features_csv", std::string());
    c.scenario = j.value("scenario", 0);
    c.group_sizes = j.value("group_sizes", std::vector<int>{});
    c.series_length = j.value("series_length", 100);
    c.window_days = j.value("window_days", 1000);
    c.k = j.value("k", 5);
    c.algorithm = j.value("algorithm", std::string("kmeans"));
    c.seed = j.value("seed", std::uint64_t{1});
    c.k_min = j.value("k_min", 2);
    c.k_max = j.value("k_max", 10);
    c.gap_B = j.value("gap_B", 100);
    c.hopkins_reps = j.value("hopkins_reps", 100);
    c.n_init = j.value("n_init", 25);
    if (j.contains("weights")) c.weights = weights_from_json(j.at("weights"));
    c.output_dir = j.value("output_dir", std::string("."));
    return c;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError("cannot write '" + path.string() + "'");
    out << content;
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

inline json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError("bad JSON in '" + path.string() + "': " + e.what());
    }
    return j;
}

inline json clustering_to_json(const ClusteringResult& r,
                               const std::vector<std::string>& row_labels) {
    json j;
    j["algorithm"] = r.algorithm;
    j["k"] = r.k;
    j["seed"] = r.seed;
    j["objective"] = r.objective;
    j["iterations"] = r.iterations;
    json assignments = json::array();
    for (std::size_t i = 0; i < r.assignments.size(); ++i) {
        json a;
        a["label"] = i < row_labels.size() ? row_labels[i] : std::to_string(i);
        a["cluster"] = r.assignments[i];
        assignments.push_back(a);
    }
    j["assignments"] = assignments;
    if (!r.centroids.empty()) {
        j["centers"] = r.centroids;
    } else {
        json med = json::array();
        for (std::size_t mi : r.medoids) {
            json e;
            e["row"] = mi;
            e["label"] = mi < row_labels.size() ? row_labels[mi] : std::to_string(mi);
            med.push_back(e);
        }
        j["centers"] = med;
    }
    return j;
}

inline json hopkins_to_json(const HopkinsResult& h, std::uint64_t seed) {
    json j;
    j["statistic"] = h.statistic;
    j["p_value"] = h.p_value;
    j["m_samples"] = h.m_samples;
    j["reps"] = h.reps;
    j["seed"] = seed;
    return j;
}

inline json validation_to_json(const ValidationReport& rep) {
    json j;
    j["hopkins"]["statistic"] = rep.hopkins.statistic;
    j["hopkins"]["p_value"] = rep.hopkins.p_value;
    json per_k = json::array();
    for (std::size_t i = 0; i < rep.ks.size(); ++i) {
        const PerKStats& s = rep.per_k[i];
        json row;
        row["k"] = rep.ks[i];
        row["wss"] = s.wss;
        row["silhouette"] = s.silhouette_avg;
        row["gap"] = s.gap;
        row["gap_se"] = s.gap_se;
        row["dunn"] = s.dunn;
        row["davies_bouldin"] = s.davies_bouldin;
        row["calinski_harabasz"] = s.calinski_harabasz;
        per_k.push_back(row);
    }
    j["per_k"] = per_k;
    if (rep.elbow_k > 0) {
        j["recommended_k"]["elbow"] = rep.elbow_k;
    } else {
        j["recommended_k"]["elbow"] = nullptr;
    }
    j["recommended_k"]["silhouette"] = rep.silhouette_k;
    j["recommended_k"]["gap_rule"] = rep.gap_k;
    j["recommended_k"]["dunn"] = rep.dunn_k;
    j["seed"] = rep.seed;
    j["B"] = rep.B;
    j["k_min"] = rep.k_min;
    j["k_max"] = rep.k_max;
    return j;
}

inline void write_validation_csv(const std::filesystem::path& path, const ValidationReport& rep) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError("cannot write '" + path.string() + "'");
    out << "k,wss,silhouette,gap,gap_se,dunn,db,ch\n";
    for (std::size_t i = 0; i < rep.ks.size(); ++i) {
        const PerKStats& s = rep.per_k[i];
        out << rep.ks[i] << ',' << fmt_double(s.wss) << ',' << fmt_double(s.silhouette_avg) << ','
            << fmt_double(s.gap) << ',' << fmt_double(s.gap_se) << ',' << fmt_double(s.dunn) << ','
            << fmt_double(s.davies_bouldin) << ',' << fmt_double(s.calinski_harabasz) << '\n';
    }
}

inline void write_feature_importance_csv(const std::filesystem::path& path,
                                         const FeatureImportance& fi) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError("cannot write '" + path.string() + "'");
    out << "feature,score,degenerate\n";
    for (std::size_t j = 0; j < fi.names.size(); ++j) {
        out << fi.names[j] << ',' << fmt_double(fi.scores[j]) << ','
            << (fi.degenerate[j] ? 1 : 0) << '\n';
    }
}

/// Runs ingestion/simulation, feature extraction, the validation battery,
/// the configured clustering, and writes every artifact plus a manifest that
/// can re-execute the run exactly.
inline void run_pipeline(const RunConfig& config, std::ostream& log = std::cerr) {
    namespace fs = std::filesystem;
    if (config.k < config.k_min || config.k > config.k_max) {
        throw InvalidK("k=" + std::to_string(config.k) + " outside validation range [" +
                       std::to_string(config.k_min) + ", " + std::to_string(config.k_max) + "]");
    }
    if (config.algorithm != "kmeans" && config.algorithm != "pam" && config.algorithm != "clara") {
        throw InvalidK("unknown algorithm '" + config.algorithm + "'");
    }
    fs::create_directories(config.output_dir);
    const fs::path out_dir(config.output_dir);

    FeatureMatrix features;
    if (!config.features_csv.empty()) {
        features = read_feature_csv(config.features_csv);
    } else {
        std::vector<TimeSeries> series;
        if (config.scenario > 0) {
            ScenarioSpec spec;
            spec.scenario = config.scenario;
            spec.group_sizes = config.group_sizes;
            spec.length = config.series_length;
            spec.seed = config.seed;
            series = series_of(gen_scenario(spec));
        } else if (!config.input_dir.empty()) {
            auto by_symbol = ingest(config.input_dir, config.window_days, log);
            for (auto& [symbol, s] : by_symbol) series.push_back(std::move(s));
        } else {
            throw SchemaError("config needs one of input_dir, features_csv, or scenario");
        }
        features = build_feature_matrix(series, config.weights);
    }
    write_feature_csv((out_dir / "features.csv").string(), features);

    const FeatureMatrix standardized = standardize(features);
    write_feature_csv((out_dir / "features_standardized.csv").string(), standardized);

    const ValidationReport report =
        validate_clustering(standardized, config.k_min, config.k_max, config.gap_B, config.seed,
                            config.hopkins_reps, config.n_init);
    write_json_file(out_dir / "hopkins.json",
                    hopkins_to_json(report.hopkins, derive_seed(config.seed, 404, 0)));
    write_json_file(out_dir / "validation.json", validation_to_json(report));
    write_validation_csv(out_dir / "validation.csv", report);

    ClusteringResult result;
    if (config.algorithm == "kmeans") {
        result = kmeans(standardized, config.k, config.seed, config.n_init);
    } else if (config.algorithm == "pam") {
        result = pam(DistanceMatrix::from_features(standardized), config.k, config.seed);
    } else {
        result = clara(standardized, config.k, config.seed);
    }
    const std::string cluster_file =
        "clusters_" + config.algorithm + "_k" + std::to_string(config.k) + ".json";
    write_json_file(out_dir / cluster_file, clustering_to_json(result, standardized.row_labels));

    const std::vector<std::size_t> order = vat_order(DistanceMatrix::from_features(standardized));
    json vat;
    vat["order"] = order;
    json vat_labels = json::array();
    for (std::size_t i : order) vat_labels.push_back(standardized.row_labels[i]);
    vat["labels"] = vat_labels;
    write_json_file(out_dir / "vat_order.json", vat);

    write_feature_importance_csv(out_dir / "feature_importance.csv",
                                 feature_importance(standardized, result.assignments));

    json manifest;
    manifest["command"] = "run";
    manifest["version"] = kVersion;
    manifest["config"] = config_to_json(config);
    write_json_file(out_dir / "manifest.json", manifest);
}

inline std::string zero_pad(std::size_t value, std::size_t width) {
    std::string digits = std::to_string(value);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    return digits;
}

/// Writes `reps` scenario replications as rep_<i>.csv plus a manifest.
/// Replication i uses an independent stream derived from (seed, i).
inline void simulate_replications(int scenario, const std::vector<int>& group_sizes, int reps,
                                  std::uint64_t seed, int length, const std::string& out_dir) {
    namespace fs = std::filesystem;
    if (reps < 1) throw ScenarioError("reps must be positive");
    fs::create_directories(out_dir);
    for (int r = 0; r < reps; ++r) {
        ScenarioSpec spec;
        spec.scenario = scenario;
        spec.group_sizes = group_sizes;
        spec.length = length;
        spec.seed = derive_seed(seed, static_cast<std::uint64_t>(r));
        const auto items = gen_scenario(spec);
        const fs::path file = fs::path(out_dir) / ("rep_" + zero_pad(static_cast<std::size_t>(r), 3) + ".csv");
        write_scenario_csv(file.string(), items);
    }
    json manifest;
    manifest["command"] = "simulate";
    manifest["version"] = kVersion;
    manifest["scenario"] = scenario;
    manifest["group_sizes"] = group_sizes.empty() ? default_group_sizes(scenario) : group_sizes;
    manifest["reps"] = reps;
    manifest["seed"] = seed;
    manifest["series_length"] = length;
    write_json_file(fs::path(out_dir) / "manifest.json", manifest);
}

struct EvalRow {
    int rep = 0;
    int scenario = 0;
    std::string split;
    double sensitivity = 0.0;
    double specificity = 0.0;
    double f1 = 0.0;
    double balanced_accuracy = 0.0;
    double auc = 0.0;
};

struct EvalSummary {
    std::vector<EvalRow> rows;
    double mean_sensitivity = 0.0;
    double mean_specificity = 0.0;
    double mean_f1 = 0.0;
    double mean_balanced_accuracy = 0.0;
    double mean_auc = 0.0;
    int all_perfect = 0;  // replications where every measure equals 1
};

/// Scores one replication: features of every series, standardize, k-means
/// with k = number of groups, align to the true groups, then accuracy
/// measures. Two groups get the binary measures; more get macro averages
/// of the one-vs-rest measures and the class-weighted F1.
inline EvalRow evaluate_replication(const std::vector<LabeledSeries>& items, int scenario,
                                    std::uint64_t kmeans_seed, int n_init = 25) {
    const std::vector<std::string> groups = groups_of(items);
    std::vector<std::string> unique_groups = groups;
    std::sort(unique_groups.begin(), unique_groups.end());
    unique_groups.erase(std::unique(unique_groups.begin(), unique_groups.end()),
                        unique_groups.end());
    const int k = static_cast<int>(unique_groups.size());
    if (k < 2) throw ScenarioError("evaluation needs at least two groups");

    const FeatureMatrix features = build_feature_matrix(series_of(items));
    const FeatureMatrix standardized = standardize(features);
    const ClusteringResult result = kmeans(standardized, k, kmeans_seed, n_init);
    const AlignedConfusion conf = align_clusters(groups, result.assignments);

    EvalRow row;
    row.scenario = scenario;
    std::map<std::string, int> group_count;
    for (const auto& g : groups) ++group_count[g];
    std::string split;
    for (const auto& g : unique_groups) {
        if (!split.empty()) split += '-';
        split += std::to_string(group_count[g]);
    }
    row.split = split;
    row.auc = cluster_auc(standardized, result, groups);
    if (k == 2) {
        const BinaryMeasures b = binary_measures(conf);
        row.sensitivity = b.sensitivity;
        row.specificity = b.specificity;
        row.f1 = b.f1;
        row.balanced_accuracy = b.balanced_accuracy;
    } else {
        const MulticlassMeasures mm = multiclass_measures(conf);
        row.sensitivity = mm.macro_sensitivity;
        row.specificity = mm.macro_specificity;
        row.f1 = mm.weighted_f1;
        row.balanced_accuracy = (mm.macro_sensitivity + mm.macro_specificity) / 2.0;
    }
    return row;
}

/// Evaluates every rep_*.csv in a simulation directory, writing metrics.csv
/// and summary.json next to them (or into out_dir when given).
inline EvalSummary evaluate_scenario_dir(const std::string& scenario_dir, std::uint64_t seed = 1,
                                         const std::string& out_dir = std::string(),
                                         int n_init = 25) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(scenario_dir)) {
        throw SchemaError("scenario directory '" + scenario_dir + "' does not exist");
    }
    int scenario = 0;
    const fs::path manifest_path = fs::path(scenario_dir) / "manifest.json";
    if (fs::exists(manifest_path)) {
        const json manifest = read_json_file(manifest_path);
        scenario = manifest.value("scenario", 0);
    }
    std::vector<fs::path> rep_files;
    for (const auto& entry : fs::directory_iterator(scenario_dir)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && name.rfind("rep_", 0) == 0 &&
            entry.path().extension() == ".csv") {
            rep_files.push_back(entry.path());
        }
    }
    std::sort(rep_files.begin(), rep_files.end());
    if (rep_files.empty()) {
        throw SchemaError("no rep_*.csv files in '" + scenario_dir + "'");
    }

    EvalSummary summary;
    for (std::size_t r = 0; r < rep_files.size(); ++r) {
        const auto items = read_scenario_csv(rep_files[r].string());
        EvalRow row = evaluate_replication(items, scenario, derive_seed(seed, r), n_init);
        row.rep = static_cast<int>(r);
        summary.rows.push_back(row);
    }
    const auto n = static_cast<double>(summary.rows.size());
    for (const EvalRow& row : summary.rows) {
        summary.mean_sensitivity += row.sensitivity / n;
        summary.mean_specificity += row.specificity / n;
        summary.mean_f1 += row.f1 / n;
        summary.mean_balanced_accuracy += row.balanced_accuracy / n;
        summary.mean_auc += row.auc / n;
        if (row.sensitivity == 1.0 && row.specificity == 1.0 && row.f1 == 1.0 &&
            row.balanced_accuracy == 1.0) {
            ++summary.all_perfect;
        }
    }

    const fs::path dest = out_dir.empty() ? fs::path(scenario_dir) : fs::path(out_dir);
    fs::create_directories(dest);
    {
        std::ofstream out(dest / "metrics.csv", std::ios::binary);
        if (!out) throw SchemaError("cannot write metrics.csv");
        out << "rep,scenario,split,sensitivity,specificity,f1,balanced_accuracy,auc\n";
        for (const EvalRow& row : summary.rows) {
            out << row.rep << ',' << row.scenario << ',' << row.split << ','
                << fmt_double(row.sensitivity) << ',' << fmt_double(row.specificity) << ','
                << fmt_double(row.f1) << ',' << fmt_double(row.balanced_accuracy) << ','
                << fmt_double(row.auc) << '\n';
        }
    }
    json sj;
    sj["n_reps"] = summary.rows.size();
    sj["mean_sensitivity"] = summary.mean_sensitivity;
    sj["mean_specificity"] = summary.mean_specificity;
    sj["mean_f1"] = summary.mean_f1;
    sj["mean_balanced_accuracy"] = summary.mean_balanced_accuracy;
    sj["mean_auc"] = summary.mean_auc;
    sj["all_perfect"] = summary.all_perfect;
    sj["seed"] = seed;
    write_json_file(dest / "summary.json", sj);
    return summary;
}

} // namespace polyclust
