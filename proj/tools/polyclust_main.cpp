// Command-line front end: simulation, feature extraction, clustering,
// validation, and simulation-study scoring, each emitting a manifest that
// records the exact flags used.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polyclust/polyclust.hpp"

namespace {

namespace fs = std::filesystem;
using polyclust::json;

void write_manifest(const std::string& out_dir, const std::string& command, json flags) {
    json manifest;
    manifest["command"] = command;
    manifest["version"] = polyclust::kVersion;
    manifest["flags"] = std::move(flags);
    fs::create_directories(out_dir);
    polyclust::write_json_file(fs::path(out_dir) / "manifest.json", manifest);
}

polyclust::FeatureMatrix load_features(const std::string& path, bool already_standardized) {
    polyclust::FeatureMatrix m = polyclust::read_feature_csv(path);
    if (already_standardized) {
        m.standardized = true;
        return m;
    }
    return polyclust::standardize(m);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral and bispectral feature clustering for time series"};
    app.require_subcommand(1);

    // --- run ---------------------------------------------------------------
    auto* run = app.add_subcommand("run", "Full pipeline: ingest/simulate, features, "
                                          "validation battery, clustering, artifacts");
    polyclust::RunConfig config;
    std::string manifest_path;
    run->add_option("--manifest", manifest_path, "Re-execute a previously written manifest.json");
    run->add_option("--input", config.input_dir, "Directory of per-stock CSVs");
    run->add_option("--features", config.features_csv, "Pre-extracted feature CSV");
    run->add_option("--scenario", config.scenario, "Simulate scenario 1|2|3 as the input");
    run->add_option("--sizes", config.group_sizes, "Group sizes, e.g. 25,25")->delimiter(',');
    run->add_option("--length", config.series_length, "Series length for simulated input");
    run->add_option("--window", config.window_days, "Trailing window of rows per stock");
    run->add_option("--k", config.k, "Number of clusters to fit");
    run->add_option("--algo", config.algorithm, "kmeans | pam | clara");
    run->add_option("--seed", config.seed, "Master seed");
    run->add_option("--kmin", config.k_min, "Validation range lower end");
    run->add_option("--kmax", config.k_max, "Validation range upper end");
    run->add_option("--B", config.gap_B, "Gap-statistic reference draws");
    run->add_option("--hopkins-reps", config.hopkins_reps, "Hopkins replications");
    run->add_option("--n-init", config.n_init, "k-means restarts");
    run->add_option("--out", config.output_dir, "Output directory");

    // --- simulate ----------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "Write scenario replications as CSVs");
    int sim_scenario = 1;
    std::vector<int> sim_sizes;
    int sim_reps = 20;
    std::uint64_t sim_seed = 1;
    int sim_length = 100;
    std::string sim_out = "simulation";
    simulate->add_option("--scenario", sim_scenario, "Scenario 1|2|3")->required();
    simulate->add_option("--sizes", sim_sizes, "Group sizes, e.g. 25,25")->delimiter(',');
    simulate->add_option("--reps", sim_reps, "Number of replications");
    simulate->add_option("--seed", sim_seed, "Master seed");
    simulate->add_option("--length", sim_length, "Series length");
    simulate->add_option("--out", sim_out, "Output directory");

    // --- features ----------------------------------------------------------
    auto* features = app.add_subcommand("features", "Ingest stock CSVs and extract features");
    std::string feat_input;
    int feat_window = 1000;
    std::string feat_out = ".";
    features->add_option("--input", feat_input, "Directory of per-stock CSVs")->required();
    features->add_option("--window", feat_window, "Trailing window of rows per stock");
    features->add_option("--out", feat_out, "Output directory");

    // --- cluster -----------------------------------------------------------
    auto* cluster = app.add_subcommand("cluster", "Cluster a feature CSV");
    std::string clu_features;
    int clu_k = 5;
    std::string clu_algo = "kmeans";
    std::uint64_t clu_seed = 1;
    int clu_n_init = 25;
    bool clu_standardized = false;
    std::string clu_out = ".";
    cluster->add_option("--features", clu_features, "Feature CSV")->required();
    cluster->add_option("--k", clu_k, "Number of clusters");
    cluster->add_option("--algo", clu_algo, "kmeans | pam | clara");
    cluster->add_option("--seed", clu_seed, "Seed");
    cluster->add_option("--n-init", clu_n_init, "k-means restarts");
    cluster->add_flag("--standardized", clu_standardized,
                      "Input columns are already standardized");
    cluster->add_option("--out", clu_out, "Output directory");

    // --- validate ----------------------------------------------------------
    auto* validate = app.add_subcommand("validate", "Per-k validation indices and gap rule");
    std::string val_features;
    int val_kmin = 2, val_kmax = 10, val_B = 100, val_hreps = 100, val_n_init = 25;
    std::uint64_t val_seed = 1;
    bool val_standardized = false;
    std::string val_out = ".";
    validate->add_option("--features", val_features, "Feature CSV")->required();
    validate->add_option("--kmin", val_kmin, "Smallest k");
    validate->add_option("--kmax", val_kmax, "Largest k");
    validate->add_option("--B", val_B, "Gap-statistic reference draws");
    validate->add_option("--seed", val_seed, "Seed");
    validate->add_option("--hopkins-reps", val_hreps, "Hopkins replications");
    validate->add_option("--n-init", val_n_init, "k-means restarts");
    validate->add_flag("--standardized", val_standardized,
                       "Input columns are already standardized");
    validate->add_option("--out", val_out, "Output directory");

    // --- hopkins -----------------------------------------------------------
    auto* hopkins_cmd = app.add_subcommand("hopkins", "Cluster-tendency statistic");
    std::string hop_features;
    int hop_m = 0, hop_reps = 100;
    std::uint64_t hop_seed = 1;
    bool hop_standardized = false;
    std::string hop_out = ".";
    hopkins_cmd->add_option("--features", hop_features, "Feature CSV")->required();
    hopkins_cmd->add_option("--m", hop_m, "Probes per replication (0 = rows/10)");
    hopkins_cmd->add_option("--reps", hop_reps, "Replications to average");
    hopkins_cmd->add_option("--seed", hop_seed, "Seed");
    hopkins_cmd->add_flag("--standardized", hop_standardized,
                          "Input columns are already standardized");
    hopkins_cmd->add_option("--out", hop_out, "Output directory");

    // --- evaluate ----------------------------------------------------------
    auto* evaluate = app.add_subcommand("evaluate", "Score simulation replications");
    std::string eval_dir;
    std::uint64_t eval_seed = 1;
    int eval_n_init = 25;
    std::string eval_out;
    evaluate->add_option("--scenario-dir", eval_dir, "Directory of rep_*.csv files")->required();
    evaluate->add_option("--seed", eval_seed, "Seed for the per-replication clustering");
    evaluate->add_option("--n-init", eval_n_init, "k-means restarts");
    evaluate->add_option("--out", eval_out, "Output directory (default: scenario dir)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (run->parsed()) {
            if (!manifest_path.empty()) {
                const json manifest = polyclust::read_json_file(manifest_path);
                if (!manifest.contains("config")) {
                    throw polyclust::SchemaError("manifest has no config block");
                }
                config = polyclust::config_from_json(manifest.at("config"));
            }
            polyclust::run_pipeline(config);
            std::cout << "pipeline artifacts written to " << config.output_dir << "\n";
        } else if (simulate->parsed()) {
            polyclust::simulate_replications(sim_scenario, sim_sizes, sim_reps, sim_seed,
                                             sim_length, sim_out);
            std::cout << sim_reps << " replication(s) written to " << sim_out << "\n";
        } else if (features->parsed()) {
            auto by_symbol = polyclust::ingest(feat_input, feat_window);
            std::vector<polyclust::TimeSeries> series;
            for (auto& [symbol, s] : by_symbol) series.push_back(std::move(s));
            const auto matrix = polyclust::build_feature_matrix(series);
            fs::create_directories(feat_out);
            polyclust::write_feature_csv((fs::path(feat_out) / "features.csv").string(), matrix);
            polyclust::write_feature_csv(
                (fs::path(feat_out) / "features_standardized.csv").string(),
                polyclust::standardize(matrix));
            write_manifest(feat_out, "features",
                           json{{"input", feat_input}, {"window", feat_window}, {"out", feat_out}});
            std::cout << matrix.n_rows() << " series featurized into " << feat_out << "\n";
        } else if (cluster->parsed()) {
            const auto matrix = load_features(clu_features, clu_standardized);
            polyclust::ClusteringResult result;
            if (clu_algo == "kmeans") {
                result = polyclust::kmeans(matrix, clu_k, clu_seed, clu_n_init);
            } else if (clu_algo == "pam") {
                result = polyclust::pam(polyclust::DistanceMatrix::from_features(matrix), clu_k,
                                        clu_seed);
            } else if (clu_algo == "clara") {
                result = polyclust::clara(matrix, clu_k, clu_seed);
            } else {
                throw polyclust::InvalidK("unknown algorithm '" + clu_algo + "'");
            }
            fs::create_directories(clu_out);
            const std::string file =
                "clusters_" + clu_algo + "_k" + std::to_string(clu_k) + ".json";
            polyclust::write_json_file(fs::path(clu_out) / file,
                                       polyclust::clustering_to_json(result, matrix.row_labels));
            write_manifest(clu_out, "cluster",
                           json{{"features", clu_features},
                                {"k", clu_k},
                                {"algo", clu_algo},
                                {"seed", clu_seed},
                                {"n_init", clu_n_init},
                                {"standardized", clu_standardized},
                                {"out", clu_out}});
            std::cout << file << " written to " << clu_out << " (objective "
                      << polyclust::fmt_double(result.objective) << ")\n";
        } else if (validate->parsed()) {
            const auto matrix = load_features(val_features, val_standardized);
            const auto report = polyclust::validate_clustering(matrix, val_kmin, val_kmax, val_B,
                                                               val_seed, val_hreps, val_n_init);
            fs::create_directories(val_out);
            polyclust::write_json_file(fs::path(val_out) / "validation.json",
                                       polyclust::validation_to_json(report));
            polyclust::write_validation_csv(fs::path(val_out) / "validation.csv", report);
            write_manifest(val_out, "validate",
                           json{{"features", val_features},
                                {"kmin", val_kmin},
                                {"kmax", val_kmax},
                                {"B", val_B},
                                {"seed", val_seed},
                                {"hopkins_reps", val_hreps},
                                {"n_init", val_n_init},
                                {"standardized", val_standardized},
                                {"out", val_out}});
            std::cout << "validation written to " << val_out << " (gap rule recommends k="
                      << report.gap_k << ")\n";
        } else if (hopkins_cmd->parsed()) {
            const auto matrix = load_features(hop_features, hop_standardized);
            const auto result = polyclust::hopkins(matrix, hop_m, hop_reps, hop_seed);
            fs::create_directories(hop_out);
            polyclust::write_json_file(fs::path(hop_out) / "hopkins.json",
                                       polyclust::hopkins_to_json(result, hop_seed));
            write_manifest(hop_out, "hopkins",
                           json{{"features", hop_features},
                                {"m", hop_m},
                                {"reps", hop_reps},
                                {"seed", hop_seed},
                                {"standardized", hop_standardized},
                                {"out", hop_out}});
            std::cout << "hopkins statistic " << polyclust::fmt_double(result.statistic)
                      << " (p=" << polyclust::fmt_double(result.p_value) << ")\n";
        } else if (evaluate->parsed()) {
            const auto summary =
                polyclust::evaluate_scenario_dir(eval_dir, eval_seed, eval_out, eval_n_init);
            write_manifest(eval_out.empty() ? eval_dir : eval_out, "evaluate",
                           json{{"scenario_dir", eval_dir},
                                {"seed", eval_seed},
                                {"n_init", eval_n_init},
                                {"out", eval_out}});
            std::cout << summary.rows.size() << " replication(s): mean balanced accuracy "
                      << polyclust::fmt_double(summary.mean_balanced_accuracy) << ", mean AUC "
                      << polyclust::fmt_double(summary.mean_auc) << "\n";
        }
    } catch (const polyclust::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
