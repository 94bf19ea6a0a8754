//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RAINSENSE_PIPELINE_HPP
#define RAINSENSE_PIPELINE_HPP

#include "rainsense/energy.hpp"
#include "rainsense/eval.hpp"
#include "rainsense/graph.hpp"
#include "rainsense/synth.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rainsense {

// Machine-parseable failure classes surfaced by the CLI (one line on stderr,
// matching exit codes; see README).
enum class ErrorClass { bad_config = 2, missing_input = 3, bad_input = 4, infeasible = 5 };

class StageError : public std::runtime_error {
  public:
    StageError(ErrorClass cls, const std::string& msg)
        : std::runtime_error(msg), error_class(cls) {}
    ErrorClass error_class;
};

const char* to_string(ErrorClass cls);

// Fully resolved run configuration. Every knob any stage consumes lives
// here; the resolved form is echoed to each output directory.
struct RunConfig {
    std::uint64_t seed = 1;

    CampaignConfig campaign; // synth section (includes SynthConfig)

    struct Features {
        int k = 5;
        bool pool_rats = false; // false: 4G records only
    } features;

    struct Graph {
        std::size_t n = 9;
    } graph;

    struct Train {
        int epochs = 150;
        double learning_rate = 0.05;
        double momentum = 0.9;
        std::size_t batch_size = 32;
        std::string mode = "shuffled"; // holdout split mode
    } train;

    struct Eval {
        std::vector<std::string> modes{"shuffled", "unshuffled"};
    } eval;

    // The node ablation rebuilds its own campaign: localized per-station
    // noise on the signal metrics, POU coupling weak enough that it takes
    // multi-node pooling to decode.
    struct Ablate {
        std::size_t n_min = 2;
        std::size_t n_max = 8;
        std::size_t repetitions = 5;
        std::size_t stations = 60;
        std::size_t windows = 10;
        std::size_t users_per_station = 60;
        double station_bias_sigma_db = 1.0;
        double pou_high = 0.68;
        double pou_low = 0.32;
    } ablate;

    EnergyConfig energy;
    struct Energy {
        std::size_t pr_rain_steps = 11; // sweep 0..1 inclusive
        std::size_t layout_seeds = 10;
    } energy_sweep;

    struct Water {
        double freq_min_ghz = 0.5;
        double freq_max_ghz = 10.0;
        std::size_t freq_steps = 20;
        std::vector<double> temps_c{0.0, 25.0, 50.0};
    } water;
};

// Full-protocol defaults: 100 stations, 9-node graphs,
// k = 5 histogram bins, 10 classes, 150 epochs, 5 folds.
RunConfig default_config();

// Missing keys fall back to defaults; unknown keys are rejected.
RunConfig load_config(const std::string& path);
RunConfig config_from_json_text(const std::string& text, const std::string& origin);
std::string config_echo_json(const RunConfig& cfg);
void validate_config(const RunConfig& cfg);

// Derived synthetic-generation config for the node ablation (its own size,
// localized per-station noise, optionally class-decoupled POU).
CampaignConfig ablation_campaign(const RunConfig& cfg);

// In-memory dataset assembly shared by the featurize stage and the ablation
// builders: cluster records, fit the histogram spec, compute per-window node
// features, assemble graphs.
struct AssembleParams {
    std::size_t m = 100;
    int k = 5;
    std::size_t n = 9;
    int classes = 10;
    bool pool_rats = false;
    std::uint64_t seed = 1;
    std::int64_t window_seconds = 1800;
};

struct AssembledData {
    std::vector<StationCluster> clusters;
    std::vector<GeoPoint> centers;
    HistogramSpec spec;
    LabelBinning binning;
    std::vector<std::vector<NodeFeatures>> features_by_window;
    GraphDataset dataset;
};

AssembledData assemble_graphs_from_records(std::span<const LteRecord> records,
                                           std::span<const RadarGrid> grids,
                                           const AssembleParams& params);

// A graph dataset built straight from a campaign config (used by ablations).
GraphDataset build_dataset(const CampaignConfig& campaign, const AssembleParams& params);

// Pipeline stages. Each verifies its inputs, then writes its artifacts plus
// resolved_config.json into out_dir. Reruns with identical config and inputs
// produce byte-identical artifacts.
void run_synth(const RunConfig& cfg, const std::string& out_dir);
void run_featurize(const RunConfig& cfg, const std::string& synth_dir,
                   const std::string& out_dir);
void run_train(const RunConfig& cfg, const std::string& graphs_path, const std::string& out_dir);
void run_eval(const RunConfig& cfg, const std::string& graphs_path, const std::string& out_dir);
void run_ablate_nodes(const RunConfig& cfg, const std::string& out_dir);
void run_ablate_pou(const RunConfig& cfg, const std::string& graphs_path,
                    const std::string& out_dir);
void run_energy(const RunConfig& cfg, const std::string& out_dir);
void run_water(const RunConfig& cfg, const std::string& out_dir);

// Report serialization helpers (also used by tests).
void write_experiment_report_json(const ExperimentReport& report, const std::string& path);
void write_confusion_csv(const ExperimentReport& report, const std::string& path);
void write_curves_csv(const std::vector<FoldResult>& folds, const std::string& path);
void write_metrics_csv(const std::vector<EpochMetrics>& metrics, int fold,
                       const std::string& path);

} // namespace rainsense

#endif // RAINSENSE_PIPELINE_HPP
