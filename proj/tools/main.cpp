//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "rainsense/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
};

rainsense::RunConfig resolve_config(const CommonArgs& args) {
    rainsense::RunConfig cfg = args.config_path.empty()
                                   ? rainsense::default_config()
                                   : rainsense::load_config(args.config_path);
    if (args.seed_set) {
        cfg.seed = args.seed;
        cfg.campaign.synth.seed = args.seed;
        cfg.energy.seed = args.seed;
    }
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON run configuration (defaults when omitted)");
    cmd->add_option("--out-dir", args.out_dir, "output directory for this stage's artifacts");
    cmd->add_option("--seed", args.seed, "master seed override")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--threads", args.threads,
                    "worker threads (results are independent of this value)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rainfall sensing from LTE downlink statistics: synthetic data pipeline, "
                 "graph classifier, evaluation harness, and energy case study"};
    app.require_subcommand(1);

    CommonArgs args;

    auto* synth = app.add_subcommand("synth", "generate the synthetic dataset and radar grids");
    add_common(synth, args);

    auto* featurize = app.add_subcommand(
        "featurize", "cluster stations, compute node features, assemble the graph dataset");
    add_common(featurize, args);
    std::string synth_dir = "out";
    featurize->add_option("--synth-dir", synth_dir, "directory with lte.csv and radar/");

    auto* train_cmd = app.add_subcommand("train", "train the classifier on a holdout split");
    add_common(train_cmd, args);
    std::string graphs_path = "out/graphs.bin";
    train_cmd->add_option("--graphs", graphs_path, "graph container produced by featurize");

    auto* eval_cmd =
        app.add_subcommand("eval", "five-fold cross-validation baseline with reports");
    add_common(eval_cmd, args);
    eval_cmd->add_option("--graphs", graphs_path, "graph container produced by featurize");

    auto* ablate = app.add_subcommand("ablate", "node-count or POU feature ablation");
    add_common(ablate, args);
    std::string ablate_kind = "nodes";
    ablate->add_option("--kind", ablate_kind, "nodes | pou")->required();
    ablate->add_option("--graphs", graphs_path, "graph container (pou ablation only)");

    auto* energy = app.add_subcommand("energy", "rain-aware minimum-power case study");
    add_common(energy, args);

    auto* water = app.add_subcommand("water", "water attenuation-length table");
    add_common(water, args);

    CLI11_PARSE(app, argc, argv);

    try {
        const rainsense::RunConfig cfg = resolve_config(args);
        if (synth->parsed()) {
            rainsense::run_synth(cfg, args.out_dir);
        } else if (featurize->parsed()) {
            rainsense::run_featurize(cfg, synth_dir, args.out_dir);
        } else if (train_cmd->parsed()) {
            rainsense::run_train(cfg, graphs_path, args.out_dir);
        } else if (eval_cmd->parsed()) {
            rainsense::run_eval(cfg, graphs_path, args.out_dir);
        } else if (ablate->parsed()) {
            if (ablate_kind == "nodes") {
                rainsense::run_ablate_nodes(cfg, args.out_dir);
            } else if (ablate_kind == "pou") {
                rainsense::run_ablate_pou(cfg, graphs_path, args.out_dir);
            } else {
                throw rainsense::StageError(rainsense::ErrorClass::bad_config,
                                            "unknown ablation kind: " + ablate_kind);
            }
        } else if (energy->parsed()) {
            rainsense::run_energy(cfg, args.out_dir);
        } else if (water->parsed()) {
            rainsense::run_water(cfg, args.out_dir);
        }
    } catch (const rainsense::StageError& e) {
        std::fprintf(stderr, "error: %s: %s\n", rainsense::to_string(e.error_class), e.what());
        return static_cast<int>(e.error_class);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: internal: %s\n", e.what());
        return 1;
    }
    return 0;
}
