//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RAINSENSE_EVAL_HPP
#define RAINSENSE_EVAL_HPP

#include "rainsense/graph.hpp"
#include "rainsense/rainnet.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rainsense {

// Classifier abstraction for the experiment harness; the production
// implementation wraps RainNet, tests can inject stubs.
class Classifier {
  public:
    virtual ~Classifier() = default;
    virtual void fit(std::span<const SensingGraph> graphs, std::span<const std::size_t> train_idx,
                     std::span<const std::size_t> test_idx) = 0;
    virtual int predict_graph(const SensingGraph& graph) = 0;
    virtual std::vector<EpochMetrics> epoch_curve() const { return {}; }
};

using ClassifierFactory = std::function<std::unique_ptr<Classifier>(std::uint64_t seed)>;

// RainNet-backed factory; sigma_e is the median pairwise distance of the
// training graphs, hidden width 64.
ClassifierFactory rainnet_factory(const TrainConfig& cfg, std::size_t hidden = 64);

struct FoldResult {
    int fold = 0;
    double accuracy = 0.0;
    std::size_t test_count = 0;
    std::vector<EpochMetrics> curve;
};

struct ExperimentReport {
    int classes = 0;
    SplitMode mode = SplitMode::unshuffled;
    std::uint64_t seed = 0;
    std::vector<FoldResult> folds;
    double mean_accuracy = 0.0;          // trace / total of the confusion matrix
    std::vector<std::size_t> confusion;  // classes x classes, row = true class
    std::string config_snapshot;

    std::size_t confusion_at(int truth, int predicted) const {
        return confusion[static_cast<std::size_t>(truth) * static_cast<std::size_t>(classes) +
                         static_cast<std::size_t>(predicted)];
    }
};

// Five-fold cross validation: each fold serves once as the test set, the
// classifier is retrained on the remaining folds. Deterministic under seed.
// Throws when a class is absent from some fold's training set; warns when a
// class has fewer than 5 graphs.
ExperimentReport run_baseline(const GraphDataset& dataset, SplitMode mode, std::uint64_t seed,
                              const ClassifierFactory& factory);

// Node-count ablation: per n the dataset is rebuilt from scratch, split
// 50/50, trained and tested `repetitions` times with an identical seed
// schedule across n values. Per-n failures are recorded and the sweep
// continues.
using DatasetBuilder = std::function<GraphDataset(std::size_t n)>;

struct NodeAblationPoint {
    std::size_t n = 0;
    double mean_accuracy = 0.0;
    double stddev = 0.0;
    std::vector<double> rep_accuracies;
    std::string error; // nonempty when this n failed
};

std::vector<NodeAblationPoint> run_node_ablation(const DatasetBuilder& builder,
                                                 std::span<const std::size_t> n_values,
                                                 std::size_t repetitions, std::uint64_t seed,
                                                 const ClassifierFactory& factory);

// POU ablation: identical 50/50 protocol, once with the full 3k+1 features
// and once with the POU column removed (3k features).
struct PouAblationResult {
    double acc_with_pou = 0.0;
    double acc_without_pou = 0.0;
    std::size_t dim_with_pou = 0;
    std::size_t dim_without_pou = 0;
};

PouAblationResult run_pou_ablation(const GraphDataset& dataset, std::uint64_t seed,
                                   const ClassifierFactory& factory);

// Copy of the dataset with the last feature column (POU) removed.
GraphDataset strip_pou(const GraphDataset& dataset);

// Seeded 50/50 train/test split of [0, count).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> half_split(std::size_t count,
                                                                         std::uint64_t seed);

} // namespace rainsense

#endif // RAINSENSE_EVAL_HPP
