//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "rainsense/eval.hpp"

#include "rainsense/log.hpp"
#include "rainsense/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rainsense {

namespace {

class RainNetClassifier final : public Classifier {
  public:
    RainNetClassifier(TrainConfig cfg, std::size_t hidden, std::uint64_t seed)
        : cfg_(cfg), hidden_(hidden) {
        cfg_.seed = seed;
    }

    void fit(std::span<const SensingGraph> graphs, std::span<const std::size_t> train_idx,
             std::span<const std::size_t> test_idx) override {
        if (train_idx.empty()) {
            throw std::invalid_argument("RainNetClassifier: empty training set");
        }
        int classes = 0;
        for (const auto idx : train_idx) {
            classes = std::max(classes, graphs[idx].label + 1);
        }
        for (const auto idx : test_idx) {
            classes = std::max(classes, graphs[idx].label + 1);
        }
        classes = std::max(classes, 2);
        const std::size_t in_dim = graphs[train_idx.front()].feat_dim;
        const double sigma_e = median_edge_km(graphs, train_idx);
        // k is metadata here; in_dim may be 3k+1 or 3k.
        const int k = static_cast<int>(in_dim / 3);
        model_ = init_model(k, classes, in_dim, hidden_, sigma_e, cfg_.seed);
        curve_ = train(model_, graphs, train_idx, test_idx, cfg_);
    }

    int predict_graph(const SensingGraph& graph) override { return predict(model_, graph); }

    std::vector<EpochMetrics> epoch_curve() const override { return curve_; }

    const RainNetModel& model() const { return model_; }

  private:
    TrainConfig cfg_;
    std::size_t hidden_;
    RainNetModel model_;
    std::vector<EpochMetrics> curve_;
};

} // namespace

ClassifierFactory rainnet_factory(const TrainConfig& cfg, std::size_t hidden) {
    return [cfg, hidden](std::uint64_t seed) {
        return std::make_unique<RainNetClassifier>(cfg, hidden, seed);
    };
}

ExperimentReport run_baseline(const GraphDataset& dataset, SplitMode mode, std::uint64_t seed,
                              const ClassifierFactory& factory) {
    const auto& graphs = dataset.graphs;
    if (graphs.size() < 5) {
        throw std::invalid_argument("run_baseline: need at least 5 graphs");
    }
    const int classes = dataset.classes;

    std::vector<std::size_t> per_class(static_cast<std::size_t>(classes), 0);
    for (const auto& g : graphs) {
        if (g.label < 0 || g.label >= classes) {
            throw std::invalid_argument("run_baseline: label " + std::to_string(g.label) +
                                        " outside [0, " + std::to_string(classes) + ")");
        }
        per_class[static_cast<std::size_t>(g.label)]++;
    }
    for (int c = 0; c < classes; ++c) {
        if (per_class[static_cast<std::size_t>(c)] < 5) {
            log_warn("run_baseline: class " + std::to_string(c) + " has only " +
                     std::to_string(per_class[static_cast<std::size_t>(c)]) +
                     " graphs; fold estimates will be noisy");
        }
    }

    const DatasetSplit split = make_splits(graphs.size(), mode, seed);

    ExperimentReport report;
    report.classes = classes;
    report.mode = mode;
    report.seed = seed;
    report.confusion.assign(static_cast<std::size_t>(classes) * static_cast<std::size_t>(classes),
                            0);

    for (int fold = 0; fold < split.folds; ++fold) {
        const auto train_idx = split.complement_indices(fold);
        const auto test_idx = split.fold_indices(fold);

        std::vector<bool> present(static_cast<std::size_t>(classes), false);
        for (const auto idx : train_idx) {
            present[static_cast<std::size_t>(graphs[idx].label)] = true;
        }
        for (int c = 0; c < classes; ++c) {
            if (!present[static_cast<std::size_t>(c)]) {
                throw std::runtime_error("run_baseline: class " + std::to_string(c) +
                                         " absent from the training folds of fold " +
                                         std::to_string(fold));
            }
        }

        auto classifier = factory(derive_seed(seed, seed_tag::repetition,
                                              static_cast<std::uint64_t>(fold)));
        classifier->fit(graphs, train_idx, test_idx);

        FoldResult result;
        result.fold = fold;
        result.test_count = test_idx.size();
        result.curve = classifier->epoch_curve();
        std::size_t hits = 0;
        for (const auto idx : test_idx) {
            const int predicted = classifier->predict_graph(graphs[idx]);
            report.confusion[static_cast<std::size_t>(graphs[idx].label) *
                                 static_cast<std::size_t>(classes) +
                             static_cast<std::size_t>(predicted)]++;
            if (predicted == graphs[idx].label) {
                ++hits;
            }
        }
        result.accuracy = static_cast<double>(hits) / static_cast<double>(test_idx.size());
        report.folds.push_back(std::move(result));
    }

    std::size_t trace = 0;
    for (int c = 0; c < classes; ++c) {
        trace += report.confusion_at(c, c);
    }
    report.mean_accuracy = static_cast<double>(trace) / static_cast<double>(graphs.size());
    return report;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> half_split(std::size_t count,
                                                                         std::uint64_t seed) {
    if (count < 2) {
        throw std::invalid_argument("half_split: need at least 2 graphs");
    }
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, seed_tag::split_shuffle));
    for (std::size_t i = count - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)));
        std::swap(order[i], order[j]);
    }
    const std::size_t half = count / 2;
    std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(half));
    std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(half), order.end());
    return {std::move(train), std::move(test)};
}

namespace {

double run_half_split_once(const GraphDataset& dataset, std::uint64_t seed,
                           const ClassifierFactory& factory) {
    auto [train_idx, test_idx] = half_split(dataset.graphs.size(), seed);
    auto classifier = factory(seed);
    classifier->fit(dataset.graphs, train_idx, test_idx);
    std::size_t hits = 0;
    for (const auto idx : test_idx) {
        if (classifier->predict_graph(dataset.graphs[idx]) == dataset.graphs[idx].label) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(test_idx.size());
}

} // namespace

std::vector<NodeAblationPoint> run_node_ablation(const DatasetBuilder& builder,
                                                 std::span<const std::size_t> n_values,
                                                 std::size_t repetitions, std::uint64_t seed,
                                                 const ClassifierFactory& factory) {
    if (repetitions == 0) {
        throw std::invalid_argument("run_node_ablation: repetitions must be >= 1");
    }
    std::vector<NodeAblationPoint> points;
    for (const std::size_t n : n_values) {
        NodeAblationPoint point;
        point.n = n;
        try {
            const GraphDataset dataset = builder(n);
            for (std::size_t rep = 0; rep < repetitions; ++rep) {
                // The same per-repetition seed schedule is used for every n,
                // so the only varying factor is the node count.
                const std::uint64_t rep_seed = derive_seed(seed, seed_tag::repetition, rep);
                point.rep_accuracies.push_back(run_half_split_once(dataset, rep_seed, factory));
            }
            const double mean = std::accumulate(point.rep_accuracies.begin(),
                                                point.rep_accuracies.end(), 0.0) /
                                static_cast<double>(repetitions);
            double var = 0.0;
            for (const double a : point.rep_accuracies) {
                var += (a - mean) * (a - mean);
            }
            point.mean_accuracy = mean;
            point.stddev = repetitions > 1
                               ? std::sqrt(var / static_cast<double>(repetitions - 1))
                               : 0.0;
        } catch (const std::exception& e) {
            point.error = e.what();
            log_error("run_node_ablation: n=" + std::to_string(n) + " failed: " + point.error);
        }
        points.push_back(std::move(point));
    }
    return points;
}

GraphDataset strip_pou(const GraphDataset& dataset) {
    GraphDataset out;
    out.n = dataset.n;
    out.k = dataset.k;
    out.classes = dataset.classes;
    out.graphs.reserve(dataset.graphs.size());
    for (const auto& g : dataset.graphs) {
        if (g.feat_dim < 2) {
            throw std::invalid_argument("strip_pou: feature dimension too small");
        }
        SensingGraph s = g;
        s.feat_dim = g.feat_dim - 1;
        s.node_features.resize(g.n * s.feat_dim);
        for (std::size_t i = 0; i < g.n; ++i) {
            for (std::size_t j = 0; j < s.feat_dim; ++j) {
                s.node_features[i * s.feat_dim + j] = g.feature(i, j);
            }
        }
        out.graphs.push_back(std::move(s));
    }
    return out;
}

PouAblationResult run_pou_ablation(const GraphDataset& dataset, std::uint64_t seed,
                                   const ClassifierFactory& factory) {
    PouAblationResult result;
    result.dim_with_pou = dataset.graphs.empty() ? 0 : dataset.graphs.front().feat_dim;
    const GraphDataset diluted = strip_pou(dataset);
    result.dim_without_pou = diluted.graphs.empty() ? 0 : diluted.graphs.front().feat_dim;
    // Identical seed for both arms: the feature set is the only difference.
    result.acc_with_pou = run_half_split_once(dataset, seed, factory);
    result.acc_without_pou = run_half_split_once(diluted, seed, factory);
    return result;
}

} // namespace rainsense
