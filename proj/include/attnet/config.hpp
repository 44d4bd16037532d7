#pragma once

#include <map>
#include <string>
#include <vector>

#include "attnet/data_io.hpp"
#include "attnet/models.hpp"
#include "attnet/train.hpp"

namespace attnet {

enum class DatasetKind { Synthetic, Fer2013, PgmDir };

struct DataConfig {
    DatasetKind kind = DatasetKind::Synthetic;
    std::string path;
    Usage usage = Usage::Training;
    bool resize = true;  // scale data to the model's input contract
    int synthetic_classes = 7;
    int synthetic_per_class = 10;
    int synthetic_h = 32;
    int synthetic_w = 32;
    double synthetic_noise = 0.1;
};

/// The full run description: ModelSpec + TrainConfig + dataset, assembled
/// from a `key = value` config file (# comments) and CLI overrides.
/// Unknown keys are rejected.
struct RunConfig {
    ModelSpec model;
    TrainConfig train;
    DataConfig data;
    int repeats = 1;

    /// Applies one key=value assignment; throws ConfigError on unknown
    /// keys or unparsable values.
    void set(const std::string& key, const std::string& value);

    /// Fully-resolved sorted key=value lines, logged with every run.
    std::string resolved_text() const;
};

/// Parses `key = value` lines; '#' starts a comment, blank lines ignored.
RunConfig load_run_config(const std::string& path);
void apply_overrides(RunConfig& cfg, const std::vector<std::string>& assignments);

/// Loads the configured dataset and, when data.resize is set, adapts it to
/// the model input contract (bilinear resize + channel replication).
DatasetBatch load_dataset(const DataConfig& data, const ModelSpec& model);

struct TrainRunResult {
    std::vector<Metrics> per_run_train;
    std::vector<Metrics> per_run_val;
    double best_accuracy = 0.0;
    int best_run = 0;  // 1-based
    std::string checkpoint_path;
};

/// Trains cfg.repeats times (seeds seed, seed+1, ...), writing one epoch
/// log per run plus the best run's checkpoint and resolved config into
/// out_dir. Epoch logs are tab-separated: epoch, train_loss, train_acc,
/// val_loss, val_acc.
TrainRunResult run_training(const RunConfig& cfg, const std::string& out_dir, bool quiet = false);

}  // namespace attnet
