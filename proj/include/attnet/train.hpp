#pragma once

#include <string>
#include <vector>

#include "attnet/models.hpp"

namespace attnet {

struct TrainConfig {
    double lr = 0.01;
    double momentum = 0.9;
    double weight_decay = 0.0;
    int batch_size = 16;
    int epochs = 10;
    uint64_t seed = 1;
    bool shuffle = true;
};

struct Metrics {
    double loss = 0.0;
    double accuracy = 0.0;
    std::vector<double> per_class_accuracy;
};

/// Images scaled to [0,1] plus integer labels into class_names.
struct DatasetBatch {
    Tensor images;  // (N,C,H,W)
    std::vector<int> labels;
    std::vector<std::string> class_names;

    int size() const { return static_cast<int>(labels.size()); }
};

/// SGD with momentum and L2 weight decay over a parameter registry:
/// v <- momentum*v + grad + weight_decay*w; w <- w - lr*v. Gradients are
/// zeroed after each step.
class SgdOptimizer {
public:
    SgdOptimizer(std::vector<Param*>& params, const TrainConfig& cfg);
    void step();

private:
    std::vector<Param*>& params_;
    TrainConfig cfg_;
    std::vector<Tensor> velocity_;
};

/// One pass over the data in seeded-shuffle order; returns the epoch-mean
/// loss and the training-pass accuracy. A non-finite loss aborts with the
/// offending batch index in the message.
Metrics train_epoch(Model& m, const DatasetBatch& data, SgdOptimizer& opt,
                    const TrainConfig& cfg, int epoch_index);

/// Inference-mode accuracy with first-index argmax tie-break.
Metrics evaluate(Model& m, const DatasetBatch& data, int batch_size = 64);

Tensor gather_batch(const Tensor& images, const std::vector<int>& order, int begin, int end,
                    std::vector<int>* batch_labels, const std::vector<int>& labels);

}  // namespace attnet
