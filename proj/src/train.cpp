#include "attnet/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "attnet/rng.hpp"

namespace attnet {

SgdOptimizer::SgdOptimizer(std::vector<Param*>& params, const TrainConfig& cfg)
    : params_(params), cfg_(cfg) {
    if (!(cfg.lr > 0.0)) throw ConfigError("learning rate must be positive");
    if (cfg.momentum < 0.0 || cfg.momentum >= 1.0)
        throw ConfigError("momentum must be in [0,1)");
    if (cfg.batch_size < 1) throw ConfigError("batch size must be >= 1");
    velocity_.reserve(params_.size());
    for (Param* p : params_) velocity_.push_back(Tensor::zeros(p->value.shape()));
}

void SgdOptimizer::step() {
    for (size_t pi = 0; pi < params_.size(); ++pi) {
        Param& p = *params_[pi];
        Tensor& v = velocity_[pi];
        const int64_t n = p.value.size();
        double* w = p.value.data();
        double* g = p.grad.data();
        double* vel = v.data();
#pragma omp parallel for schedule(static) if (n > 16384)
        for (int64_t i = 0; i < n; ++i) {
            vel[i] = cfg_.momentum * vel[i] + g[i] + cfg_.weight_decay * w[i];
            w[i] -= cfg_.lr * vel[i];
            g[i] = 0.0;
        }
        for (int64_t i = 0; i < n; ++i)
            if (!std::isfinite(w[i]))
                throw NonFinite("sgd_step: parameter '" + p.name + "' became non-finite");
    }
}

Tensor gather_batch(const Tensor& images, const std::vector<int>& order, int begin, int end,
                    std::vector<int>* batch_labels, const std::vector<int>& labels) {
    const Shape4 s = as_shape4(images);
    const int64_t sample = static_cast<int64_t>(s.c) * s.h * s.w;
    Tensor batch = Tensor::uninitialized({end - begin, s.c, s.h, s.w});
    if (batch_labels) batch_labels->clear();
    for (int i = begin; i < end; ++i) {
        const int src = order[static_cast<size_t>(i)];
        std::copy(images.data() + src * sample, images.data() + (src + 1) * sample,
                  batch.data() + static_cast<int64_t>(i - begin) * sample);
        if (batch_labels) batch_labels->push_back(labels[static_cast<size_t>(src)]);
    }
    return batch;
}

namespace {

int argmax_row(const double* row, int k) {
    int best = 0;
    for (int j = 1; j < k; ++j)
        if (row[j] > row[best]) best = j;  // first index wins ties
    return best;
}

}  // namespace

Metrics train_epoch(Model& m, const DatasetBatch& data, SgdOptimizer& opt,
                    const TrainConfig& cfg, int epoch_index) {
    const int n = data.size();
    if (n == 0) throw EmptyDataset("train_epoch: empty dataset");

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    if (cfg.shuffle) {
        Rng rng(mix_streams(cfg.seed, static_cast<uint64_t>(epoch_index)));
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.below(static_cast<uint64_t>(i) + 1));
            std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
        }
    }

    Metrics metrics;
    double loss_sum = 0.0;
    int correct = 0;
    int batch_index = 0;
    for (int begin = 0; begin < n; begin += cfg.batch_size, ++batch_index) {
        const int end = std::min(n, begin + cfg.batch_size);
        std::vector<int> labels;
        Tensor batch = gather_batch(data.images, order, begin, end, &labels, data.labels);

        Tensor logits = m.forward(batch, Mode::Train);
        XentResult xent;
        try {
            xent = softmax_xent(logits, labels);
        } catch (const NonFinite& e) {
            throw NonFinite("train aborted at epoch " + std::to_string(epoch_index) + " batch " +
                            std::to_string(batch_index) + ": " + e.what());
        }
        if (!std::isfinite(xent.loss))
            throw NonFinite("train aborted at epoch " + std::to_string(epoch_index) + " batch " +
                            std::to_string(batch_index) + ": non-finite loss");

        const int k = logits.shape()[1];
        for (int i = 0; i < end - begin; ++i)
            if (argmax_row(logits.data() + static_cast<int64_t>(i) * k, k) ==
                labels[static_cast<size_t>(i)])
                ++correct;
        loss_sum += xent.loss * (end - begin);

        m.backward(xent.grad_logits);
        opt.step();
    }
    metrics.loss = loss_sum / n;
    metrics.accuracy = static_cast<double>(correct) / n;
    return metrics;
}

Metrics evaluate(Model& m, const DatasetBatch& data, int batch_size) {
    const int n = data.size();
    if (n == 0) throw EmptyDataset("evaluate: empty dataset");
    const int classes = m.spec().classes;

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);

    Metrics metrics;
    std::vector<int> class_total(static_cast<size_t>(classes), 0);
    std::vector<int> class_correct(static_cast<size_t>(classes), 0);
    double loss_sum = 0.0;
    int correct = 0;
    for (int begin = 0; begin < n; begin += batch_size) {
        const int end = std::min(n, begin + batch_size);
        std::vector<int> labels;
        Tensor batch = gather_batch(data.images, order, begin, end, &labels, data.labels);
        Tensor logits = m.forward(batch, Mode::Infer);
        loss_sum += softmax_xent(logits, labels).loss * (end - begin);
        const int k = logits.shape()[1];
        for (int i = 0; i < end - begin; ++i) {
            const int label = labels[static_cast<size_t>(i)];
            const int pred = argmax_row(logits.data() + static_cast<int64_t>(i) * k, k);
            ++class_total[static_cast<size_t>(label)];
            if (pred == label) {
                ++correct;
                ++class_correct[static_cast<size_t>(label)];
            }
        }
    }
    metrics.loss = loss_sum / n;
    metrics.accuracy = static_cast<double>(correct) / n;
    metrics.per_class_accuracy.resize(static_cast<size_t>(classes), 0.0);
    for (int c = 0; c < classes; ++c)
        metrics.per_class_accuracy[static_cast<size_t>(c)] =
            class_total[static_cast<size_t>(c)] == 0
                ? 0.0
                : static_cast<double>(class_correct[static_cast<size_t>(c)]) /
                      class_total[static_cast<size_t>(c)];
    return metrics;
}

}  // namespace attnet
