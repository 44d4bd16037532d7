#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "attnet/activations.hpp"
#include "attnet/kernels.hpp"
#include "attnet/tensor.hpp"

namespace attnet {

enum class Mode { Train, Infer };

enum class ParamKind { ConvWeight, DenseWeight, Conv1dWeight, Bias, BnGamma, BnBeta };

/// One learnable tensor paired with its gradient buffer (same shape,
/// zeroed between optimizer steps).
struct Param {
    std::string name;
    ParamKind kind;
    Tensor value;
    Tensor grad;

    Param(std::string n, ParamKind k, Tensor v)
        : name(std::move(n)), kind(k), value(std::move(v)), grad(Tensor::zeros(value.shape())) {}
};

enum class Padding { Same, Valid, Explicit };

struct ConvSpec {
    int out_channels = 1;
    int kh = 3, kw = 3;
    int sh = 1, sw = 1;
    Padding padding = Padding::Same;
    int ph = 0, pw = 0;  // used when padding == Explicit
    bool use_bias = true;
};

/// A layer in the computation graph. forward() caches whatever backward()
/// needs; backward() consumes the cache (a second backward without a fresh
/// forward throws StaleCache), accumulates parameter gradients, and returns
/// the gradient with respect to the layer input.
class Node {
public:
    virtual ~Node() = default;
    virtual std::string name() const = 0;
    virtual Tensor forward(const Tensor& x, Mode mode) = 0;
    virtual Tensor backward(const Tensor& upstream) = 0;
    virtual void collect_params(std::vector<Param*>& out) { (void)out; }
    virtual void visit(const std::function<void(Node&)>& fn) { fn(*this); }
    virtual bool is_attention_block() const { return false; }

protected:
    bool cached_ = false;
    void take_cache();  // throws StaleCache when no forward cache is live
};

class Conv2d : public Node {
public:
    Conv2d(int in_channels, const ConvSpec& spec, std::string name = "conv");

    std::string name() const override { return name_; }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& upstream) override;
    void collect_params(std::vector<Param*>& out) override;

    Param& weights() { return w_; }
    Param* bias() { return bias_ ? &*bias_ : nullptr; }
    const ConvSpec& spec() const { return spec_; }

private:
    kernels::Conv2dDims dims_for(const Shape4& in) const;

    std::string name_;
    int in_channels_;
    ConvSpec spec_;
    Param w_;
    std::optional<Param> bias_;
    Tensor x_;
    kernels::Conv2dDims last_dims_{};
};

class Dense : public Node {
public:
    Dense(int in_features, int out_features, bool use_bias = true, std::string name = "fc");

    std::string name() const override { return name_; }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& upstream) override;
    void collect_params(std::vector<Param*>& out) override;

    Param& weights() { return w_; }
    Param* bias() { return bias_ ? &*bias_ : nullptr; }

private:
    std::string name_;
    int in_features_, out_features_;
    Param w_;
    std::optional<Param> bias_;
    Tensor x_;
};

class Activation : public Node {
public:
    explicit Activation(ActivationKind kind) : kind_(kind) {}

    std::string name() const override { return "act_" + act_name(kind_); }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& upstream) override;

private:
    ActivationKind kind_;
    Tensor x_;
};

class MaxPool2d : public Node {
public:
    MaxPool2d(int window_h, int window_w, int stride_h, int stride_w);

    std::string name() const override { return "maxpool"; }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& upstream) override;

private:
    int wh_, ww_, sh_, sw_;
    Shape4 in_{};
    int ho_ = 0, wo_ = 0;
    std::vector<int32_t> argmax_;
};

/// (N,C,H,W) -> (N,C,1,1) spatial mean.
class GlobalAvgPool : public Node {
public:
    std::string name() const override { return "gap"; }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& upstream) override;

private:
    Shape4 in_{};
};

class Flatten : public Node {
public:
    std::string name() const override { return "flatten"; }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& upstream) override;

private:
    std::vector<int> in_shape_;
};

/// Per-channel batch normalization over (N,H,W). Running statistics are
/// internal state, not parameters; momentum 0.9, eps 1e-5.
class BatchNorm2d : public Node {
public:
    explicit BatchNorm2d(int channels, std::string name = "bn");

    std::string name() const override { return name_; }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& upstream) override;
    void collect_params(std::vector<Param*>& out) override;

    Param& gamma() { return gamma_; }
    Param& beta() { return beta_; }
    Tensor& running_mean() { return running_mean_; }
    Tensor& running_var() { return running_var_; }

    static constexpr double kEps = 1e-5;
    static constexpr double kMomentum = 0.9;

private:
    std::string name_;
    int channels_;
    Param gamma_, beta_;
    Tensor running_mean_, running_var_;
    // train-mode cache
    Mode cached_mode_ = Mode::Train;
    Tensor xhat_;
    std::vector<double> inv_std_;
    Shape4 in_{};
};

/// Runs children in order; owns them.
class Sequential : public Node {
public:
    explicit Sequential(std::string name = "seq") : name_(std::move(name)) {}

    void add(std::unique_ptr<Node> node) { children_.push_back(std::move(node)); }
    size_t size() const { return children_.size(); }
    Node& child(size_t i) { return *children_[i]; }

    std::string name() const override { return name_; }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& upstream) override;
    void collect_params(std::vector<Param*>& out) override;
    void visit(const std::function<void(Node&)>& fn) override;

private:
    std::string name_;
    std::vector<std::unique_ptr<Node>> children_;
};

// ---- Free-standing ops used by attention blocks and tests ----

// Per-channel spatial mean, (N,C,H,W) -> (N,C,1,1).
Tensor global_avg_pool(const Tensor& x);
// Per-channel spatial max; optionally records the in-plane argmax
// (first-index tie-break) for gradient routing.
Tensor global_max_pool(const Tensor& x, std::vector<int32_t>* argmax = nullptr);
// (N,C,H,W) -> (N,2,H,W): plane 0 mean over channels, plane 1 max over
// channels (argmax = winning channel per pixel).
Tensor channelwise_pool(const Tensor& x, std::vector<int32_t>* argmax = nullptr);

struct XentResult {
    double loss = 0.0;
    Tensor grad_logits;
};

// Mean cross-entropy over the batch with log-sum-exp stabilization;
// gradient is (softmax - onehot)/N.
XentResult softmax_xent(const Tensor& logits, const std::vector<int>& labels);

}  // namespace attnet
