#pragma once

#include <memory>
#include <optional>

#include "attnet/layers.hpp"

namespace attnet {

enum class AttentionKind { None, SE, ECA, CBAM };

/// Configuration shared by every attention block. r is the excitation
/// bottleneck divisor (SE/CBAM); the ECA kernel either comes from the
/// adaptive rule (gamma, b) or is pinned by eca_fixed_k; spatial_kernel is
/// the CBAM spatial conv size. mlp_activation overrides the hidden
/// activation of SE/CBAM excitation MLPs (defaults to the model's global
/// activation).
struct AttentionConfig {
    AttentionKind kind = AttentionKind::None;
    int r = 16;
    double eca_gamma = 2.0;
    double eca_b = 1.0;
    std::optional<int> eca_fixed_k;
    int spatial_kernel = 7;
    std::optional<ActivationKind> mlp_activation;
};

/// Adaptive 1D kernel size from the channel count: psi = |log2(C)/gamma +
/// b/gamma|, floored and bumped to the next odd integer, never below 1.
int eca_kernel_size(int channels, double gamma, double b);

/// Number of learnable scalars one block adds at a site with C channels.
/// SE: two biased FC layers; ECA: k conv taps (no bias); CBAM: the shared
/// MLP counted once plus the 2-in/1-out spatial conv with bias.
int64_t attention_param_count(AttentionKind kind, int channels, const AttentionConfig& cfg);

/// Squeeze-and-excitation: gate = sigmoid(FC2(act(FC1(GAP(x))))), applied
/// multiplicatively per channel.
class SEBlock : public Node {
public:
    SEBlock(int channels, const AttentionConfig& cfg, ActivationKind default_mlp_act);

    std::string name() const override { return "se"; }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& upstream) override;
    void collect_params(std::vector<Param*>& out) override;
    bool is_attention_block() const override { return true; }

    /// Last channel gate, shape (N,C,1,1); entries strictly in (0,1).
    const Tensor& gate() const { return gate_; }

    Param& fc1_w() { return w1_; }
    Param& fc1_b() { return b1_; }
    Param& fc2_w() { return w2_; }
    Param& fc2_b() { return b2_; }

private:
    int channels_, hidden_;
    ActivationKind mlp_act_;
    Param w1_, b1_, w2_, b2_;
    Tensor x_, squeezed_, pre1_, hidden_act_, gate_nc_, gate_;
};

/// Efficient channel attention: a k-tap 1D convolution (zero padded, no
/// bias) over the squeezed channel sequence, then a sigmoid gate. No
/// dimensionality reduction anywhere.
class ECABlock : public Node {
public:
    ECABlock(int channels, const AttentionConfig& cfg);

    std::string name() const override { return "eca"; }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& upstream) override;
    void collect_params(std::vector<Param*>& out) override;
    bool is_attention_block() const override { return true; }

    const Tensor& gate() const { return gate_; }
    int kernel_size() const { return k_; }
    Param& conv_w() { return w_; }

private:
    int channels_, k_;
    Param w_;
    Tensor x_, squeezed_, gate_nc_, gate_;
};

/// CBAM channel gate: sigmoid(MLP(GAP(x)) + MLP(GMP(x))) with one shared
/// two-layer MLP. forward() returns the gate itself, shape (N,C,1,1).
class CBAMChannelGate : public Node {
public:
    CBAMChannelGate(int channels, const AttentionConfig& cfg, ActivationKind default_mlp_act);

    std::string name() const override { return "cbam_channel"; }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& upstream) override;
    void collect_params(std::vector<Param*>& out) override;

    const Tensor& gate() const { return gate_; }
    Param& fc1_w() { return w1_; }
    Param& fc1_b() { return b1_; }
    Param& fc2_w() { return w2_; }
    Param& fc2_b() { return b2_; }

private:
    int channels_, hidden_;
    ActivationKind mlp_act_;
    Param w1_, b1_, w2_, b2_;
    Shape4 in_{};
    Tensor avg_, pre1a_, ha_, max_, pre1m_, hm_, gate_nc_, gate_;
    std::vector<int32_t> max_argmax_;
};

/// CBAM spatial gate: sigmoid(conv7x7(channelwise mean/max descriptor)),
/// shape (N,1,H,W).
class CBAMSpatialGate : public Node {
public:
    explicit CBAMSpatialGate(const AttentionConfig& cfg);

    std::string name() const override { return "cbam_spatial"; }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& upstream) override;
    void collect_params(std::vector<Param*>& out) override;

    const Tensor& gate() const { return gate_; }
    Conv2d& conv() { return conv_; }

private:
    Conv2d conv_;
    Shape4 in_{};
    Tensor gate_;
    std::vector<int32_t> channel_argmax_;
};

/// Full CBAM: channel gating followed by spatial gating.
class CBAMBlock : public Node {
public:
    CBAMBlock(int channels, const AttentionConfig& cfg, ActivationKind default_mlp_act);

    std::string name() const override { return "cbam"; }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& upstream) override;
    void collect_params(std::vector<Param*>& out) override;
    void visit(const std::function<void(Node&)>& fn) override;
    bool is_attention_block() const override { return true; }

    const Tensor& channel_gate() const { return channel_.gate(); }
    const Tensor& spatial_gate() const { return spatial_.gate(); }
    CBAMChannelGate& channel() { return channel_; }
    CBAMSpatialGate& spatial() { return spatial_; }

private:
    CBAMChannelGate channel_;
    CBAMSpatialGate spatial_;
    Tensor x_, gc_, x1_, gs_;
};

/// Builds the configured block for a site with `channels` channels;
/// returns nullptr for AttentionKind::None.
std::unique_ptr<Node> make_attention_block(int channels, const AttentionConfig& cfg,
                                           ActivationKind default_mlp_act);

// Broadcast multiplies used by the blocks (and handy in tests):
// gate (N,C,1,1) over (N,C,H,W), and gate (N,1,H,W) over (N,C,H,W).
Tensor scale_by_channel_gate(const Tensor& x, const Tensor& gate);
Tensor scale_by_spatial_gate(const Tensor& x, const Tensor& gate);

}  // namespace attnet
