#pragma once

#include <memory>
#include <string>
#include <vector>

#include "attnet/attention.hpp"
#include "attnet/layers.hpp"

namespace attnet {

enum class Family { TinyVGG, VGG, ResNetV1, ResNetV2 };
enum class VggIntegration { M1, M2, M3 };

/// Everything needed to build one backbone. input.n is ignored (batch size
/// comes from the data); depth must be valid for the family: 16/19 for VGG,
/// 50/101/152 for the ResNets, 4 for the TinyVGG sanity model.
struct ModelSpec {
    Family family = Family::ResNetV1;
    int depth = 50;
    Shape4 input{1, 3, 80, 80};
    int classes = 7;
    ActivationKind activation{Act::ELU, 1.0};
    AttentionConfig attention;
    VggIntegration vgg_integration = VggIntegration::M2;
    int fc1 = 4096;
    int fc2 = 4096;

    /// Deterministic key=value text (sorted keys); embedded in checkpoints.
    std::string canonical_text() const;
    static ModelSpec from_canonical_text(const std::string& text);
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);
std::string attention_name(AttentionKind k);
AttentionKind attention_from_name(const std::string& name);
std::string integration_name(VggIntegration m);
VggIntegration integration_from_name(const std::string& name);

/// Residual bottleneck (1x1 reduce, 3x3, 1x1 expand) in post-activation
/// (V1) or pre-activation (V2) form. The attention block, when present,
/// gates the residual branch output immediately before the identity sum.
class Bottleneck : public Node {
public:
    Bottleneck(bool pre_activation, int in_channels, int planes, int stride, ActivationKind act,
               std::unique_ptr<Node> attention, std::string name);

    std::string name() const override { return name_; }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& upstream) override;
    void collect_params(std::vector<Param*>& out) override;
    void visit(const std::function<void(Node&)>& fn) override;

    int out_channels() const { return out_channels_; }
    // Test hook: when disabled, the identity shortcut is dropped so tests
    // can prove the residual path is live.
    void set_identity_enabled(bool enabled) { identity_enabled_ = enabled; }

private:
    std::string name_;
    bool pre_activation_;
    int in_channels_, out_channels_, stride_;
    bool identity_enabled_ = true;

    std::unique_ptr<Sequential> branch_;    // conv stack (+ attention at the tail)
    std::unique_ptr<Sequential> shortcut_;  // projection path; null = identity
    std::unique_ptr<BatchNorm2d> pre_bn_;   // V2 only
    std::unique_ptr<Activation> pre_act_;   // V2 only
    std::unique_ptr<Activation> post_act_;  // V1 only

    Tensor x_, preact_;
};

/// A built network: layer graph plus the flat parameter registry.
class Model {
public:
    Model(ModelSpec spec, std::unique_ptr<Node> root);

    const ModelSpec& spec() const { return spec_; }
    Node& root() { return *root_; }

    Tensor forward(const Tensor& x, Mode mode);
    Tensor backward(const Tensor& grad_logits);

    std::vector<Param*>& params() { return registry_; }
    int64_t count_params() const;
    void zero_grads();

    /// He fan-in init for conv/FC weights, zero biases, BN gamma=1 beta=0;
    /// fully determined by (seed, parameter index, scalar index).
    void init_params(uint64_t seed);

    int attention_block_count() const;
    void for_each_node(const std::function<void(Node&)>& fn) const;

private:
    ModelSpec spec_;
    std::unique_ptr<Node> root_;
    std::vector<Param*> registry_;
};

/// Dispatches on spec.family; throws BadDepth for an invalid depth and
/// BadReduction when the attention ratio fails at any insertion site.
Model build_model(const ModelSpec& spec);

int64_t count_params(const Model& m);

// Versioned binary checkpoint: magic "ATNG", u32 format, the canonical
// spec text, then every parameter scalar in registry order as little-
// endian doubles. Loading rejects a mismatched spec hash.
void save_checkpoint(Model& m, const std::string& path);
void load_checkpoint(Model& m, const std::string& path);
Model load_model_from_checkpoint(const std::string& path);

}  // namespace attnet
