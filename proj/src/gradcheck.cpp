#include "attnet/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "attnet/attention.hpp"
#include "attnet/layers.hpp"
#include "attnet/rng.hpp"

namespace attnet {

double finite_diff(const std::function<double(const Tensor&)>& f, const Tensor& x, int64_t i,
                   double eps) {
    if (!(eps > 0.0)) throw Error("finite_diff eps must be positive");
    if (i < 0 || i >= x.size()) throw BadAxis("finite_diff index out of range");
    Tensor plus = x;
    plus[i] += eps;
    Tensor minus = x;
    minus[i] -= eps;
    const double fp = f(plus);
    const double fm = f(minus);
    if (!std::isfinite(fp) || !std::isfinite(fm))
        throw NonFinite("finite_diff: function diverged at perturbed point");
    return (fp - fm) / (2.0 * eps);
}

GradReport check_gradients(GradCheckable& unit, double tolerance, double eps_base, int seeds,
                           int max_coords, uint64_t base_seed) {
    GradReport report;
    report.unit = unit.name();
    report.tolerance = tolerance;
    if (max_coords <= 0) {
        report.note = "zero-coordinate subsample rejected";
        report.passed = false;
        return report;
    }

    for (int s = 0; s < seeds; ++s) {
        const uint64_t seed = mix_streams(base_seed, static_cast<uint64_t>(s));
        unit.randomize(seed);
        unit.compute_gradients();
        auto slots = unit.slots();
        Rng coord_rng(mix_streams(seed, 0xC0FFEE));

        for (auto& slot : slots) {
            Tensor& v = *slot.value;
            const Tensor& g = *slot.grad;
            const int64_t size = v.size();

            std::vector<int64_t> coords(static_cast<size_t>(size));
            std::iota(coords.begin(), coords.end(), 0);
            const int64_t picks = std::min<int64_t>(size, max_coords);
            for (int64_t i = 0; i < picks; ++i) {
                const int64_t j =
                    i + static_cast<int64_t>(coord_rng.below(static_cast<uint64_t>(size - i)));
                std::swap(coords[static_cast<size_t>(i)], coords[static_cast<size_t>(j)]);
            }

            for (int64_t i = 0; i < picks; ++i) {
                const int64_t c = coords[static_cast<size_t>(i)];
                if (slot.skip_near_kink && slot.skip_near_kink(c)) {
                    ++report.n_skipped;
                    continue;
                }
                const double orig = v[c];
                const double eps = eps_base * std::max(1.0, std::abs(orig));
                v[c] = orig + eps;
                const double lp = unit.loss();
                v[c] = orig - eps;
                const double lm = unit.loss();
                v[c] = orig;
                const double numeric = (lp - lm) / (2.0 * eps);
                const double analytic = g[c];
                const double abs_err = std::abs(analytic - numeric);
                const double rel_err =
                    abs_err / std::max({std::abs(analytic), std::abs(numeric), 1e-8});
                ++report.n_checked;
                if (rel_err > report.max_rel_err) {
                    report.max_rel_err = rel_err;
                    report.worst_slot = slot.name;
                    report.worst_index = c;
                }
                report.max_abs_err = std::max(report.max_abs_err, abs_err);
            }
        }
    }
    report.passed = report.n_checked > 0 && report.max_rel_err <= tolerance;
    if (report.n_checked == 0 && report.note.empty())
        report.note = "no coordinates were checkable";
    return report;
}

// ===================================================================== units

namespace {

Tensor random_normal(const std::vector<int>& shape, Rng& rng, double scale) {
    Tensor t = Tensor::uninitialized(shape);
    for (int64_t i = 0; i < t.size(); ++i) t[i] = scale * rng.normal();
    return t;
}

// Marks coordinates involved in a near-tied max over index groups. For
// every group, if the top two values are closer than `margin`, every
// member within `margin` of the max is unsafe to difference through.
std::function<bool(int64_t)> tie_mask(const Tensor& x,
                                      const std::vector<std::vector<int64_t>>& groups,
                                      double margin = 1e-4) {
    auto mask = std::make_shared<std::vector<char>>(static_cast<size_t>(x.size()), 0);
    for (const auto& group : groups) {
        double mx = -1e300, second = -1e300;
        for (int64_t idx : group) {
            if (x[idx] > mx) {
                second = mx;
                mx = x[idx];
            } else if (x[idx] > second) {
                second = x[idx];
            }
        }
        if (group.size() > 1 && mx - second < margin) {
            for (int64_t idx : group)
                if (mx - x[idx] < margin) (*mask)[static_cast<size_t>(idx)] = 1;
        }
    }
    return [mask](int64_t i) { return (*mask)[static_cast<size_t>(i)] != 0; };
}

std::vector<std::vector<int64_t>> maxpool_windows(const Shape4& s, int wh, int ww, int sh,
                                                  int sw) {
    std::vector<std::vector<int64_t>> groups;
    const int ho = (s.h - wh) / sh + 1;
    const int wo = (s.w - ww) / sw + 1;
    const int64_t plane = static_cast<int64_t>(s.h) * s.w;
    for (int n = 0; n < s.n; ++n)
        for (int c = 0; c < s.c; ++c)
            for (int oh = 0; oh < ho; ++oh)
                for (int ow = 0; ow < wo; ++ow) {
                    std::vector<int64_t> g;
                    for (int dh = 0; dh < wh; ++dh)
                        for (int dw = 0; dw < ww; ++dw)
                            g.push_back((static_cast<int64_t>(n) * s.c + c) * plane +
                                        static_cast<int64_t>(oh * sh + dh) * s.w + (ow * sw + dw));
                    groups.push_back(std::move(g));
                }
    return groups;
}

std::vector<std::vector<int64_t>> channel_groups(const Shape4& s) {
    std::vector<std::vector<int64_t>> groups;
    const int64_t plane = static_cast<int64_t>(s.h) * s.w;
    for (int n = 0; n < s.n; ++n)
        for (int64_t i = 0; i < plane; ++i) {
            std::vector<int64_t> g;
            for (int c = 0; c < s.c; ++c)
                g.push_back((static_cast<int64_t>(n) * s.c + c) * plane + i);
            groups.push_back(std::move(g));
        }
    return groups;
}

std::vector<std::vector<int64_t>> plane_groups(const Shape4& s) {
    std::vector<std::vector<int64_t>> groups;
    const int64_t plane = static_cast<int64_t>(s.h) * s.w;
    for (int n = 0; n < s.n; ++n)
        for (int c = 0; c < s.c; ++c) {
            std::vector<int64_t> g;
            const int64_t off = (static_cast<int64_t>(n) * s.c + c) * plane;
            for (int64_t i = 0; i < plane; ++i) g.push_back(off + i);
            groups.push_back(std::move(g));
        }
    return groups;
}

/// Wraps a Node: params and input are randomized per seed, loss is the sum
/// of forward outputs (optionally weighted by a fixed random cotangent, for
/// units whose plain-sum gradients are degenerate — batchnorm's gamma
/// gradient vanishes identically under a uniform upstream). Linear units
/// may randomize with positive support, which keeps every gradient
/// coordinate well away from the finite-difference noise floor without
/// touching any sign-dependent code path.
class NodeUnit : public GradCheckable {
public:
    using KinkMaskFn = std::function<std::function<bool(int64_t)>(const Tensor&)>;

    enum class RandomStyle { Normal, Positive };
    enum class LossStyle { PlainSum, RandomCotangent };

    NodeUnit(std::string unit_name, double tol, std::vector<int> x_shape,
             std::function<std::unique_ptr<Node>()> make, KinkMaskFn kink_mask = nullptr,
             double grad_scale = 1.0, RandomStyle random_style = RandomStyle::Normal,
             LossStyle loss_style = LossStyle::PlainSum)
        : name_(std::move(unit_name)),
          tol_(tol),
          x_shape_(std::move(x_shape)),
          make_(std::move(make)),
          kink_mask_(std::move(kink_mask)),
          grad_scale_(grad_scale),
          random_style_(random_style),
          loss_style_(loss_style) {}

    std::string name() const override { return name_; }
    double tolerance() const override { return tol_; }

    void randomize(uint64_t seed) override {
        node_ = make_();
        params_.clear();
        node_->collect_params(params_);
        Rng rng(mix_streams(seed, 17));
        auto draw = [&] {
            return random_style_ == RandomStyle::Positive ? 0.3 + rng.uniform()
                                                          : 0.5 * rng.normal();
        };
        for (Param* p : params_) {
            const double offset = (p->kind == ParamKind::BnGamma) ? 1.0 : 0.0;
            for (int64_t i = 0; i < p->value.size(); ++i) p->value[i] = offset + draw();
        }
        x_ = Tensor::uninitialized(x_shape_);
        for (int64_t i = 0; i < x_.size(); ++i)
            x_[i] = random_style_ == RandomStyle::Positive ? 0.5 + rng.uniform() : rng.normal();
        x_skip_ = kink_mask_ ? kink_mask_(x_) : nullptr;
        if (loss_style_ == LossStyle::RandomCotangent) {
            Tensor probe = node_->forward(x_, Mode::Train);
            cotangent_ = random_normal(probe.shape(), rng, 1.0);
        }
    }

    double loss() override {
        Tensor y = node_->forward(x_, Mode::Train);
        if (loss_style_ == LossStyle::PlainSum) return sum(y);
        double acc = 0.0;
        for (int64_t i = 0; i < y.size(); ++i) acc += cotangent_[i] * y[i];
        return acc;
    }

    void compute_gradients() override {
        for (Param* p : params_) p->grad.fill(0.0);
        Tensor y = node_->forward(x_, Mode::Train);
        gx_ = node_->backward(loss_style_ == LossStyle::PlainSum ? Tensor::full(y.shape(), 1.0)
                                                                 : cotangent_);
        if (grad_scale_ != 1.0) {
            for (int64_t i = 0; i < gx_.size(); ++i) gx_[i] *= grad_scale_;
            for (Param* p : params_)
                for (int64_t i = 0; i < p->grad.size(); ++i) p->grad[i] *= grad_scale_;
        }
    }

    std::vector<GradSlot> slots() override {
        std::vector<GradSlot> out;
        out.push_back({"x", &x_, &gx_, x_skip_});
        for (Param* p : params_) out.push_back({p->name, &p->value, &p->grad, nullptr});
        return out;
    }

protected:
    std::string name_;
    double tol_;
    std::vector<int> x_shape_;
    std::function<std::unique_ptr<Node>()> make_;
    KinkMaskFn kink_mask_;
    double grad_scale_;
    RandomStyle random_style_;
    LossStyle loss_style_;

    std::unique_ptr<Node> node_;
    std::vector<Param*> params_;
    Tensor x_, gx_, cotangent_;
    std::function<bool(int64_t)> x_skip_;
};

/// SE with a ReLU excitation MLP: redraws until every hidden pre-activation
/// sits clear of the kink so central differences stay valid.
class SeReluUnit : public NodeUnit {
public:
    SeReluUnit()
        : NodeUnit("se_block_relu_mlp", 1e-5, {2, 8, 5, 5}, [] {
              AttentionConfig cfg;
              cfg.kind = AttentionKind::SE;
              cfg.r = 4;
              cfg.mlp_activation = ActivationKind{Act::ReLU, 1.0};
              return std::make_unique<SEBlock>(8, cfg, ActivationKind{Act::ReLU, 1.0});
          }) {}

    void randomize(uint64_t seed) override {
        for (uint64_t attempt = 0;; ++attempt) {
            NodeUnit::randomize(mix_streams(seed, attempt));
            auto* se = dynamic_cast<SEBlock*>(node_.get());
            const Shape4 s = as_shape4(x_);
            Tensor gap = global_avg_pool(x_);
            Tensor squeezed({s.n, s.c}, std::vector<double>(gap.data(), gap.data() + gap.size()));
            const int hidden = se->fc1_b().value.dim(0);
            Tensor pre1 = Tensor::uninitialized({s.n, hidden});
            kernels::dense_forward(squeezed.data(), se->fc1_w().value.data(),
                                   se->fc1_b().value.data(), pre1.data(), s.n, s.c, hidden);
            double closest = 1e300;
            for (int64_t i = 0; i < pre1.size(); ++i)
                closest = std::min(closest, std::abs(pre1[i]));
            if (closest >= 1e-3) return;
        }
    }
};

class SoftmaxXentUnit : public GradCheckable {
public:
    std::string name() const override { return "softmax_xent"; }
    double tolerance() const override { return 1e-7; }

    void randomize(uint64_t seed) override {
        Rng rng(mix_streams(seed, 23));
        logits_ = random_normal({4, 7}, rng, 2.0);
        labels_ = {3, 0, 6, 1};
    }

    double loss() override { return softmax_xent(logits_, labels_).loss; }

    void compute_gradients() override { grad_ = softmax_xent(logits_, labels_).grad_logits; }

    std::vector<GradSlot> slots() override { return {{"logits", &logits_, &grad_, nullptr}}; }

private:
    Tensor logits_, grad_;
    std::vector<int> labels_;
};

class ChannelwisePoolUnit : public GradCheckable {
public:
    std::string name() const override { return "channelwise_pool"; }
    double tolerance() const override { return 1e-6; }

    void randomize(uint64_t seed) override {
        Rng rng(mix_streams(seed, 29));
        x_ = random_normal({2, 5, 4, 4}, rng, 1.0);
        skip_ = tie_mask(x_, channel_groups(as_shape4(x_)));
    }

    double loss() override { return sum(channelwise_pool(x_)); }

    void compute_gradients() override {
        const Shape4 s = as_shape4(x_);
        std::vector<int32_t> argmax;
        channelwise_pool(x_, &argmax);
        // d(sum)/dx: 1/C through the mean plane, 1 at the per-pixel argmax.
        gx_ = Tensor::full(x_.shape(), 1.0 / s.c);
        const int64_t plane = static_cast<int64_t>(s.h) * s.w;
        for (int n = 0; n < s.n; ++n)
            for (int64_t i = 0; i < plane; ++i) {
                const int32_t c = argmax[static_cast<size_t>(n) * plane + i];
                gx_[(static_cast<int64_t>(n) * s.c + c) * plane + i] += 1.0;
            }
    }

    std::vector<GradSlot> slots() override { return {{"x", &x_, &gx_, skip_}}; }

private:
    Tensor x_, gx_;
    std::function<bool(int64_t)> skip_;
};

class GlobalMaxPoolUnit : public GradCheckable {
public:
    std::string name() const override { return "global_max_pool"; }
    double tolerance() const override { return 1e-6; }

    void randomize(uint64_t seed) override {
        Rng rng(mix_streams(seed, 31));
        x_ = random_normal({2, 4, 5, 5}, rng, 1.0);
        skip_ = tie_mask(x_, plane_groups(as_shape4(x_)));
    }

    double loss() override { return sum(global_max_pool(x_)); }

    void compute_gradients() override {
        const Shape4 s = as_shape4(x_);
        std::vector<int32_t> argmax;
        global_max_pool(x_, &argmax);
        gx_ = Tensor::zeros(x_.shape());
        const int64_t plane = static_cast<int64_t>(s.h) * s.w;
        for (int64_t p = 0; p < static_cast<int64_t>(s.n) * s.c; ++p)
            gx_[p * plane + argmax[static_cast<size_t>(p)]] = 1.0;
    }

    std::vector<GradSlot> slots() override { return {{"x", &x_, &gx_, skip_}}; }

private:
    Tensor x_, gx_;
    std::function<bool(int64_t)> skip_;
};

/// Two convolutions, one SE block, and a classifier head, differentiated
/// end to end through the cross-entropy loss.
class TinyModelUnit : public GradCheckable {
public:
    std::string name() const override { return "tiny_conv_se_model"; }
    double tolerance() const override { return 1e-4; }

    void randomize(uint64_t seed) override {
        const ActivationKind elu{Act::ELU, 1.0};
        net_ = std::make_unique<Sequential>("tiny");
        net_->add(std::make_unique<Conv2d>(
            3, ConvSpec{.out_channels = 4, .kh = 3, .kw = 3, .sh = 1, .sw = 1,
                        .padding = Padding::Same, .use_bias = true},
            "c1"));
        net_->add(std::make_unique<Activation>(elu));
        net_->add(std::make_unique<Conv2d>(
            4, ConvSpec{.out_channels = 8, .kh = 3, .kw = 3, .sh = 2, .sw = 2,
                        .padding = Padding::Same, .use_bias = true},
            "c2"));
        net_->add(std::make_unique<Activation>(elu));
        AttentionConfig cfg;
        cfg.kind = AttentionKind::SE;
        cfg.r = 4;
        net_->add(std::make_unique<SEBlock>(8, cfg, elu));
        net_->add(std::make_unique<Flatten>());
        net_->add(std::make_unique<Dense>(8 * 5 * 5, 7, true, "head"));

        params_.clear();
        net_->collect_params(params_);
        Rng rng(mix_streams(seed, 37));
        for (Param* p : params_) {
            const double scale = p->value.rank() >= 2 ? 0.3 : 0.1;
            for (int64_t i = 0; i < p->value.size(); ++i) p->value[i] = scale * rng.normal();
        }
        x_ = random_normal({2, 3, 10, 10}, rng, 1.0);
        labels_ = {2, 5};
    }

    double loss() override {
        return softmax_xent(net_->forward(x_, Mode::Train), labels_).loss;
    }

    void compute_gradients() override {
        for (Param* p : params_) p->grad.fill(0.0);
        Tensor logits = net_->forward(x_, Mode::Train);
        gx_ = net_->backward(softmax_xent(logits, labels_).grad_logits);
    }

    std::vector<GradSlot> slots() override {
        std::vector<GradSlot> out;
        out.push_back({"x", &x_, &gx_, nullptr});
        for (Param* p : params_) out.push_back({p->name, &p->value, &p->grad, nullptr});
        return out;
    }

private:
    std::unique_ptr<Sequential> net_;
    std::vector<Param*> params_;
    Tensor x_, gx_;
    std::vector<int> labels_;
};

std::function<std::unique_ptr<Node>()> make_act_node(Act tag) {
    return [tag] { return std::make_unique<Activation>(ActivationKind{tag, 1.0}); };
}

NodeUnit::KinkMaskFn origin_kink_mask() {
    return [](const Tensor& x) -> std::function<bool(int64_t)> {
        std::vector<char> mask(static_cast<size_t>(x.size()), 0);
        for (int64_t i = 0; i < x.size(); ++i)
            if (std::abs(x[i]) < 1e-4) mask[static_cast<size_t>(i)] = 1;
        auto shared = std::make_shared<std::vector<char>>(std::move(mask));
        return [shared](int64_t i) { return (*shared)[static_cast<size_t>(i)] != 0; };
    };
}

}  // namespace

std::vector<std::unique_ptr<GradCheckable>> make_gradcheck_units(GradScope scope) {
    std::vector<std::unique_ptr<GradCheckable>> units;
    const ActivationKind elu{Act::ELU, 1.0};

    switch (scope) {
        case GradScope::Layers: {
            units.push_back(std::make_unique<NodeUnit>("act_relu", 1e-7, std::vector<int>{64},
                                                       make_act_node(Act::ReLU),
                                                       origin_kink_mask()));
            units.push_back(std::make_unique<NodeUnit>("act_elu", 1e-7, std::vector<int>{64},
                                                       make_act_node(Act::ELU),
                                                       origin_kink_mask()));
            units.push_back(std::make_unique<NodeUnit>("act_selu", 1e-7, std::vector<int>{64},
                                                       make_act_node(Act::SELU),
                                                       origin_kink_mask()));
            units.push_back(std::make_unique<NodeUnit>("act_sigmoid", 1e-7, std::vector<int>{64},
                                                       make_act_node(Act::Sigmoid)));
            units.push_back(std::make_unique<NodeUnit>(
                "dense", 1e-7, std::vector<int>{4, 8},
                [] { return std::make_unique<Dense>(8, 5); }, nullptr, 1.0,
                NodeUnit::RandomStyle::Positive));
            units.push_back(std::make_unique<NodeUnit>(
                "conv_valid", 1e-6, std::vector<int>{2, 3, 6, 6},
                [] {
                    return std::make_unique<Conv2d>(
                        3, ConvSpec{.out_channels = 4, .kh = 3, .kw = 3, .sh = 1, .sw = 1,
                                    .padding = Padding::Valid, .use_bias = true});
                },
                nullptr, 1.0, NodeUnit::RandomStyle::Positive));
            units.push_back(std::make_unique<NodeUnit>(
                "conv_same_stride2", 1e-6, std::vector<int>{2, 3, 7, 7},
                [] {
                    return std::make_unique<Conv2d>(
                        3, ConvSpec{.out_channels = 4, .kh = 3, .kw = 3, .sh = 2, .sw = 2,
                                    .padding = Padding::Same, .use_bias = true});
                },
                nullptr, 1.0, NodeUnit::RandomStyle::Positive));
            units.push_back(std::make_unique<NodeUnit>(
                "conv_1x1_nobias", 1e-6, std::vector<int>{2, 4, 5, 5},
                [] {
                    return std::make_unique<Conv2d>(
                        4, ConvSpec{.out_channels = 3, .kh = 1, .kw = 1, .sh = 1, .sw = 1,
                                    .padding = Padding::Valid, .use_bias = false});
                },
                nullptr, 1.0, NodeUnit::RandomStyle::Positive));
            units.push_back(std::make_unique<NodeUnit>(
                "maxpool_2x2", 1e-6, std::vector<int>{2, 2, 6, 6},
                [] { return std::make_unique<MaxPool2d>(2, 2, 2, 2); },
                [](const Tensor& x) { return tie_mask(x, maxpool_windows(as_shape4(x), 2, 2, 2, 2)); }));
            units.push_back(std::make_unique<NodeUnit>(
                "maxpool_3x3_overlap", 1e-6, std::vector<int>{1, 2, 7, 7},
                [] { return std::make_unique<MaxPool2d>(3, 3, 2, 2); },
                [](const Tensor& x) { return tie_mask(x, maxpool_windows(as_shape4(x), 3, 3, 2, 2)); }));
            units.push_back(std::make_unique<NodeUnit>("global_avg_pool", 1e-7,
                                                       std::vector<int>{2, 3, 4, 4},
                                                       [] { return std::make_unique<GlobalAvgPool>(); }));
            units.push_back(std::make_unique<GlobalMaxPoolUnit>());
            units.push_back(std::make_unique<ChannelwisePoolUnit>());
            units.push_back(std::make_unique<NodeUnit>(
                "batchnorm_train", 1e-5, std::vector<int>{3, 4, 5, 5},
                [] { return std::make_unique<BatchNorm2d>(4); }, nullptr, 1.0,
                NodeUnit::RandomStyle::Normal, NodeUnit::LossStyle::RandomCotangent));
            units.push_back(std::make_unique<SoftmaxXentUnit>());
            break;
        }
        case GradScope::Attention: {
            units.push_back(std::make_unique<NodeUnit>(
                "se_block", 1e-5, std::vector<int>{2, 8, 5, 5}, [elu] {
                    AttentionConfig cfg;
                    cfg.kind = AttentionKind::SE;
                    cfg.r = 4;
                    return std::make_unique<SEBlock>(8, cfg, elu);
                }));
            units.push_back(std::make_unique<SeReluUnit>());
            units.push_back(std::make_unique<NodeUnit>(
                "eca_adaptive", 1e-5, std::vector<int>{2, 16, 4, 4}, [] {
                    AttentionConfig cfg;
                    cfg.kind = AttentionKind::ECA;
                    return std::make_unique<ECABlock>(16, cfg);
                }));
            units.push_back(std::make_unique<NodeUnit>(
                "eca_fixed_k5", 1e-5, std::vector<int>{2, 8, 4, 4}, [] {
                    AttentionConfig cfg;
                    cfg.kind = AttentionKind::ECA;
                    cfg.eca_fixed_k = 5;
                    return std::make_unique<ECABlock>(8, cfg);
                }));
            units.push_back(std::make_unique<NodeUnit>(
                "cbam_channel", 1e-5, std::vector<int>{2, 8, 5, 5},
                [elu] {
                    AttentionConfig cfg;
                    cfg.kind = AttentionKind::CBAM;
                    cfg.r = 2;
                    return std::make_unique<CBAMChannelGate>(8, cfg, elu);
                },
                [](const Tensor& x) { return tie_mask(x, plane_groups(as_shape4(x))); }));
            units.push_back(std::make_unique<NodeUnit>(
                "cbam_spatial", 1e-5, std::vector<int>{2, 3, 6, 6},
                [elu] {
                    AttentionConfig cfg;
                    cfg.kind = AttentionKind::CBAM;
                    return std::make_unique<CBAMSpatialGate>(cfg);
                },
                [](const Tensor& x) { return tie_mask(x, channel_groups(as_shape4(x))); }));
            units.push_back(std::make_unique<NodeUnit>(
                "cbam_block", 1e-5, std::vector<int>{2, 8, 6, 6},
                [elu] {
                    AttentionConfig cfg;
                    cfg.kind = AttentionKind::CBAM;
                    cfg.r = 4;
                    return std::make_unique<CBAMBlock>(8, cfg, elu);
                },
                [](const Tensor& x) {
                    const Shape4 s = as_shape4(x);
                    auto groups = plane_groups(s);
                    auto channel = channel_groups(s);
                    groups.insert(groups.end(), channel.begin(), channel.end());
                    return tie_mask(x, groups);
                }));
            break;
        }
        case GradScope::Model: {
            units.push_back(std::make_unique<TinyModelUnit>());
            break;
        }
    }
    return units;
}

std::vector<GradReport> run_gradcheck(GradScope scope, uint64_t seed, int seeds_per_unit,
                                      int max_coords) {
    std::vector<GradReport> reports;
    for (auto& unit : make_gradcheck_units(scope))
        reports.push_back(check_gradients(*unit, unit->tolerance(), 1e-6, seeds_per_unit,
                                          max_coords, seed));
    return reports;
}

std::unique_ptr<GradCheckable> make_fault_injected_unit(double factor) {
    return std::make_unique<NodeUnit>(
        "dense_fault_injected", 1e-7, std::vector<int>{4, 8},
        [] { return std::make_unique<Dense>(8, 5); }, nullptr, factor);
}

}  // namespace attnet
