#include "attnet/attention.hpp"

#include <cmath>

namespace attnet {

namespace {

void check_reduction(int channels, int r) {
    if (r < 1) throw BadReduction("reduction ratio must be >= 1");
    if (channels % r != 0)
        throw BadReduction("reduction " + std::to_string(r) + " does not divide " +
                           std::to_string(channels) + " channels");
}

inline double sigmoid(double v) {
    if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
}

Tensor sigmoid_tensor(const Tensor& z) {
    Tensor g = Tensor::uninitialized(z.shape());
    for (int64_t i = 0; i < z.size(); ++i) g[i] = sigmoid(z[i]);
    return g;
}

// dL/dgate for a channel gate: dg[n,c] = sum_hw up * x.
Tensor channel_gate_grad(const Tensor& up, const Tensor& x) {
    const Shape4 s = as_shape4(x);
    const int64_t plane = static_cast<int64_t>(s.h) * s.w;
    Tensor dg = Tensor::uninitialized({s.n, s.c});
#pragma omp parallel for collapse(2) schedule(static)
    for (int n = 0; n < s.n; ++n) {
        for (int c = 0; c < s.c; ++c) {
            const int64_t off = (static_cast<int64_t>(n) * s.c + c) * plane;
            double acc = 0.0;
            for (int64_t i = 0; i < plane; ++i) acc += up[off + i] * x[off + i];
            dg[static_cast<int64_t>(n) * s.c + c] = acc;
        }
    }
    return dg;
}

// Reshape helper: (N,C) gate values into the public (N,C,1,1) layout.
Tensor as_channel_gate(const Tensor& nc) {
    Tensor g = Tensor::uninitialized({nc.shape()[0], nc.shape()[1], 1, 1});
    std::copy(nc.data(), nc.data() + nc.size(), g.data());
    return g;
}

}  // namespace

int eca_kernel_size(int channels, double gamma, double b) {
    if (channels < 1) throw BadChannelCount("channel count must be >= 1");
    if (!(gamma > 0.0)) throw BadKernel("eca gamma must be positive");
    const double psi = std::abs(std::log2(static_cast<double>(channels)) / gamma + b / gamma);
    int k = static_cast<int>(std::floor(psi));
    if (k % 2 == 0) k += 1;
    return std::max(k, 1);
}

int64_t attention_param_count(AttentionKind kind, int channels, const AttentionConfig& cfg) {
    switch (kind) {
        case AttentionKind::None: return 0;
        case AttentionKind::SE: {
            check_reduction(channels, cfg.r);
            const int64_t c = channels, h = channels / cfg.r;
            return c * h + h + h * c + c;
        }
        case AttentionKind::ECA:
            return cfg.eca_fixed_k ? *cfg.eca_fixed_k
                                   : eca_kernel_size(channels, cfg.eca_gamma, cfg.eca_b);
        case AttentionKind::CBAM: {
            check_reduction(channels, cfg.r);
            const int64_t c = channels, h = channels / cfg.r;
            const int64_t s = cfg.spatial_kernel;
            return c * h + h + h * c + c + 2 * s * s + 1;
        }
    }
    return 0;
}

// -------------------------------------------------------------- SEBlock

SEBlock::SEBlock(int channels, const AttentionConfig& cfg, ActivationKind default_mlp_act)
    : channels_(channels),
      hidden_((check_reduction(channels, cfg.r), channels / cfg.r)),
      mlp_act_(cfg.mlp_activation.value_or(default_mlp_act)),
      w1_("se.fc1.w", ParamKind::DenseWeight, Tensor::zeros({channels_, hidden_})),
      b1_("se.fc1.b", ParamKind::Bias, Tensor::zeros({hidden_})),
      w2_("se.fc2.w", ParamKind::DenseWeight, Tensor::zeros({hidden_, channels_})),
      b2_("se.fc2.b", ParamKind::Bias, Tensor::zeros({channels_})) {}

Tensor SEBlock::forward(const Tensor& x, Mode) {
    const Shape4 s = as_shape4(x);
    if (s.c != channels_)
        throw ShapeMismatch("se: expected " + std::to_string(channels_) + " channels, got " +
                            std::to_string(s.c));
    Tensor gap = global_avg_pool(x);  // (N,C,1,1)
    squeezed_ = Tensor::uninitialized({s.n, channels_});
    std::copy(gap.data(), gap.data() + gap.size(), squeezed_.data());

    pre1_ = Tensor::uninitialized({s.n, hidden_});
    kernels::dense_forward(squeezed_.data(), w1_.value.data(), b1_.value.data(), pre1_.data(),
                           s.n, channels_, hidden_);
    hidden_act_ = act_forward(mlp_act_, pre1_);

    Tensor pre2 = Tensor::uninitialized({s.n, channels_});
    kernels::dense_forward(hidden_act_.data(), w2_.value.data(), b2_.value.data(), pre2.data(),
                           s.n, hidden_, channels_);
    gate_nc_ = sigmoid_tensor(pre2);
    gate_ = as_channel_gate(gate_nc_);

    x_ = x;
    cached_ = true;
    return scale_by_channel_gate(x, gate_);
}

Tensor SEBlock::backward(const Tensor& upstream) {
    take_cache();
    const Shape4 s = as_shape4(x_);
    if (!upstream.same_shape(x_)) throw ShapeMismatch("se: upstream shape mismatch");

    Tensor dgate = channel_gate_grad(upstream, x_);  // (N,C)
    // through the sigmoid
    Tensor dpre2 = Tensor::uninitialized({s.n, channels_});
    for (int64_t i = 0; i < dpre2.size(); ++i)
        dpre2[i] = dgate[i] * gate_nc_[i] * (1.0 - gate_nc_[i]);

    Tensor dh = Tensor::uninitialized({s.n, hidden_});
    kernels::dense_backward_params(hidden_act_.data(), dpre2.data(), w2_.grad.data(),
                                   b2_.grad.data(), s.n, hidden_, channels_);
    kernels::dense_backward_input(w2_.value.data(), dpre2.data(), dh.data(), s.n, hidden_,
                                  channels_);

    Tensor dpre1 = act_backward(mlp_act_, pre1_, dh);
    Tensor dsq = Tensor::uninitialized({s.n, channels_});
    kernels::dense_backward_params(squeezed_.data(), dpre1.data(), w1_.grad.data(),
                                   b1_.grad.data(), s.n, channels_, hidden_);
    kernels::dense_backward_input(w1_.value.data(), dpre1.data(), dsq.data(), s.n, channels_,
                                  hidden_);

    // dx = up * gate + dsq/(H*W) spread uniformly over each channel plane
    const int64_t plane = static_cast<int64_t>(s.h) * s.w;
    const double inv = 1.0 / static_cast<double>(plane);
    Tensor gx = Tensor::uninitialized(x_.shape());
#pragma omp parallel for collapse(2) schedule(static)
    for (int n = 0; n < s.n; ++n) {
        for (int c = 0; c < channels_; ++c) {
            const int64_t p = static_cast<int64_t>(n) * channels_ + c;
            const int64_t off = p * plane;
            const double g = gate_nc_[p];
            const double spread = dsq[p] * inv;
            for (int64_t i = 0; i < plane; ++i) gx[off + i] = upstream[off + i] * g + spread;
        }
    }
    return gx;
}

void SEBlock::collect_params(std::vector<Param*>& out) {
    out.push_back(&w1_);
    out.push_back(&b1_);
    out.push_back(&w2_);
    out.push_back(&b2_);
}

// -------------------------------------------------------------- ECABlock

ECABlock::ECABlock(int channels, const AttentionConfig& cfg)
    : channels_(channels),
      k_(cfg.eca_fixed_k ? *cfg.eca_fixed_k : eca_kernel_size(channels, cfg.eca_gamma, cfg.eca_b)),
      w_("eca.w", ParamKind::Conv1dWeight, Tensor::zeros({k_})) {
    if (k_ % 2 == 0) throw BadKernel("eca kernel size must be odd");
    if (k_ > 2 * channels_ - 1)
        throw BadKernel("eca kernel " + std::to_string(k_) + " too large for " +
                        std::to_string(channels_) + " channels");
}

Tensor ECABlock::forward(const Tensor& x, Mode) {
    const Shape4 s = as_shape4(x);
    if (s.c != channels_)
        throw ShapeMismatch("eca: expected " + std::to_string(channels_) + " channels");
    Tensor gap = global_avg_pool(x);
    squeezed_ = Tensor::uninitialized({s.n, channels_});
    std::copy(gap.data(), gap.data() + gap.size(), squeezed_.data());

    // zero-padded 1D cross-correlation along the channel axis
    const int off = (k_ - 1) / 2;
    Tensor z = Tensor::uninitialized({s.n, channels_});
    for (int n = 0; n < s.n; ++n) {
        for (int c = 0; c < channels_; ++c) {
            double acc = 0.0;
            for (int j = 0; j < k_; ++j) {
                const int src = c + j - off;
                if (src < 0 || src >= channels_) continue;
                acc += w_.value[j] * squeezed_[static_cast<int64_t>(n) * channels_ + src];
            }
            z[static_cast<int64_t>(n) * channels_ + c] = acc;
        }
    }
    gate_nc_ = sigmoid_tensor(z);
    gate_ = as_channel_gate(gate_nc_);
    x_ = x;
    cached_ = true;
    return scale_by_channel_gate(x, gate_);
}

Tensor ECABlock::backward(const Tensor& upstream) {
    take_cache();
    const Shape4 s = as_shape4(x_);
    if (!upstream.same_shape(x_)) throw ShapeMismatch("eca: upstream shape mismatch");

    Tensor dgate = channel_gate_grad(upstream, x_);
    Tensor dz = Tensor::uninitialized({s.n, channels_});
    for (int64_t i = 0; i < dz.size(); ++i)
        dz[i] = dgate[i] * gate_nc_[i] * (1.0 - gate_nc_[i]);

    const int off = (k_ - 1) / 2;
    // tap gradients: gw[j] = sum_{n,c} dz[n,c] * s[n, c+j-off]
    for (int j = 0; j < k_; ++j) {
        double acc = 0.0;
        for (int n = 0; n < s.n; ++n) {
            for (int c = 0; c < channels_; ++c) {
                const int src = c + j - off;
                if (src < 0 || src >= channels_) continue;
                acc += dz[static_cast<int64_t>(n) * channels_ + c] *
                       squeezed_[static_cast<int64_t>(n) * channels_ + src];
            }
        }
        w_.grad[j] += acc;
    }
    // transpose convolution back to the squeezed sequence
    Tensor dsq = Tensor::zeros({s.n, channels_});
    for (int n = 0; n < s.n; ++n) {
        for (int c = 0; c < channels_; ++c) {
            double acc = 0.0;
            for (int j = 0; j < k_; ++j) {
                const int dst = c - j + off;
                if (dst < 0 || dst >= channels_) continue;
                acc += w_.value[j] * dz[static_cast<int64_t>(n) * channels_ + dst];
            }
            dsq[static_cast<int64_t>(n) * channels_ + c] = acc;
        }
    }

    const int64_t plane = static_cast<int64_t>(s.h) * s.w;
    const double inv = 1.0 / static_cast<double>(plane);
    Tensor gx = Tensor::uninitialized(x_.shape());
#pragma omp parallel for collapse(2) schedule(static)
    for (int n = 0; n < s.n; ++n) {
        for (int c = 0; c < channels_; ++c) {
            const int64_t p = static_cast<int64_t>(n) * channels_ + c;
            const int64_t off2 = p * plane;
            const double g = gate_nc_[p];
            const double spread = dsq[p] * inv;
            for (int64_t i = 0; i < plane; ++i) gx[off2 + i] = upstream[off2 + i] * g + spread;
        }
    }
    return gx;
}

void ECABlock::collect_params(std::vector<Param*>& out) { out.push_back(&w_); }

// ------------------------------------------------------ CBAMChannelGate

CBAMChannelGate::CBAMChannelGate(int channels, const AttentionConfig& cfg,
                                 ActivationKind default_mlp_act)
    : channels_(channels),
      hidden_((check_reduction(channels, cfg.r), channels / cfg.r)),
      mlp_act_(cfg.mlp_activation.value_or(default_mlp_act)),
      w1_("cbam_ch.fc1.w", ParamKind::DenseWeight, Tensor::zeros({channels_, hidden_})),
      b1_("cbam_ch.fc1.b", ParamKind::Bias, Tensor::zeros({hidden_})),
      w2_("cbam_ch.fc2.w", ParamKind::DenseWeight, Tensor::zeros({hidden_, channels_})),
      b2_("cbam_ch.fc2.b", ParamKind::Bias, Tensor::zeros({channels_})) {}

Tensor CBAMChannelGate::forward(const Tensor& x, Mode) {
    in_ = as_shape4(x);
    if (in_.c != channels_)
        throw ShapeMismatch("cbam_channel: expected " + std::to_string(channels_) + " channels");

    Tensor gap = global_avg_pool(x);
    avg_ = Tensor::uninitialized({in_.n, channels_});
    std::copy(gap.data(), gap.data() + gap.size(), avg_.data());
    Tensor gmp = global_max_pool(x, &max_argmax_);
    max_ = Tensor::uninitialized({in_.n, channels_});
    std::copy(gmp.data(), gmp.data() + gmp.size(), max_.data());

    auto mlp = [&](const Tensor& s, Tensor& pre1, Tensor& h) {
        pre1 = Tensor::uninitialized({in_.n, hidden_});
        kernels::dense_forward(s.data(), w1_.value.data(), b1_.value.data(), pre1.data(), in_.n,
                               channels_, hidden_);
        h = act_forward(mlp_act_, pre1);
        Tensor out = Tensor::uninitialized({in_.n, channels_});
        kernels::dense_forward(h.data(), w2_.value.data(), b2_.value.data(), out.data(), in_.n,
                               hidden_, channels_);
        return out;
    };
    Tensor za = mlp(avg_, pre1a_, ha_);
    Tensor zm = mlp(max_, pre1m_, hm_);
    Tensor z = Tensor::uninitialized({in_.n, channels_});
    for (int64_t i = 0; i < z.size(); ++i) z[i] = za[i] + zm[i];
    gate_nc_ = sigmoid_tensor(z);
    gate_ = as_channel_gate(gate_nc_);
    cached_ = true;
    return gate_;
}

Tensor CBAMChannelGate::backward(const Tensor& upstream) {
    take_cache();
    const Shape4 us = as_shape4(upstream);
    if (us.n != in_.n || us.c != channels_ || us.h != 1 || us.w != 1)
        throw ShapeMismatch("cbam_channel: upstream must be (N,C,1,1)");

    Tensor dz = Tensor::uninitialized({in_.n, channels_});
    for (int64_t i = 0; i < dz.size(); ++i)
        dz[i] = upstream[i] * gate_nc_[i] * (1.0 - gate_nc_[i]);

    // Both branches share the MLP weights; gradients accumulate twice.
    auto mlp_backward = [&](const Tensor& s, const Tensor& pre1, const Tensor& h) {
        kernels::dense_backward_params(h.data(), dz.data(), w2_.grad.data(), b2_.grad.data(),
                                       in_.n, hidden_, channels_);
        Tensor dh = Tensor::uninitialized({in_.n, hidden_});
        kernels::dense_backward_input(w2_.value.data(), dz.data(), dh.data(), in_.n, hidden_,
                                      channels_);
        Tensor dpre1 = act_backward(mlp_act_, pre1, dh);
        kernels::dense_backward_params(s.data(), dpre1.data(), w1_.grad.data(), b1_.grad.data(),
                                       in_.n, channels_, hidden_);
        Tensor ds = Tensor::uninitialized({in_.n, channels_});
        kernels::dense_backward_input(w1_.value.data(), dpre1.data(), ds.data(), in_.n, channels_,
                                      hidden_);
        return ds;
    };
    Tensor davg = mlp_backward(avg_, pre1a_, ha_);
    Tensor dmax = mlp_backward(max_, pre1m_, hm_);

    const int64_t plane = static_cast<int64_t>(in_.h) * in_.w;
    const double inv = 1.0 / static_cast<double>(plane);
    Tensor gx = Tensor::zeros({in_.n, channels_, in_.h, in_.w});
#pragma omp parallel for collapse(2) schedule(static)
    for (int n = 0; n < in_.n; ++n) {
        for (int c = 0; c < channels_; ++c) {
            const int64_t p = static_cast<int64_t>(n) * channels_ + c;
            const int64_t off = p * plane;
            const double spread = davg[p] * inv;
            for (int64_t i = 0; i < plane; ++i) gx[off + i] = spread;
            gx[off + max_argmax_[static_cast<size_t>(p)]] += dmax[p];
        }
    }
    return gx;
}

void CBAMChannelGate::collect_params(std::vector<Param*>& out) {
    out.push_back(&w1_);
    out.push_back(&b1_);
    out.push_back(&w2_);
    out.push_back(&b2_);
}

// ------------------------------------------------------ CBAMSpatialGate

CBAMSpatialGate::CBAMSpatialGate(const AttentionConfig& cfg)
    : conv_(2,
            ConvSpec{.out_channels = 1,
                     .kh = cfg.spatial_kernel,
                     .kw = cfg.spatial_kernel,
                     .sh = 1,
                     .sw = 1,
                     .padding = Padding::Same,
                     .use_bias = true},
            "cbam_sp.conv") {
    if (cfg.spatial_kernel % 2 == 0) throw BadKernel("cbam spatial kernel must be odd");
}

Tensor CBAMSpatialGate::forward(const Tensor& x, Mode mode) {
    in_ = as_shape4(x);
    Tensor descriptor = channelwise_pool(x, &channel_argmax_);
    Tensor z = conv_.forward(descriptor, mode);
    gate_ = sigmoid_tensor(z);
    cached_ = true;
    return gate_;
}

Tensor CBAMSpatialGate::backward(const Tensor& upstream) {
    take_cache();
    const Shape4 us = as_shape4(upstream);
    if (us.n != in_.n || us.c != 1 || us.h != in_.h || us.w != in_.w)
        throw ShapeMismatch("cbam_spatial: upstream must be (N,1,H,W)");

    Tensor dz = Tensor::uninitialized(upstream.shape());
    for (int64_t i = 0; i < dz.size(); ++i)
        dz[i] = upstream[i] * gate_[i] * (1.0 - gate_[i]);
    Tensor dd = conv_.backward(dz);  // (N,2,H,W)

    const int64_t plane = static_cast<int64_t>(in_.h) * in_.w;
    const double inv_c = 1.0 / static_cast<double>(in_.c);
    Tensor gx = Tensor::uninitialized({in_.n, in_.c, in_.h, in_.w});
#pragma omp parallel for schedule(static)
    for (int n = 0; n < in_.n; ++n) {
        const double* dmean = dd.data() + static_cast<int64_t>(n) * 2 * plane;
        const double* dmax = dmean + plane;
        const int32_t* am = channel_argmax_.data() + static_cast<int64_t>(n) * plane;
        double* gn = gx.data() + static_cast<int64_t>(n) * in_.c * plane;
        for (int c = 0; c < in_.c; ++c) {
            double* gp = gn + static_cast<int64_t>(c) * plane;
            for (int64_t i = 0; i < plane; ++i)
                gp[i] = dmean[i] * inv_c + (am[i] == c ? dmax[i] : 0.0);
        }
    }
    return gx;
}

void CBAMSpatialGate::collect_params(std::vector<Param*>& out) { conv_.collect_params(out); }

// ------------------------------------------------------------ CBAMBlock

CBAMBlock::CBAMBlock(int channels, const AttentionConfig& cfg, ActivationKind default_mlp_act)
    : channel_(channels, cfg, default_mlp_act), spatial_(cfg) {}

Tensor CBAMBlock::forward(const Tensor& x, Mode mode) {
    gc_ = channel_.forward(x, mode);
    x1_ = scale_by_channel_gate(x, gc_);
    gs_ = spatial_.forward(x1_, mode);
    Tensor y = scale_by_spatial_gate(x1_, gs_);
    x_ = x;
    cached_ = true;
    return y;
}

Tensor CBAMBlock::backward(const Tensor& upstream) {
    take_cache();
    if (!upstream.same_shape(x_)) throw ShapeMismatch("cbam: upstream shape mismatch");
    const Shape4 s = as_shape4(x_);
    const int64_t plane = static_cast<int64_t>(s.h) * s.w;

    // y = x1 * gs : gradient into x1 directly and into the spatial gate
    Tensor dgs = Tensor::zeros({s.n, 1, s.h, s.w});
    Tensor dx1 = Tensor::uninitialized(x_.shape());
#pragma omp parallel for schedule(static)
    for (int n = 0; n < s.n; ++n) {
        const double* gsp = gs_.data() + static_cast<int64_t>(n) * plane;
        double* dgsp = dgs.data() + static_cast<int64_t>(n) * plane;
        for (int c = 0; c < s.c; ++c) {
            const int64_t off = (static_cast<int64_t>(n) * s.c + c) * plane;
            for (int64_t i = 0; i < plane; ++i) {
                dx1[off + i] = upstream[off + i] * gsp[i];
                dgsp[i] += upstream[off + i] * x1_[off + i];
            }
        }
    }
    {
        Tensor dx1_desc = spatial_.backward(dgs);
        for (int64_t i = 0; i < dx1.size(); ++i) dx1[i] += dx1_desc[i];
    }

    // x1 = x * gc : gradient into x directly and into the channel gate
    Tensor dgc = Tensor::uninitialized({s.n, s.c, 1, 1});
    Tensor gx = Tensor::uninitialized(x_.shape());
#pragma omp parallel for collapse(2) schedule(static)
    for (int n = 0; n < s.n; ++n) {
        for (int c = 0; c < s.c; ++c) {
            const int64_t p = static_cast<int64_t>(n) * s.c + c;
            const int64_t off = p * plane;
            const double g = gc_[p];
            double acc = 0.0;
            for (int64_t i = 0; i < plane; ++i) {
                gx[off + i] = dx1[off + i] * g;
                acc += dx1[off + i] * x_[off + i];
            }
            dgc[p] = acc;
        }
    }
    {
        Tensor dx_gate = channel_.backward(dgc);
        for (int64_t i = 0; i < gx.size(); ++i) gx[i] += dx_gate[i];
    }
    return gx;
}

void CBAMBlock::collect_params(std::vector<Param*>& out) {
    channel_.collect_params(out);
    spatial_.collect_params(out);
}

void CBAMBlock::visit(const std::function<void(Node&)>& fn) {
    fn(*this);
    channel_.visit(fn);
    spatial_.visit(fn);
}

// --------------------------------------------------------------- factory

std::unique_ptr<Node> make_attention_block(int channels, const AttentionConfig& cfg,
                                           ActivationKind default_mlp_act) {
    switch (cfg.kind) {
        case AttentionKind::None: return nullptr;
        case AttentionKind::SE: return std::make_unique<SEBlock>(channels, cfg, default_mlp_act);
        case AttentionKind::ECA: return std::make_unique<ECABlock>(channels, cfg);
        case AttentionKind::CBAM:
            return std::make_unique<CBAMBlock>(channels, cfg, default_mlp_act);
    }
    return nullptr;
}

Tensor scale_by_channel_gate(const Tensor& x, const Tensor& gate) {
    const Shape4 s = as_shape4(x);
    const Shape4 gs = as_shape4(gate);
    if (gs.n != s.n || gs.c != s.c || gs.h != 1 || gs.w != 1)
        throw ShapeMismatch("channel gate must be (N,C,1,1)");
    const int64_t plane = static_cast<int64_t>(s.h) * s.w;
    Tensor y = Tensor::uninitialized(x.shape());
#pragma omp parallel for collapse(2) schedule(static)
    for (int n = 0; n < s.n; ++n) {
        for (int c = 0; c < s.c; ++c) {
            const int64_t p = static_cast<int64_t>(n) * s.c + c;
            const int64_t off = p * plane;
            const double g = gate[p];
            for (int64_t i = 0; i < plane; ++i) y[off + i] = x[off + i] * g;
        }
    }
    return y;
}

Tensor scale_by_spatial_gate(const Tensor& x, const Tensor& gate) {
    const Shape4 s = as_shape4(x);
    const Shape4 gs = as_shape4(gate);
    if (gs.n != s.n || gs.c != 1 || gs.h != s.h || gs.w != s.w)
        throw ShapeMismatch("spatial gate must be (N,1,H,W)");
    const int64_t plane = static_cast<int64_t>(s.h) * s.w;
    Tensor y = Tensor::uninitialized(x.shape());
#pragma omp parallel for collapse(2) schedule(static)
    for (int n = 0; n < s.n; ++n) {
        for (int c = 0; c < s.c; ++c) {
            const int64_t off = (static_cast<int64_t>(n) * s.c + c) * plane;
            const double* gp = gate.data() + static_cast<int64_t>(n) * plane;
            for (int64_t i = 0; i < plane; ++i) y[off + i] = x[off + i] * gp[i];
        }
    }
    return y;
}

}  // namespace attnet
