#include "attnet/layers.hpp"

#include <algorithm>
#include <cmath>

namespace attnet {

void Node::take_cache() {
    if (!cached_) throw StaleCache("backward called without a matching forward");
    cached_ = false;
}

// ---------------------------------------------------------------- Conv2d

Conv2d::Conv2d(int in_channels, const ConvSpec& spec, std::string name)
    : name_(std::move(name)),
      in_channels_(in_channels),
      spec_(spec),
      w_(name_ + ".w", ParamKind::ConvWeight,
         Tensor::zeros({spec.out_channels, in_channels, spec.kh, spec.kw})) {
    if (spec.kh < 1 || spec.kw < 1 || spec.sh < 1 || spec.sw < 1)
        throw Error("conv kernel and stride must be >= 1");
    if (spec.padding == Padding::Same && (spec.kh % 2 == 0 || spec.kw % 2 == 0))
        throw Error("same padding requires odd kernel sizes");
    if (spec.use_bias)
        bias_.emplace(name_ + ".b", ParamKind::Bias, Tensor::zeros({spec.out_channels}));
}

kernels::Conv2dDims Conv2d::dims_for(const Shape4& in) const {
    kernels::Conv2dDims d;
    d.n = in.n;
    d.c_in = in.c;
    d.h = in.h;
    d.w = in.w;
    d.c_out = spec_.out_channels;
    d.kh = spec_.kh;
    d.kw = spec_.kw;
    d.sh = spec_.sh;
    d.sw = spec_.sw;
    switch (spec_.padding) {
        case Padding::Same:
            d.ph = (spec_.kh - 1) / 2;
            d.pw = (spec_.kw - 1) / 2;
            break;
        case Padding::Valid:
            d.ph = d.pw = 0;
            break;
        case Padding::Explicit:
            d.ph = spec_.ph;
            d.pw = spec_.pw;
            break;
    }
    d.h_out = (in.h + 2 * d.ph - spec_.kh) / spec_.sh + 1;
    d.w_out = (in.w + 2 * d.pw - spec_.kw) / spec_.sw + 1;
    if (d.h_out < 1 || d.w_out < 1)
        throw DegenerateOutput(name_ + ": output would be empty for input " +
                               std::to_string(in.h) + "x" + std::to_string(in.w));
    return d;
}

Tensor Conv2d::forward(const Tensor& x, Mode) {
    const Shape4 in = as_shape4(x);
    if (in.c != in_channels_)
        throw ShapeMismatch(name_ + ": expected " + std::to_string(in_channels_) +
                            " input channels, got " + std::to_string(in.c));
    last_dims_ = dims_for(in);
    Tensor y = Tensor::uninitialized({in.n, spec_.out_channels, last_dims_.h_out, last_dims_.w_out});
    kernels::conv2d_forward(x.data(), w_.value.data(), bias_ ? bias_->value.data() : nullptr,
                            y.data(), last_dims_);
    x_ = x;
    cached_ = true;
    return y;
}

Tensor Conv2d::backward(const Tensor& upstream) {
    take_cache();
    const Shape4 us = as_shape4(upstream);
    if (us.n != last_dims_.n || us.c != last_dims_.c_out || us.h != last_dims_.h_out ||
        us.w != last_dims_.w_out)
        throw ShapeMismatch(name_ + ": upstream shape does not match forward output");
    kernels::conv2d_backward_params(x_.data(), upstream.data(), w_.grad.data(),
                                    bias_ ? bias_->grad.data() : nullptr, last_dims_);
    Tensor gx = Tensor::uninitialized(x_.shape());
    kernels::conv2d_backward_input(w_.value.data(), upstream.data(), gx.data(), last_dims_);
    return gx;
}

void Conv2d::collect_params(std::vector<Param*>& out) {
    out.push_back(&w_);
    if (bias_) out.push_back(&*bias_);
}

// ----------------------------------------------------------------- Dense

Dense::Dense(int in_features, int out_features, bool use_bias, std::string name)
    : name_(std::move(name)),
      in_features_(in_features),
      out_features_(out_features),
      w_(name_ + ".w", ParamKind::DenseWeight, Tensor::zeros({in_features, out_features})) {
    if (use_bias) bias_.emplace(name_ + ".b", ParamKind::Bias, Tensor::zeros({out_features}));
}

Tensor Dense::forward(const Tensor& x, Mode) {
    if (x.rank() != 2 || x.shape()[1] != in_features_)
        throw ShapeMismatch(name_ + ": expected (N," + std::to_string(in_features_) + ") input");
    const int n = x.shape()[0];
    Tensor y = Tensor::uninitialized({n, out_features_});
    kernels::dense_forward(x.data(), w_.value.data(), bias_ ? bias_->value.data() : nullptr,
                           y.data(), n, in_features_, out_features_);
    x_ = x;
    cached_ = true;
    return y;
}

Tensor Dense::backward(const Tensor& upstream) {
    take_cache();
    const int n = x_.shape()[0];
    if (upstream.rank() != 2 || upstream.shape()[0] != n || upstream.shape()[1] != out_features_)
        throw ShapeMismatch(name_ + ": upstream shape does not match forward output");
    kernels::dense_backward_params(x_.data(), upstream.data(), w_.grad.data(),
                                   bias_ ? bias_->grad.data() : nullptr, n, in_features_,
                                   out_features_);
    Tensor gx = Tensor::uninitialized(x_.shape());
    kernels::dense_backward_input(w_.value.data(), upstream.data(), gx.data(), n, in_features_,
                                  out_features_);
    return gx;
}

void Dense::collect_params(std::vector<Param*>& out) {
    out.push_back(&w_);
    if (bias_) out.push_back(&*bias_);
}

// ------------------------------------------------------------ Activation

Tensor Activation::forward(const Tensor& x, Mode) {
    Tensor y = act_forward(kind_, x);
    x_ = x;
    cached_ = true;
    return y;
}

Tensor Activation::backward(const Tensor& upstream) {
    take_cache();
    return act_backward(kind_, x_, upstream);
}

// ------------------------------------------------------------- MaxPool2d

MaxPool2d::MaxPool2d(int window_h, int window_w, int stride_h, int stride_w)
    : wh_(window_h), ww_(window_w), sh_(stride_h), sw_(stride_w) {
    if (wh_ < 1 || ww_ < 1 || sh_ < 1 || sw_ < 1) throw Error("maxpool window/stride must be >= 1");
}

Tensor MaxPool2d::forward(const Tensor& x, Mode) {
    in_ = as_shape4(x);
    if (wh_ > in_.h || ww_ > in_.w)
        throw DegenerateOutput("maxpool window exceeds spatial dims");
    ho_ = (in_.h - wh_) / sh_ + 1;
    wo_ = (in_.w - ww_) / sw_ + 1;
    Tensor y = Tensor::uninitialized({in_.n, in_.c, ho_, wo_});
    argmax_.resize(static_cast<size_t>(y.size()));
    kernels::maxpool_forward(x.data(), y.data(), argmax_.data(), in_.n, in_.c, in_.h, in_.w, wh_,
                             ww_, sh_, sw_, ho_, wo_);
    cached_ = true;
    return y;
}

Tensor MaxPool2d::backward(const Tensor& upstream) {
    take_cache();
    const Shape4 us = as_shape4(upstream);
    if (us.n != in_.n || us.c != in_.c || us.h != ho_ || us.w != wo_)
        throw ShapeMismatch("maxpool: upstream shape does not match forward output");
    Tensor gx = Tensor::zeros({in_.n, in_.c, in_.h, in_.w});
    const int64_t in_plane = static_cast<int64_t>(in_.h) * in_.w;
    const int64_t out_plane = static_cast<int64_t>(ho_) * wo_;
    // Windows may overlap inside a plane, so scatter per (n,c) plane.
#pragma omp parallel for collapse(2) schedule(static)
    for (int n = 0; n < in_.n; ++n) {
        for (int c = 0; c < in_.c; ++c) {
            const int64_t p = static_cast<int64_t>(n) * in_.c + c;
            double* gp = gx.data() + p * in_plane;
            const double* up = upstream.data() + p * out_plane;
            const int32_t* ap = argmax_.data() + p * out_plane;
            for (int64_t i = 0; i < out_plane; ++i) gp[ap[i]] += up[i];
        }
    }
    return gx;
}

// --------------------------------------------------------- GlobalAvgPool

Tensor GlobalAvgPool::forward(const Tensor& x, Mode) {
    in_ = as_shape4(x);
    Tensor y = global_avg_pool(x);
    cached_ = true;
    return y;
}

Tensor GlobalAvgPool::backward(const Tensor& upstream) {
    take_cache();
    const Shape4 us = as_shape4(upstream);
    if (us.n != in_.n || us.c != in_.c || us.h != 1 || us.w != 1)
        throw ShapeMismatch("gap: upstream must be (N,C,1,1)");
    Tensor gx = Tensor::uninitialized({in_.n, in_.c, in_.h, in_.w});
    const int64_t plane = static_cast<int64_t>(in_.h) * in_.w;
    const double inv = 1.0 / static_cast<double>(plane);
#pragma omp parallel for collapse(2) schedule(static)
    for (int n = 0; n < in_.n; ++n) {
        for (int c = 0; c < in_.c; ++c) {
            const int64_t p = static_cast<int64_t>(n) * in_.c + c;
            const double g = upstream[p] * inv;
            double* gp = gx.data() + p * plane;
            for (int64_t i = 0; i < plane; ++i) gp[i] = g;
        }
    }
    return gx;
}

// --------------------------------------------------------------- Flatten

Tensor Flatten::forward(const Tensor& x, Mode) {
    if (x.rank() < 2) throw ShapeMismatch("flatten expects rank >= 2");
    in_shape_ = x.shape();
    int64_t features = 1;
    for (int i = 1; i < x.rank(); ++i) features *= x.shape()[i];
    Tensor y = Tensor::uninitialized({x.shape()[0], static_cast<int>(features)});
    std::copy(x.data(), x.data() + x.size(), y.data());
    cached_ = true;
    return y;
}

Tensor Flatten::backward(const Tensor& upstream) {
    take_cache();
    if (upstream.size() != shape_product(in_shape_))
        throw ShapeMismatch("flatten: upstream size does not match forward input");
    Tensor gx = Tensor::uninitialized(in_shape_);
    std::copy(upstream.data(), upstream.data() + upstream.size(), gx.data());
    return gx;
}

// ------------------------------------------------------------ BatchNorm2d

BatchNorm2d::BatchNorm2d(int channels, std::string name)
    : name_(std::move(name)),
      channels_(channels),
      gamma_(name_ + ".gamma", ParamKind::BnGamma, Tensor::full({channels}, 1.0)),
      beta_(name_ + ".beta", ParamKind::BnBeta, Tensor::zeros({channels})),
      running_mean_(Tensor::zeros({channels})),
      running_var_(Tensor::full({channels}, 1.0)) {}

Tensor BatchNorm2d::forward(const Tensor& x, Mode mode) {
    in_ = as_shape4(x);
    if (in_.c != channels_)
        throw ShapeMismatch(name_ + ": expected " + std::to_string(channels_) + " channels");
    const int64_t plane = static_cast<int64_t>(in_.h) * in_.w;
    const int64_t m = static_cast<int64_t>(in_.n) * plane;

    Tensor y = Tensor::uninitialized(x.shape());
    cached_mode_ = mode;
    if (mode == Mode::Train) {
        xhat_ = Tensor::uninitialized(x.shape());
        inv_std_.assign(static_cast<size_t>(channels_), 0.0);
#pragma omp parallel for schedule(static)
        for (int c = 0; c < channels_; ++c) {
            double mean = 0.0;
            for (int n = 0; n < in_.n; ++n) {
                const double* xp = x.data() + (static_cast<int64_t>(n) * channels_ + c) * plane;
                for (int64_t i = 0; i < plane; ++i) mean += xp[i];
            }
            mean /= static_cast<double>(m);
            double var = 0.0;
            for (int n = 0; n < in_.n; ++n) {
                const double* xp = x.data() + (static_cast<int64_t>(n) * channels_ + c) * plane;
                for (int64_t i = 0; i < plane; ++i) {
                    const double d = xp[i] - mean;
                    var += d * d;
                }
            }
            var /= static_cast<double>(m);
            const double inv = 1.0 / std::sqrt(var + kEps);
            inv_std_[static_cast<size_t>(c)] = inv;
            const double g = gamma_.value[c];
            const double b = beta_.value[c];
            for (int n = 0; n < in_.n; ++n) {
                const int64_t off = (static_cast<int64_t>(n) * channels_ + c) * plane;
                const double* xp = x.data() + off;
                double* hp = xhat_.data() + off;
                double* yp = y.data() + off;
                for (int64_t i = 0; i < plane; ++i) {
                    const double h = (xp[i] - mean) * inv;
                    hp[i] = h;
                    yp[i] = g * h + b;
                }
            }
            running_mean_[c] = kMomentum * running_mean_[c] + (1.0 - kMomentum) * mean;
            running_var_[c] = kMomentum * running_var_[c] + (1.0 - kMomentum) * var;
        }
    } else {
#pragma omp parallel for schedule(static)
        for (int c = 0; c < channels_; ++c) {
            const double inv = 1.0 / std::sqrt(running_var_[c] + kEps);
            const double mean = running_mean_[c];
            const double g = gamma_.value[c];
            const double b = beta_.value[c];
            for (int n = 0; n < in_.n; ++n) {
                const int64_t off = (static_cast<int64_t>(n) * channels_ + c) * plane;
                const double* xp = x.data() + off;
                double* yp = y.data() + off;
                for (int64_t i = 0; i < plane; ++i) yp[i] = g * (xp[i] - mean) * inv + b;
            }
        }
    }
    cached_ = true;
    return y;
}

Tensor BatchNorm2d::backward(const Tensor& upstream) {
    take_cache();
    const Shape4 us = as_shape4(upstream);
    if (us.n != in_.n || us.c != in_.c || us.h != in_.h || us.w != in_.w)
        throw ShapeMismatch(name_ + ": upstream shape does not match forward input");
    const int64_t plane = static_cast<int64_t>(in_.h) * in_.w;
    const int64_t m = static_cast<int64_t>(in_.n) * plane;
    Tensor gx = Tensor::uninitialized(upstream.shape());

    if (cached_mode_ == Mode::Infer) {
        // Running statistics are constants here.
#pragma omp parallel for schedule(static)
        for (int c = 0; c < channels_; ++c) {
            const double scale = gamma_.value[c] / std::sqrt(running_var_[c] + kEps);
            for (int n = 0; n < in_.n; ++n) {
                const int64_t off = (static_cast<int64_t>(n) * channels_ + c) * plane;
                for (int64_t i = 0; i < plane; ++i) gx[off + i] = upstream[off + i] * scale;
            }
        }
        return gx;
    }

#pragma omp parallel for schedule(static)
    for (int c = 0; c < channels_; ++c) {
        double sum_up = 0.0, sum_up_xhat = 0.0;
        for (int n = 0; n < in_.n; ++n) {
            const int64_t off = (static_cast<int64_t>(n) * channels_ + c) * plane;
            for (int64_t i = 0; i < plane; ++i) {
                sum_up += upstream[off + i];
                sum_up_xhat += upstream[off + i] * xhat_[off + i];
            }
        }
        const double inv = inv_std_[static_cast<size_t>(c)];
        const double g = gamma_.value[c];
        const double mean_up = sum_up / static_cast<double>(m);
        const double mean_up_xhat = sum_up_xhat / static_cast<double>(m);
        for (int n = 0; n < in_.n; ++n) {
            const int64_t off = (static_cast<int64_t>(n) * channels_ + c) * plane;
            for (int64_t i = 0; i < plane; ++i)
                gx[off + i] =
                    g * inv * (upstream[off + i] - mean_up - xhat_[off + i] * mean_up_xhat);
        }
        gamma_.grad[c] += sum_up_xhat;
        beta_.grad[c] += sum_up;
    }
    return gx;
}

void BatchNorm2d::collect_params(std::vector<Param*>& out) {
    out.push_back(&gamma_);
    out.push_back(&beta_);
}

// ------------------------------------------------------------- Sequential

Tensor Sequential::forward(const Tensor& x, Mode mode) {
    Tensor h = x;
    for (auto& child : children_) h = child->forward(h, mode);
    cached_ = true;
    return h;
}

Tensor Sequential::backward(const Tensor& upstream) {
    take_cache();
    Tensor g = upstream;
    for (auto it = children_.rbegin(); it != children_.rend(); ++it) g = (*it)->backward(g);
    return g;
}

void Sequential::collect_params(std::vector<Param*>& out) {
    for (auto& child : children_) child->collect_params(out);
}

void Sequential::visit(const std::function<void(Node&)>& fn) {
    fn(*this);
    for (auto& child : children_) child->visit(fn);
}

// ---------------------------------------------------------- free functions

Tensor global_avg_pool(const Tensor& x) {
    const Shape4 s = as_shape4(x);
    const int64_t plane = static_cast<int64_t>(s.h) * s.w;
    Tensor y = Tensor::uninitialized({s.n, s.c, 1, 1});
#pragma omp parallel for collapse(2) schedule(static)
    for (int n = 0; n < s.n; ++n) {
        for (int c = 0; c < s.c; ++c) {
            const int64_t p = static_cast<int64_t>(n) * s.c + c;
            const double* xp = x.data() + p * plane;
            double acc = 0.0;
            for (int64_t i = 0; i < plane; ++i) acc += xp[i];
            y[p] = acc / static_cast<double>(plane);
        }
    }
    return y;
}

Tensor global_max_pool(const Tensor& x, std::vector<int32_t>* argmax) {
    const Shape4 s = as_shape4(x);
    const int64_t plane = static_cast<int64_t>(s.h) * s.w;
    Tensor y = Tensor::uninitialized({s.n, s.c, 1, 1});
    if (argmax) argmax->resize(static_cast<size_t>(s.n) * s.c);
#pragma omp parallel for collapse(2) schedule(static)
    for (int n = 0; n < s.n; ++n) {
        for (int c = 0; c < s.c; ++c) {
            const int64_t p = static_cast<int64_t>(n) * s.c + c;
            const double* xp = x.data() + p * plane;
            double best = xp[0];
            int32_t best_idx = 0;
            for (int64_t i = 1; i < plane; ++i) {
                if (xp[i] > best) {
                    best = xp[i];
                    best_idx = static_cast<int32_t>(i);
                }
            }
            y[p] = best;
            if (argmax) (*argmax)[static_cast<size_t>(p)] = best_idx;
        }
    }
    return y;
}

Tensor channelwise_pool(const Tensor& x, std::vector<int32_t>* argmax) {
    const Shape4 s = as_shape4(x);
    const int64_t plane = static_cast<int64_t>(s.h) * s.w;
    Tensor y = Tensor::uninitialized({s.n, 2, s.h, s.w});
    if (argmax) argmax->resize(static_cast<size_t>(s.n) * plane);
#pragma omp parallel for schedule(static)
    for (int n = 0; n < s.n; ++n) {
        const double* xn = x.data() + static_cast<int64_t>(n) * s.c * plane;
        double* mean_plane = y.data() + static_cast<int64_t>(n) * 2 * plane;
        double* max_plane = mean_plane + plane;
        for (int64_t i = 0; i < plane; ++i) {
            double acc = 0.0;
            double best = xn[i];
            int32_t best_c = 0;
            for (int c = 0; c < s.c; ++c) {
                const double v = xn[static_cast<int64_t>(c) * plane + i];
                acc += v;
                if (v > best) {
                    best = v;
                    best_c = static_cast<int32_t>(c);
                }
            }
            mean_plane[i] = acc / static_cast<double>(s.c);
            max_plane[i] = best;
            if (argmax) (*argmax)[static_cast<size_t>(n) * plane + i] = best_c;
        }
    }
    return y;
}

XentResult softmax_xent(const Tensor& logits, const std::vector<int>& labels) {
    if (logits.rank() != 2) throw ShapeMismatch("softmax_xent expects (N,K) logits");
    const int n = logits.shape()[0];
    const int k = logits.shape()[1];
    if (static_cast<int>(labels.size()) != n)
        throw ShapeMismatch("softmax_xent: label count does not match batch size");
    for (int i = 0; i < n; ++i)
        if (labels[static_cast<size_t>(i)] < 0 || labels[static_cast<size_t>(i)] >= k)
            throw BadLabel("label " + std::to_string(labels[static_cast<size_t>(i)]) +
                           " outside [0," + std::to_string(k) + ")");

    XentResult res;
    res.grad_logits = Tensor::uninitialized(logits.shape());
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double* row = logits.data() + static_cast<int64_t>(i) * k;
        double mx = row[0];
        for (int j = 1; j < k; ++j) mx = std::max(mx, row[j]);
        double denom = 0.0;
        for (int j = 0; j < k; ++j) denom += std::exp(row[j] - mx);
        const double lse = mx + std::log(denom);
        total += lse - row[labels[static_cast<size_t>(i)]];
        double* grow = res.grad_logits.data() + static_cast<int64_t>(i) * k;
        for (int j = 0; j < k; ++j) {
            const double p = std::exp(row[j] - mx) / denom;
            grow[j] = (p - (j == labels[static_cast<size_t>(i)] ? 1.0 : 0.0)) /
                      static_cast<double>(n);
        }
    }
    res.loss = total / static_cast<double>(n);
    if (!std::isfinite(res.loss)) throw NonFinite("softmax_xent produced a non-finite loss");
    return res;
}

}  // namespace attnet
