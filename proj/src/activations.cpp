#include "attnet/activations.hpp"

#include <cmath>

namespace attnet {

namespace {

inline double elu_core(double v, double alpha) {
    return v > 0.0 ? v : alpha * std::expm1(v);
}

inline double sigmoid_stable(double v) {
    if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
}

}  // namespace

double act_scalar(const ActivationKind& kind, double v) {
    switch (kind.tag) {
        case Act::ReLU: return v > 0.0 ? v : 0.0;
        case Act::ELU: return elu_core(v, kind.elu_alpha);
        case Act::SELU: return kSeluLambda * elu_core(v, kSeluAlpha);
        case Act::Sigmoid: return sigmoid_stable(v);
    }
    return 0.0;
}

double act_deriv_scalar(const ActivationKind& kind, double v) {
    switch (kind.tag) {
        case Act::ReLU: return v >= 0.0 ? 1.0 : 0.0;
        case Act::ELU: return v > 0.0 ? 1.0 : kind.elu_alpha * std::exp(v);
        case Act::SELU: return v > 0.0 ? kSeluLambda : kSeluLambda * kSeluAlpha * std::exp(v);
        case Act::Sigmoid: {
            const double s = sigmoid_stable(v);
            return s * (1.0 - s);
        }
    }
    return 0.0;
}

Tensor act_forward(const ActivationKind& kind, const Tensor& x) {
    if (kind.tag == Act::ELU && !(kind.elu_alpha > 0.0))
        throw Error("ELU alpha must be positive");
    Tensor out = Tensor::uninitialized(x.shape());
    const int64_t n = x.size();
    const double* xp = x.data();
    double* op = out.data();
#pragma omp parallel for schedule(static) if (n > 16384)
    for (int64_t i = 0; i < n; ++i) op[i] = act_scalar(kind, xp[i]);
    ensure_all_finite(out, "act_forward");
    return out;
}

Tensor act_backward(const ActivationKind& kind, const Tensor& x, const Tensor& upstream) {
    if (!x.same_shape(upstream)) throw ShapeMismatch("act_backward: x and upstream shapes differ");
    Tensor out = Tensor::uninitialized(x.shape());
    const int64_t n = x.size();
    const double* xp = x.data();
    const double* up = upstream.data();
    double* op = out.data();
#pragma omp parallel for schedule(static) if (n > 16384)
    for (int64_t i = 0; i < n; ++i) op[i] = up[i] * act_deriv_scalar(kind, xp[i]);
    return out;
}

double mean_activation(const ActivationKind& kind, const Tensor& samples) {
    if (samples.empty()) throw Error("mean_activation: empty sample tensor");
    double acc = 0.0;
    for (int64_t i = 0; i < samples.size(); ++i) acc += act_scalar(kind, samples[i]);
    return acc / static_cast<double>(samples.size());
}

std::string act_name(const ActivationKind& kind) {
    switch (kind.tag) {
        case Act::ReLU: return "relu";
        case Act::ELU: return "elu";
        case Act::SELU: return "selu";
        case Act::Sigmoid: return "sigmoid";
    }
    return "relu";
}

ActivationKind act_from_name(const std::string& name) {
    if (name == "relu") return {Act::ReLU, 1.0};
    if (name == "elu") return {Act::ELU, 1.0};
    if (name == "selu") return {Act::SELU, 1.0};
    if (name == "sigmoid") return {Act::Sigmoid, 1.0};
    throw ConfigError("unknown activation '" + name + "'");
}

}  // namespace attnet
