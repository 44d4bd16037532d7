#pragma once

#include <string>

#include "attnet/tensor.hpp"

namespace attnet {

enum class Act { ReLU, ELU, SELU, Sigmoid };

// Self-normalizing scale/alpha constants used by SELU.
inline constexpr double kSeluLambda = 1.0507009873554805;
inline constexpr double kSeluAlpha = 1.6732632423543772;

/// Which scalar nonlinearity to apply. elu_alpha only matters for ELU.
struct ActivationKind {
    Act tag = Act::ReLU;
    double elu_alpha = 1.0;
};

// Scalar forms. Derivatives at exactly 0 follow a fixed convention so
// gradient checks can exclude the kink deterministically: ReLU' = 1,
// ELU' = alpha, SELU' = lambda*alpha.
double act_scalar(const ActivationKind& kind, double v);
double act_deriv_scalar(const ActivationKind& kind, double v);

// ReLU(v)=max(0,v); ELU(v)=v>0 ? v : alpha*(exp(v)-1); SELU = lambda-scaled
// ELU with the self-normalizing alpha; Sigmoid uses the numerically stable
// two-branch form.
Tensor act_forward(const ActivationKind& kind, const Tensor& x);

// Elementwise upstream * f'(x).
Tensor act_backward(const ActivationKind& kind, const Tensor& x, const Tensor& upstream);

// Mean of act_forward over all entries; the bias-shift diagnostic.
double mean_activation(const ActivationKind& kind, const Tensor& samples);

std::string act_name(const ActivationKind& kind);
ActivationKind act_from_name(const std::string& name);

}  // namespace attnet
