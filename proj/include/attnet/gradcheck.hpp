#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "attnet/tensor.hpp"

namespace attnet {

/// Central difference (f(x+eps*e_i) - f(x-eps*e_i)) / (2*eps).
double finite_diff(const std::function<double(const Tensor&)>& f, const Tensor& x, int64_t i,
                   double eps);

/// Outcome of one gradient check. passed <=> max_rel_err <= tolerance and
/// at least one coordinate was actually compared.
struct GradReport {
    std::string unit;
    double tolerance = 1e-5;
    double max_rel_err = 0.0;
    double max_abs_err = 0.0;
    std::string worst_slot;
    int64_t worst_index = -1;
    int64_t n_checked = 0;
    int64_t n_skipped = 0;
    bool passed = false;
    std::string note;
};

/// One tensor to perturb: its live values, the analytic gradient filled by
/// compute_gradients(), and an optional predicate marking coordinates too
/// close to an activation kink or pooling tie to difference through.
struct GradSlot {
    std::string name;
    Tensor* value = nullptr;
    const Tensor* grad = nullptr;
    std::function<bool(int64_t)> skip_near_kink;
};

/// A unit under test: some forward/backward pair whose loss proxy is the
/// sum of its forward outputs (or an explicit scalar loss). loss() must be
/// a pure function of the slot values.
class GradCheckable {
public:
    virtual ~GradCheckable() = default;
    virtual std::string name() const = 0;
    virtual double tolerance() const { return 1e-5; }
    virtual void randomize(uint64_t seed) = 0;
    virtual double loss() = 0;
    virtual void compute_gradients() = 0;
    virtual std::vector<GradSlot> slots() = 0;
};

/// Compares analytic gradients against central differences on a random
/// subsample of at most max_coords coordinates per tensor, for each of
/// `seeds` re-randomizations. Steps are eps_base * max(1, |x_i|); relative
/// error uses a max(|analytic|, |numeric|, 1e-8) denominator. Failures are
/// reported, never thrown.
GradReport check_gradients(GradCheckable& unit, double tolerance, double eps_base = 1e-6,
                           int seeds = 5, int max_coords = 200, uint64_t base_seed = 1);

inline GradReport check_gradients(GradCheckable& unit) {
    return check_gradients(unit, unit.tolerance());
}

enum class GradScope { Layers, Attention, Model };

std::vector<std::unique_ptr<GradCheckable>> make_gradcheck_units(GradScope scope);

/// Runs every unit in the scope; deterministic for a fixed seed.
std::vector<GradReport> run_gradcheck(GradScope scope, uint64_t seed, int seeds_per_unit = 5,
                                      int max_coords = 200);

/// Test fixture: a dense-layer unit whose analytic gradients are scaled by
/// `factor`, so the oracle must flag it for factor != 1.
std::unique_ptr<GradCheckable> make_fault_injected_unit(double factor);

}  // namespace attnet
