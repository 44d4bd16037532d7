#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "attnet/errors.hpp"

namespace attnet {

/// Dense row-major N-d array of doubles (last axis fastest). Feature maps
/// use N,C,H,W order throughout the project. Tensors own their storage and
/// every public operation returns a fresh tensor.
class Tensor {
public:
    Tensor() = default;

    // Validates product(shape) == data.size() and that every entry is finite.
    Tensor(std::vector<int> shape, std::vector<double> data);

    static Tensor zeros(std::vector<int> shape);
    static Tensor full(std::vector<int> shape, double value);
    // Fast path for kernels that overwrite every element; skips validation.
    static Tensor uninitialized(std::vector<int> shape);

    const std::vector<int>& shape() const noexcept { return shape_; }
    int rank() const noexcept { return static_cast<int>(shape_.size()); }
    int dim(int axis) const;
    int64_t size() const noexcept { return static_cast<int64_t>(data_.size()); }
    bool empty() const noexcept { return data_.empty(); }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }
    double& operator[](int64_t i) noexcept { return data_[static_cast<size_t>(i)]; }
    double operator[](int64_t i) const noexcept { return data_[static_cast<size_t>(i)]; }

    bool same_shape(const Tensor& other) const noexcept { return shape_ == other.shape_; }
    void fill(double value);

private:
    std::vector<int> shape_;
    std::vector<double> data_;
};

/// Canonical feature-map dimensions; all four sizes are >= 1.
struct Shape4 {
    int n = 1;
    int c = 1;
    int h = 1;
    int w = 1;
    int64_t count() const noexcept {
        return static_cast<int64_t>(n) * c * h * w;
    }
};

// Throws ShapeMismatch unless t has rank 4 with all dims >= 1.
Shape4 as_shape4(const Tensor& t);

int64_t shape_product(const std::vector<int>& shape);

enum class EwOp { Add, Mul };
enum class ReduceOp { Mean, Max };

/// Elementwise add/mul. b may broadcast against a through singleton axes
/// (same rank, each axis of b equal to a's or 1); an axis of size 1 in b
/// repeats along that axis of a.
Tensor ew_binary(EwOp op, const Tensor& a, const Tensor& b);

/// Collapses `axes` to size 1. Mean divides by the exact reduced-element
/// count; max takes the elementwise maximum.
Tensor reduce(ReduceOp op, const Tensor& x, const std::set<int>& axes);

double sum(const Tensor& x);

// Throws NonFinite naming `context` if any entry is NaN/Inf.
void ensure_all_finite(const Tensor& x, const char* context);

}  // namespace attnet
