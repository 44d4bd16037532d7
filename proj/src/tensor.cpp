#include "attnet/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace attnet {

namespace {

std::string shape_string(const std::vector<int>& s) {
    std::string out = "(";
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + ")";
}

}  // namespace

int64_t shape_product(const std::vector<int>& shape) {
    int64_t p = 1;
    for (int d : shape) {
        if (d <= 0) throw ShapeMismatch("non-positive dimension in shape " + shape_string(shape));
        p *= d;
    }
    return p;
}

Tensor::Tensor(std::vector<int> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (shape_product(shape_) != static_cast<int64_t>(data_.size()))
        throw ShapeMismatch("shape " + shape_string(shape_) + " does not match data length " +
                            std::to_string(data_.size()));
    ensure_all_finite(*this, "tensor construction");
}

Tensor Tensor::zeros(std::vector<int> shape) {
    Tensor t;
    const int64_t n = shape_product(shape);
    t.shape_ = std::move(shape);
    t.data_.assign(static_cast<size_t>(n), 0.0);
    return t;
}

Tensor Tensor::full(std::vector<int> shape, double value) {
    if (!std::isfinite(value)) throw NonFinite("fill value is not finite");
    Tensor t = zeros(std::move(shape));
    std::fill(t.data_.begin(), t.data_.end(), value);
    return t;
}

Tensor Tensor::uninitialized(std::vector<int> shape) {
    Tensor t;
    const int64_t n = shape_product(shape);
    t.shape_ = std::move(shape);
    t.data_.resize(static_cast<size_t>(n));
    return t;
}

int Tensor::dim(int axis) const {
    if (axis < 0 || axis >= rank())
        throw BadAxis("axis " + std::to_string(axis) + " out of range for rank " +
                      std::to_string(rank()));
    return shape_[static_cast<size_t>(axis)];
}

void Tensor::fill(double value) {
    std::fill(data_.begin(), data_.end(), value);
}

Shape4 as_shape4(const Tensor& t) {
    if (t.rank() != 4)
        throw ShapeMismatch("expected rank-4 tensor, got " + shape_string(t.shape()));
    return Shape4{t.shape()[0], t.shape()[1], t.shape()[2], t.shape()[3]};
}

void ensure_all_finite(const Tensor& x, const char* context) {
    const double* p = x.data();
    const int64_t n = x.size();
    for (int64_t i = 0; i < n; ++i) {
        if (!std::isfinite(p[i]))
            throw NonFinite(std::string(context) + ": non-finite value at flat index " +
                            std::to_string(i));
    }
}

Tensor ew_binary(EwOp op, const Tensor& a, const Tensor& b) {
    if (a.rank() != b.rank())
        throw ShapeMismatch("ew_binary rank mismatch " + shape_string(a.shape()) + " vs " +
                            shape_string(b.shape()));
    const int r = a.rank();
    for (int i = 0; i < r; ++i) {
        if (b.shape()[i] != a.shape()[i] && b.shape()[i] != 1)
            throw ShapeMismatch("ew_binary shapes not broadcastable " + shape_string(a.shape()) +
                                " vs " + shape_string(b.shape()));
    }

    // Strides of b with 0 on broadcast axes; a is walked linearly.
    std::vector<int64_t> bstride(static_cast<size_t>(r), 0);
    int64_t s = 1;
    for (int i = r - 1; i >= 0; --i) {
        bstride[static_cast<size_t>(i)] = (b.shape()[i] == 1) ? 0 : s;
        s *= b.shape()[i];
    }

    Tensor out = Tensor::uninitialized(a.shape());
    std::vector<int> idx(static_cast<size_t>(r), 0);
    int64_t boff = 0;
    const int64_t n = a.size();
    for (int64_t i = 0; i < n; ++i) {
        const double av = a[i];
        const double bv = b[boff];
        out[i] = (op == EwOp::Add) ? av + bv : av * bv;
        // Odometer increment over a's index space.
        for (int d = r - 1; d >= 0; --d) {
            boff += bstride[static_cast<size_t>(d)];
            if (++idx[static_cast<size_t>(d)] < a.shape()[d]) break;
            idx[static_cast<size_t>(d)] = 0;
            boff -= bstride[static_cast<size_t>(d)] * b.shape()[d];
        }
    }
    ensure_all_finite(out, "ew_binary");
    return out;
}

Tensor reduce(ReduceOp op, const Tensor& x, const std::set<int>& axes) {
    const int r = x.rank();
    for (int axis : axes) {
        if (axis < 0 || axis >= r)
            throw BadAxis("reduce axis " + std::to_string(axis) + " out of range for rank " +
                          std::to_string(r));
    }

    std::vector<int> out_shape = x.shape();
    int64_t reduced_count = 1;
    for (int axis : axes) {
        reduced_count *= x.shape()[axis];
        out_shape[static_cast<size_t>(axis)] = 1;
    }

    std::vector<int64_t> out_stride(static_cast<size_t>(r), 0);
    int64_t s = 1;
    for (int i = r - 1; i >= 0; --i) {
        out_stride[static_cast<size_t>(i)] = (out_shape[static_cast<size_t>(i)] == 1) ? 0 : s;
        s *= out_shape[static_cast<size_t>(i)];
    }

    const double init = (op == ReduceOp::Max) ? -std::numeric_limits<double>::infinity() : 0.0;
    Tensor out = Tensor::uninitialized(out_shape);
    out.fill(init);

    std::vector<int> idx(static_cast<size_t>(r), 0);
    int64_t ooff = 0;
    const int64_t n = x.size();
    for (int64_t i = 0; i < n; ++i) {
        if (op == ReduceOp::Mean)
            out[ooff] += x[i];
        else
            out[ooff] = std::max(out[ooff], x[i]);
        for (int d = r - 1; d >= 0; --d) {
            ooff += out_stride[static_cast<size_t>(d)];
            if (++idx[static_cast<size_t>(d)] < x.shape()[d]) break;
            idx[static_cast<size_t>(d)] = 0;
            ooff -= out_stride[static_cast<size_t>(d)] * x.shape()[d];
        }
    }
    if (op == ReduceOp::Mean) {
        const double inv = 1.0 / static_cast<double>(reduced_count);
        for (int64_t i = 0; i < out.size(); ++i) out[i] *= inv;
    }
    ensure_all_finite(out, "reduce");
    return out;
}

double sum(const Tensor& x) {
    double acc = 0.0;
    for (int64_t i = 0; i < x.size(); ++i) acc += x[i];
    return acc;
}

}  // namespace attnet
