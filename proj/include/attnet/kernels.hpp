#pragma once

#include <cstdint>

// Compute kernels behind the layer classes. attnet::kernels holds the
// OpenMP-parallel implementations used by the library; attnet::ref holds
// plain serial mirrors kept for parity testing and benchmarking.
//
// Every kernel accumulates each output element in a fixed scan order, so
// results are bit-identical for any thread count. Gradient kernels with a
// `g*` argument accumulate (+=) into the buffer; the rest overwrite.

namespace attnet::kernels {

struct Conv2dDims {
    int n = 0, c_in = 0, h = 0, w = 0;   // input feature map
    int c_out = 0, kh = 0, kw = 0;       // filter bank (c_out, c_in, kh, kw)
    int sh = 1, sw = 1, ph = 0, pw = 0;  // stride / zero padding
    int h_out = 0, w_out = 0;
};

// Cross-correlation (no kernel flip). bias may be null.
void conv2d_forward(const double* x, const double* w, const double* bias, double* y,
                    const Conv2dDims& d);
void conv2d_backward_input(const double* w, const double* up, double* gx, const Conv2dDims& d);
void conv2d_backward_params(const double* x, const double* up, double* gw, double* gb,
                            const Conv2dDims& d);

// y[n,g] = bias[g] + sum_f x[n,f] * w[f,g]
void dense_forward(const double* x, const double* w, const double* bias, double* y, int n, int f,
                   int g);
void dense_backward_input(const double* w, const double* up, double* gx, int n, int f, int g);
void dense_backward_params(const double* x, const double* up, double* gw, double* gb, int n,
                           int f, int g);

// Per-window maximum with first-index (scan order) tie-break recorded in
// argmax as offsets into each (n,c) plane.
void maxpool_forward(const double* x, double* y, int32_t* argmax, int n, int c, int h, int w,
                     int wh, int ww, int sh, int sw, int ho, int wo);

}  // namespace attnet::kernels

namespace attnet::ref {

using attnet::kernels::Conv2dDims;

void conv2d_forward(const double* x, const double* w, const double* bias, double* y,
                    const Conv2dDims& d);
void conv2d_backward_input(const double* w, const double* up, double* gx, const Conv2dDims& d);
void conv2d_backward_params(const double* x, const double* up, double* gw, double* gb,
                            const Conv2dDims& d);

void dense_forward(const double* x, const double* w, const double* bias, double* y, int n, int f,
                   int g);
void dense_backward_input(const double* w, const double* up, double* gx, int n, int f, int g);
void dense_backward_params(const double* x, const double* up, double* gw, double* gb, int n,
                           int f, int g);

void maxpool_forward(const double* x, double* y, int32_t* argmax, int n, int c, int h, int w,
                     int wh, int ww, int sh, int sw, int ho, int wo);

}  // namespace attnet::ref
