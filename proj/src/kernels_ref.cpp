#include "attnet/kernels.hpp"

// Textbook serial implementations. Forward kernels accumulate in the same
// per-element order as the parallel versions (bitwise comparable); the
// scatter-form backward kernels differ only in rounding order.

namespace attnet::ref {

void conv2d_forward(const double* x, const double* w, const double* bias, double* y,
                    const Conv2dDims& d) {
    const int64_t in_plane = static_cast<int64_t>(d.h) * d.w;
    const int64_t out_plane = static_cast<int64_t>(d.h_out) * d.w_out;
    const int64_t x_batch = static_cast<int64_t>(d.c_in) * in_plane;
    const int64_t y_batch = static_cast<int64_t>(d.c_out) * out_plane;
    const int64_t w_filter = static_cast<int64_t>(d.c_in) * d.kh * d.kw;

    for (int n = 0; n < d.n; ++n)
        for (int oc = 0; oc < d.c_out; ++oc)
            for (int oh = 0; oh < d.h_out; ++oh)
                for (int ow = 0; ow < d.w_out; ++ow) {
                    double acc = 0.0;
                    for (int c = 0; c < d.c_in; ++c)
                        for (int kh = 0; kh < d.kh; ++kh)
                            for (int kw = 0; kw < d.kw; ++kw) {
                                const int ih = oh * d.sh - d.ph + kh;
                                const int iw = ow * d.sw - d.pw + kw;
                                if (ih < 0 || ih >= d.h || iw < 0 || iw >= d.w) continue;
                                acc += w[oc * w_filter + (static_cast<int64_t>(c) * d.kh + kh) * d.kw + kw] *
                                       x[n * x_batch + c * in_plane + static_cast<int64_t>(ih) * d.w + iw];
                            }
                    if (bias) acc += bias[oc];
                    y[n * y_batch + oc * out_plane + static_cast<int64_t>(oh) * d.w_out + ow] = acc;
                }
}

void conv2d_backward_input(const double* w, const double* up, double* gx, const Conv2dDims& d) {
    const int64_t in_plane = static_cast<int64_t>(d.h) * d.w;
    const int64_t out_plane = static_cast<int64_t>(d.h_out) * d.w_out;
    const int64_t x_batch = static_cast<int64_t>(d.c_in) * in_plane;
    const int64_t y_batch = static_cast<int64_t>(d.c_out) * out_plane;
    const int64_t w_filter = static_cast<int64_t>(d.c_in) * d.kh * d.kw;

    for (int64_t i = 0; i < static_cast<int64_t>(d.n) * x_batch; ++i) gx[i] = 0.0;
    for (int n = 0; n < d.n; ++n)
        for (int oc = 0; oc < d.c_out; ++oc)
            for (int oh = 0; oh < d.h_out; ++oh)
                for (int ow = 0; ow < d.w_out; ++ow) {
                    const double u =
                        up[n * y_batch + oc * out_plane + static_cast<int64_t>(oh) * d.w_out + ow];
                    for (int c = 0; c < d.c_in; ++c)
                        for (int kh = 0; kh < d.kh; ++kh)
                            for (int kw = 0; kw < d.kw; ++kw) {
                                const int ih = oh * d.sh - d.ph + kh;
                                const int iw = ow * d.sw - d.pw + kw;
                                if (ih < 0 || ih >= d.h || iw < 0 || iw >= d.w) continue;
                                gx[n * x_batch + c * in_plane + static_cast<int64_t>(ih) * d.w + iw] +=
                                    u * w[oc * w_filter + (static_cast<int64_t>(c) * d.kh + kh) * d.kw + kw];
                            }
                }
}

void conv2d_backward_params(const double* x, const double* up, double* gw, double* gb,
                            const Conv2dDims& d) {
    const int64_t in_plane = static_cast<int64_t>(d.h) * d.w;
    const int64_t out_plane = static_cast<int64_t>(d.h_out) * d.w_out;
    const int64_t x_batch = static_cast<int64_t>(d.c_in) * in_plane;
    const int64_t y_batch = static_cast<int64_t>(d.c_out) * out_plane;
    const int64_t w_filter = static_cast<int64_t>(d.c_in) * d.kh * d.kw;

    for (int n = 0; n < d.n; ++n)
        for (int oc = 0; oc < d.c_out; ++oc)
            for (int oh = 0; oh < d.h_out; ++oh)
                for (int ow = 0; ow < d.w_out; ++ow) {
                    const double u =
                        up[n * y_batch + oc * out_plane + static_cast<int64_t>(oh) * d.w_out + ow];
                    for (int c = 0; c < d.c_in; ++c)
                        for (int kh = 0; kh < d.kh; ++kh)
                            for (int kw = 0; kw < d.kw; ++kw) {
                                const int ih = oh * d.sh - d.ph + kh;
                                const int iw = ow * d.sw - d.pw + kw;
                                if (ih < 0 || ih >= d.h || iw < 0 || iw >= d.w) continue;
                                gw[oc * w_filter + (static_cast<int64_t>(c) * d.kh + kh) * d.kw + kw] +=
                                    u * x[n * x_batch + c * in_plane + static_cast<int64_t>(ih) * d.w + iw];
                            }
                    if (gb) gb[oc] += u;
                }
}

void dense_forward(const double* x, const double* w, const double* bias, double* y, int n, int f,
                   int g) {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < g; ++j) {
            double acc = bias ? bias[j] : 0.0;
            for (int k = 0; k < f; ++k)
                acc += x[static_cast<int64_t>(i) * f + k] * w[static_cast<int64_t>(k) * g + j];
            y[static_cast<int64_t>(i) * g + j] = acc;
        }
}

void dense_backward_input(const double* w, const double* up, double* gx, int n, int f, int g) {
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < f; ++k) {
            double acc = 0.0;
            for (int j = 0; j < g; ++j)
                acc += up[static_cast<int64_t>(i) * g + j] * w[static_cast<int64_t>(k) * g + j];
            gx[static_cast<int64_t>(i) * f + k] = acc;
        }
}

void dense_backward_params(const double* x, const double* up, double* gw, double* gb, int n,
                           int f, int g) {
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < f; ++k) {
            const double xv = x[static_cast<int64_t>(i) * f + k];
            for (int j = 0; j < g; ++j)
                gw[static_cast<int64_t>(k) * g + j] += xv * up[static_cast<int64_t>(i) * g + j];
        }
        if (gb)
            for (int j = 0; j < g; ++j) gb[j] += up[static_cast<int64_t>(i) * g + j];
    }
}

void maxpool_forward(const double* x, double* y, int32_t* argmax, int n, int c, int h, int w,
                     int wh, int ww, int sh, int sw, int ho, int wo) {
    const int64_t in_plane = static_cast<int64_t>(h) * w;
    const int64_t out_plane = static_cast<int64_t>(ho) * wo;

    for (int i = 0; i < n; ++i)
        for (int ch = 0; ch < c; ++ch) {
            const double* xp = x + (static_cast<int64_t>(i) * c + ch) * in_plane;
            double* yp = y + (static_cast<int64_t>(i) * c + ch) * out_plane;
            int32_t* ap = argmax + (static_cast<int64_t>(i) * c + ch) * out_plane;
            for (int oh = 0; oh < ho; ++oh)
                for (int ow = 0; ow < wo; ++ow) {
                    const int h0 = oh * sh;
                    const int w0 = ow * sw;
                    double best = xp[static_cast<int64_t>(h0) * w + w0];
                    int32_t best_idx = static_cast<int32_t>(h0 * w + w0);
                    for (int dh = 0; dh < wh; ++dh)
                        for (int dw = 0; dw < ww; ++dw) {
                            const int32_t idx = static_cast<int32_t>((h0 + dh) * w + (w0 + dw));
                            if (xp[idx] > best) {
                                best = xp[idx];
                                best_idx = idx;
                            }
                        }
                    yp[static_cast<int64_t>(oh) * wo + ow] = best;
                    ap[static_cast<int64_t>(oh) * wo + ow] = best_idx;
                }
        }
}

}  // namespace attnet::ref
