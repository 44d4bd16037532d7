#include "attnet/kernels.hpp"

#include <algorithm>

namespace attnet::kernels {

void conv2d_forward(const double* x, const double* w, const double* bias, double* y,
                    const Conv2dDims& d) {
    const int64_t in_plane = static_cast<int64_t>(d.h) * d.w;
    const int64_t out_plane = static_cast<int64_t>(d.h_out) * d.w_out;
    const int64_t x_batch = static_cast<int64_t>(d.c_in) * in_plane;
    const int64_t y_batch = static_cast<int64_t>(d.c_out) * out_plane;
    const int64_t w_filter = static_cast<int64_t>(d.c_in) * d.kh * d.kw;

#pragma omp parallel for collapse(2) schedule(static)
    for (int n = 0; n < d.n; ++n) {
        for (int oc = 0; oc < d.c_out; ++oc) {
            double* yp = y + n * y_batch + oc * out_plane;
            std::fill(yp, yp + out_plane, 0.0);
            const double* wf = w + oc * w_filter;
            for (int c = 0; c < d.c_in; ++c) {
                const double* xp = x + n * x_batch + c * in_plane;
                for (int kh = 0; kh < d.kh; ++kh) {
                    for (int kw = 0; kw < d.kw; ++kw) {
                        const double wv = wf[(static_cast<int64_t>(c) * d.kh + kh) * d.kw + kw];
                        for (int oh = 0; oh < d.h_out; ++oh) {
                            const int ih = oh * d.sh - d.ph + kh;
                            if (ih < 0 || ih >= d.h) continue;
                            const double* xrow = xp + static_cast<int64_t>(ih) * d.w;
                            double* yrow = yp + static_cast<int64_t>(oh) * d.w_out;
                            for (int ow = 0; ow < d.w_out; ++ow) {
                                const int iw = ow * d.sw - d.pw + kw;
                                if (iw < 0 || iw >= d.w) continue;
                                yrow[ow] += wv * xrow[iw];
                            }
                        }
                    }
                }
            }
            if (bias) {
                const double bv = bias[oc];
                for (int64_t i = 0; i < out_plane; ++i) yp[i] += bv;
            }
        }
    }
}

void conv2d_backward_input(const double* w, const double* up, double* gx, const Conv2dDims& d) {
    const int64_t in_plane = static_cast<int64_t>(d.h) * d.w;
    const int64_t out_plane = static_cast<int64_t>(d.h_out) * d.w_out;
    const int64_t x_batch = static_cast<int64_t>(d.c_in) * in_plane;
    const int64_t y_batch = static_cast<int64_t>(d.c_out) * out_plane;
    const int64_t w_filter = static_cast<int64_t>(d.c_in) * d.kh * d.kw;

#pragma omp parallel for collapse(2) schedule(static)
    for (int n = 0; n < d.n; ++n) {
        for (int c = 0; c < d.c_in; ++c) {
            double* gp = gx + n * x_batch + c * in_plane;
            for (int ih = 0; ih < d.h; ++ih) {
                for (int iw = 0; iw < d.w; ++iw) {
                    double acc = 0.0;
                    for (int oc = 0; oc < d.c_out; ++oc) {
                        const double* wf = w + oc * w_filter + static_cast<int64_t>(c) * d.kh * d.kw;
                        const double* uf = up + n * y_batch + oc * out_plane;
                        for (int kh = 0; kh < d.kh; ++kh) {
                            const int oh_num = ih + d.ph - kh;
                            if (oh_num < 0 || oh_num % d.sh != 0) continue;
                            const int oh = oh_num / d.sh;
                            if (oh >= d.h_out) continue;
                            for (int kw = 0; kw < d.kw; ++kw) {
                                const int ow_num = iw + d.pw - kw;
                                if (ow_num < 0 || ow_num % d.sw != 0) continue;
                                const int ow = ow_num / d.sw;
                                if (ow >= d.w_out) continue;
                                acc += wf[static_cast<int64_t>(kh) * d.kw + kw] *
                                       uf[static_cast<int64_t>(oh) * d.w_out + ow];
                            }
                        }
                    }
                    gp[static_cast<int64_t>(ih) * d.w + iw] = acc;
                }
            }
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

#pragma omp parallel for collapse(2) schedule(static)
    for (int oc = 0; oc < d.c_out; ++oc) {
        for (int c = 0; c < d.c_in; ++c) {
            for (int kh = 0; kh < d.kh; ++kh) {
                for (int kw = 0; kw < d.kw; ++kw) {
                    double acc = 0.0;
                    for (int n = 0; n < d.n; ++n) {
                        const double* xp = x + n * x_batch + c * in_plane;
                        const double* uf = up + n * y_batch + oc * out_plane;
                        for (int oh = 0; oh < d.h_out; ++oh) {
                            const int ih = oh * d.sh - d.ph + kh;
                            if (ih < 0 || ih >= d.h) continue;
                            const double* xrow = xp + static_cast<int64_t>(ih) * d.w;
                            const double* urow = uf + static_cast<int64_t>(oh) * d.w_out;
                            for (int ow = 0; ow < d.w_out; ++ow) {
                                const int iw = ow * d.sw - d.pw + kw;
                                if (iw < 0 || iw >= d.w) continue;
                                acc += xrow[iw] * urow[ow];
                            }
                        }
                    }
                    gw[(oc * w_filter) + (static_cast<int64_t>(c) * d.kh + kh) * d.kw + kw] += acc;
                }
            }
        }
    }

    if (gb) {
#pragma omp parallel for schedule(static)
        for (int oc = 0; oc < d.c_out; ++oc) {
            double acc = 0.0;
            for (int n = 0; n < d.n; ++n) {
                const double* uf = up + n * y_batch + oc * out_plane;
                for (int64_t i = 0; i < out_plane; ++i) acc += uf[i];
            }
            gb[oc] += acc;
        }
    }
}

void dense_forward(const double* x, const double* w, const double* bias, double* y, int n, int f,
                   int g) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const double* xr = x + static_cast<int64_t>(i) * f;
        double* yr = y + static_cast<int64_t>(i) * g;
        for (int j = 0; j < g; ++j) yr[j] = bias ? bias[j] : 0.0;
        for (int k = 0; k < f; ++k) {
            const double xv = xr[k];
            const double* wr = w + static_cast<int64_t>(k) * g;
            for (int j = 0; j < g; ++j) yr[j] += xv * wr[j];
        }
    }
}

void dense_backward_input(const double* w, const double* up, double* gx, int n, int f, int g) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const double* ur = up + static_cast<int64_t>(i) * g;
        double* gr = gx + static_cast<int64_t>(i) * f;
        for (int k = 0; k < f; ++k) {
            const double* wr = w + static_cast<int64_t>(k) * g;
            double acc = 0.0;
            for (int j = 0; j < g; ++j) acc += ur[j] * wr[j];
            gr[k] = acc;
        }
    }
}

void dense_backward_params(const double* x, const double* up, double* gw, double* gb, int n,
                           int f, int g) {
#pragma omp parallel for schedule(static)
    for (int k = 0; k < f; ++k) {
        double* gr = gw + static_cast<int64_t>(k) * g;
        for (int j = 0; j < g; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                acc += x[static_cast<int64_t>(i) * f + k] * up[static_cast<int64_t>(i) * g + j];
            gr[j] += acc;
        }
    }
    if (gb) {
        for (int j = 0; j < g; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += up[static_cast<int64_t>(i) * g + j];
            gb[j] += acc;
        }
    }
}

void maxpool_forward(const double* x, double* y, int32_t* argmax, int n, int c, int h, int w,
                     int wh, int ww, int sh, int sw, int ho, int wo) {
    const int64_t in_plane = static_cast<int64_t>(h) * w;
    const int64_t out_plane = static_cast<int64_t>(ho) * wo;

#pragma omp parallel for collapse(2) schedule(static)
    for (int i = 0; i < n; ++i) {
        for (int ch = 0; ch < c; ++ch) {
            const double* xp = x + (static_cast<int64_t>(i) * c + ch) * in_plane;
            double* yp = y + (static_cast<int64_t>(i) * c + ch) * out_plane;
            int32_t* ap = argmax + (static_cast<int64_t>(i) * c + ch) * out_plane;
            for (int oh = 0; oh < ho; ++oh) {
                for (int ow = 0; ow < wo; ++ow) {
                    const int h0 = oh * sh;
                    const int w0 = ow * sw;
                    double best = xp[static_cast<int64_t>(h0) * w + w0];
                    int32_t best_idx = static_cast<int32_t>(h0 * w + w0);
                    for (int dh = 0; dh < wh; ++dh) {
                        for (int dw = 0; dw < ww; ++dw) {
                            const int32_t idx = static_cast<int32_t>((h0 + dh) * w + (w0 + dw));
                            const double v = xp[idx];
                            if (v > best) {  // strict: first max wins ties
                                best = v;
                                best_idx = idx;
                            }
                        }
                    }
                    yp[static_cast<int64_t>(oh) * wo + ow] = best;
                    ap[static_cast<int64_t>(oh) * wo + ow] = best_idx;
                }
            }
        }
    }
}

}  // namespace attnet::kernels
