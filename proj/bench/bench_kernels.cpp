#include <benchmark/benchmark.h>

#include <vector>

#include "attnet/kernels.hpp"
#include "attnet/rng.hpp"

// Parallel kernels vs the serial reference on representative backbone
// shapes. Run with --benchmark_filter=conv to narrow.

namespace {

using attnet::kernels::Conv2dDims;

struct ConvCase {
    Conv2dDims d;
    std::vector<double> x, w, b, y;
};

ConvCase make_conv_case(int n, int c_in, int hw, int c_out, int k, int stride) {
    ConvCase cc;
    cc.d = Conv2dDims{.n = n, .c_in = c_in, .h = hw, .w = hw, .c_out = c_out, .kh = k, .kw = k,
                      .sh = stride, .sw = stride, .ph = (k - 1) / 2, .pw = (k - 1) / 2};
    cc.d.h_out = (cc.d.h + 2 * cc.d.ph - k) / stride + 1;
    cc.d.w_out = (cc.d.w + 2 * cc.d.pw - k) / stride + 1;
    attnet::Rng rng(42);
    cc.x.resize(static_cast<size_t>(n) * c_in * hw * hw);
    cc.w.resize(static_cast<size_t>(c_out) * c_in * k * k);
    cc.b.resize(static_cast<size_t>(c_out));
    cc.y.resize(static_cast<size_t>(n) * c_out * cc.d.h_out * cc.d.w_out);
    for (auto& v : cc.x) v = rng.normal();
    for (auto& v : cc.w) v = 0.1 * rng.normal();
    for (auto& v : cc.b) v = 0.1 * rng.normal();
    return cc;
}

void bm_conv2d_forward_omp(benchmark::State& state) {
    ConvCase cc = make_conv_case(4, 64, 40, 64, 3, 1);
    for (auto _ : state) {
        attnet::kernels::conv2d_forward(cc.x.data(), cc.w.data(), cc.b.data(), cc.y.data(), cc.d);
        benchmark::ClobberMemory();
    }
}

void bm_conv2d_forward_ref(benchmark::State& state) {
    ConvCase cc = make_conv_case(4, 64, 40, 64, 3, 1);
    for (auto _ : state) {
        attnet::ref::conv2d_forward(cc.x.data(), cc.w.data(), cc.b.data(), cc.y.data(), cc.d);
        benchmark::ClobberMemory();
    }
}

void bm_conv2d_backward_omp(benchmark::State& state) {
    ConvCase cc = make_conv_case(4, 32, 20, 32, 3, 1);
    std::vector<double> up(cc.y.size(), 1.0), gx(cc.x.size());
    std::vector<double> gw(cc.w.size(), 0.0), gb(cc.b.size(), 0.0);
    for (auto _ : state) {
        attnet::kernels::conv2d_backward_input(cc.w.data(), up.data(), gx.data(), cc.d);
        attnet::kernels::conv2d_backward_params(cc.x.data(), up.data(), gw.data(), gb.data(),
                                                cc.d);
        benchmark::ClobberMemory();
    }
}

void bm_conv2d_backward_ref(benchmark::State& state) {
    ConvCase cc = make_conv_case(4, 32, 20, 32, 3, 1);
    std::vector<double> up(cc.y.size(), 1.0), gx(cc.x.size());
    std::vector<double> gw(cc.w.size(), 0.0), gb(cc.b.size(), 0.0);
    for (auto _ : state) {
        attnet::ref::conv2d_backward_input(cc.w.data(), up.data(), gx.data(), cc.d);
        attnet::ref::conv2d_backward_params(cc.x.data(), up.data(), gw.data(), gb.data(), cc.d);
        benchmark::ClobberMemory();
    }
}

void bm_dense_forward_omp(benchmark::State& state) {
    const int n = 16, f = 2048, g = 1024;
    attnet::Rng rng(7);
    std::vector<double> x(static_cast<size_t>(n) * f), w(static_cast<size_t>(f) * g), b(g),
        y(static_cast<size_t>(n) * g);
    for (auto& v : x) v = rng.normal();
    for (auto& v : w) v = 0.02 * rng.normal();
    for (auto _ : state) {
        attnet::kernels::dense_forward(x.data(), w.data(), b.data(), y.data(), n, f, g);
        benchmark::ClobberMemory();
    }
}

void bm_dense_forward_ref(benchmark::State& state) {
    const int n = 16, f = 2048, g = 1024;
    attnet::Rng rng(7);
    std::vector<double> x(static_cast<size_t>(n) * f), w(static_cast<size_t>(f) * g), b(g),
        y(static_cast<size_t>(n) * g);
    for (auto& v : x) v = rng.normal();
    for (auto& v : w) v = 0.02 * rng.normal();
    for (auto _ : state) {
        attnet::ref::dense_forward(x.data(), w.data(), b.data(), y.data(), n, f, g);
        benchmark::ClobberMemory();
    }
}

void bm_maxpool_omp(benchmark::State& state) {
    const int n = 8, c = 64, hw = 40;
    attnet::Rng rng(9);
    std::vector<double> x(static_cast<size_t>(n) * c * hw * hw);
    for (auto& v : x) v = rng.normal();
    const int ho = (hw - 2) / 2 + 1;
    std::vector<double> y(static_cast<size_t>(n) * c * ho * ho);
    std::vector<int32_t> argmax(y.size());
    for (auto _ : state) {
        attnet::kernels::maxpool_forward(x.data(), y.data(), argmax.data(), n, c, hw, hw, 2, 2, 2,
                                         2, ho, ho);
        benchmark::ClobberMemory();
    }
}

void bm_maxpool_ref(benchmark::State& state) {
    const int n = 8, c = 64, hw = 40;
    attnet::Rng rng(9);
    std::vector<double> x(static_cast<size_t>(n) * c * hw * hw);
    for (auto& v : x) v = rng.normal();
    const int ho = (hw - 2) / 2 + 1;
    std::vector<double> y(static_cast<size_t>(n) * c * ho * ho);
    std::vector<int32_t> argmax(y.size());
    for (auto _ : state) {
        attnet::ref::maxpool_forward(x.data(), y.data(), argmax.data(), n, c, hw, hw, 2, 2, 2, 2,
                                     ho, ho);
        benchmark::ClobberMemory();
    }
}

}  // namespace

BENCHMARK(bm_conv2d_forward_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_conv2d_forward_ref)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_conv2d_backward_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_conv2d_backward_ref)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_dense_forward_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_dense_forward_ref)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_maxpool_omp)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_maxpool_ref)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
