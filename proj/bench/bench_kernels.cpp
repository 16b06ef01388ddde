/* Copyright 2026 The GUN Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#include <chrono>
#include <cstdio>
#include <random>
#include <string>

#include "gun/conv.hpp"
#include "gun/reference.hpp"
#include "gun/resample.hpp"
#include "gun/threading.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace gun;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <typename Fn>
double time_best_of(int reps, Fn&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_ms();
        fn();
        best = std::min(best, now_ms() - t0);
    }
    return best;
}

void fill(std::vector<float>& v, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> u(-1.0f, 1.0f);
    for (float& x : v) x = u(rng);
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void report(const std::string& name, double serial_ms, double par1_ms, double parn_ms,
            int threads) {
    std::printf("%-28s %10.2f ms %12.2f ms %11.2f ms (x%.2f vs serial, x%.2f vs 1 thread)\n",
                name.c_str(), serial_ms, par1_ms, parn_ms, serial_ms / parn_ms,
                par1_ms / parn_ms);
}

}  // namespace

int main() {
    apply_thread_env();
    const int threads = max_threads();
    std::printf("threads available: %d\n", threads);
    std::printf("%-28s %13s %15s %14s\n", "kernel", "serial ref", "omp 1 thread",
                "omp N threads");

    {
        Tensor<float> in(4, 32, 48, 48);
        fill(in.v, 1);
        ConvParams<float> p(32, 32, 3);
        fill(p.weights, 2);
        const double serial = time_best_of(3, [&] { ref::conv2d(in, p); });
        set_threads(1);
        const double par1 = time_best_of(3, [&] { conv2d_forward(in, p); });
        set_threads(threads);
        const double parn = time_best_of(3, [&] { conv2d_forward(in, p); });
        report("conv2d 3x3 4x32x48x48", serial, par1, parn, threads);

        // consistency spot check
        const Tensor<float> a = ref::conv2d(in, p);
        const Tensor<float> b = conv2d_forward(in, p);
        double worst = 0.0;
        for (size_t i = 0; i < a.v.size(); ++i)
            worst = std::max(worst, static_cast<double>(std::abs(a.v[i] - b.v[i])));
        std::printf("  max |serial - omp| = %.3g\n", worst);
    }

    {
        Tensor<float> in(4, 32, 48, 48);
        fill(in.v, 3);
        ConvParams<float> p(32, 32, 3);
        fill(p.weights, 4);
        Tensor<float> grad(4, 32, 48, 48);
        fill(grad.v, 5);
        set_threads(1);
        const double par1 = time_best_of(3, [&] { conv2d_backward(in, p, grad); });
        set_threads(threads);
        const double parn = time_best_of(3, [&] { conv2d_backward(in, p, grad); });
        std::printf("%-28s %13s %12.2f ms %11.2f ms (x%.2f vs 1 thread)\n",
                    "conv2d backward", "-", par1, parn, par1 / parn);
    }

    {
        const int sh = 512, sw = 512, dh = 768, dw = 768;
        std::vector<float> img(static_cast<size_t>(sh) * sw);
        fill(img, 6);
        const double serial =
            time_best_of(3, [&] { ref::resize_brute(img, sh, sw, dh, dw); });
        set_threads(1);
        const double par1 = time_best_of(3, [&] { bicubic_resize(img, sh, sw, dh, dw); });
        set_threads(threads);
        const double parn = time_best_of(3, [&] { bicubic_resize(img, sh, sw, dh, dw); });
        report("bicubic 512x512 -> 768x768", serial, par1, parn, threads);
    }

    {
        const int sh = 512, sw = 512, dh = 768, dw = 768;
        std::vector<float> grad(static_cast<size_t>(dh) * dw);
        fill(grad, 7);
        set_threads(1);
        const double par1 = time_best_of(3, [&] { bicubic_adjoint(grad, dh, dw, sh, sw); });
        set_threads(threads);
        const double parn = time_best_of(3, [&] { bicubic_adjoint(grad, dh, dw, sh, sw); });
        std::printf("%-28s %13s %12.2f ms %11.2f ms (x%.2f vs 1 thread)\n",
                    "bicubic adjoint 768 -> 512", "-", par1, parn, par1 / parn);
    }

    return 0;
}
