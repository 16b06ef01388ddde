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

#include "gun/conv.hpp"

#include <algorithm>
#include <cmath>

namespace gun {

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const ConvParams<T>& params) {
    check_shape(input.c == params.c_in,
                "conv2d_forward: input channels " + std::to_string(input.c) +
                    " != expected " + std::to_string(params.c_in));
    const int h = input.h, w = input.w, k = params.k, pad = k / 2;
    Tensor<T> out(input.n, params.c_out, h, w);

#pragma omp parallel for collapse(2) schedule(static)
    for (int i = 0; i < input.n; ++i)
        for (int oc = 0; oc < params.c_out; ++oc) {
            T* op = out.plane(i, oc);
            std::fill(op, op + out.plane_size(), params.bias[oc]);
            for (int ic = 0; ic < input.c; ++ic) {
                const T* ip = input.plane(i, ic);
                const T* kw = params.kernel(oc, ic);
                for (int ky = 0; ky < k; ++ky)
                    for (int kx = 0; kx < k; ++kx) {
                        const T wv = kw[ky * k + kx];
                        const int dy = ky - pad, dx = kx - pad;
                        const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
                        const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
                        for (int y = y0; y < y1; ++y) {
                            T* orow = op + static_cast<size_t>(y) * w;
                            const T* irow = ip + static_cast<size_t>(y + dy) * w + dx;
                            for (int x = x0; x < x1; ++x) orow[x] += wv * irow[x];
                        }
                    }
            }
        }
    return out;
}

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& input, const ConvParams<T>& params,
                             const Tensor<T>& grad_out) {
    check_shape(input.c == params.c_in, "conv2d_backward: input channel mismatch");
    check_shape(grad_out.n == input.n && grad_out.c == params.c_out &&
                    grad_out.h == input.h && grad_out.w == input.w,
                "conv2d_backward: grad_out shape " + grad_out.shape_str() +
                    " does not match forward output");
    const int h = input.h, w = input.w, k = params.k, pad = k / 2;

    ConvGrads<T> g;
    g.input = Tensor<T>(input.n, input.c, h, w);
    g.weights = Tensor<T>(params.c_out, params.c_in, k, k);
    g.bias.assign(params.c_out, T(0));

    // grad wrt input: correlation of grad_out with the flipped kernel.
#pragma omp parallel for collapse(2) schedule(static)
    for (int i = 0; i < input.n; ++i)
        for (int ic = 0; ic < input.c; ++ic) {
            T* gp = g.input.plane(i, ic);
            for (int oc = 0; oc < params.c_out; ++oc) {
                const T* gop = grad_out.plane(i, oc);
                const T* kw = params.kernel(oc, ic);
                for (int ky = 0; ky < k; ++ky)
                    for (int kx = 0; kx < k; ++kx) {
                        const T wv = kw[ky * k + kx];
                        const int dy = pad - ky, dx = pad - kx;
                        const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
                        const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
                        for (int y = y0; y < y1; ++y) {
                            T* grow = gp + static_cast<size_t>(y) * w;
                            const T* gorow = gop + static_cast<size_t>(y + dy) * w + dx;
                            for (int x = x0; x < x1; ++x) grow[x] += wv * gorow[x];
                        }
                    }
            }
        }

    // grad wrt weights and bias, one output channel per task; the batch and
    // spatial sums run in a fixed order within each task.
#pragma omp parallel for schedule(static)
    for (int oc = 0; oc < params.c_out; ++oc) {
        T bias_acc = T(0);
        for (int i = 0; i < input.n; ++i) {
            const T* gop = grad_out.plane(i, oc);
            for (size_t s = 0; s < grad_out.plane_size(); ++s) bias_acc += gop[s];
            for (int ic = 0; ic < input.c; ++ic) {
                const T* ip = input.plane(i, ic);
                T* gw = g.weights.plane(oc, ic);
                for (int ky = 0; ky < k; ++ky)
                    for (int kx = 0; kx < k; ++kx) {
                        const int dy = ky - pad, dx = kx - pad;
                        const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
                        const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
                        T acc = T(0);
                        for (int y = y0; y < y1; ++y) {
                            const T* gorow = gop + static_cast<size_t>(y) * w;
                            const T* irow = ip + static_cast<size_t>(y + dy) * w + dx;
                            for (int x = x0; x < x1; ++x) acc += gorow[x] * irow[x];
                        }
                        gw[ky * k + kx] += acc;
                    }
            }
        }
        g.bias[oc] = bias_acc;
    }
    return g;
}

template <typename T>
Tensor<T> relu_forward(const Tensor<T>& input) {
    Tensor<T> out = input;
#pragma omp parallel for schedule(static)
    for (ptrdiff_t s = 0; s < static_cast<ptrdiff_t>(out.v.size()); ++s)
        out.v[s] = std::max(T(0), out.v[s]);
    return out;
}

template <typename T>
Tensor<T> relu_backward(const Tensor<T>& input, const Tensor<T>& grad_out) {
    check_shape(input.same_shape(grad_out), "relu_backward: shape mismatch");
    Tensor<T> g(input.n, input.c, input.h, input.w);
#pragma omp parallel for schedule(static)
    for (ptrdiff_t s = 0; s < static_cast<ptrdiff_t>(g.v.size()); ++s)
        g.v[s] = input.v[s] > T(0) ? grad_out.v[s] : T(0);
    return g;
}

double GaussianRng::next_uniform() {
    // splitmix64; maps the full 64-bit state into (0, 1).
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return (static_cast<double>(z >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

double GaussianRng::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

template <typename T>
void he_init(ConvParams<T>& params, uint64_t seed) {
    const double stddev = std::sqrt(2.0 / (static_cast<double>(params.c_in) * params.k * params.k));
    GaussianRng rng(seed);
    for (T& wv : params.weights) wv = static_cast<T>(rng.next() * stddev);
    std::fill(params.bias.begin(), params.bias.end(), T(0));
}

template Tensor<float> conv2d_forward(const Tensor<float>&, const ConvParams<float>&);
template Tensor<double> conv2d_forward(const Tensor<double>&, const ConvParams<double>&);
template ConvGrads<float> conv2d_backward(const Tensor<float>&, const ConvParams<float>&, const Tensor<float>&);
template ConvGrads<double> conv2d_backward(const Tensor<double>&, const ConvParams<double>&, const Tensor<double>&);
template Tensor<float> relu_forward(const Tensor<float>&);
template Tensor<double> relu_forward(const Tensor<double>&);
template Tensor<float> relu_backward(const Tensor<float>&, const Tensor<float>&);
template Tensor<double> relu_backward(const Tensor<double>&, const Tensor<double>&);
template void he_init(ConvParams<float>&, uint64_t);
template void he_init(ConvParams<double>&, uint64_t);

}  // namespace gun
