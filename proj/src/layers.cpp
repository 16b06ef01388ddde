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

#include "gun/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace gun {

template <typename T>
Tensor<T> bn_forward(const Tensor<T>& input, BatchNormState<T>& state, Mode mode,
                     BnCache<T>* cache) {
    check_shape(input.c == state.channels(), "bn_forward: channel count mismatch");
    const size_t m = static_cast<size_t>(input.n) * input.h * input.w;
    if (mode == Mode::Train && m <= 1)
        throw std::invalid_argument("bn_forward: train mode needs more than one value per channel");

    Tensor<T> out(input.n, input.c, input.h, input.w);
    if (cache) {
        cache->train_mode = (mode == Mode::Train);
        cache->inv_std.assign(input.c, T(0));
        if (mode == Mode::Train) cache->xhat = Tensor<T>(input.n, input.c, input.h, input.w);
    }

#pragma omp parallel for schedule(static)
    for (int ch = 0; ch < input.c; ++ch) {
        double mean, var;
        if (mode == Mode::Train) {
            double sum = 0.0;
            for (int i = 0; i < input.n; ++i) {
                const T* p = input.plane(i, ch);
                for (size_t s = 0; s < input.plane_size(); ++s) sum += p[s];
            }
            mean = sum / static_cast<double>(m);
            double sq = 0.0;
            for (int i = 0; i < input.n; ++i) {
                const T* p = input.plane(i, ch);
                for (size_t s = 0; s < input.plane_size(); ++s) {
                    const double d = p[s] - mean;
                    sq += d * d;
                }
            }
            var = sq / static_cast<double>(m);
            state.running_mean[ch] = static_cast<T>(state.stat_momentum * state.running_mean[ch] +
                                                    (1.0 - state.stat_momentum) * mean);
            state.running_var[ch] = static_cast<T>(state.stat_momentum * state.running_var[ch] +
                                                   (1.0 - state.stat_momentum) * var);
        } else {
            mean = state.running_mean[ch];
            var = state.running_var[ch];
        }
        const double inv = 1.0 / std::sqrt(var + state.eps);
        const double g = state.gamma[ch], b = state.beta[ch];
        for (int i = 0; i < input.n; ++i) {
            const T* p = input.plane(i, ch);
            T* o = out.plane(i, ch);
            T* xh = (cache && mode == Mode::Train) ? cache->xhat.plane(i, ch) : nullptr;
            for (size_t s = 0; s < input.plane_size(); ++s) {
                const double xhat = (p[s] - mean) * inv;
                if (xh) xh[s] = static_cast<T>(xhat);
                o[s] = static_cast<T>(g * xhat + b);
            }
        }
        if (cache) cache->inv_std[ch] = static_cast<T>(inv);
    }
    return out;
}

template <typename T>
BnGrads<T> bn_backward(const BatchNormState<T>& state, const BnCache<T>& cache,
                       const Tensor<T>& grad_out) {
    if (!cache.train_mode)
        throw std::invalid_argument("bn_backward: cache was produced in inference mode");
    check_shape(cache.xhat.same_shape(grad_out), "bn_backward: grad_out shape mismatch");
    const Tensor<T>& xhat = cache.xhat;
    const size_t m = static_cast<size_t>(xhat.n) * xhat.h * xhat.w;

    BnGrads<T> g;
    g.input = Tensor<T>(xhat.n, xhat.c, xhat.h, xhat.w);
    g.gamma.assign(xhat.c, T(0));
    g.beta.assign(xhat.c, T(0));

#pragma omp parallel for schedule(static)
    for (int ch = 0; ch < xhat.c; ++ch) {
        double sum_g = 0.0, sum_gx = 0.0;
        for (int i = 0; i < xhat.n; ++i) {
            const T* go = grad_out.plane(i, ch);
            const T* xh = xhat.plane(i, ch);
            for (size_t s = 0; s < xhat.plane_size(); ++s) {
                sum_g += go[s];
                sum_gx += go[s] * static_cast<double>(xh[s]);
            }
        }
        g.beta[ch] = static_cast<T>(sum_g);
        g.gamma[ch] = static_cast<T>(sum_gx);
        // d/dx of gamma*xhat+beta with xhat depending on batch mean/var:
        // gamma*inv/m * (m*g - sum(g) - xhat*sum(g*xhat))
        const double scale = static_cast<double>(state.gamma[ch]) * cache.inv_std[ch] /
                             static_cast<double>(m);
        for (int i = 0; i < xhat.n; ++i) {
            const T* go = grad_out.plane(i, ch);
            const T* xh = xhat.plane(i, ch);
            T* gi = g.input.plane(i, ch);
            for (size_t s = 0; s < xhat.plane_size(); ++s)
                gi[s] = static_cast<T>(scale * (static_cast<double>(m) * go[s] - sum_g -
                                                static_cast<double>(xh[s]) * sum_gx));
        }
    }
    return g;
}

template <typename T>
Tensor<T> upsample_forward(const Tensor<T>& input, int target_h, int target_w) {
    if (target_h < input.h || target_w < input.w)
        throw std::invalid_argument("upsample_forward: target must not shrink the input");
    if (target_h == input.h && target_w == input.w) return input;
    const ResamplePlan plan = ResamplePlan::make(input.h, input.w, target_h, target_w);
    Tensor<T> out(input.n, input.c, target_h, target_w);
    const int planes = input.n * input.c;
#pragma omp parallel for schedule(static)
    for (int p = 0; p < planes; ++p)
        resize_plane(input.v.data() + static_cast<size_t>(p) * input.plane_size(),
                     input.h, input.w,
                     out.v.data() + static_cast<size_t>(p) * out.plane_size(), plan);
    return out;
}

template <typename T>
Tensor<T> upsample_backward(const Tensor<T>& grad_out, int src_h, int src_w,
                            BackwardResample mode) {
    if (grad_out.h < src_h || grad_out.w < src_w)
        throw std::invalid_argument("upsample_backward: source larger than grad_out");
    if (grad_out.h == src_h && grad_out.w == src_w) return grad_out;
    Tensor<T> out(grad_out.n, grad_out.c, src_h, src_w);
    const int planes = grad_out.n * grad_out.c;
    if (mode == BackwardResample::Adjoint) {
        const ResamplePlan plan = ResamplePlan::make(src_h, src_w, grad_out.h, grad_out.w);
#pragma omp parallel for schedule(static)
        for (int p = 0; p < planes; ++p)
            adjoint_plane(grad_out.v.data() + static_cast<size_t>(p) * grad_out.plane_size(),
                          src_h, src_w,
                          out.v.data() + static_cast<size_t>(p) * out.plane_size(), plan);
    } else {
        const ResamplePlan plan = ResamplePlan::make(grad_out.h, grad_out.w, src_h, src_w);
#pragma omp parallel for schedule(static)
        for (int p = 0; p < planes; ++p)
            resize_plane(grad_out.v.data() + static_cast<size_t>(p) * grad_out.plane_size(),
                         grad_out.h, grad_out.w,
                         out.v.data() + static_cast<size_t>(p) * out.plane_size(), plan);
    }
    return out;
}

template Tensor<float> bn_forward(const Tensor<float>&, BatchNormState<float>&, Mode, BnCache<float>*);
template Tensor<double> bn_forward(const Tensor<double>&, BatchNormState<double>&, Mode, BnCache<double>*);
template BnGrads<float> bn_backward(const BatchNormState<float>&, const BnCache<float>&, const Tensor<float>&);
template BnGrads<double> bn_backward(const BatchNormState<double>&, const BnCache<double>&, const Tensor<double>&);
template Tensor<float> upsample_forward(const Tensor<float>&, int, int);
template Tensor<double> upsample_forward(const Tensor<double>&, int, int);
template Tensor<float> upsample_backward(const Tensor<float>&, int, int, BackwardResample);
template Tensor<double> upsample_backward(const Tensor<double>&, int, int, BackwardResample);

}  // namespace gun
