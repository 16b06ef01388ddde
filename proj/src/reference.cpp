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

#include "gun/reference.hpp"

#include <algorithm>
#include <cmath>

#include "gun/resample.hpp"

namespace gun::ref {

template <typename T>
Tensor<T> conv2d(const Tensor<T>& in, const ConvParams<T>& params) {
    check_shape(in.c == params.c_in, "ref::conv2d: channel mismatch");
    const int pad = params.k / 2;
    Tensor<T> out(in.n, params.c_out, in.h, in.w);
    for (int i = 0; i < in.n; ++i)
        for (int oc = 0; oc < params.c_out; ++oc)
            for (int y = 0; y < in.h; ++y)
                for (int x = 0; x < in.w; ++x) {
                    T acc = params.bias[oc];
                    for (int ic = 0; ic < in.c; ++ic)
                        for (int ky = 0; ky < params.k; ++ky)
                            for (int kx = 0; kx < params.k; ++kx) {
                                const int sy = y + ky - pad;
                                const int sx = x + kx - pad;
                                if (sy < 0 || sy >= in.h || sx < 0 || sx >= in.w)
                                    continue;  // zero padding
                                acc += params.kernel(oc, ic)[ky * params.k + kx] *
                                       in.at(i, ic, sy, sx);
                            }
                    out.at(i, oc, y, x) = acc;
                }
    return out;
}

template <typename T>
std::vector<T> resize_brute(const std::vector<T>& src, int src_h, int src_w,
                            int dst_h, int dst_w) {
    std::vector<T> dst(static_cast<size_t>(dst_h) * dst_w, T(0));
    for (int dy = 0; dy < dst_h; ++dy) {
        const double fy = (dy + 0.5) * (static_cast<double>(src_h) / dst_h) - 0.5;
        const int by = static_cast<int>(std::floor(fy));
        for (int dx = 0; dx < dst_w; ++dx) {
            const double fx = (dx + 0.5) * (static_cast<double>(src_w) / dst_w) - 0.5;
            const int bx = static_cast<int>(std::floor(fx));
            double acc = 0.0;
            for (int jy = -1; jy <= 2; ++jy)
                for (int jx = -1; jx <= 2; ++jx) {
                    const double wy = keys_kernel(fy - (by + jy));
                    const double wx = keys_kernel(fx - (bx + jx));
                    const int sy = std::clamp(by + jy, 0, src_h - 1);
                    const int sx = std::clamp(bx + jx, 0, src_w - 1);
                    acc += wy * wx * static_cast<double>(src[static_cast<size_t>(sy) * src_w + sx]);
                }
            dst[static_cast<size_t>(dy) * dst_w + dx] = static_cast<T>(acc);
        }
    }
    return dst;
}

template Tensor<float> conv2d(const Tensor<float>&, const ConvParams<float>&);
template Tensor<double> conv2d(const Tensor<double>&, const ConvParams<double>&);
template std::vector<float> resize_brute(const std::vector<float>&, int, int, int, int);
template std::vector<double> resize_brute(const std::vector<double>&, int, int, int, int);

}  // namespace gun::ref
