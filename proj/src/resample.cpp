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

#include "gun/resample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gun {

double keys_kernel(double t) {
    constexpr double a = -0.5;
    const double x = std::abs(t);
    if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
    if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
    return 0.0;
}

AxisPlan make_axis_plan(int src_len, int dst_len) {
    if (src_len < 1) throw std::invalid_argument("resample: empty source axis");
    if (dst_len < 1) throw std::invalid_argument("resample: empty target axis");
    AxisPlan plan;
    plan.src_len = src_len;
    plan.dst_len = dst_len;
    plan.idx.resize(dst_len);
    plan.w.resize(dst_len);
    const double step = static_cast<double>(src_len) / dst_len;
    for (int d = 0; d < dst_len; ++d) {
        const double pos = (d + 0.5) * step - 0.5;
        const int base = static_cast<int>(std::floor(pos));
        for (int j = 0; j < 4; ++j) {
            const int s = base - 1 + j;
            plan.idx[d][j] = std::clamp(s, 0, src_len - 1);
            plan.w[d][j] = keys_kernel(pos - s);
        }
    }
    return plan;
}

ResamplePlan ResamplePlan::make(int src_h, int src_w, int dst_h, int dst_w) {
    return ResamplePlan{make_axis_plan(src_h, dst_h), make_axis_plan(src_w, dst_w)};
}

namespace {

// Transposed tap lists: for each source index, the (dst, weight) pairs that
// read it, ordered by dst so accumulation order is fixed.
std::vector<std::vector<std::pair<int, double>>> transpose_taps(const AxisPlan& plan) {
    std::vector<std::vector<std::pair<int, double>>> t(plan.src_len);
    for (int d = 0; d < plan.dst_len; ++d)
        for (int j = 0; j < 4; ++j)
            t[plan.idx[d][j]].emplace_back(d, plan.w[d][j]);
    return t;
}

}  // namespace

template <typename T>
void resize_plane(const T* src, int src_h, int src_w, T* dst, const ResamplePlan& plan) {
    const int dst_h = plan.rows.dst_len, dst_w = plan.cols.dst_len;
    std::vector<double> tmp(static_cast<size_t>(src_h) * dst_w);
    // width pass
#pragma omp parallel for schedule(static)
    for (int y = 0; y < src_h; ++y) {
        const T* srow = src + static_cast<size_t>(y) * src_w;
        double* trow = tmp.data() + static_cast<size_t>(y) * dst_w;
        for (int dx = 0; dx < dst_w; ++dx) {
            const auto& ix = plan.cols.idx[dx];
            const auto& wx = plan.cols.w[dx];
            trow[dx] = wx[0] * srow[ix[0]] + wx[1] * srow[ix[1]] +
                       wx[2] * srow[ix[2]] + wx[3] * srow[ix[3]];
        }
    }
    // height pass
#pragma omp parallel for schedule(static)
    for (int dy = 0; dy < dst_h; ++dy) {
        const auto& iy = plan.rows.idx[dy];
        const auto& wy = plan.rows.w[dy];
        const double* r0 = tmp.data() + static_cast<size_t>(iy[0]) * dst_w;
        const double* r1 = tmp.data() + static_cast<size_t>(iy[1]) * dst_w;
        const double* r2 = tmp.data() + static_cast<size_t>(iy[2]) * dst_w;
        const double* r3 = tmp.data() + static_cast<size_t>(iy[3]) * dst_w;
        T* drow = dst + static_cast<size_t>(dy) * dst_w;
        for (int dx = 0; dx < dst_w; ++dx)
            drow[dx] = static_cast<T>(wy[0] * r0[dx] + wy[1] * r1[dx] +
                                      wy[2] * r2[dx] + wy[3] * r3[dx]);
    }
}

template <typename T>
void adjoint_plane(const T* grad, int src_h, int src_w, T* out, const ResamplePlan& plan) {
    const int dst_h = plan.rows.dst_len, dst_w = plan.cols.dst_len;
    const auto rows_t = transpose_taps(plan.rows);
    const auto cols_t = transpose_taps(plan.cols);
    // reverse of the forward composition: height adjoint, then width adjoint
    std::vector<double> tmp(static_cast<size_t>(src_h) * dst_w);
#pragma omp parallel for schedule(static)
    for (int sy = 0; sy < src_h; ++sy) {
        double* trow = tmp.data() + static_cast<size_t>(sy) * dst_w;
        std::fill(trow, trow + dst_w, 0.0);
        for (const auto& [dy, wy] : rows_t[sy]) {
            const T* grow = grad + static_cast<size_t>(dy) * dst_w;
            for (int dx = 0; dx < dst_w; ++dx) trow[dx] += wy * grow[dx];
        }
    }
#pragma omp parallel for schedule(static)
    for (int sy = 0; sy < src_h; ++sy) {
        const double* trow = tmp.data() + static_cast<size_t>(sy) * dst_w;
        T* orow = out + static_cast<size_t>(sy) * src_w;
        for (int sx = 0; sx < src_w; ++sx) {
            double acc = 0.0;
            for (const auto& [dx, wx] : cols_t[sx]) acc += wx * trow[dx];
            orow[sx] = static_cast<T>(acc);
        }
    }
}

template <typename T>
std::vector<T> bicubic_resize(const std::vector<T>& src, int src_h, int src_w,
                              int dst_h, int dst_w) {
    if (src.size() != static_cast<size_t>(src_h) * src_w)
        throw std::invalid_argument("bicubic_resize: source size mismatch");
    const ResamplePlan plan = ResamplePlan::make(src_h, src_w, dst_h, dst_w);
    std::vector<T> dst(static_cast<size_t>(dst_h) * dst_w);
    resize_plane(src.data(), src_h, src_w, dst.data(), plan);
    return dst;
}

template <typename T>
std::vector<T> bicubic_adjoint(const std::vector<T>& grad, int dst_h, int dst_w,
                               int src_h, int src_w) {
    if (grad.size() != static_cast<size_t>(dst_h) * dst_w)
        throw std::invalid_argument("bicubic_adjoint: grad size mismatch");
    const ResamplePlan plan = ResamplePlan::make(src_h, src_w, dst_h, dst_w);
    std::vector<T> out(static_cast<size_t>(src_h) * src_w);
    adjoint_plane(grad.data(), src_h, src_w, out.data(), plan);
    return out;
}

PlaneImage resize_image(const PlaneImage& src, int dst_h, int dst_w, bool clip01) {
    PlaneImage dst(dst_w, dst_h, src.tag);
    const ResamplePlan plan = ResamplePlan::make(src.height, src.width, dst_h, dst_w);
    resize_plane(src.v.data(), src.height, src.width, dst.v.data(), plan);
    if (clip01)
        for (float& x : dst.v) x = std::clamp(x, 0.0f, 1.0f);
    return dst;
}

PlaneImage degrade(const PlaneImage& hr, int scale) {
    if (scale < 2) throw std::invalid_argument("degrade: scale must be >= 2");
    const int ch = hr.height - hr.height % scale;
    const int cw = hr.width - hr.width % scale;
    if (ch < scale || cw < scale)
        throw std::invalid_argument("degrade: image smaller than one scale block");
    PlaneImage cropped(cw, ch, hr.tag);
    for (int y = 0; y < ch; ++y)
        std::copy_n(hr.v.data() + static_cast<size_t>(y) * hr.width, cw,
                    cropped.v.data() + static_cast<size_t>(y) * cw);
    return resize_image(cropped, ch / scale, cw / scale, /*clip01=*/true);
}

template void resize_plane(const float*, int, int, float*, const ResamplePlan&);
template void resize_plane(const double*, int, int, double*, const ResamplePlan&);
template void adjoint_plane(const float*, int, int, float*, const ResamplePlan&);
template void adjoint_plane(const double*, int, int, double*, const ResamplePlan&);
template std::vector<float> bicubic_resize(const std::vector<float>&, int, int, int, int);
template std::vector<double> bicubic_resize(const std::vector<double>&, int, int, int, int);
template std::vector<float> bicubic_adjoint(const std::vector<float>&, int, int, int, int);
template std::vector<double> bicubic_adjoint(const std::vector<double>&, int, int, int, int);

}  // namespace gun
