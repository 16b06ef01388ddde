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

#include "gun/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gun/resample.hpp"

namespace gun {

double psnr(const PlaneImage& x, const PlaneImage& ref, int shave) {
    if (x.width != ref.width || x.height != ref.height)
        throw std::invalid_argument("psnr: plane sizes differ");
    if (shave < 0 || 2 * shave >= std::min(x.width, x.height))
        throw std::invalid_argument("psnr: shave removes the whole image");
    double se = 0.0;
    size_t count = 0;
    for (int y = shave; y < x.height - shave; ++y)
        for (int xx = shave; xx < x.width - shave; ++xx) {
            const double d = static_cast<double>(x.at(y, xx)) - ref.at(y, xx);
            se += d * d;
            ++count;
        }
    const double mse = se / static_cast<double>(count);
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

namespace {

// 11x11 Gaussian window, sigma 1.5, normalized to sum 1.
std::vector<double> gaussian_window() {
    std::vector<double> w(11);
    double s = 0.0;
    for (int i = 0; i < 11; ++i) {
        const double d = i - 5.0;
        w[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
        s += w[i];
    }
    for (double& x : w) x /= s;
    return w;
}

// Separable windowed mean over valid positions; out is (h-10) x (w-10).
std::vector<double> window_filter(const std::vector<double>& src, int h, int w,
                                  const std::vector<double>& win) {
    const int oh = h - 10, ow = w - 10;
    std::vector<double> tmp(static_cast<size_t>(h) * ow);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int j = 0; j < 11; ++j) acc += win[j] * src[static_cast<size_t>(y) * w + x + j];
            tmp[static_cast<size_t>(y) * ow + x] = acc;
        }
    std::vector<double> out(static_cast<size_t>(oh) * ow);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int j = 0; j < 11; ++j) acc += win[j] * tmp[static_cast<size_t>(y + j) * ow + x];
            out[static_cast<size_t>(y) * ow + x] = acc;
        }
    return out;
}

}  // namespace

double ssim(const PlaneImage& x, const PlaneImage& ref) {
    if (x.width != ref.width || x.height != ref.height)
        throw std::invalid_argument("ssim: plane sizes differ");
    if (x.width < 11 || x.height < 11)
        throw std::invalid_argument("ssim: planes must be at least 11x11");

    const int h = x.height, w = x.width;
    const size_t n = x.size();
    std::vector<double> a(n), b(n), aa(n), bb(n), ab(n);
    for (size_t i = 0; i < n; ++i) {
        a[i] = x.v[i];
        b[i] = ref.v[i];
        aa[i] = a[i] * a[i];
        bb[i] = b[i] * b[i];
        ab[i] = a[i] * b[i];
    }

    const auto win = gaussian_window();
    const auto mu_a = window_filter(a, h, w, win);
    const auto mu_b = window_filter(b, h, w, win);
    const auto m_aa = window_filter(aa, h, w, win);
    const auto m_bb = window_filter(bb, h, w, win);
    const auto m_ab = window_filter(ab, h, w, win);

    constexpr double c1 = 0.01 * 0.01;  // (K1*L)^2, L = 1
    constexpr double c2 = 0.03 * 0.03;
    double total = 0.0;
    for (size_t i = 0; i < mu_a.size(); ++i) {
        const double ma = mu_a[i], mb = mu_b[i];
        const double va = m_aa[i] - ma * ma;
        const double vb = m_bb[i] - mb * mb;
        const double cov = m_ab[i] - ma * mb;
        total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) /
                 ((ma * ma + mb * mb + c1) * (va + vb + c2));
    }
    return total / static_cast<double>(mu_a.size());
}

PlaneImage bicubic_baseline(const PlaneImage& lr, int scale) {
    return resize_image(lr, lr.height * scale, lr.width * scale, /*clip01=*/true);
}

double MetricsReport::mean_psnr() const {
    double s = 0.0;
    for (const auto& r : rows) s += r.psnr;
    return rows.empty() ? 0.0 : s / static_cast<double>(rows.size());
}

double MetricsReport::mean_ssim() const {
    double s = 0.0;
    for (const auto& r : rows) s += r.ssim;
    return rows.empty() ? 0.0 : s / static_cast<double>(rows.size());
}

std::string MetricsReport::to_csv() const {
    std::ostringstream os;
    os << "image,method,scale,psnr,ssim\n";
    os.precision(6);
    os << std::fixed;
    for (const auto& r : rows)
        os << r.image << "," << r.method << "," << r.scale << "," << r.psnr << "," << r.ssim
           << "\n";
    if (!rows.empty())
        os << "mean," << rows.front().method << "," << rows.front().scale << "," << mean_psnr()
           << "," << mean_ssim() << "\n";
    return os.str();
}

}  // namespace gun
