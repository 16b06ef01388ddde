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

#include <cmath>

#include "doctest.h"
#include "gun/metrics.hpp"
#include "gun/reference.hpp"
#include "image_gen.hpp"
#include "test_util.hpp"

using namespace gun;
using namespace gun::test;

TEST_CASE("psnr of identical planes is the +inf sentinel") {
    const PlaneImage img = synth_image(20, 20, 2);
    CHECK(std::isinf(psnr(img, img, 0)));
    CHECK(psnr(img, img, 2) > 0.0);
}

TEST_CASE("psnr of a uniform 10/255 error is 28.1308 dB") {
    PlaneImage a(16, 16), b(16, 16);
    for (size_t i = 0; i < a.v.size(); ++i) {
        a.v[i] = 0.3f;
        b.v[i] = 0.3f + 10.0f / 255.0f;
    }
    const double want = 10.0 * std::log10(255.0 * 255.0 / 100.0);  // 28.1308...
    CHECK(psnr(a, b, 0) == doctest::Approx(want).epsilon(1e-6));
    CHECK(psnr(a, b, 0) == doctest::Approx(28.13).epsilon(0.0005));
}

TEST_CASE("psnr is symmetric and decreases with noise amplitude") {
    const PlaneImage ref = synth_image(32, 32, 3);
    double last = std::numeric_limits<double>::infinity();
    for (const double amp : {0.01, 0.05, 0.2}) {
        PlaneImage noisy = ref;
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(-amp, amp);
        for (float& v : noisy.v)
            v = static_cast<float>(std::clamp(static_cast<double>(v) + u(rng), 0.0, 1.0));
        const double p = psnr(noisy, ref, 0);
        CHECK(p < last);
        CHECK(psnr(ref, noisy, 0) == doctest::Approx(p).epsilon(1e-12));
        last = p;
    }
}

TEST_CASE("psnr shaves the border and validates sizes") {
    PlaneImage a(8, 8), b(8, 8);
    // identical except for the outermost ring
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
            a.at(y, x) = 0.5f;
            const bool ring = y == 0 || x == 0 || y == 7 || x == 7;
            b.at(y, x) = ring ? 1.0f : 0.5f;
        }
    CHECK(std::isinf(psnr(a, b, 1)));
    CHECK(!std::isinf(psnr(a, b, 0)));
    CHECK_THROWS_AS(psnr(a, b, 4), std::invalid_argument);
    PlaneImage c(9, 8);
    CHECK_THROWS_AS(psnr(a, c, 0), std::invalid_argument);
}

TEST_CASE("ssim of identical planes is exactly one") {
    const PlaneImage img = synth_image(24, 24, 5);
    CHECK(ssim(img, img) == 1.0);
}

TEST_CASE("ssim direction and symmetry") {
    const PlaneImage img = synth_image(24, 24, 7);
    PlaneImage inv = img;
    for (float& v : inv.v) v = 1.0f - v;
    const double s = ssim(img, inv);
    CHECK(s < 1.0);
    CHECK(ssim(inv, img) == doctest::Approx(s).epsilon(1e-9));
}

TEST_CASE("ssim of two constants matches the closed form") {
    PlaneImage a(12, 12), b(12, 12);
    for (float& v : a.v) v = 0.2f;
    for (float& v : b.v) v = 0.8f;
    constexpr double c1 = 0.01 * 0.01;
    const double want = (2.0 * 0.2 * 0.8 + c1) / (0.2 * 0.2 + 0.8 * 0.8 + c1);
    CHECK(ssim(a, b) == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("ssim rejects undersized planes") {
    PlaneImage a(10, 12), b(10, 12);
    CHECK_THROWS_AS(ssim(a, b), std::invalid_argument);
}

TEST_CASE("bicubic baseline: shapes, constants and oracle agreement") {
    PlaneImage flat(7, 5);
    for (float& v : flat.v) v = 0.61f;
    const PlaneImage up = bicubic_baseline(flat, 3);
    CHECK(up.width == 21);
    CHECK(up.height == 15);
    for (float v : up.v) CHECK(v == doctest::Approx(0.61f).epsilon(1e-6));

    const PlaneImage img = synth_image(9, 9, 11);
    const PlaneImage got = bicubic_baseline(img, 2);
    std::vector<double> src(img.v.begin(), img.v.end());
    const auto brute = ref::resize_brute(src, 9, 9, 18, 18);
    for (size_t i = 0; i < got.v.size(); ++i)
        CHECK(std::abs(got.v[i] - std::clamp(brute[i], 0.0, 1.0)) < 1e-6);
}

TEST_CASE("metrics report CSV has one row per image plus a mean row") {
    MetricsReport report;
    report.rows.push_back({"a.png", "gun", 2, 30.0, 0.9});
    report.rows.push_back({"b.png", "gun", 2, 32.0, 0.95});
    const std::string csv = report.to_csv();
    CHECK(csv.find("image,method,scale,psnr,ssim\n") == 0);
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 4);  // header + 2 rows + mean
    CHECK(report.mean_psnr() == doctest::Approx(31.0));
    CHECK(csv.find("mean,gun,2,31.0") != std::string::npos);
}
