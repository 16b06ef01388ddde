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

#include <random>

#include "doctest.h"
#include "gun/reference.hpp"
#include "gun/resample.hpp"
#include "test_util.hpp"

using namespace gun;
using namespace gun::test;

TEST_CASE("keys kernel interpolation conditions") {
    CHECK(keys_kernel(0.0) == 1.0);
    CHECK(keys_kernel(1.0) == 0.0);
    CHECK(keys_kernel(-1.0) == 0.0);
    CHECK(keys_kernel(2.0) == 0.0);
    CHECK(keys_kernel(-2.0) == 0.0);
    CHECK(keys_kernel(2.5) == 0.0);
    // hand evaluation of the a = -0.5 polynomial at t = 0.5
    CHECK(keys_kernel(0.5) == doctest::Approx(0.5625).epsilon(1e-12));
    CHECK(keys_kernel(1.5) == doctest::Approx(-0.0625).epsilon(1e-12));
}

TEST_CASE("axis plans form a partition of unity over valid taps") {
    for (const auto [src, dst] : {std::pair{4, 7}, {7, 4}, {1, 5}, {16, 3}, {5, 5}, {3, 16}}) {
        const AxisPlan plan = make_axis_plan(src, dst);
        REQUIRE(plan.idx.size() == static_cast<size_t>(dst));
        for (int d = 0; d < dst; ++d) {
            double sum = 0.0;
            for (int j = 0; j < 4; ++j) {
                CHECK(plan.idx[d][j] >= 0);
                CHECK(plan.idx[d][j] < src);
                sum += plan.w[d][j];
            }
            CHECK(std::abs(sum - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("resize to the same size is exactly the identity") {
    std::vector<double> img(6 * 5);
    fill_uniform(img, 7);
    const auto out = bicubic_resize(img, 6, 5, 6, 5);
    CHECK(out == img);
}

TEST_CASE("resizing a constant plane preserves the constant") {
    for (const auto [sh, sw, dh, dw] :
         {std::array{4, 4, 9, 9}, {9, 9, 4, 4}, {5, 7, 13, 11}, {12, 3, 5, 17}}) {
        std::vector<double> img(static_cast<size_t>(sh) * sw, 0.437);
        const auto out = bicubic_resize(img, sh, sw, dh, dw);
        for (double v : out) CHECK(std::abs(v - 0.437) < 1e-6);
    }
}

TEST_CASE("separable resize matches the non-separable brute-force oracle") {
    std::vector<double> ramp(4 * 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) ramp[y * 4 + x] = (y * 4 + x) / 15.0;
    const auto got = bicubic_resize(ramp, 4, 4, 7, 7);
    const auto want = ref::resize_brute(ramp, 4, 4, 7, 7);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-6);

    // and on random images across a few shape pairs
    std::mt19937_64 rng(99);
    for (const auto [sh, sw, dh, dw] :
         {std::array{5, 8, 11, 6}, {9, 4, 10, 13}, {6, 6, 8, 8}, {10, 12, 7, 5}}) {
        std::vector<double> img(static_cast<size_t>(sh) * sw);
        fill_uniform(img, rng(), 0.0, 1.0);
        const auto a = bicubic_resize(img, sh, sw, dh, dw);
        const auto b = ref::resize_brute(img, sh, sw, dh, dw);
        for (size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-6);
    }
}

TEST_CASE("resize rejects empty targets") {
    std::vector<double> img(4, 0.0);
    CHECK_THROWS_AS(bicubic_resize(img, 2, 2, 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(bicubic_resize(img, 2, 2, 3, 0), std::invalid_argument);
}

TEST_CASE("adjoint at equal sizes is the identity") {
    std::vector<double> g(5 * 5);
    fill_uniform(g, 31);
    CHECK(bicubic_adjoint(g, 5, 5, 5, 5) == g);
}

TEST_CASE("adjoint satisfies the inner-product identity") {
    std::vector<double> x(5 * 5), g(8 * 8);
    fill_uniform(x, 37);
    fill_uniform(g, 41);
    const auto fx = bicubic_resize(x, 5, 5, 8, 8);
    const auto atg = bicubic_adjoint(g, 8, 8, 5, 5);
    double lhs = 0.0, rhs = 0.0;
    for (size_t i = 0; i < fx.size(); ++i) lhs += fx[i] * g[i];
    for (size_t i = 0; i < x.size(); ++i) rhs += x[i] * atg[i];
    CHECK(std::abs(lhs - rhs) < 1e-6);
}

TEST_CASE("adjoint inner-product identity holds over 20 random size pairs") {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> size(3, 16);
    for (int trial = 0; trial < 20; ++trial) {
        const int sh = size(rng), sw = size(rng), dh = size(rng), dw = size(rng);
        std::vector<double> x(static_cast<size_t>(sh) * sw), g(static_cast<size_t>(dh) * dw);
        fill_uniform(x, rng());
        fill_uniform(g, rng());
        const auto fx = bicubic_resize(x, sh, sw, dh, dw);
        const auto atg = bicubic_adjoint(g, dh, dw, sh, sw);
        double lhs = 0.0, rhs = 0.0;
        for (size_t i = 0; i < fx.size(); ++i) lhs += fx[i] * g[i];
        for (size_t i = 0; i < x.size(); ++i) rhs += x[i] * atg[i];
        CHECK(std::abs(lhs - rhs) < 1e-6);
    }
}

TEST_CASE("adjoint of all-ones equals the operator column sums") {
    // assemble the 36x16 matrix of the 4x4 -> 6x6 resize from unit impulses
    const int sh = 4, sw = 4, dh = 6, dw = 6;
    std::vector<std::vector<double>> columns(sh * sw);
    for (int s = 0; s < sh * sw; ++s) {
        std::vector<double> impulse(sh * sw, 0.0);
        impulse[s] = 1.0;
        columns[s] = bicubic_resize(impulse, sh, sw, dh, dw);
    }
    std::vector<double> ones(static_cast<size_t>(dh) * dw, 1.0);
    const auto got = bicubic_adjoint(ones, dh, dw, sh, sw);
    for (int s = 0; s < sh * sw; ++s) {
        double col_sum = 0.0;
        for (double v : columns[s]) col_sum += v;
        CHECK(std::abs(got[s] - col_sum) < 1e-9);
    }
}

TEST_CASE("adjoint rejects size mismatches") {
    std::vector<double> g(10, 0.0);
    CHECK_THROWS_AS(bicubic_adjoint(g, 3, 3, 2, 2), std::invalid_argument);
}

TEST_CASE("degrade keeps constants and contracts shapes") {
    PlaneImage img(8, 8);
    for (float& v : img.v) v = 0.6f;
    const PlaneImage lr = degrade(img, 2);
    CHECK(lr.width == 4);
    CHECK(lr.height == 4);
    for (float v : lr.v) CHECK(v == doctest::Approx(0.6f).epsilon(1e-6));
}

TEST_CASE("degrade crops to a multiple of the scale first") {
    PlaneImage img(9, 11);
    for (float& v : img.v) v = 0.25f;
    const PlaneImage lr = degrade(img, 3);
    CHECK(lr.width == 3);
    CHECK(lr.height == 3);
}

TEST_CASE("degrade of a Nyquist checkerboard is low-pass") {
    const int n = 16;
    PlaneImage board(n, n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) board.at(y, x) = static_cast<float>((x + y) & 1);
    const PlaneImage lr = degrade(board, 2);
    double mean = 0.0;
    for (float v : lr.v) mean += v;
    mean /= static_cast<double>(lr.v.size());
    CHECK(std::abs(mean - 0.5) < 0.02);

    // the brute-force oracle agrees (clipping aside, values stay in range)
    std::vector<double> src(board.v.begin(), board.v.end());
    const auto brute = ref::resize_brute(src, n, n, n / 2, n / 2);
    for (size_t i = 0; i < lr.v.size(); ++i)
        CHECK(std::abs(lr.v[i] - std::clamp(brute[i], 0.0, 1.0)) < 1e-6);
}

TEST_CASE("degrade rejects scales below 2") {
    PlaneImage img(8, 8);
    CHECK_THROWS_AS(degrade(img, 1), std::invalid_argument);
}
