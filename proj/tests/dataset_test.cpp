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
#include "gun/dataset.hpp"
#include "gun/errors.hpp"
#include "gun/image_io.hpp"
#include "gun/metrics.hpp"
#include "image_gen.hpp"
#include "test_util.hpp"

using namespace gun;
using namespace gun::test;

TEST_CASE("color transform anchors: white and gray") {
    Rgb8Image white(2, 2, 3);
    std::fill(white.px.begin(), white.px.end(), 255);
    const YCbCrImage yc = rgb_to_ycbcr(white);
    for (float v : yc.y.v) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
    for (float v : yc.cb.v) CHECK(v == doctest::Approx(0.5).epsilon(1e-3));
    for (float v : yc.cr.v) CHECK(v == doctest::Approx(0.5).epsilon(1e-3));

    Rgb8Image gray(3, 1, 3);
    for (size_t i = 0; i < gray.pixel_count(); ++i)
        gray.px[3 * i] = gray.px[3 * i + 1] = gray.px[3 * i + 2] =
            static_cast<uint8_t>(40 + 70 * i);
    const YCbCrImage g = rgb_to_ycbcr(gray);
    for (size_t i = 0; i < gray.pixel_count(); ++i)
        CHECK(g.y.v[i] == doctest::Approx(gray.px[3 * i] / 255.0).epsilon(1e-5));
}

TEST_CASE("color round trip stays within one 8-bit step per channel") {
    std::mt19937_64 rng(77);
    Rgb8Image img(31, 17, 3);
    for (uint8_t& p : img.px) p = static_cast<uint8_t>(rng() & 0xff);
    const YCbCrImage yc = rgb_to_ycbcr(img);
    const Rgb8Image back = ycbcr_to_rgb(yc.y, yc.cb, yc.cr);
    int worst = 0;
    for (size_t i = 0; i < img.px.size(); ++i)
        worst = std::max(worst, std::abs(static_cast<int>(img.px[i]) - back.px[i]));
    CHECK(worst <= 1);
}

TEST_CASE("algd basics") {
    PlaneImage flat(5, 5);
    for (float& v : flat.v) v = 0.73f;
    CHECK(algd(flat) == 0.0);

    PlaneImage quad(2, 2);
    quad.v = {0.0f, 0.0f, 1.0f, 1.0f};
    CHECK(algd(quad) == doctest::Approx(0.5).epsilon(1e-12));

    PlaneImage shifted = quad;
    for (float& v : shifted.v) v += 0.25f;
    CHECK(algd(shifted) == doctest::Approx(algd(quad)).epsilon(1e-9));

    CHECK(algd(synth_image(16, 16, 3)) > 0.0);
}

TEST_CASE("grid rotations compose: 90 twice equals 180") {
    const PlaneImage img = synth_image(13, 9, 5);
    const PlaneImage twice = rotate90(rotate90(img));
    const PlaneImage once = rotate180(img);
    REQUIRE(twice.width == once.width);
    REQUIRE(twice.height == once.height);
    CHECK(twice.v == once.v);

    // four times is the identity
    const PlaneImage full = rotate90(rotate90(rotate90(rotate90(img))));
    CHECK(full.v == img.v);
}

TEST_CASE("augmenting a constant image yields constant variants") {
    PlaneImage img(24, 24);
    for (float& v : img.v) v = 0.42f;
    const AugmentResult r = augment(img, 4);
    REQUIRE(r.variants.size() == 4);
    for (const auto& v : r.variants)
        for (float x : v.v) CHECK(x == doctest::Approx(0.42f).epsilon(1e-6));
}

TEST_CASE("45-degree rotation of a horizontal edge lands near 45 degrees") {
    PlaneImage img(64, 64);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) img.at(y, x) = y < 32 ? 0.15f : 0.85f;
    const PlaneImage rot = rotate45(img);
    REQUIRE(rot.width > 8);

    // gradient-orientation histogram over the interior
    double best = 0.0;
    double angle_sum = 0.0, weight_sum = 0.0;
    for (int y = 1; y < rot.height - 1; ++y)
        for (int x = 1; x < rot.width - 1; ++x) {
            const double gx = (rot.at(y, x + 1) - rot.at(y, x - 1)) / 2.0;
            const double gy = (rot.at(y + 1, x) - rot.at(y - 1, x)) / 2.0;
            const double mag = std::hypot(gx, gy);
            if (mag < 0.05) continue;
            double ang = std::atan2(gy, gx) * 180.0 / M_PI;  // gradient direction
            if (ang < 0) ang += 180.0;                       // orientation mod 180
            angle_sum += ang * mag;
            weight_sum += mag;
            best = std::max(best, mag);
        }
    REQUIRE(weight_sum > 0.0);
    const double mean_angle = angle_sum / weight_sum;
    // the horizontal edge (gradient at 90 deg) must now sit at 45 or 135
    const double d45 = std::abs(mean_angle - 45.0);
    const double d135 = std::abs(mean_angle - 135.0);
    CHECK(std::min(d45, d135) < 2.0);
}

TEST_CASE("augment omits the 45-degree variant when it cannot hold a patch") {
    const PlaneImage img = synth_image(10, 10, 11);
    const AugmentResult r = augment(img, 24);
    CHECK(r.variants.size() == 3);
    CHECK(r.rot45_omitted);
}

TEST_CASE("extraction grid arithmetic: one exact non-overlapping pair") {
    std::vector<PlaneImage> images = {synth_image(48, 48, 21)};
    ExtractOptions o;
    o.scale = 4;
    o.lr_patch = 12;
    o.stride = 12;
    const ExtractResult r = extract_patches(images, o);
    REQUIRE(r.pairs.size() == 1);
    CHECK(r.pairs[0].hr.width == 48);
    CHECK(r.pairs[0].lr.width == 12);
    CHECK(r.pairs[0].hr.height == 48);
    CHECK(r.skipped_images == 0);
}

TEST_CASE("patches from a constant image all have zero algd; too-small images are skipped") {
    PlaneImage flat(40, 40);
    for (float& v : flat.v) v = 0.5f;
    std::vector<PlaneImage> images = {flat, synth_image(6, 6, 1)};
    ExtractOptions o;
    o.scale = 2;
    o.lr_patch = 10;
    o.stride = 5;
    const ExtractResult r = extract_patches(images, o);
    CHECK(r.skipped_images == 1);
    REQUIRE(!r.pairs.empty());
    for (const auto& p : r.pairs) {
        CHECK(p.algd == 0.0f);
        CHECK(p.hr.width == 2 * p.lr.width);
        CHECK(p.hr.height == 2 * p.lr.height);
    }
}

TEST_CASE("pairs are aligned: bicubic upsampling beats every one-pixel shift") {
    const PlaneImage img = synth_image(96, 96, 33);
    ExtractOptions o;
    o.scale = 2;
    o.lr_patch = 16;
    o.stride = 16;
    const ExtractResult r = extract_patches({img}, o);
    REQUIRE(!r.pairs.empty());
    const PatchPair& p = r.pairs[r.pairs.size() / 2];

    const PlaneImage up = bicubic_baseline(p.lr, 2);
    const double aligned = psnr(up, p.hr, 2);

    // compare against one-pixel shifted HR crops from the source image
    const int hp = p.hr.height;
    for (const auto [dy, dx] : {std::pair{-1, 0}, {1, 0}, {0, -1}, {0, 1}}) {
        const int y0 = p.y0 + dy, x0 = p.x0 + dx;
        if (y0 < 0 || x0 < 0 || y0 + hp > img.height || x0 + hp > img.width) continue;
        PlaneImage shifted(hp, hp);
        for (int y = 0; y < hp; ++y)
            for (int x = 0; x < hp; ++x) shifted.at(y, x) = img.at(y0 + y, x0 + x);
        CHECK(aligned > psnr(up, shifted, 2));
    }
}

TEST_CASE("seeded subsampling is deterministic and honors max_count") {
    const PlaneImage img = synth_image(80, 80, 55);
    ExtractOptions o;
    o.scale = 2;
    o.lr_patch = 8;
    o.stride = 2;
    o.max_count = 37;
    o.seed = 99;
    const ExtractResult a = extract_patches({img}, o);
    const ExtractResult b = extract_patches({img}, o);
    REQUIRE(a.pairs.size() == 37);
    REQUIRE(b.pairs.size() == 37);
    for (size_t i = 0; i < a.pairs.size(); ++i) {
        CHECK(a.pairs[i].y0 == b.pairs[i].y0);
        CHECK(a.pairs[i].x0 == b.pairs[i].x0);
        CHECK(a.pairs[i].hr.v == b.pairs[i].hr.v);
    }
    // scan order is restored after sampling
    for (size_t i = 1; i < a.pairs.size(); ++i) {
        const auto& p = a.pairs[i - 1];
        const auto& q = a.pairs[i];
        CHECK(std::tie(p.source_id, p.y0, p.x0) < std::tie(q.source_id, q.y0, q.x0));
    }
}

TEST_CASE("the lightweight algd scan matches materialized extraction") {
    const PlaneImage img = synth_image(64, 64, 61);
    ExtractOptions o;
    o.scale = 2;
    o.lr_patch = 10;
    o.stride = 7;
    o.max_count = 0;  // keep everything
    const ExtractResult r = extract_patches({img}, o);
    const std::vector<double> scores = patch_algd_scan({img}, o);
    REQUIRE(scores.size() == r.pairs.size());
    for (size_t i = 0; i < scores.size(); ++i)
        CHECK(scores[i] == doctest::Approx(r.pairs[i].algd).epsilon(1e-6));
}

TEST_CASE("curriculum stages nest and the zero-lambda stage is the full pool") {
    std::vector<PlaneImage> images;
    for (int i = 0; i < 3; ++i) images.push_back(synth_image(72, 72, 100 + i));
    ExtractOptions o;
    o.scale = 2;
    o.lr_patch = 10;
    o.stride = 5;
    const ExtractResult r = extract_patches(images, o);
    REQUIRE(r.pairs.size() > 20);

    const CurriculumPlan plan = build_curriculum(r.pairs, {1.2, 1.0, 0.8, 0.5, 0.0}, 3);
    REQUIRE(plan.stages.size() == 5);
    CHECK(plan.stages.back().samples.size() == r.pairs.size());
    for (size_t s = 1; s < plan.stages.size(); ++s) {
        const auto& prev = plan.stages[s - 1].samples;
        const auto& next = plan.stages[s].samples;
        CHECK(prev.size() <= next.size());
        CHECK(std::includes(next.begin(), next.end(), prev.begin(), prev.end()));
    }
    CHECK(plan.stages.front().samples.size() < plan.stages.back().samples.size());
}

TEST_CASE("degenerate pools: identical patches make high lambdas empty") {
    const PlaneImage img = synth_image(24, 24, 7);
    ExtractOptions o;
    o.scale = 2;
    o.lr_patch = 12;
    o.stride = 12;
    ExtractResult r = extract_patches({img}, o);
    REQUIRE(r.pairs.size() == 1);
    r.pairs.push_back(r.pairs[0]);
    r.pairs.push_back(r.pairs[0]);  // three identical patches

    const CurriculumPlan ok = build_curriculum(r.pairs, {1.0, 0.0}, 2);
    CHECK(ok.stages[0].samples.size() == 3);  // v_mean == each algd

    CHECK_THROWS_WITH_AS(build_curriculum(r.pairs, {1.2, 0.0}, 2),
                         doctest::Contains("no patch passes"), DataError);
}

TEST_CASE("curriculum rejects bad lambda schedules and empty pools") {
    CHECK_THROWS_AS(build_curriculum({}, {1.0, 0.0}, 1), std::invalid_argument);
    const PlaneImage img = synth_image(30, 30, 8);
    ExtractOptions o;
    o.scale = 2;
    o.lr_patch = 8;
    const ExtractResult r = extract_patches({img}, o);
    CHECK_THROWS_AS(build_curriculum(r.pairs, {0.5, 0.8}, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_curriculum(r.pairs, {}, 1), std::invalid_argument);
}

TEST_CASE("stats table rows follow the lambda list") {
    const std::vector<double> scores = {0.0, 0.1, 0.2, 0.3, 0.4};
    const std::string table = curriculum_stats_table(scores, {1.2, 1.0, 0.0});
    int lines = 0;
    for (char c : table)
        if (c == '\n') ++lines;
    CHECK(lines == 4);  // header + one row per lambda
}
