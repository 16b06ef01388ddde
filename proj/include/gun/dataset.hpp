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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gun/plane.hpp"

namespace gun {

/// One aligned LR/HR training sample with its cached contrast score.
struct PatchPair {
    PlaneImage lr, hr;
    float algd = 0.0f;
    int source_id = 0;
    int y0 = 0, x0 = 0;  // HR-grid offset inside the source image
};

/// Average local gray value difference: mean absolute deviation of the
/// patch from its own mean. Zero iff the patch is constant; invariant under
/// adding a constant.
double algd(const PlaneImage& patch);

struct AugmentResult {
    std::vector<PlaneImage> variants;  // original, 90, 180, optionally 45
    bool rot45_omitted = false;
};

/// The three rotation augmentations. 90 and 180 degrees are exact grid
/// rotations; 45 degrees resamples the whole image bicubically and keeps
/// the largest axis-aligned interior square with full interpolation
/// support. The 45-degree variant is dropped (flagged, not fatal) when that
/// square would be smaller than min_rot45_size.
AugmentResult augment(const PlaneImage& image, int min_rot45_size);

/// Exact grid rotations, exposed for reuse and testing.
PlaneImage rotate90(const PlaneImage& image);
PlaneImage rotate180(const PlaneImage& image);
PlaneImage rotate45(const PlaneImage& image);

/// Default LR patch edge per magnification factor: 20, 16, 12.
int default_lr_patch(int scale);

struct ExtractOptions {
    int scale = 2;
    int lr_patch = 0;      // 0 picks the per-scale default
    int stride = 0;        // LR-grid stride; 0 picks lr_patch / 2
    size_t max_count = 200000;
    uint64_t seed = 0;
    bool algd_on_hr = true;  // score the HR patch (default) or the LR patch
};

struct ExtractResult {
    std::vector<PatchPair> pairs;
    int skipped_images = 0;  // smaller than one HR patch
};

/// Dense overlapping grid of aligned LR/HR pairs; LR is the bicubic
/// degradation of the HR crop. When the grid yields more than max_count
/// candidates a seeded uniform subsample is kept. Output order is fixed by
/// (source id, offset) regardless of parallelism.
ExtractResult extract_patches(const std::vector<PlaneImage>& hr_images,
                              const ExtractOptions& options);

/// ALGD scores of every candidate patch without materializing pixel data;
/// scales to corpora whose full pair set would not fit in memory.
std::vector<double> patch_algd_scan(const std::vector<PlaneImage>& hr_images,
                                    const ExtractOptions& options);

struct CurriculumStage {
    double lambda = 0.0;
    std::vector<int> samples;  // indices into the patch pool, ascending
    int epochs = 0;
};

/// Ordered easy-to-difficult training stages: stage i selects the samples
/// with algd >= lambda_i * mean_algd, computed once over the full pool.
struct CurriculumPlan {
    std::vector<CurriculumStage> stages;
    double mean_algd = 0.0;
};

CurriculumPlan build_curriculum(const std::vector<PatchPair>& pairs,
                                const std::vector<double>& lambdas, int epochs_per_stage);

/// Stage-size/score table (lambda, count, min/mean/max ALGD) for reporting.
std::string curriculum_stats_table(const std::vector<double>& scores,
                                   const std::vector<double>& lambdas);

}  // namespace gun
