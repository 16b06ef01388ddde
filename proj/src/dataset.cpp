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

#include "gun/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "gun/errors.hpp"
#include "gun/resample.hpp"

namespace gun {

double algd(const PlaneImage& patch) {
    if (patch.v.empty()) throw std::invalid_argument("algd: empty patch");
    double mean = 0.0;
    for (float x : patch.v) mean += x;
    mean /= static_cast<double>(patch.v.size());
    double dev = 0.0;
    for (float x : patch.v) dev += std::abs(x - mean);
    return dev / static_cast<double>(patch.v.size());
}

PlaneImage rotate90(const PlaneImage& image) {
    PlaneImage out(image.height, image.width, image.tag);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            out.at(y, x) = image.at(image.height - 1 - x, y);
    return out;
}

PlaneImage rotate180(const PlaneImage& image) {
    PlaneImage out(image.width, image.height, image.tag);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            out.at(y, x) = image.at(image.height - 1 - y, image.width - 1 - x);
    return out;
}

PlaneImage rotate45(const PlaneImage& image) {
    // Largest axis-aligned square whose 45-degree preimage, padded by the
    // bicubic support margin, stays inside the source.
    constexpr int kMargin = 3;
    const int side =
        static_cast<int>(std::floor((std::min(image.width, image.height) - 2 * kMargin) /
                                    std::sqrt(2.0)));
    if (side < 1) return PlaneImage(0, 0, image.tag);

    PlaneImage out(side, side, image.tag);
    const double c = std::sqrt(0.5);  // cos(45) == sin(45)
    const double cx = (image.width - 1) / 2.0;
    const double cy = (image.height - 1) / 2.0;
    const double oc = (side - 1) / 2.0;
#pragma omp parallel for schedule(static)
    for (int oy = 0; oy < side; ++oy)
        for (int ox = 0; ox < side; ++ox) {
            const double dx = ox - oc, dy = oy - oc;
            const double u = c * dx - c * dy + cx;
            const double v = c * dx + c * dy + cy;
            const int bu = static_cast<int>(std::floor(u));
            const int bv = static_cast<int>(std::floor(v));
            double acc = 0.0;
            for (int jy = -1; jy <= 2; ++jy)
                for (int jx = -1; jx <= 2; ++jx) {
                    const double wv = keys_kernel(v - (bv + jy)) * keys_kernel(u - (bu + jx));
                    const int sy = std::clamp(bv + jy, 0, image.height - 1);
                    const int sx = std::clamp(bu + jx, 0, image.width - 1);
                    acc += wv * image.at(sy, sx);
                }
            out.at(oy, ox) = std::clamp(static_cast<float>(acc), 0.0f, 1.0f);
        }
    return out;
}

AugmentResult augment(const PlaneImage& image, int min_rot45_size) {
    AugmentResult r;
    r.variants.push_back(image);
    r.variants.push_back(rotate90(image));
    r.variants.push_back(rotate180(image));
    PlaneImage diag = rotate45(image);
    if (diag.width >= std::max(1, min_rot45_size))
        r.variants.push_back(std::move(diag));
    else
        r.rot45_omitted = true;
    return r;
}

int default_lr_patch(int scale) {
    switch (scale) {
        case 2: return 20;
        case 3: return 16;
        case 4: return 12;
        default: throw std::invalid_argument("patch size: scale must be 2, 3 or 4");
    }
}

namespace {

struct GridSpec {
    int lr_patch, stride, hr_patch, hr_stride;
};

GridSpec resolve_grid(const ExtractOptions& o) {
    const int lr_patch = o.lr_patch > 0 ? o.lr_patch : default_lr_patch(o.scale);
    const int stride = o.stride > 0 ? o.stride : std::max(1, lr_patch / 2);
    return {lr_patch, stride, lr_patch * o.scale, stride * o.scale};
}

PlaneImage crop(const PlaneImage& src, int y0, int x0, int h, int w) {
    PlaneImage out(w, h, src.tag);
    for (int y = 0; y < h; ++y)
        std::copy_n(src.v.data() + static_cast<size_t>(y0 + y) * src.width + x0, w,
                    out.v.data() + static_cast<size_t>(y) * w);
    return out;
}

template <typename Fn>
int for_each_patch(const std::vector<PlaneImage>& hr_images, const GridSpec& g, Fn&& fn) {
    int skipped = 0;
    for (size_t id = 0; id < hr_images.size(); ++id) {
        const PlaneImage& im = hr_images[id];
        if (im.height < g.hr_patch || im.width < g.hr_patch) {
            ++skipped;
            continue;
        }
        for (int y0 = 0; y0 + g.hr_patch <= im.height; y0 += g.hr_stride)
            for (int x0 = 0; x0 + g.hr_patch <= im.width; x0 += g.hr_stride)
                fn(static_cast<int>(id), y0, x0);
    }
    return skipped;
}

}  // namespace

ExtractResult extract_patches(const std::vector<PlaneImage>& hr_images,
                              const ExtractOptions& options) {
    const GridSpec g = resolve_grid(options);
    ExtractResult r;

    std::vector<std::array<int, 3>> sites;  // (image, y0, x0) in scan order
    r.skipped_images = for_each_patch(hr_images, g, [&](int id, int y0, int x0) {
        sites.push_back({id, y0, x0});
    });

    if (options.max_count > 0 && sites.size() > options.max_count) {
        // Seeded partial Fisher-Yates, then restore scan order.
        std::mt19937_64 rng(options.seed);
        for (size_t i = 0; i < options.max_count; ++i) {
            std::uniform_int_distribution<size_t> pick(i, sites.size() - 1);
            std::swap(sites[i], sites[pick(rng)]);
        }
        sites.resize(options.max_count);
        std::sort(sites.begin(), sites.end());
    }

    r.pairs.resize(sites.size());
#pragma omp parallel for schedule(static)
    for (ptrdiff_t i = 0; i < static_cast<ptrdiff_t>(sites.size()); ++i) {
        const auto [id, y0, x0] = sites[i];
        PatchPair p;
        p.source_id = id;
        p.y0 = y0;
        p.x0 = x0;
        p.hr = crop(hr_images[id], y0, x0, g.hr_patch, g.hr_patch);
        p.lr = degrade(p.hr, options.scale);
        p.algd = static_cast<float>(algd(options.algd_on_hr ? p.hr : p.lr));
        r.pairs[i] = std::move(p);
    }
    return r;
}

std::vector<double> patch_algd_scan(const std::vector<PlaneImage>& hr_images,
                                    const ExtractOptions& options) {
    const GridSpec g = resolve_grid(options);
    std::vector<std::array<int, 3>> sites;
    for_each_patch(hr_images, g, [&](int id, int y0, int x0) {
        sites.push_back({id, y0, x0});
    });
    std::vector<double> scores(sites.size());
#pragma omp parallel for schedule(static)
    for (ptrdiff_t i = 0; i < static_cast<ptrdiff_t>(sites.size()); ++i) {
        const auto [id, y0, x0] = sites[i];
        PlaneImage hr = crop(hr_images[id], y0, x0, g.hr_patch, g.hr_patch);
        scores[i] = options.algd_on_hr ? algd(hr) : algd(degrade(hr, options.scale));
    }
    return scores;
}

CurriculumPlan build_curriculum(const std::vector<PatchPair>& pairs,
                                const std::vector<double>& lambdas, int epochs_per_stage) {
    if (pairs.empty()) throw std::invalid_argument("curriculum: empty patch pool");
    if (lambdas.empty()) throw std::invalid_argument("curriculum: empty lambda schedule");
    for (size_t i = 1; i < lambdas.size(); ++i)
        if (lambdas[i] >= lambdas[i - 1])
            throw std::invalid_argument("curriculum: lambdas must be strictly decreasing");

    CurriculumPlan plan;
    double sum = 0.0, lo = pairs[0].algd, hi = pairs[0].algd;
    for (const auto& p : pairs) {
        sum += p.algd;
        lo = std::min(lo, static_cast<double>(p.algd));
        hi = std::max(hi, static_cast<double>(p.algd));
    }
    plan.mean_algd = sum / static_cast<double>(pairs.size());

    for (double lambda : lambdas) {
        CurriculumStage stage;
        stage.lambda = lambda;
        stage.epochs = epochs_per_stage;
        const double threshold = lambda * plan.mean_algd;
        for (size_t i = 0; i < pairs.size(); ++i)
            if (pairs[i].algd >= threshold) stage.samples.push_back(static_cast<int>(i));
        if (stage.samples.empty()) {
            std::ostringstream os;
            os << "curriculum: no patch passes lambda=" << lambda << " (threshold "
               << threshold << "; ALGD over " << pairs.size() << " patches: min " << lo
               << ", mean " << plan.mean_algd << ", max " << hi << ")";
            throw DataError(os.str());
        }
        plan.stages.push_back(std::move(stage));
    }
    return plan;
}

std::string curriculum_stats_table(const std::vector<double>& scores,
                                   const std::vector<double>& lambdas) {
    if (scores.empty()) throw std::invalid_argument("curriculum stats: no patches");
    const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) /
                        static_cast<double>(scores.size());
    std::ostringstream os;
    os << "lambda\tcount\tmin\tmean\tmax\n";
    for (double lambda : lambdas) {
        const double threshold = lambda * mean;
        size_t count = 0;
        double lo = 0.0, hi = 0.0, acc = 0.0;
        bool first = true;
        for (double s : scores) {
            if (s < threshold) continue;
            if (first) {
                lo = hi = s;
                first = false;
            }
            lo = std::min(lo, s);
            hi = std::max(hi, s);
            acc += s;
            ++count;
        }
        os << lambda << "\t" << count << "\t";
        if (count == 0)
            os << "-\t-\t-\n";
        else
            os << lo << "\t" << acc / static_cast<double>(count) << "\t" << hi << "\n";
    }
    return os.str();
}

}  // namespace gun
