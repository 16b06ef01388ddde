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

#include "gun/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>

#include "gun/errors.hpp"

namespace gun {

namespace {

uint8_t quantize(float v) {
    return static_cast<uint8_t>(std::clamp(std::lround(v * 255.0f), 0L, 255L));
}

}  // namespace

Rgb8Image load_png(const std::string& path) {
    png_image im{};
    im.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&im, path.c_str()))
        throw DataError("png: cannot read '" + path + "': " + im.message);

    const bool color = (im.format & PNG_FORMAT_FLAG_COLOR) != 0;
    im.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

    Rgb8Image out(static_cast<int>(im.width), static_cast<int>(im.height), color ? 3 : 1);
    if (!png_image_finish_read(&im, nullptr, out.px.data(), 0, nullptr)) {
        png_image_free(&im);
        throw DataError("png: decode failed for '" + path + "': " + im.message);
    }
    return out;
}

void save_png(const std::string& path, const Rgb8Image& image) {
    if (image.channels != 1 && image.channels != 3)
        throw std::invalid_argument("png: only 1- or 3-channel images can be written");
    png_image im{};
    im.version = PNG_IMAGE_VERSION;
    im.width = static_cast<png_uint_32>(image.width);
    im.height = static_cast<png_uint_32>(image.height);
    im.format = image.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&im, path.c_str(), 0, image.px.data(), 0, nullptr))
        throw DataError("png: cannot write '" + path + "': " + im.message);
}

YCbCrImage rgb_to_ycbcr(const Rgb8Image& rgb) {
    if (rgb.channels != 3) throw std::invalid_argument("rgb_to_ycbcr: need a 3-channel image");
    YCbCrImage out{PlaneImage(rgb.width, rgb.height, ChannelTag::Y),
                   PlaneImage(rgb.width, rgb.height, ChannelTag::Cb),
                   PlaneImage(rgb.width, rgb.height, ChannelTag::Cr)};
    for (size_t i = 0; i < rgb.pixel_count(); ++i) {
        const float r = rgb.px[3 * i] / 255.0f;
        const float g = rgb.px[3 * i + 1] / 255.0f;
        const float b = rgb.px[3 * i + 2] / 255.0f;
        out.y.v[i] = std::clamp(0.299f * r + 0.587f * g + 0.114f * b, 0.0f, 1.0f);
        out.cb.v[i] = std::clamp(0.5f - 0.168736f * r - 0.331264f * g + 0.5f * b, 0.0f, 1.0f);
        out.cr.v[i] = std::clamp(0.5f + 0.5f * r - 0.418688f * g - 0.081312f * b, 0.0f, 1.0f);
    }
    return out;
}

Rgb8Image ycbcr_to_rgb(const PlaneImage& y, const PlaneImage& cb, const PlaneImage& cr) {
    if (y.width != cb.width || y.width != cr.width || y.height != cb.height ||
        y.height != cr.height)
        throw std::invalid_argument("ycbcr_to_rgb: plane sizes differ");
    Rgb8Image out(y.width, y.height, 3);
    for (size_t i = 0; i < y.size(); ++i) {
        const float yy = y.v[i];
        const float pb = cb.v[i] - 0.5f;
        const float pr = cr.v[i] - 0.5f;
        out.px[3 * i] = quantize(yy + 1.402f * pr);
        out.px[3 * i + 1] = quantize(yy - 0.344136f * pb - 0.714136f * pr);
        out.px[3 * i + 2] = quantize(yy + 1.772f * pb);
    }
    return out;
}

PlaneImage luminance(const Rgb8Image& image) {
    if (image.channels == 3) return rgb_to_ycbcr(image).y;
    PlaneImage out(image.width, image.height, ChannelTag::Gray);
    for (size_t i = 0; i < image.pixel_count(); ++i) out.v[i] = image.px[i] / 255.0f;
    return out;
}

Rgb8Image plane_to_gray(const PlaneImage& plane) {
    Rgb8Image out(plane.width, plane.height, 1);
    for (size_t i = 0; i < plane.size(); ++i) out.px[i] = quantize(plane.v[i]);
    return out;
}

}  // namespace gun
