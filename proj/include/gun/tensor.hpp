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

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gun {

/// Dense 4-D array [batch, channels, height, width], row-major with the
/// width index fastest. Carries activations, weights and gradients.
/// Scalar type is float for training/inference and double for gradient
/// checks.
template <typename T>
struct Tensor {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<T> v;

    Tensor() = default;
    Tensor(int n_, int c_, int h_, int w_)
        : n(n_), c(c_), h(h_), w(w_),
          v(static_cast<size_t>(n_) * c_ * h_ * w_, T(0)) {
        if (n_ < 0 || c_ < 0 || h_ < 0 || w_ < 0)
            throw std::invalid_argument("tensor: negative dimension");
    }

    size_t size() const { return v.size(); }
    size_t plane_size() const { return static_cast<size_t>(h) * w; }

    T* plane(int i, int ch) {
        return v.data() + (static_cast<size_t>(i) * c + ch) * plane_size();
    }
    const T* plane(int i, int ch) const {
        return v.data() + (static_cast<size_t>(i) * c + ch) * plane_size();
    }

    T& at(int i, int ch, int y, int x) { return plane(i, ch)[static_cast<size_t>(y) * w + x]; }
    T at(int i, int ch, int y, int x) const { return plane(i, ch)[static_cast<size_t>(y) * w + x]; }

    bool same_shape(const Tensor& o) const {
        return n == o.n && c == o.c && h == o.h && w == o.w;
    }

    std::string shape_str() const {
        std::ostringstream os;
        os << "[" << n << "," << c << "," << h << "," << w << "]";
        return os.str();
    }

    bool all_finite() const {
        for (T x : v)
            if (!std::isfinite(static_cast<double>(x))) return false;
        return true;
    }

    void fill(T value) { std::fill(v.begin(), v.end(), value); }
};

/// Learned parameters of one convolution layer. Weight layout is
/// [c_out, c_in, k, k]; the artifact only builds k in {1, 3}.
template <typename T>
struct ConvParams {
    int c_out = 0, c_in = 0, k = 0;
    std::vector<T> weights;  // c_out * c_in * k * k
    std::vector<T> bias;     // c_out

    ConvParams() = default;
    ConvParams(int c_out_, int c_in_, int k_)
        : c_out(c_out_), c_in(c_in_), k(k_),
          weights(static_cast<size_t>(c_out_) * c_in_ * k_ * k_, T(0)),
          bias(c_out_, T(0)) {
        if (k_ != 1 && k_ != 3)
            throw std::invalid_argument("conv: kernel size must be 1 or 3");
    }

    T* kernel(int oc, int ic) {
        return weights.data() + (static_cast<size_t>(oc) * c_in + ic) * k * k;
    }
    const T* kernel(int oc, int ic) const {
        return weights.data() + (static_cast<size_t>(oc) * c_in + ic) * k * k;
    }
};

inline void check_shape(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace gun
