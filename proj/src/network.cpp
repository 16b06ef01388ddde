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

#include "gun/network.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>

#include "gun/errors.hpp"

namespace gun {

ResolutionSchedule resolution_schedule(int lr_h, int lr_w, int hr_h, int hr_w, int steps) {
    if (lr_h < 1 || lr_w < 1) throw std::invalid_argument("schedule: empty LR size");
    if (hr_h < lr_h || hr_w < lr_w)
        throw std::invalid_argument("schedule: HR size must be >= LR size in both axes");
    if (steps < 1) throw std::invalid_argument("schedule: steps must be >= 1");

    ResolutionSchedule s;
    s.lr_h = lr_h;
    s.lr_w = lr_w;
    s.hr_h = hr_h;
    s.hr_w = hr_w;
    const int dh = (hr_h - lr_h) / steps;  // round down
    const int dw = (hr_w - lr_w) / steps;
    for (int i = 1; i < steps; ++i) s.targets.emplace_back(lr_h + i * dh, lr_w + i * dw);
    s.targets.emplace_back(hr_h, hr_w);  // the last step is pinned to HR
    return s;
}

int GunTopology::default_steps(int scale) {
    switch (scale) {
        case 2: return 5;
        case 3: return 8;
        case 4: return 9;
        default: throw std::invalid_argument("topology: scale must be 2, 3 or 4");
    }
}

void GunTopology::validate() const {
    if (scale < 2 || scale > 4) throw std::invalid_argument("topology: scale must be 2, 3 or 4");
    if (effective_steps() < 1) throw std::invalid_argument("topology: steps must be >= 1");
    if (depth < 2) throw std::invalid_argument("topology: depth must be >= 2 (3x3 stack plus 1x1)");
    if (channels < 1) throw std::invalid_argument("topology: channels must be >= 1");
}

namespace {

template <typename T>
ConvBlock<T> make_block(int c_out, int c_in, int k, bool with_bn, bool with_relu,
                        const GunTopology& topo, uint64_t seed) {
    ConvBlock<T> b;
    b.conv = ConvParams<T>(c_out, c_in, k);
    he_init(b.conv, seed);
    if (with_bn) {
        b.bn.emplace(c_out);
        b.bn->eps = topo.bn_eps;
        b.bn->stat_momentum = topo.bn_momentum;
    }
    b.relu = with_relu;
    return b;
}

// Canonical traversal; parameters(), state(), gradient flatten and the
// checkpoint all follow this one ordering.
template <typename T, typename Fn>
void visit_blocks(GunModel<T>& m, Fn&& fn) {
    fn(m.input, std::string("input"), std::string("input.bn"), -1, -1);
    for (size_t s = 0; s < m.step_blocks.size(); ++s)
        for (size_t l = 0; l < m.step_blocks[s].size(); ++l) {
            const std::string base = "step" + std::to_string(s + 1);
            const std::string li = std::to_string(l + 1);
            fn(m.step_blocks[s][l], base + ".conv" + li, base + ".bn" + li,
               static_cast<int>(s), static_cast<int>(l));
        }
    fn(m.output, std::string("output"), std::string("output.bn"), -2, -2);
}

}  // namespace

template <typename T>
GunModel<T> build_gun(const GunTopology& topology, uint64_t seed) {
    topology.validate();
    GunModel<T> m;
    m.topology = topology;
    const int c = topology.channels;
    const int n = topology.effective_steps();
    const int d = topology.depth;
    uint64_t layer_seed = seed;

    m.input = make_block<T>(c, 1, 3, topology.bn_on_input, true, topology, ++layer_seed);
    m.step_blocks.resize(n);
    for (int s = 0; s < n; ++s) {
        for (int l = 0; l < d - 1; ++l)
            m.step_blocks[s].push_back(make_block<T>(c, c, 3, true, true, topology, ++layer_seed));
        m.step_blocks[s].push_back(make_block<T>(c, c, 1, true, true, topology, ++layer_seed));
    }
    m.output = make_block<T>(1, c, 3, false, false, topology, ++layer_seed);
    return m;
}

template <typename T>
std::vector<ParamView<T>> GunModel<T>::parameters() {
    std::vector<ParamView<T>> out;
    visit_blocks(*this, [&](ConvBlock<T>& b, const std::string& conv_name,
                            const std::string& bn_name, int, int) {
        out.push_back({conv_name + ".weight", b.conv.weights.data(), b.conv.weights.size(), true});
        out.push_back({conv_name + ".bias", b.conv.bias.data(), b.conv.bias.size(), false});
        if (b.bn) {
            out.push_back({bn_name + ".gamma", b.bn->gamma.data(), b.bn->gamma.size(), false});
            out.push_back({bn_name + ".beta", b.bn->beta.data(), b.bn->beta.size(), false});
        }
    });
    return out;
}

template <typename T>
std::vector<StateView<T>> GunModel<T>::state() {
    std::vector<StateView<T>> out;
    visit_blocks(*this, [&](ConvBlock<T>& b, const std::string& conv_name,
                            const std::string& bn_name, int, int) {
        const auto& cp = b.conv;
        out.push_back({conv_name + ".weight", b.conv.weights.data(), b.conv.weights.size(),
                       {static_cast<uint32_t>(cp.c_out), static_cast<uint32_t>(cp.c_in),
                        static_cast<uint32_t>(cp.k), static_cast<uint32_t>(cp.k)}});
        out.push_back({conv_name + ".bias", b.conv.bias.data(), b.conv.bias.size(),
                       {static_cast<uint32_t>(cp.c_out)}});
        if (b.bn) {
            const uint32_t ch = static_cast<uint32_t>(b.bn->channels());
            out.push_back({bn_name + ".gamma", b.bn->gamma.data(), b.bn->gamma.size(), {ch}});
            out.push_back({bn_name + ".beta", b.bn->beta.data(), b.bn->beta.size(), {ch}});
            out.push_back({bn_name + ".running_mean", b.bn->running_mean.data(),
                           b.bn->running_mean.size(), {ch}});
            out.push_back({bn_name + ".running_var", b.bn->running_var.data(),
                           b.bn->running_var.size(), {ch}});
        }
    });
    return out;
}

namespace {

template <typename T>
Tensor<T> block_forward(ConvBlock<T>& block, const Tensor<T>& in, Mode mode,
                        BlockCache<T>* cache, ForwardStats* stats) {
    if (stats)
        stats->conv_macs += static_cast<uint64_t>(block.conv.c_in) * block.conv.k * block.conv.k *
                            block.conv.c_out * in.h * in.w * in.n;
    if (cache) cache->conv_in = in;
    Tensor<T> x = conv2d_forward(in, block.conv);
    if (block.bn) x = bn_forward(x, *block.bn, mode, cache ? &cache->bn : nullptr);
    if (block.relu) {
        if (cache) cache->relu_in = x;
        x = relu_forward(x);
    }
    return x;
}

template <typename T>
Tensor<T> block_backward(ConvBlock<T>& block, const BlockCache<T>& cache, Tensor<T> grad,
                         BlockGrads<T>& out) {
    if (block.relu) grad = relu_backward(cache.relu_in, grad);
    if (block.bn) {
        BnGrads<T> bg = bn_backward(*block.bn, cache.bn, grad);
        grad = std::move(bg.input);
        out.gamma = std::move(bg.gamma);
        out.beta = std::move(bg.beta);
    }
    ConvGrads<T> cg = conv2d_backward(cache.conv_in, block.conv, grad);
    out.weights = std::move(cg.weights);
    out.bias = std::move(cg.bias);
    return std::move(cg.input);
}

}  // namespace

template <typename T>
Tensor<T> gun_forward(GunModel<T>& model, const Tensor<T>& input,
                      const ResolutionSchedule& schedule, Mode mode, ForwardCache<T>* cache,
                      ForwardStats* stats) {
    check_shape(input.c == 1, "gun_forward: input must have a single channel");
    check_shape(input.h == schedule.lr_h && input.w == schedule.lr_w,
                "gun_forward: input size " + input.shape_str() +
                    " does not match the schedule LR size");
    check_shape(schedule.steps() == model.topology.effective_steps(),
                "gun_forward: schedule step count does not match the topology");

    if (cache) {
        cache->valid = (mode == Mode::Train);
        cache->schedule = schedule;
        cache->upsample_src.clear();
        cache->step_blocks.assign(model.step_blocks.size(), {});
    }

    Tensor<T> x = block_forward(model.input, input, mode, cache ? &cache->input : nullptr, stats);
    for (size_t s = 0; s < model.step_blocks.size(); ++s) {
        if (cache) {
            cache->upsample_src.emplace_back(x.h, x.w);
            cache->step_blocks[s].resize(model.step_blocks[s].size());
        }
        x = upsample_forward(x, schedule.targets[s].first, schedule.targets[s].second);
        for (size_t l = 0; l < model.step_blocks[s].size(); ++l)
            x = block_forward(model.step_blocks[s][l], x, mode,
                              cache ? &cache->step_blocks[s][l] : nullptr, stats);
    }
    return block_forward(model.output, x, mode, cache ? &cache->output : nullptr, stats);
}

template <typename T>
GradientStore<T> gun_backward(GunModel<T>& model, const ForwardCache<T>& cache,
                              const Tensor<T>& grad_out) {
    if (!cache.valid)
        throw std::invalid_argument("gun_backward: cache missing or not from a train forward");
    GradientStore<T> g;
    g.step_blocks.resize(model.step_blocks.size());
    for (size_t s = 0; s < model.step_blocks.size(); ++s)
        g.step_blocks[s].resize(model.step_blocks[s].size());

    Tensor<T> grad = block_backward(model.output, cache.output, grad_out, g.output);
    for (int s = static_cast<int>(model.step_blocks.size()) - 1; s >= 0; --s) {
        for (int l = static_cast<int>(model.step_blocks[s].size()) - 1; l >= 0; --l)
            grad = block_backward(model.step_blocks[s][l], cache.step_blocks[s][l], grad,
                                  g.step_blocks[s][l]);
        grad = upsample_backward(grad, cache.upsample_src[s].first, cache.upsample_src[s].second,
                                 model.topology.backward_resample);
    }
    block_backward(model.input, cache.input, grad, g.input);
    return g;
}

template <typename T>
std::vector<typename GradientStore<T>::Flat> GradientStore<T>::flatten(const GunModel<T>& model) {
    std::vector<Flat> out;
    auto add_block = [&](BlockGrads<T>& bg, bool has_bn) {
        out.push_back({bg.weights.v.data(), bg.weights.v.size()});
        out.push_back({bg.bias.data(), bg.bias.size()});
        if (has_bn) {
            out.push_back({bg.gamma.data(), bg.gamma.size()});
            out.push_back({bg.beta.data(), bg.beta.size()});
        }
    };
    add_block(input, model.input.bn.has_value());
    for (size_t s = 0; s < step_blocks.size(); ++s)
        for (size_t l = 0; l < step_blocks[s].size(); ++l)
            add_block(step_blocks[s][l], model.step_blocks[s][l].bn.has_value());
    add_block(output, model.output.bn.has_value());
    return out;
}

uint64_t flops_estimate(const GunTopology& topology, int lr_h, int lr_w, int hr_h, int hr_w) {
    const uint64_t c = topology.channels;
    const uint64_t s1 = static_cast<uint64_t>(lr_h) * lr_w;
    const uint64_t sl = static_cast<uint64_t>(hr_h) * hr_w;
    const int n = topology.effective_steps();

    uint64_t total = 9 * c * s1;  // input conv, single input map
    if (n > 0) {
        const ResolutionSchedule sched = resolution_schedule(lr_h, lr_w, hr_h, hr_w, n);
        const uint64_t per_pixel = (topology.depth - 1) * 9 * c * c + c * c;
        for (const auto& [th, tw] : sched.targets)
            total += per_pixel * static_cast<uint64_t>(th) * tw;
    }
    total += 9 * c * sl;  // output conv, single output map
    return total;
}

uint64_t flops_estimate_direct(const GunTopology& topology, int lr_h, int lr_w, int hr_h,
                               int hr_w) {
    (void)lr_h;
    (void)lr_w;
    const uint64_t c = topology.channels;
    const uint64_t sl = static_cast<uint64_t>(hr_h) * hr_w;
    const uint64_t per_pixel = (topology.depth - 1) * 9 * c * c + c * c;
    return 9 * c * sl + topology.effective_steps() * per_pixel * sl + 9 * c * sl;
}

// ---------------------------------------------------------------------------
// Checkpoint serialization

namespace {

constexpr char kMagic[4] = {'G', 'U', 'N', 'W'};
constexpr uint32_t kVersion = 1;

void put_u16(std::ostream& os, uint16_t v) {
    const unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                                static_cast<unsigned char>(v >> 8)};
    os.write(reinterpret_cast<const char*>(b), 2);
}

void put_u32(std::ostream& os, uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f32(std::ostream& os, float v) {
    uint32_t u;
    std::memcpy(&u, &v, 4);
    put_u32(os, u);
}

struct Reader {
    std::ifstream in;
    std::string path;

    explicit Reader(const std::string& p) : in(p, std::ios::binary), path(p) {
        if (!in) throw DataError("checkpoint: cannot open '" + p + "'");
    }

    void bytes(void* dst, size_t len, const char* field) {
        in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(len));
        if (in.gcount() != static_cast<std::streamsize>(len))
            throw DataError("checkpoint '" + path + "': truncated while reading " +
                            std::string(field));
    }
    uint8_t u8(const char* field) {
        uint8_t v;
        bytes(&v, 1, field);
        return v;
    }
    uint16_t u16(const char* field) {
        unsigned char b[2];
        bytes(b, 2, field);
        return static_cast<uint16_t>(b[0] | (b[1] << 8));
    }
    uint32_t u32(const char* field) {
        unsigned char b[4];
        bytes(b, 4, field);
        return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
               (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
    }
    float f32(const char* field) {
        const uint32_t u = u32(field);
        float v;
        std::memcpy(&v, &u, 4);
        return v;
    }
};

}  // namespace

void save_checkpoint(GunModel<float>& model, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw DataError("checkpoint: cannot write '" + path + "'");

    os.write(kMagic, 4);
    put_u32(os, kVersion);
    os.put(4);  // scalar width
    const auto& t = model.topology;
    put_u32(os, static_cast<uint32_t>(t.scale));
    put_u32(os, 1);  // scale denominator; integer factors only
    put_u32(os, static_cast<uint32_t>(t.effective_steps()));
    put_u32(os, static_cast<uint32_t>(t.depth));
    put_u32(os, static_cast<uint32_t>(t.channels));
    os.put(t.bn_on_input ? 1 : 0);
    os.put(t.backward_resample == BackwardResample::Plain ? 1 : 0);

    auto views = model.state();
    put_u32(os, static_cast<uint32_t>(views.size()));
    for (const auto& v : views) {
        put_u16(os, static_cast<uint16_t>(v.name.size()));
        os.write(v.name.data(), static_cast<std::streamsize>(v.name.size()));
        os.put(static_cast<char>(v.dims.size()));
        for (uint32_t d : v.dims) put_u32(os, d);
        for (size_t i = 0; i < v.len; ++i) put_f32(os, v.data[i]);
    }
    if (!os) throw DataError("checkpoint: write failed for '" + path + "'");
}

GunModel<float> load_checkpoint(const std::string& path) {
    Reader r(path);

    char magic[4];
    r.bytes(magic, 4, "magic");
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw DataError("checkpoint '" + path + "': bad magic, not a GUN checkpoint");
    const uint32_t version = r.u32("version");
    if (version != kVersion)
        throw DataError("checkpoint '" + path + "': unsupported version " +
                        std::to_string(version));
    const uint8_t width = r.u8("scalar width");
    if (width != 4)
        throw DataError("checkpoint '" + path + "': unsupported scalar width " +
                        std::to_string(width));

    GunTopology t;
    const uint32_t num = r.u32("scale_num");
    const uint32_t den = r.u32("scale_den");
    if (den != 1 || num < 2 || num > 4)
        throw DataError("checkpoint '" + path + "': unsupported scale " + std::to_string(num) +
                        "/" + std::to_string(den));
    t.scale = static_cast<int>(num);
    t.steps = static_cast<int>(r.u32("steps"));
    t.depth = static_cast<int>(r.u32("depth"));
    t.channels = static_cast<int>(r.u32("channels"));
    t.bn_on_input = r.u8("bn_on_input") != 0;
    t.backward_resample = r.u8("backward_resample") ? BackwardResample::Plain
                                                    : BackwardResample::Adjoint;

    GunModel<float> model = build_gun<float>(t, /*seed=*/0);
    auto views = model.state();
    std::map<std::string, StateView<float>*> by_name;
    for (auto& v : views) by_name[v.name] = &v;

    const uint32_t count = r.u32("tensor count");
    if (count != views.size())
        throw DataError("checkpoint '" + path + "': tensor count " + std::to_string(count) +
                        " does not match topology (expected " + std::to_string(views.size()) +
                        ")");
    for (uint32_t i = 0; i < count; ++i) {
        const uint16_t name_len = r.u16("tensor name length");
        std::string name(name_len, '\0');
        r.bytes(name.data(), name_len, "tensor name");
        auto it = by_name.find(name);
        if (it == by_name.end())
            throw DataError("checkpoint '" + path + "': unknown tensor '" + name + "'");
        StateView<float>* v = it->second;
        const uint8_t ndim = r.u8("tensor ndim");
        if (ndim != v->dims.size())
            throw DataError("checkpoint '" + path + "': tensor '" + name + "' has ndim " +
                            std::to_string(ndim) + ", expected " +
                            std::to_string(v->dims.size()));
        size_t len = 1;
        for (uint8_t d = 0; d < ndim; ++d) {
            const uint32_t dim = r.u32("tensor dim");
            if (dim != v->dims[d])
                throw DataError("checkpoint '" + path + "': tensor '" + name + "' dim " +
                                std::to_string(d) + " is " + std::to_string(dim) +
                                ", expected " + std::to_string(v->dims[d]));
            len *= dim;
        }
        for (size_t s = 0; s < len; ++s) v->data[s] = r.f32("tensor data");
        by_name.erase(it);
    }
    if (!by_name.empty())
        throw DataError("checkpoint '" + path + "': missing tensor '" +
                        by_name.begin()->first + "'");
    return model;
}

template struct GunModel<float>;
template struct GunModel<double>;
template struct GradientStore<float>;
template struct GradientStore<double>;
template GunModel<float> build_gun(const GunTopology&, uint64_t);
template GunModel<double> build_gun(const GunTopology&, uint64_t);
template Tensor<float> gun_forward(GunModel<float>&, const Tensor<float>&,
                                   const ResolutionSchedule&, Mode, ForwardCache<float>*,
                                   ForwardStats*);
template Tensor<double> gun_forward(GunModel<double>&, const Tensor<double>&,
                                    const ResolutionSchedule&, Mode, ForwardCache<double>*,
                                    ForwardStats*);
template GradientStore<float> gun_backward(GunModel<float>&, const ForwardCache<float>&,
                                           const Tensor<float>&);
template GradientStore<double> gun_backward(GunModel<double>&, const ForwardCache<double>&,
                                            const Tensor<double>&);

}  // namespace gun
