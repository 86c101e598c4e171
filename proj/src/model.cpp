#include "clcnet/model.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace clcnet {

void NetworkConfig::validate() const {
    if (input_resolution == 0 || input_resolution % 32 != 0)
        throw DomainError("NetworkConfig: input_resolution must be a positive multiple of 32, got " +
                          std::to_string(input_resolution));
    if (num_classes == 0)
        throw DomainError("NetworkConfig: num_classes must be >= 1");
}

KernelSpec NetworkSpec::igc_kernel(std::size_t i) const {
    const BlockParams& p = blocks.at(i);
    const KernelKind kind =
        config.ablate_igc_to_gc ? KernelKind::Grouped : KernelKind::InterlacedGrouped;
    return KernelSpec{kind, p.m, p.l, 3, 3, p.g1, p.stride, 1};
}

KernelSpec NetworkSpec::gc_kernel(std::size_t i) const {
    const BlockParams& p = blocks.at(i);
    return KernelSpec{KernelKind::Grouped, p.l, p.n, 1, 1, p.g2, 1, 0};
}

NetworkSpec build_clcnet(const NetworkConfig& cfg) {
    cfg.validate();
    NetworkSpec spec;
    spec.config = cfg;
    spec.stem = KernelSpec{KernelKind::Regular, 3, 32, 3, 3, 1, 2, 1};

    auto push = [&spec](std::size_t m, std::size_t n, std::size_t stride, std::size_t g1,
                        std::size_t repeat) {
        for (std::size_t r = 0; r < repeat; ++r)
            spec.blocks.push_back(BlockParams{m, m, n, stride, g1, 2});
    };
    push(32, 64, 1, 16, 1);
    push(64, 128, 2, 32, 1);
    push(128, 128, 1, 64, cfg.a);
    push(128, 256, 2, 64, 1);
    push(256, 256, 1, 128, cfg.b);
    push(256, 512, 2, 128, 1);
    push(512, 512, 1, 256, cfg.c);
    push(512, 1024, 2, 256, 1);
    push(1024, 1024, 1, 512, cfg.d);
    return spec;
}

namespace {

std::string block_name(std::size_t i) {
    std::ostringstream os;
    os << "block" << (i + 1 < 10 ? "0" : "") << i + 1;
    return os.str();
}

LayerRecord conv_record(const std::string& name, const KernelSpec& k, std::size_t out_h,
                        std::size_t out_w) {
    LayerRecord rec;
    rec.name = name;
    rec.kind = kernel_kind_name(k.kind);
    rec.in_channels = k.in_channels;
    rec.out_channels = k.out_channels;
    rec.groups = k.groups;
    rec.stride = k.stride;
    rec.out_h = out_h;
    rec.out_w = out_w;
    rec.macs = std::uint64_t(out_h) * out_w * k.per_location_multiplies();
    rec.params = std::uint64_t(k.out_channels) * k.in_per_group() * k.area();
    return rec;
}

LayerRecord bn_record(const std::string& name, std::size_t channels, std::size_t out_h,
                      std::size_t out_w) {
    LayerRecord rec;
    rec.name = name;
    rec.kind = "batchnorm";
    rec.in_channels = rec.out_channels = channels;
    rec.out_h = out_h;
    rec.out_w = out_w;
    rec.macs = 0;
    rec.params = 2 * std::uint64_t(channels);  // learnable scale and shift
    return rec;
}

}  // namespace

CostReport cost_report(const NetworkSpec& spec) {
    CostReport report;
    const std::size_t res = spec.config.input_resolution;

    std::size_t h = spec.stem.output_h(res);
    report.layers.push_back(conv_record("stem", spec.stem, h, h));
    report.layers.push_back(bn_record("stem_bn", spec.stem.out_channels, h, h));

    for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
        const KernelSpec igc = spec.igc_kernel(i);
        const KernelSpec gc = spec.gc_kernel(i);
        h = igc.output_h(h);
        const std::string base = block_name(i);
        report.layers.push_back(conv_record(base + "_igc", igc, h, h));
        report.layers.push_back(bn_record(base + "_bn1", igc.out_channels, h, h));
        report.layers.push_back(conv_record(base + "_gc", gc, h, h));
        report.layers.push_back(bn_record(base + "_bn2", gc.out_channels, h, h));
    }

    const std::size_t features = spec.blocks.empty() ? spec.stem.out_channels
                                                     : spec.blocks.back().n;
    LayerRecord pool;
    pool.name = "avgpool";
    pool.kind = "pool";
    pool.in_channels = pool.out_channels = features;
    pool.out_h = pool.out_w = 1;
    report.layers.push_back(pool);

    LayerRecord fc;
    fc.name = "fc";
    fc.kind = "fc";
    fc.in_channels = features;
    fc.out_channels = spec.config.num_classes;
    fc.out_h = fc.out_w = 1;
    fc.macs = std::uint64_t(features) * spec.config.num_classes;
    fc.params = std::uint64_t(features) * spec.config.num_classes + spec.config.num_classes;
    report.layers.push_back(fc);

    for (const LayerRecord& rec : report.layers) {
        report.total_macs += rec.macs;
        report.total_params += rec.params;
        report.macs_by_kind[rec.kind] += rec.macs;
        report.params_by_kind[rec.kind] += rec.params;
    }
    return report;
}

ChannelDependencyGraph block_cdg(const NetworkSpec& spec, std::size_t i) {
    return compose(cdg_of_kernel(spec.igc_kernel(i)), cdg_of_kernel(spec.gc_kernel(i)));
}

std::size_t FcrfReport::fcrf_count() const {
    std::size_t count = 0;
    for (bool ok : block_fcrf) count += ok ? 1 : 0;
    return count;
}

FcrfReport verify_network_fcrf(const NetworkSpec& spec) {
    FcrfReport report;
    report.block_fcrf.reserve(spec.blocks.size());
    for (std::size_t i = 0; i < spec.blocks.size(); ++i)
        report.block_fcrf.push_back(has_fcrf(block_cdg(spec, i)));
    return report;
}

namespace {

// Platform-independent uniform source: identical output for identical seed.
class WeightRng {
public:
    explicit WeightRng(std::uint64_t seed) : gen_(seed) {}

    real uniform(real lo, real hi) {
        const double unit = double(gen_() >> 11) * 0x1.0p-53;  // [0, 1)
        return real(lo + (double(hi) - double(lo)) * unit);
    }

    void fill_weights(WeightTensor& w, std::size_t fan_in) {
        const real limit = real(std::sqrt(6.0 / double(fan_in)));
        for (std::size_t i = 0; i < w.size(); ++i)
            w.data()[i] = uniform(-limit, limit);
    }

    BatchNormParams batchnorm(std::size_t channels) {
        BatchNormParams p;
        p.scale.resize(channels);
        p.shift.resize(channels);
        p.mean.resize(channels);
        p.variance.resize(channels);
        p.epsilon = real(1e-5);
        for (std::size_t c = 0; c < channels; ++c) p.scale[c] = uniform(0.8f, 1.2f);
        for (std::size_t c = 0; c < channels; ++c) p.shift[c] = uniform(-0.1f, 0.1f);
        for (std::size_t c = 0; c < channels; ++c) p.mean[c] = uniform(-0.05f, 0.05f);
        for (std::size_t c = 0; c < channels; ++c) p.variance[c] = uniform(0.9f, 1.1f);
        return p;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace

WeightBundle init_weights(const NetworkSpec& spec, std::uint64_t seed) {
    WeightRng rng(seed);
    const std::size_t features = spec.blocks.empty() ? spec.stem.out_channels
                                                     : spec.blocks.back().n;
    WeightBundle bundle{
        WeightTensor(spec.stem.out_channels, spec.stem.in_per_group(), 3, 3),
        BatchNormParams{},
        {},
        WeightTensor(spec.config.num_classes, features, 1, 1),
        std::vector<real>(spec.config.num_classes, real(0))};

    rng.fill_weights(bundle.stem, spec.stem.in_per_group() * spec.stem.area());
    bundle.stem_bn = rng.batchnorm(spec.stem.out_channels);

    for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
        const KernelSpec igc = spec.igc_kernel(i);
        const KernelSpec gc = spec.gc_kernel(i);
        BlockWeights bw{WeightTensor(igc.out_channels, igc.in_per_group(), 3, 3),
                        WeightTensor(gc.out_channels, gc.in_per_group(), 1, 1),
                        BatchNormParams{}, BatchNormParams{}};
        rng.fill_weights(bw.igc, igc.in_per_group() * igc.area());
        bw.bn1 = rng.batchnorm(igc.out_channels);
        rng.fill_weights(bw.gc, gc.in_per_group() * gc.area());
        bw.bn2 = rng.batchnorm(gc.out_channels);
        bundle.blocks.push_back(std::move(bw));
    }

    rng.fill_weights(bundle.fc, features);
    return bundle;
}

std::vector<ShapeRecord> shape_chain(const NetworkSpec& spec) {
    std::vector<ShapeRecord> chain;
    std::size_t h = spec.stem.output_h(spec.config.input_resolution);
    chain.push_back({"stem", spec.stem.out_channels, h, h});
    for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
        const KernelSpec igc = spec.igc_kernel(i);
        h = igc.output_h(h);
        chain.push_back({block_name(i), spec.blocks[i].n, h, h});
    }
    const std::size_t features = spec.blocks.empty() ? spec.stem.out_channels
                                                     : spec.blocks.back().n;
    chain.push_back({"avgpool", features, 1, 1});
    chain.push_back({"fc", spec.config.num_classes, 1, 1});
    return chain;
}

namespace {

Tensor4D global_avg_pool(const Tensor4D& t) {
    Tensor4D out(t.batch(), t.channels(), 1, 1);
    const std::size_t plane = t.height() * t.width();
    for (std::size_t b = 0; b < t.batch(); ++b) {
        for (std::size_t c = 0; c < t.channels(); ++c) {
            const real* src = t.data() + (b * t.channels() + c) * plane;
            real sum = 0;
            for (std::size_t i = 0; i < plane; ++i) sum += src[i];
            out.at(b, c, 0, 0) = sum / real(plane);
        }
    }
    return out;
}

Tensor4D fully_connected(const Tensor4D& pooled, const WeightTensor& w,
                         const std::vector<real>& bias) {
    if (pooled.channels() != w.in_channels_per_group() || pooled.height() != 1 ||
        pooled.width() != 1 || bias.size() != w.out_channels())
        throw ShapeError("fully_connected: feature vector does not match classifier shape");
    Tensor4D out(pooled.batch(), w.out_channels(), 1, 1);
    for (std::size_t b = 0; b < pooled.batch(); ++b) {
        for (std::size_t k = 0; k < w.out_channels(); ++k) {
            real acc = bias[k];
            for (std::size_t c = 0; c < pooled.channels(); ++c)
                acc += w.at(k, c, 0, 0) * pooled.at(b, c, 0, 0);
            out.at(b, k, 0, 0) = acc;
        }
    }
    return out;
}

void check_stage(const Tensor4D& t, const ShapeRecord& expected, std::size_t layer_index) {
    if (t.channels() != expected.channels || t.height() != expected.h ||
        t.width() != expected.w)
        throw ShapeError("forward: layer " + std::to_string(layer_index) + " (" +
                         expected.name + ") produced " + std::to_string(t.channels()) + "x" +
                         std::to_string(t.height()) + "x" + std::to_string(t.width()) +
                         ", expected " + std::to_string(expected.channels) + "x" +
                         std::to_string(expected.h) + "x" + std::to_string(expected.w));
}

}  // namespace

Tensor4D forward(const NetworkSpec& spec, const WeightBundle& weights, const Tensor4D& input) {
    const std::size_t res = spec.config.input_resolution;
    if (input.channels() != spec.stem.in_channels || input.height() != res ||
        input.width() != res)
        throw ShapeError("forward: input must be " + std::to_string(spec.stem.in_channels) +
                         "x" + std::to_string(res) + "x" + std::to_string(res) + ", got " +
                         std::to_string(input.channels()) + "x" +
                         std::to_string(input.height()) + "x" + std::to_string(input.width()));
    if (weights.blocks.size() != spec.blocks.size())
        throw ShapeError("forward: weight bundle holds " +
                         std::to_string(weights.blocks.size()) + " blocks, network has " +
                         std::to_string(spec.blocks.size()));

    const auto chain = shape_chain(spec);
    std::size_t stage = 0;

    Tensor4D x = conv2d(input, weights.stem, spec.stem);
    x = batchnorm_inference(x, weights.stem_bn);
    x = relu(x);
    check_stage(x, chain[stage], stage);
    ++stage;

    for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
        BlockSpec block;
        block.igc = spec.igc_kernel(i);
        block.gc = spec.gc_kernel(i);
        block.bn1 = weights.blocks[i].bn1;
        block.bn2 = weights.blocks[i].bn2;
        x = clc_block_forward(x, block, weights.blocks[i].igc, weights.blocks[i].gc);
        check_stage(x, chain[stage], stage);
        ++stage;
    }

    x = global_avg_pool(x);
    check_stage(x, chain[stage], stage);
    ++stage;

    x = fully_connected(x, weights.fc, weights.fc_bias);
    check_stage(x, chain[stage], stage);
    return x;
}

std::string serialize(const NetworkConfig& cfg) {
    nlohmann::json j{{"a", cfg.a},
                     {"b", cfg.b},
                     {"c", cfg.c},
                     {"d", cfg.d},
                     {"input_resolution", cfg.input_resolution},
                     {"num_classes", cfg.num_classes},
                     {"ablate_igc_to_gc", cfg.ablate_igc_to_gc}};
    return j.dump(2) + "\n";
}

namespace {

std::size_t require_count(const nlohmann::json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number_unsigned())
        throw ParseError("config field '" + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

}  // namespace

NetworkConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what());  // message carries byte/line position
    }
    if (!j.is_object())
        throw ParseError("config document must be a JSON object");

    static const char* known[] = {"a", "b", "c", "d", "input_resolution", "num_classes",
                                  "ablate_igc_to_gc"};
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ParseError("config field '" + key + "' is not recognized");
    }
    for (const char* k : {"a", "b", "c", "d"})
        if (!j.contains(k)) throw ParseError(std::string("config field '") + k + "' is required");

    NetworkConfig cfg;
    cfg.a = require_count(j, "a");
    cfg.b = require_count(j, "b");
    cfg.c = require_count(j, "c");
    cfg.d = require_count(j, "d");
    if (j.contains("input_resolution")) cfg.input_resolution = require_count(j, "input_resolution");
    if (j.contains("num_classes")) cfg.num_classes = require_count(j, "num_classes");
    if (j.contains("ablate_igc_to_gc")) {
        if (!j["ablate_igc_to_gc"].is_boolean())
            throw ParseError("config field 'ablate_igc_to_gc' must be a boolean");
        cfg.ablate_igc_to_gc = j["ablate_igc_to_gc"].get<bool>();
    }
    cfg.validate();
    return cfg;
}

NetworkConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace clcnet
