#include "clcnet/conv.hpp"

#include <cmath>
#include <cstdint>

namespace clcnet {

std::string kernel_kind_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::Regular: return "regular";
        case KernelKind::Grouped: return "grouped";
        case KernelKind::Depthwise: return "depthwise";
        case KernelKind::InterlacedGrouped: return "igc";
    }
    return "unknown";
}

std::size_t KernelSpec::output_dim(std::size_t input_dim, std::size_t kernel_dim) const {
    const std::size_t padded = input_dim + 2 * padding;
    if (padded < kernel_dim)
        throw ShapeError("conv2d: kernel " + std::to_string(kernel_dim) +
                         " larger than padded input " + std::to_string(padded));
    return (padded - kernel_dim) / stride + 1;
}

void KernelSpec::validate() const {
    if (in_channels == 0 || out_channels == 0 || kernel_h == 0 || kernel_w == 0 ||
        groups == 0 || stride == 0)
        throw ShapeError("KernelSpec: channel, kernel and stride counts must be >= 1");
    if (in_channels % groups != 0 || out_channels % groups != 0)
        throw DivisibilityError("KernelSpec: groups=" + std::to_string(groups) +
                                " must divide in=" + std::to_string(in_channels) +
                                " and out=" + std::to_string(out_channels));
    if (kind == KernelKind::Regular && groups != 1)
        throw ShapeError("KernelSpec: regular kernel requires groups == 1");
    if (kind == KernelKind::Depthwise &&
        (groups != in_channels || in_channels != out_channels))
        throw ShapeError("KernelSpec: depthwise kernel requires groups == in == out");
}

BatchNormParams BatchNormParams::identity(std::size_t channels) {
    BatchNormParams p;
    p.scale.assign(channels, real(1));
    p.shift.assign(channels, real(0));
    p.mean.assign(channels, real(0));
    p.variance.assign(channels, real(1));
    p.epsilon = real(0);
    return p;
}

void BatchNormParams::validate(std::size_t channels) const {
    if (scale.size() != channels || shift.size() != channels ||
        mean.size() != channels || variance.size() != channels)
        throw ShapeError("batchnorm: parameter vectors must have " +
                         std::to_string(channels) + " entries");
    for (real v : variance)
        if (!(v + epsilon > real(0)))
            throw DomainError("batchnorm: variance + epsilon must be positive");
}

BlockSpec BlockSpec::make(std::size_t m, std::size_t l, std::size_t n,
                          std::size_t g1, std::size_t g2, std::size_t stride) {
    BlockSpec b;
    b.igc = KernelSpec{KernelKind::InterlacedGrouped, m, l, 3, 3, g1, stride, 1};
    b.gc = KernelSpec{KernelKind::Grouped, l, n, 1, 1, g2, 1, 0};
    b.bn1 = BatchNormParams::identity(l);
    b.bn2 = BatchNormParams::identity(n);
    return b;
}

void BlockSpec::validate() const {
    igc.validate();
    gc.validate();
    if (igc.out_channels != gc.in_channels)
        throw ShapeError("BlockSpec: IGC output channels must feed the GC kernel");
    if (gc.stride != 1)
        throw ShapeError("BlockSpec: GC kernel stride must be 1");
    bn1.validate(igc.out_channels);
    bn2.validate(gc.out_channels);
}

Tensor4D conv2d(const Tensor4D& input, const WeightTensor& weights, const KernelSpec& spec) {
    spec.validate();
    if (input.channels() != spec.in_channels)
        throw ShapeError("conv2d: input has " + std::to_string(input.channels()) +
                         " channels, kernel expects " + std::to_string(spec.in_channels));
    if (weights.out_channels() != spec.out_channels ||
        weights.in_channels_per_group() != spec.in_per_group() ||
        weights.kernel_h() != spec.kernel_h || weights.kernel_w() != spec.kernel_w)
        throw ShapeError("conv2d: weight tensor shape does not match kernel spec");

    const std::int64_t oh = spec.output_h(input.height());
    const std::int64_t ow = spec.output_w(input.width());
    Tensor4D out(input.batch(), spec.out_channels, oh, ow);

    const std::int64_t batches = input.batch();
    const std::int64_t out_c = spec.out_channels;
    const std::int64_t cpg = spec.in_per_group();
    const std::int64_t opg = spec.out_per_group();
    const std::int64_t kh = spec.kernel_h;
    const std::int64_t kw = spec.kernel_w;
    const std::int64_t stride = spec.stride;
    const std::int64_t pad = spec.padding;
    const std::int64_t ih = input.height();
    const std::int64_t iw = input.width();
    const bool interlaced = spec.kind == KernelKind::InterlacedGrouped;

#pragma omp parallel for collapse(3) schedule(static)
    for (std::int64_t b = 0; b < batches; ++b) {
        for (std::int64_t oc = 0; oc < out_c; ++oc) {
            for (std::int64_t oy = 0; oy < oh; ++oy) {
                // An interlaced output channel is the grouped result at the
                // permuted position: read weights and input block of that row.
                const std::size_t row =
                    interlaced ? interlace_index(oc, out_c, spec.groups)
                               : static_cast<std::size_t>(oc);
                const std::int64_t c0 =
                    static_cast<std::int64_t>(row) / opg * cpg;
                for (std::int64_t ox = 0; ox < ow; ++ox) {
                    real acc = 0;
                    // fixed order: channel, kernel row, kernel column
                    for (std::int64_t ci = 0; ci < cpg; ++ci) {
                        for (std::int64_t ky = 0; ky < kh; ++ky) {
                            const std::int64_t iy = oy * stride - pad + ky;
                            if (iy < 0 || iy >= ih) continue;
                            for (std::int64_t kx = 0; kx < kw; ++kx) {
                                const std::int64_t ix = ox * stride - pad + kx;
                                if (ix < 0 || ix >= iw) continue;
                                acc += input.at(b, c0 + ci, iy, ix) *
                                       weights.at(row, ci, ky, kx);
                            }
                        }
                    }
                    out.at(b, oc, oy, ox) = acc;
                }
            }
        }
    }
    return out;
}

bool igc_equivalence_check(const Tensor4D& input, const WeightTensor& weights,
                           const KernelSpec& spec) {
    if (spec.kind != KernelKind::InterlacedGrouped)
        throw DomainError("igc_equivalence_check: kernel must be interlaced grouped");
    const Tensor4D monolithic = conv2d(input, weights, spec);
    KernelSpec grouped = spec;
    grouped.kind = KernelKind::Grouped;
    const Tensor4D two_step = interlace_channels(conv2d(input, weights, grouped), spec.groups);
    return monolithic == two_step;
}

Tensor4D batchnorm_inference(const Tensor4D& t, const BatchNormParams& params) {
    params.validate(t.channels());
    Tensor4D out(t.batch(), t.channels(), t.height(), t.width());
    const std::int64_t batches = t.batch();
    const std::int64_t channels = t.channels();
    const std::int64_t plane = t.height() * t.width();

#pragma omp parallel for collapse(2) schedule(static)
    for (std::int64_t b = 0; b < batches; ++b) {
        for (std::int64_t c = 0; c < channels; ++c) {
            const real denom = std::sqrt(params.variance[c] + params.epsilon);
            const real scale = params.scale[c];
            const real shift = params.shift[c];
            const real mean = params.mean[c];
            const real* src = t.data() + (b * channels + c) * plane;
            real* dst = out.data() + (b * channels + c) * plane;
            for (std::int64_t i = 0; i < plane; ++i)
                dst[i] = scale * ((src[i] - mean) / denom) + shift;
        }
    }
    return out;
}

Tensor4D relu(const Tensor4D& t) {
    Tensor4D out(t.batch(), t.channels(), t.height(), t.width());
    const std::int64_t n = t.size();
    const real* src = t.data();
    real* dst = out.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        dst[i] = src[i] > real(0) ? src[i] : real(0);
    return out;
}

Tensor4D clc_block_forward(const Tensor4D& input, const BlockSpec& block,
                           const WeightTensor& igc_weights, const WeightTensor& gc_weights) {
    block.validate();
    Tensor4D x = conv2d(input, igc_weights, block.igc);
    x = batchnorm_inference(x, block.bn1);
    x = conv2d(x, gc_weights, block.gc);
    x = batchnorm_inference(x, block.bn2);
    return relu(x);
}

}  // namespace clcnet
