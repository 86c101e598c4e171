#include "clcnet/reference.hpp"

namespace clcnet::ref {

Tensor4D interlace_channels(const Tensor4D& t, std::size_t g) {
    if (g == 0 || t.channels() % g != 0)
        throw DivisibilityError("ref::interlace_channels: g must divide channels");
    const std::size_t per_field = t.channels() / g;
    Tensor4D out(t.batch(), t.channels(), t.height(), t.width());
    for (std::size_t b = 0; b < t.batch(); ++b)
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t j = 0; j < per_field; ++j)
                for (std::size_t y = 0; y < t.height(); ++y)
                    for (std::size_t x = 0; x < t.width(); ++x)
                        out.at(b, j * g + i, y, x) = t.at(b, i * per_field + j, y, x);
    return out;
}

Tensor4D conv2d(const Tensor4D& input, const WeightTensor& weights, const KernelSpec& spec) {
    spec.validate();
    if (input.channels() != spec.in_channels)
        throw ShapeError("ref::conv2d: input channel count does not match spec");
    if (weights.out_channels() != spec.out_channels ||
        weights.in_channels_per_group() != spec.in_per_group() ||
        weights.kernel_h() != spec.kernel_h || weights.kernel_w() != spec.kernel_w)
        throw ShapeError("ref::conv2d: weight tensor shape does not match spec");

    if (spec.kind == KernelKind::InterlacedGrouped) {
        KernelSpec grouped = spec;
        grouped.kind = KernelKind::Grouped;
        return ref::interlace_channels(ref::conv2d(input, weights, grouped), spec.groups);
    }

    const std::size_t oh = spec.output_h(input.height());
    const std::size_t ow = spec.output_w(input.width());
    Tensor4D out(input.batch(), spec.out_channels, oh, ow);

    const long kh = spec.kernel_h, kw = spec.kernel_w;
    const long stride = spec.stride, pad = spec.padding;
    const long ih = input.height(), iw = input.width();
    const std::size_t group_size = spec.in_per_group();

    for (std::size_t b = 0; b < input.batch(); ++b) {
        for (std::size_t oc = 0; oc < spec.out_channels; ++oc) {
            const std::size_t group = oc / spec.out_per_group();
            const std::size_t first_in = group * group_size;
            for (std::size_t oy = 0; oy < oh; ++oy) {
                for (std::size_t ox = 0; ox < ow; ++ox) {
                    real sum = 0;
                    for (std::size_t ci = 0; ci < group_size; ++ci) {       // channels
                        for (long ky = 0; ky < kh; ++ky) {                  // kernel rows
                            for (long kx = 0; kx < kw; ++kx) {              // kernel columns
                                const long iy = long(oy) * stride - pad + ky;
                                const long ix = long(ox) * stride - pad + kx;
                                if (iy < 0 || iy >= ih || ix < 0 || ix >= iw) continue;
                                sum += input.at(b, first_in + ci, iy, ix) *
                                       weights.at(oc, ci, ky, kx);
                            }
                        }
                    }
                    out.at(b, oc, oy, ox) = sum;
                }
            }
        }
    }
    return out;
}

}  // namespace clcnet::ref
