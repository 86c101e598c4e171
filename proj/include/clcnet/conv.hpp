#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "clcnet/tensor.hpp"

namespace clcnet {

enum class KernelKind { Regular, Grouped, Depthwise, InterlacedGrouped };

std::string kernel_kind_name(KernelKind kind);

/// Description of one convolution kernel. Regular is grouped with g=1;
/// depthwise is grouped with one channel per group (g == in == out, channel
/// receptive field size 1); interlaced grouped is grouped convolution whose
/// output channels are permuted by interlace_index.
struct KernelSpec {
    KernelKind kind = KernelKind::Regular;
    std::size_t in_channels = 1;
    std::size_t out_channels = 1;
    std::size_t kernel_h = 1;
    std::size_t kernel_w = 1;
    std::size_t groups = 1;
    std::size_t stride = 1;
    std::size_t padding = 0;

    std::size_t in_per_group() const { return in_channels / groups; }
    std::size_t out_per_group() const { return out_channels / groups; }
    std::size_t area() const { return kernel_h * kernel_w; }

    /// Multiplies needed for all out_channels at one output location.
    std::size_t per_location_multiplies() const {
        return out_channels * in_per_group() * area();
    }

    /// floor((dim + 2*padding - kernel) / stride) + 1; throws if < 1.
    std::size_t output_dim(std::size_t input_dim, std::size_t kernel_dim) const;
    std::size_t output_h(std::size_t input_h) const { return output_dim(input_h, kernel_h); }
    std::size_t output_w(std::size_t input_w) const { return output_dim(input_w, kernel_w); }

    void validate() const;
};

/// Per-channel affine normalization parameters for inference:
/// y = scale * ((x - mean) / sqrt(variance + epsilon)) + shift.
struct BatchNormParams {
    std::vector<real> scale;
    std::vector<real> shift;
    std::vector<real> mean;
    std::vector<real> variance;
    real epsilon = real(1e-5);

    static BatchNormParams identity(std::size_t channels);
    void validate(std::size_t channels) const;
};

/// 3x3 interlaced grouped kernel (carries the block stride) followed by a
/// 1x1 grouped kernel at stride 1, with a normalization stage after each.
struct BlockSpec {
    KernelSpec igc;
    KernelSpec gc;
    BatchNormParams bn1;
    BatchNormParams bn2;

    /// Standard block: in m channels, mid l, out n, groups g1/g2, identity
    /// normalization. The 3x3 kernel uses padding 1, the 1x1 kernel padding 0.
    static BlockSpec make(std::size_t m, std::size_t l, std::size_t n,
                          std::size_t g1, std::size_t g2, std::size_t stride);

    void validate() const;
};

/// Forward convolution. Summation order per output element is fixed:
/// channel-major, then kernel row, then kernel column; results are identical
/// for any worker count. For InterlacedGrouped the output is computed
/// monolithically (each output channel reads through the interlace
/// permutation) and equals interlace_channels(grouped output, g) exactly.
Tensor4D conv2d(const Tensor4D& input, const WeightTensor& weights, const KernelSpec& spec);

/// True iff the monolithic interlaced path and grouped-conv-then-interlace
/// agree element-for-element on this instance.
bool igc_equivalence_check(const Tensor4D& input, const WeightTensor& weights,
                           const KernelSpec& spec);

Tensor4D batchnorm_inference(const Tensor4D& t, const BatchNormParams& params);

Tensor4D relu(const Tensor4D& t);

/// IGC -> BN -> GC -> BN -> ReLU. No activation between the two kernels.
Tensor4D clc_block_forward(const Tensor4D& input, const BlockSpec& block,
                           const WeightTensor& igc_weights, const WeightTensor& gc_weights);

}  // namespace clcnet
