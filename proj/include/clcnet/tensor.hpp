#pragma once

#include <cstddef>
#include <vector>

#include "clcnet/error.hpp"

namespace clcnet {

/// Scalar type used by every kernel in the library.
using real = float;

/// Dense 4-D activation tensor in flat NCHW order: batch-major, then
/// channel, then row, then column. Immutable from the point of view of the
/// library operations (every operation returns a new tensor), so values can
/// be shared read-only across threads.
class Tensor4D {
public:
    Tensor4D(std::size_t batch, std::size_t channels, std::size_t height,
             std::size_t width, real fill = real(0));

    std::size_t batch() const { return batch_; }
    std::size_t channels() const { return channels_; }
    std::size_t height() const { return height_; }
    std::size_t width() const { return width_; }
    std::size_t size() const { return data_.size(); }

    real& at(std::size_t b, std::size_t c, std::size_t y, std::size_t x) {
        return data_[((b * channels_ + c) * height_ + y) * width_ + x];
    }
    real at(std::size_t b, std::size_t c, std::size_t y, std::size_t x) const {
        return data_[((b * channels_ + c) * height_ + y) * width_ + x];
    }

    real* data() { return data_.data(); }
    const real* data() const { return data_.data(); }

    bool same_shape(const Tensor4D& other) const;

    /// Exact element-for-element equality (shapes must match too).
    friend bool operator==(const Tensor4D& a, const Tensor4D& b);

private:
    std::size_t batch_, channels_, height_, width_;
    std::vector<real> data_;
};

/// Weights of one convolution kernel: out_channels rows, each holding the
/// taps for the in-channels of that output's group.
class WeightTensor {
public:
    WeightTensor(std::size_t out_channels, std::size_t in_channels_per_group,
                 std::size_t kernel_h, std::size_t kernel_w, real fill = real(0));

    std::size_t out_channels() const { return out_channels_; }
    std::size_t in_channels_per_group() const { return in_per_group_; }
    std::size_t kernel_h() const { return kernel_h_; }
    std::size_t kernel_w() const { return kernel_w_; }
    std::size_t size() const { return data_.size(); }

    real& at(std::size_t o, std::size_t i, std::size_t ky, std::size_t kx) {
        return data_[((o * in_per_group_ + i) * kernel_h_ + ky) * kernel_w_ + kx];
    }
    real at(std::size_t o, std::size_t i, std::size_t ky, std::size_t kx) const {
        return data_[((o * in_per_group_ + i) * kernel_h_ + ky) * kernel_w_ + kx];
    }

    real* data() { return data_.data(); }
    const real* data() const { return data_.data(); }

private:
    std::size_t out_channels_, in_per_group_, kernel_h_, kernel_w_;
    std::vector<real> data_;
};

/// Source channel feeding interlaced output position k, for C channels in g
/// groups: pi(k) = (k mod g) * (C / g) + k / g. This is the reshape-(g, C/g),
/// transpose, flatten shuffle; consecutive output positions cycle through the
/// g contiguous input blocks.
std::size_t interlace_index(std::size_t k, std::size_t channels, std::size_t g);

/// Permute channels so position k holds input channel interlace_index(k).
/// The inverse permutation is interlace_channels with g' = channels / g.
Tensor4D interlace_channels(const Tensor4D& t, std::size_t g);

}  // namespace clcnet
