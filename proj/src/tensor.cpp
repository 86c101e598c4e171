#include "clcnet/tensor.hpp"

#include <algorithm>
#include <string>

namespace clcnet {

Tensor4D::Tensor4D(std::size_t batch, std::size_t channels, std::size_t height,
                   std::size_t width, real fill)
    : batch_(batch), channels_(channels), height_(height), width_(width) {
    if (batch == 0 || channels == 0 || height == 0 || width == 0)
        throw ShapeError("Tensor4D: all dimensions must be >= 1, got " +
                         std::to_string(batch) + "x" + std::to_string(channels) + "x" +
                         std::to_string(height) + "x" + std::to_string(width));
    data_.assign(batch * channels * height * width, fill);
}

bool Tensor4D::same_shape(const Tensor4D& other) const {
    return batch_ == other.batch_ && channels_ == other.channels_ &&
           height_ == other.height_ && width_ == other.width_;
}

bool operator==(const Tensor4D& a, const Tensor4D& b) {
    return a.same_shape(b) && a.data_ == b.data_;
}

WeightTensor::WeightTensor(std::size_t out_channels, std::size_t in_channels_per_group,
                           std::size_t kernel_h, std::size_t kernel_w, real fill)
    : out_channels_(out_channels), in_per_group_(in_channels_per_group),
      kernel_h_(kernel_h), kernel_w_(kernel_w) {
    if (out_channels == 0 || in_channels_per_group == 0 || kernel_h == 0 || kernel_w == 0)
        throw ShapeError("WeightTensor: all dimensions must be >= 1");
    data_.assign(out_channels * in_channels_per_group * kernel_h * kernel_w, fill);
}

std::size_t interlace_index(std::size_t k, std::size_t channels, std::size_t g) {
    return (k % g) * (channels / g) + k / g;
}

Tensor4D interlace_channels(const Tensor4D& t, std::size_t g) {
    if (g == 0 || t.channels() % g != 0)
        throw DivisibilityError("interlace_channels: g=" + std::to_string(g) +
                                " does not divide " + std::to_string(t.channels()) +
                                " channels");
    Tensor4D out(t.batch(), t.channels(), t.height(), t.width());
    const std::size_t plane = t.height() * t.width();
    for (std::size_t b = 0; b < t.batch(); ++b) {
        for (std::size_t k = 0; k < t.channels(); ++k) {
            const std::size_t src = interlace_index(k, t.channels(), g);
            const real* from = t.data() + (b * t.channels() + src) * plane;
            real* to = out.data() + (b * t.channels() + k) * plane;
            std::copy(from, from + plane, to);
        }
    }
    return out;
}

}  // namespace clcnet
