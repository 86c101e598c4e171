#pragma once

#include "clcnet/conv.hpp"
#include "clcnet/tensor.hpp"

// Serial direct-summation kernels, written independently of the parallel
// engine. They are the correctness baseline for the test suite and the
// serial side of the benchmark comparison. Summation order per output
// element is the same fixed order as the engine (channel, kernel row,
// kernel column), so agreement is exact, not approximate.
namespace clcnet::ref {

/// Naive nested-loop convolution. The interlaced grouped case is computed
/// definitionally: grouped convolution followed by channel interlacing.
Tensor4D conv2d(const Tensor4D& input, const WeightTensor& weights, const KernelSpec& spec);

/// Channel interlace via the reshape-(g, C/g), transpose, flatten route,
/// element by element.
Tensor4D interlace_channels(const Tensor4D& t, std::size_t g);

}  // namespace clcnet::ref
