#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace clcnet {

struct BenchStats {
    double median_ms = 0;
    double p10_ms = 0;
    double p90_ms = 0;
    double gmacs_per_s = 0;  // based on the median
    int iters = 0;
};

/// Linear-interpolation quantile of an unsorted sample, q in [0, 1].
double quantile(std::vector<double> samples, double q);

/// Time `fn` for `iters` passes (one untimed warmup first) and summarize.
/// Medians resist timer noise better than means, so throughput uses them.
BenchStats measure(const std::function<void()>& fn, int iters, std::uint64_t macs_per_iter);

}  // namespace clcnet
