#include "clcnet/bench_stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace clcnet {

double quantile(std::vector<double> samples, double q) {
    if (samples.empty()) throw std::invalid_argument("quantile: empty sample");
    std::sort(samples.begin(), samples.end());
    const double pos = q * double(samples.size() - 1);
    const std::size_t lo = std::size_t(std::floor(pos));
    const std::size_t hi = std::size_t(std::ceil(pos));
    const double frac = pos - double(lo);
    return samples[lo] + (samples[hi] - samples[lo]) * frac;
}

BenchStats measure(const std::function<void()>& fn, int iters, std::uint64_t macs_per_iter) {
    if (iters <= 0) throw std::invalid_argument("measure: iters must be >= 1");
    fn();  // warmup
    std::vector<double> elapsed_ms;
    elapsed_ms.reserve(iters);
    for (int i = 0; i < iters; ++i) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        const auto stop = std::chrono::steady_clock::now();
        elapsed_ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    }
    BenchStats stats;
    stats.iters = iters;
    stats.median_ms = quantile(elapsed_ms, 0.5);
    stats.p10_ms = quantile(elapsed_ms, 0.1);
    stats.p90_ms = quantile(elapsed_ms, 0.9);
    if (stats.median_ms > 0)
        stats.gmacs_per_s = double(macs_per_iter) / (stats.median_ms * 1e-3) / 1e9;
    return stats;
}

}  // namespace clcnet
