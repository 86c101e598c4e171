// Compares the OpenMP convolution engine against the serial reference kernel
// across representative shapes, after asserting that they agree bit-for-bit.
// Usage: bench_conv [iters] [small]

#include <cstdlib>
#include <cstring>
#include <iomanip>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "clcnet/bench_stats.hpp"
#include "clcnet/conv.hpp"
#include "clcnet/reference.hpp"

using namespace clcnet;

namespace {

struct Case {
    std::string name;
    KernelSpec spec;
    std::size_t res;
};

std::vector<Case> make_cases(bool small) {
    const std::size_t r1 = small ? 16 : 56;
    const std::size_t r2 = small ? 8 : 14;
    return {
        {"regular 32->32", {KernelKind::Regular, 32, 32, 3, 3, 1, 1, 1}, r1},
        {"grouped 64->64 g8", {KernelKind::Grouped, 64, 64, 3, 3, 8, 1, 1}, r1},
        {"depthwise 64", {KernelKind::Depthwise, 64, 64, 3, 3, 64, 1, 1}, r1},
        {"igc 128 g64", {KernelKind::InterlacedGrouped, 128, 128, 3, 3, 64, 1, 1}, r1},
        {"gc 1x1 128->256 g2", {KernelKind::Grouped, 128, 256, 1, 1, 2, 1, 0}, r1},
        {"igc 512 g256", {KernelKind::InterlacedGrouped, 512, 512, 3, 3, 256, 1, 1}, r2},
    };
}

}  // namespace

int main(int argc, char** argv) {
    int iters = 9;
    bool small = false;
    if (argc > 1) iters = std::atoi(argv[1]);
    if (argc > 2 && std::strcmp(argv[2], "small") == 0) small = true;
    if (iters <= 0) {
        std::cerr << "usage: bench_conv [iters] [small]\n";
        return 64;
    }

#ifdef _OPENMP
    std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
    std::cout << "threads: 1 (built without OpenMP)\n";
#endif
    std::cout << std::left << std::setw(22) << "kernel" << std::right << std::setw(12)
              << "serial ms" << std::setw(12) << "engine ms" << std::setw(10) << "speedup"
              << std::setw(12) << "GMAC/s" << "\n";

    std::mt19937 rng(42);
    std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
    int mismatches = 0;

    for (const Case& c : make_cases(small)) {
        Tensor4D input(1, c.spec.in_channels, c.res, c.res);
        for (std::size_t i = 0; i < input.size(); ++i) input.data()[i] = dist(rng);
        WeightTensor weights(c.spec.out_channels, c.spec.in_per_group(), c.spec.kernel_h,
                             c.spec.kernel_w);
        for (std::size_t i = 0; i < weights.size(); ++i) weights.data()[i] = dist(rng);

        if (!(conv2d(input, weights, c.spec) == ref::conv2d(input, weights, c.spec))) {
            std::cerr << "MISMATCH: " << c.name << " engine and reference disagree\n";
            ++mismatches;
            continue;
        }

        const std::uint64_t macs = std::uint64_t(c.spec.output_h(c.res)) *
                                   c.spec.output_w(c.res) * c.spec.per_location_multiplies();
        const BenchStats serial =
            measure([&] { ref::conv2d(input, weights, c.spec); }, iters, macs);
        const BenchStats engine =
            measure([&] { conv2d(input, weights, c.spec); }, iters, macs);

        std::cout << std::left << std::setw(22) << c.name << std::right << std::fixed
                  << std::setprecision(3) << std::setw(12) << serial.median_ms
                  << std::setw(12) << engine.median_ms << std::setprecision(2)
                  << std::setw(9) << serial.median_ms / engine.median_ms << "x"
                  << std::setw(12) << engine.gmacs_per_s << "\n";
    }
    return mismatches == 0 ? 0 : 1;
}
