#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "clcnet/cdg.hpp"
#include "clcnet/conv.hpp"
#include "clcnet/tensor.hpp"

namespace clcnet {

/// Block repetition counts and input geometry of a clcNet instance.
/// (1,1,5,2) is clcNet-A, (1,1,7,3) is clcNet-B.
struct NetworkConfig {
    std::size_t a = 0;
    std::size_t b = 0;
    std::size_t c = 0;
    std::size_t d = 0;
    std::size_t input_resolution = 224;  // must be a multiple of 32
    std::size_t num_classes = 1000;
    bool ablate_igc_to_gc = false;  // swap every IGC kernel for a plain GC kernel

    void validate() const;
    friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// Channel and group parameters of one block row. Intermediate width l
/// always equals the input width m in this architecture.
struct BlockParams {
    std::size_t m = 1;
    std::size_t l = 1;
    std::size_t n = 1;
    std::size_t stride = 1;
    std::size_t g1 = 1;
    std::size_t g2 = 1;
};

struct NetworkSpec {
    NetworkConfig config;
    KernelSpec stem;  // regular 3x3, 3 -> 32, stride 2, then BN + ReLU
    std::vector<BlockParams> blocks;

    /// Kernel pair of block i, honoring the ablation flag for the 3x3 kernel.
    KernelSpec igc_kernel(std::size_t i) const;
    KernelSpec gc_kernel(std::size_t i) const;
};

NetworkSpec build_clcnet(const NetworkConfig& cfg);

/// One row of the cost report. BN rows carry zero MACs; the pool row carries
/// zero MACs and zero parameters.
struct LayerRecord {
    std::string name;
    std::string kind;  // regular | grouped | depthwise | igc | batchnorm | pool | fc
    std::size_t in_channels = 0;
    std::size_t out_channels = 0;
    std::size_t groups = 1;
    std::size_t stride = 1;
    std::size_t out_h = 0;
    std::size_t out_w = 0;
    std::uint64_t macs = 0;
    std::uint64_t params = 0;

    bool is_conv() const {
        return kind == "regular" || kind == "grouped" || kind == "depthwise" || kind == "igc";
    }
};

struct CostReport {
    std::vector<LayerRecord> layers;
    std::uint64_t total_macs = 0;
    std::uint64_t total_params = 0;
    std::map<std::string, std::uint64_t> macs_by_kind;
    std::map<std::string, std::uint64_t> params_by_kind;
};

/// Per-layer multiply-accumulate and parameter accounting for one inference
/// pass at the configured resolution. Conv MACs are out_h * out_w times the
/// per-location multiply count; conv parameters count weights only (no conv
/// bias exists), batch-norm contributes 2 learnable values per channel, the
/// classifier contributes weights plus bias.
CostReport cost_report(const NetworkSpec& spec);

struct FcrfReport {
    std::vector<bool> block_fcrf;
    std::size_t fcrf_count() const;
    bool all_fcrf() const { return fcrf_count() == block_fcrf.size(); }
};

/// Per-block full-channel-receptive-field verdict via dependency-graph
/// composition of the block's two kernels.
FcrfReport verify_network_fcrf(const NetworkSpec& spec);

/// Composed dependency graph of block i (3x3 kernel then 1x1 kernel).
ChannelDependencyGraph block_cdg(const NetworkSpec& spec, std::size_t i);

struct BlockWeights {
    WeightTensor igc;
    WeightTensor gc;
    BatchNormParams bn1;
    BatchNormParams bn2;
};

struct WeightBundle {
    WeightTensor stem;
    BatchNormParams stem_bn;
    std::vector<BlockWeights> blocks;
    WeightTensor fc;  // num_classes x 1024, 1x1
    std::vector<real> fc_bias;
};

/// Deterministic pseudo-random weights: fan-in-scaled uniform taps, mildly
/// perturbed normalization statistics. The same seed always produces the
/// same bundle, independent of platform and thread count.
WeightBundle init_weights(const NetworkSpec& spec, std::uint64_t seed);

struct ShapeRecord {
    std::string name;
    std::size_t channels = 0;
    std::size_t h = 0;
    std::size_t w = 0;
};

/// Expected per-stage output shapes for the configured resolution.
std::vector<ShapeRecord> shape_chain(const NetworkSpec& spec);

/// Whole-network inference: stem, block sequence, global average pooling,
/// classifier. Returns batch x num_classes x 1 x 1 logits. Any stage whose
/// output deviates from the expected chain aborts with the layer index.
Tensor4D forward(const NetworkSpec& spec, const WeightBundle& weights, const Tensor4D& input);

/// JSON round-trip for NetworkConfig. parse_config rejects unknown fields,
/// wrong types and invalid values, and never returns a partial config.
std::string serialize(const NetworkConfig& cfg);
NetworkConfig parse_config(const std::string& text);
NetworkConfig load_config(const std::string& path);

}  // namespace clcnet
