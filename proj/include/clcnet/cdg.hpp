#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "clcnet/conv.hpp"

namespace clcnet {

/// Bipartite dependency graph of a kernel or composed block: for each output
/// channel, the set of input channels it is computed from. Stored as one
/// bitset per output channel; all analyses in scope stay at or below 1024
/// channels, so explicit sets are exact and cheap.
class ChannelDependencyGraph {
public:
    ChannelDependencyGraph(std::size_t in_channels, std::size_t out_channels);

    /// deps[n] = {n}; useful as a composition unit.
    static ChannelDependencyGraph identity(std::size_t channels);

    std::size_t in_channels() const { return in_channels_; }
    std::size_t out_channels() const { return rows_.size(); }

    void add_dependency(std::size_t out, std::size_t in);
    bool depends_on(std::size_t out, std::size_t in) const { return rows_[out].test(in); }

    /// Ascending input indices the given output depends on.
    std::vector<std::size_t> deps_of(std::size_t out) const;
    std::size_t crf_size(std::size_t out) const { return rows_[out].count(); }

    const boost::dynamic_bitset<>& row(std::size_t out) const { return rows_[out]; }

    friend bool operator==(const ChannelDependencyGraph& a, const ChannelDependencyGraph& b) {
        return a.in_channels_ == b.in_channels_ && a.rows_ == b.rows_;
    }

private:
    std::size_t in_channels_;
    std::vector<boost::dynamic_bitset<>> rows_;
};

/// Dependency pattern of a single kernel: regular covers everything, grouped
/// covers the contiguous block of its group, depthwise covers one channel,
/// interlaced grouped is the grouped pattern with output rows permuted by
/// interlace_index.
ChannelDependencyGraph cdg_of_kernel(const KernelSpec& spec);

/// Transitive dependency of `second` applied after `first`: output n depends
/// on the union of first's rows over every mid channel in second's row n.
ChannelDependencyGraph compose(const ChannelDependencyGraph& first,
                               const ChannelDependencyGraph& second);

std::vector<std::size_t> crf_sizes(const ChannelDependencyGraph& cdg);

/// True iff every output channel depends on every input channel.
bool has_fcrf(const ChannelDependencyGraph& cdg);

struct DotLabels {
    std::string graph_name = "cdg";
    std::string input_prefix = "i";
    std::string output_prefix = "o";
};

/// DOT digraph with edges pointing from output channel nodes to the input
/// channel nodes they depend on.
std::string export_dot(const ChannelDependencyGraph& cdg, const DotLabels& labels = {});

}  // namespace clcnet
