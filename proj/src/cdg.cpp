#include "clcnet/cdg.hpp"

#include <sstream>

namespace clcnet {

ChannelDependencyGraph::ChannelDependencyGraph(std::size_t in_channels, std::size_t out_channels)
    : in_channels_(in_channels) {
    if (in_channels == 0 || out_channels == 0)
        throw ShapeError("ChannelDependencyGraph: channel counts must be >= 1");
    rows_.assign(out_channels, boost::dynamic_bitset<>(in_channels));
}

ChannelDependencyGraph ChannelDependencyGraph::identity(std::size_t channels) {
    ChannelDependencyGraph cdg(channels, channels);
    for (std::size_t n = 0; n < channels; ++n) cdg.add_dependency(n, n);
    return cdg;
}

void ChannelDependencyGraph::add_dependency(std::size_t out, std::size_t in) {
    if (out >= rows_.size() || in >= in_channels_)
        throw ShapeError("ChannelDependencyGraph: dependency index out of range");
    rows_[out].set(in);
}

std::vector<std::size_t> ChannelDependencyGraph::deps_of(std::size_t out) const {
    std::vector<std::size_t> deps;
    deps.reserve(rows_[out].count());
    for (std::size_t i = rows_[out].find_first(); i != boost::dynamic_bitset<>::npos;
         i = rows_[out].find_next(i))
        deps.push_back(i);
    return deps;
}

ChannelDependencyGraph cdg_of_kernel(const KernelSpec& spec) {
    spec.validate();
    ChannelDependencyGraph cdg(spec.in_channels, spec.out_channels);
    const std::size_t group_size = spec.in_per_group();
    for (std::size_t n = 0; n < spec.out_channels; ++n) {
        const std::size_t row = spec.kind == KernelKind::InterlacedGrouped
                                    ? interlace_index(n, spec.out_channels, spec.groups)
                                    : n;
        const std::size_t first = row / spec.out_per_group() * group_size;
        for (std::size_t i = 0; i < group_size; ++i) cdg.add_dependency(n, first + i);
    }
    return cdg;
}

ChannelDependencyGraph compose(const ChannelDependencyGraph& first,
                               const ChannelDependencyGraph& second) {
    if (first.out_channels() != second.in_channels())
        throw ShapeError("compose: first kernel emits " + std::to_string(first.out_channels()) +
                         " channels but second consumes " +
                         std::to_string(second.in_channels()));
    ChannelDependencyGraph out(first.in_channels(), second.out_channels());
    for (std::size_t n = 0; n < second.out_channels(); ++n) {
        boost::dynamic_bitset<> acc(first.in_channels());
        const auto& mids = second.row(n);
        for (std::size_t m = mids.find_first(); m != boost::dynamic_bitset<>::npos;
             m = mids.find_next(m))
            acc |= first.row(m);
        for (std::size_t i = acc.find_first(); i != boost::dynamic_bitset<>::npos;
             i = acc.find_next(i))
            out.add_dependency(n, i);
    }
    return out;
}

std::vector<std::size_t> crf_sizes(const ChannelDependencyGraph& cdg) {
    std::vector<std::size_t> sizes(cdg.out_channels());
    for (std::size_t n = 0; n < cdg.out_channels(); ++n) sizes[n] = cdg.crf_size(n);
    return sizes;
}

bool has_fcrf(const ChannelDependencyGraph& cdg) {
    for (std::size_t n = 0; n < cdg.out_channels(); ++n)
        if (!cdg.row(n).all()) return false;
    return true;
}

std::string export_dot(const ChannelDependencyGraph& cdg, const DotLabels& labels) {
    std::ostringstream os;
    os << "digraph " << labels.graph_name << " {\n";
    os << "  rankdir=BT;\n";
    os << "  { rank=same;";
    for (std::size_t i = 0; i < cdg.in_channels(); ++i)
        os << " " << labels.input_prefix << i << ";";
    os << " }\n";
    os << "  { rank=same;";
    for (std::size_t n = 0; n < cdg.out_channels(); ++n)
        os << " " << labels.output_prefix << n << ";";
    os << " }\n";
    for (std::size_t n = 0; n < cdg.out_channels(); ++n)
        for (std::size_t i : cdg.deps_of(n))
            os << "  " << labels.output_prefix << n << " -> " << labels.input_prefix << i
               << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace clcnet
