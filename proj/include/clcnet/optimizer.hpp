#pragma once

#include <array>
#include <cstdint>

#include "clcnet/error.hpp"

namespace clcnet {

/// Channel dimensions of one block: m input channels into the 3x3 interlaced
/// grouped kernel, l intermediate channels, n block output channels, and the
/// spatial area of the 3x3 kernel (9 unless overridden).
struct CostQuery {
    std::uint64_t m = 1;
    std::uint64_t l = 1;
    std::uint64_t n = 1;
    std::uint64_t area = 9;

    void validate() const;
};

struct CostResult {
    std::uint64_t g1 = 1;
    std::uint64_t g2 = 1;
    std::uint64_t cost = 0;  // multiplies per output location == parameter count

    friend bool operator==(const CostResult&, const CostResult&) = default;
};

/// Per-location multiply count of the block: area*l*m/g1 + n*l/g2, exact in
/// integers. Throws DomainError unless all of the following hold:
///   1 <= g1 <= min(m,l), 1 <= g2 <= min(l,n),
///   g1 | m, g1 | l, g2 | l, g2 | n, g1*g2 <= l.
/// The last constraint is the full-channel-receptive-field feasibility rule.
std::uint64_t block_cost(const CostQuery& q, std::uint64_t g1, std::uint64_t g2);

/// Exhaustive enumeration over all feasible (g1, g2) divisor pairs; returns
/// the cheapest, breaking ties toward the lexicographically smallest pair.
CostResult minimize_cost(const CostQuery& q);

/// Minimize over g1 alone with g2 pinned. Throws DomainError if g2_fixed is
/// infeasible for the query.
CostResult fixed_g2_policy(const CostQuery& q, std::uint64_t g2_fixed);

/// The ten standard (m, l, n) channel configurations, area 9.
std::array<CostQuery, 10> standard_queries();

/// minimize_cost applied to each standard query.
std::array<CostResult, 10> minimize_standard_queries();

}  // namespace clcnet
