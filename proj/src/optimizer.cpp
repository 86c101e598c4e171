#include "clcnet/optimizer.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace clcnet {

namespace {

std::vector<std::uint64_t> divisors(std::uint64_t v) {
    std::vector<std::uint64_t> divs;
    for (std::uint64_t d = 1; d * d <= v; ++d) {
        if (v % d != 0) continue;
        divs.push_back(d);
        if (d != v / d) divs.push_back(v / d);
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

}  // namespace

void CostQuery::validate() const {
    if (m == 0 || l == 0 || n == 0 || area == 0)
        throw DomainError("CostQuery: all fields must be >= 1");
}

std::uint64_t block_cost(const CostQuery& q, std::uint64_t g1, std::uint64_t g2) {
    q.validate();
    if (g1 == 0 || g1 > std::min(q.m, q.l) || q.m % g1 != 0 || q.l % g1 != 0)
        throw DomainError("block_cost: g1=" + std::to_string(g1) +
                          " violates the divisor constraints for m=" + std::to_string(q.m) +
                          " l=" + std::to_string(q.l));
    if (g2 == 0 || g2 > std::min(q.l, q.n) || q.l % g2 != 0 || q.n % g2 != 0)
        throw DomainError("block_cost: g2=" + std::to_string(g2) +
                          " violates the divisor constraints for l=" + std::to_string(q.l) +
                          " n=" + std::to_string(q.n));
    if (g1 * g2 > q.l)
        throw DomainError("block_cost: g1*g2=" + std::to_string(g1 * g2) + " exceeds l=" +
                          std::to_string(q.l) + ", full channel receptive field lost");
    return q.area * q.l * q.m / g1 + q.n * q.l / g2;
}

CostResult minimize_cost(const CostQuery& q) {
    q.validate();
    // Only divisors of gcd(m,l) / gcd(l,n) can satisfy the mod constraints,
    // so enumerating them is identical to scanning the full ranges.
    const auto g1_candidates = divisors(std::gcd(q.m, q.l));
    const auto g2_candidates = divisors(std::gcd(q.l, q.n));
    bool found = false;
    CostResult best;
    for (std::uint64_t g1 : g1_candidates) {
        for (std::uint64_t g2 : g2_candidates) {
            if (g1 * g2 > q.l) continue;
            const std::uint64_t c = q.area * q.l * q.m / g1 + q.n * q.l / g2;
            // ascending (g1, g2) scan + strict improvement keeps the
            // lexicographically smallest pair among cost ties
            if (!found || c < best.cost) {
                best = CostResult{g1, g2, c};
                found = true;
            }
        }
    }
    if (!found)
        throw DomainError("minimize_cost: no feasible (g1, g2) pair");
    return best;
}

CostResult fixed_g2_policy(const CostQuery& q, std::uint64_t g2_fixed) {
    q.validate();
    if (g2_fixed == 0 || g2_fixed > std::min(q.l, q.n) || q.l % g2_fixed != 0 ||
        q.n % g2_fixed != 0)
        throw DomainError("fixed_g2_policy: g2=" + std::to_string(g2_fixed) +
                          " is infeasible for l=" + std::to_string(q.l) +
                          " n=" + std::to_string(q.n));
    bool found = false;
    CostResult best;
    for (std::uint64_t g1 : divisors(std::gcd(q.m, q.l))) {
        if (g1 * g2_fixed > q.l) continue;
        const std::uint64_t c = q.area * q.l * q.m / g1 + q.n * q.l / g2_fixed;
        if (!found || c < best.cost) {
            best = CostResult{g1, g2_fixed, c};
            found = true;
        }
    }
    if (!found)
        throw DomainError("fixed_g2_policy: no feasible g1 for g2=" +
                          std::to_string(g2_fixed));
    return best;
}

std::array<CostQuery, 10> standard_queries() {
    return {{{32, 32, 64, 9},
             {64, 64, 64, 9},
             {64, 64, 128, 9},
             {128, 128, 128, 9},
             {128, 128, 256, 9},
             {256, 256, 256, 9},
             {256, 256, 512, 9},
             {512, 512, 512, 9},
             {512, 512, 1024, 9},
             {1024, 1024, 1024, 9}}};
}

std::array<CostResult, 10> minimize_standard_queries() {
    std::array<CostResult, 10> results;
    const auto queries = standard_queries();
    for (std::size_t i = 0; i < queries.size(); ++i) results[i] = minimize_cost(queries[i]);
    return results;
}

}  // namespace clcnet
