#ifndef GLODET_SOLVER_HPP
#define GLODET_SOLVER_HPP

#include <optional>
#include <string>
#include <utility>

#include "glodet/contour.hpp"

namespace glodet::solver {

using contour::ContourInstance;
using contour::IndexRange;
using contour::PolygonSolution;

enum class SplitScheme { Half, Max, Adap };

SplitScheme parse_scheme(const std::string& name);
std::string scheme_name(SplitScheme scheme);

struct SolveStats {
    int n_dp = 0;              ///< invocations of the O(nm*sigma) DP routine
    double wall_time_us = 0.0;
    int branch_depth_max = 0;
    /// Branches whose relaxed optimum equals the parent branch's relaxed optimum.
    int repeated_relaxed_count = 0;
};

/// Maximizer of the objective over the relaxed region S_L(I), computed by a
/// forward chain DP over Q/P tables with all argmax ties broken toward the
/// lowest index. O(nm*sigma) time.
PolygonSolution relaxed_dp(const ContourInstance& inst, IndexRange range);

/// Exhaustive DP: solves the n sub-problems with p_m fixed to each position
/// and returns the best (ties: lexicographically smallest vector). n_dp = n.
std::pair<PolygonSolution, SolveStats> edp_solve(const ContourInstance& inst);

/// Divide-and-conquer without pruning: solve relaxed, return if strictly
/// feasible, otherwise split and recurse on both halves.
std::pair<PolygonSolution, SolveStats> dcdp_basic(const ContourInstance& inst, IndexRange range,
                                                  SplitScheme scheme);

/// Return contract of the pruned recursion: either the branch produced a
/// certified maximizer (p holds it and objective_value == lower_bound), or
/// the branch was pruned and objective_value stays -inf below lower_bound.
struct PrunedResult {
    std::optional<std::vector<int>> p;
    double objective_value = 0.0;  ///< J_0
    double lower_bound = 0.0;      ///< the returned bound, >= the bound passed in
};

/// One branch of the pruned divide-and-conquer (Rules A/B/C), callable with
/// an arbitrary starting range and lower bound.
PrunedResult dcdp_prune(const ContourInstance& inst, IndexRange range, double lower_bound,
                        SplitScheme scheme, SolveStats* stats = nullptr);

/// Exact solve of the full problem via the pruned recursion started at
/// ({1..n}, -inf).
std::pair<PolygonSolution, SolveStats> dcdp_solve(const ContourInstance& inst, SplitScheme scheme);

/// Splits `range` into two disjoint nonempty contiguous halves covering it,
/// returned in evaluation order (first element is solved first). Adap
/// requires the parent branch's relaxed optimum. Throws on singleton input.
std::pair<IndexRange, IndexRange> split_range(IndexRange range, const ContourInstance& inst,
                                              SplitScheme scheme,
                                              const PolygonSolution* parent_relaxed);

}  // namespace glodet::solver

#endif
