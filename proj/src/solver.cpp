#include "glodet/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace glodet::solver {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double elapsed_us(Clock::time_point start) {
    return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

}  // namespace

SplitScheme parse_scheme(const std::string& name) {
    if (name == "half") return SplitScheme::Half;
    if (name == "max") return SplitScheme::Max;
    if (name == "adap") return SplitScheme::Adap;
    throw std::invalid_argument("unknown split scheme: " + name);
}

std::string scheme_name(SplitScheme scheme) {
    switch (scheme) {
        case SplitScheme::Half: return "half";
        case SplitScheme::Max: return "max";
        case SplitScheme::Adap: return "adap";
    }
    return "?";
}

PolygonSolution relaxed_dp(const ContourInstance& inst, IndexRange range) {
    const int n = inst.n;
    const int m = inst.m;
    const int sigma = inst.sigma;

    // Q[(t-1)*n + (i-1)]: best chain value ending at position i on ray t.
    std::vector<double> q(static_cast<std::size_t>(n) * m, kNegInf);
    std::vector<int> back(static_cast<std::size_t>(n) * m, 0);

    const int first_lo = std::max(1, range.lo - sigma);
    const int first_hi = std::min(n, range.hi + sigma);
    for (int j = first_lo; j <= first_hi; ++j) q[j - 1] = inst.likeliness(0, j);

    for (int t = 2; t <= m; ++t) {
        const int lo = (t < m) ? 1 : range.lo;
        const int hi = (t < m) ? n : range.hi;
        const double* prev = q.data() + static_cast<std::size_t>(t - 2) * n;
        double* cur = q.data() + static_cast<std::size_t>(t - 1) * n;
        int* cur_back = back.data() + static_cast<std::size_t>(t - 1) * n;
        for (int i = lo; i <= hi; ++i) {
            const int jlo = std::max(1, i - sigma);
            const int jhi = std::min(n, i + sigma);
            int best_j = jlo;
            double best_q = prev[jlo - 1];
            for (int j = jlo + 1; j <= jhi; ++j) {
                if (prev[j - 1] > best_q) {
                    best_q = prev[j - 1];
                    best_j = j;
                }
            }
            cur[i - 1] = inst.likeliness(t - 1, i) + best_q;
            cur_back[i - 1] = best_j;
        }
    }

    const double* last = q.data() + static_cast<std::size_t>(m - 1) * n;
    int best_end = range.lo;
    for (int i = range.lo + 1; i <= range.hi; ++i)
        if (last[i - 1] > last[best_end - 1]) best_end = i;

    PolygonSolution sol;
    sol.p.assign(m, 0);
    sol.p[m - 1] = best_end;
    for (int t = m - 1; t >= 1; --t)
        sol.p[t - 1] = back[static_cast<std::size_t>(t) * n + (sol.p[t] - 1)];
    sol.objective = last[best_end - 1];
    return sol;
}

std::pair<PolygonSolution, SolveStats> edp_solve(const ContourInstance& inst) {
    inst.validate();
    SolveStats stats;
    const auto start = Clock::now();
    PolygonSolution best;
    best.objective = kNegInf;
    for (int k = 1; k <= inst.n; ++k) {
        PolygonSolution sub = relaxed_dp(inst, {k, k});
        ++stats.n_dp;
        if (sub.objective > best.objective ||
            (sub.objective == best.objective && sub.p < best.p)) {
            best = std::move(sub);
        }
    }
    stats.branch_depth_max = 1;
    stats.wall_time_us = elapsed_us(start);
    return {std::move(best), stats};
}

std::pair<IndexRange, IndexRange> split_range(IndexRange range, const ContourInstance& inst,
                                              SplitScheme scheme,
                                              const PolygonSolution* parent_relaxed) {
    if (range.size() < 2) throw std::invalid_argument("cannot split a singleton range");
    const int last_ray = inst.m - 1;
    auto max_last_likeliness = [&](IndexRange r) {
        double best = kNegInf;
        for (int h = r.lo; h <= r.hi; ++h) best = std::max(best, inst.likeliness(last_ray, h));
        return best;
    };

    IndexRange first{}, second{};
    bool swap = false;
    switch (scheme) {
        case SplitScheme::Half: {
            const int len1 = range.size() / 2;
            first = {range.lo, range.lo + len1 - 1};
            second = {first.hi + 1, range.hi};
            swap = max_last_likeliness(first) < max_last_likeliness(second);
            break;
        }
        case SplitScheme::Max: {
            int h_star = range.lo;
            for (int h = range.lo + 1; h <= range.hi; ++h)
                if (inst.likeliness(last_ray, h) > inst.likeliness(last_ray, h_star)) h_star = h;
            if (h_star == range.hi) --h_star;  // keep the second half nonempty
            first = {range.lo, h_star};
            second = {h_star + 1, range.hi};
            swap = first.size() > second.size();
            break;
        }
        case SplitScheme::Adap: {
            if (!parent_relaxed) throw std::invalid_argument("Adap split needs the parent relaxed optimum");
            const int p_first = parent_relaxed->p.front();
            const int p_last = parent_relaxed->p.back();
            int mid = (p_first + p_last) / 2;  // floor; both entries positive
            mid = std::clamp(mid, range.lo, range.hi - 1);  // keep both halves nonempty
            first = {range.lo, mid};
            second = {mid + 1, range.hi};
            swap = first.size() > second.size();
            break;
        }
    }
    if (swap) std::swap(first, second);
    return {first, second};
}

namespace {

struct BasicCtx {
    const ContourInstance& inst;
    SplitScheme scheme;
    SolveStats& stats;
};

PolygonSolution dcdp_basic_rec(BasicCtx& ctx, IndexRange range, int depth) {
    ctx.stats.branch_depth_max = std::max(ctx.stats.branch_depth_max, depth);
    PolygonSolution relaxed = relaxed_dp(ctx.inst, range);
    ++ctx.stats.n_dp;
    if (contour::is_feasible(ctx.inst, relaxed.p, range)) return relaxed;
    const auto [first, second] = split_range(range, ctx.inst, ctx.scheme, &relaxed);
    PolygonSolution a = dcdp_basic_rec(ctx, first, depth + 1);
    PolygonSolution b = dcdp_basic_rec(ctx, second, depth + 1);
    return (b.objective > a.objective) ? std::move(b) : std::move(a);
}

struct PruneCtx {
    const ContourInstance& inst;
    SplitScheme scheme;
    SolveStats& stats;
};

PrunedResult dcdp_prune_rec(PruneCtx& ctx, IndexRange range, double bound, int depth,
                            const std::vector<int>* parent_relaxed) {
    ctx.stats.branch_depth_max = std::max(ctx.stats.branch_depth_max, depth);
    PolygonSolution relaxed = relaxed_dp(ctx.inst, range);
    ++ctx.stats.n_dp;
    if (parent_relaxed && relaxed.p == *parent_relaxed) ++ctx.stats.repeated_relaxed_count;

    PrunedResult result;
    if (bound > relaxed.objective) {  // Rule A
        result.objective_value = kNegInf;
        result.lower_bound = bound;
        return result;
    }
    if (contour::is_feasible(ctx.inst, relaxed.p, range)) {  // Rule B
        result.objective_value = relaxed.objective;
        result.lower_bound = std::max(bound, relaxed.objective);
        result.p = std::move(relaxed.p);
        return result;
    }
    // Rule C
    const auto [first, second] = split_range(range, ctx.inst, ctx.scheme, &relaxed);
    PrunedResult r1 = dcdp_prune_rec(ctx, first, bound, depth + 1, &relaxed.p);
    PrunedResult r2 = dcdp_prune_rec(ctx, second, r1.lower_bound, depth + 1, &relaxed.p);
    PrunedResult& winner = (r2.objective_value > r1.objective_value) ? r2 : r1;
    result.p = std::move(winner.p);
    result.objective_value = winner.objective_value;
    result.lower_bound = std::max(r2.lower_bound, winner.objective_value);
    return result;
}

}  // namespace

std::pair<PolygonSolution, SolveStats> dcdp_basic(const ContourInstance& inst, IndexRange range,
                                                  SplitScheme scheme) {
    inst.validate();
    SolveStats stats;
    const auto start = Clock::now();
    BasicCtx ctx{inst, scheme, stats};
    PolygonSolution sol = dcdp_basic_rec(ctx, range, 1);
    stats.wall_time_us = elapsed_us(start);
    return {std::move(sol), stats};
}

PrunedResult dcdp_prune(const ContourInstance& inst, IndexRange range, double lower_bound,
                        SplitScheme scheme, SolveStats* stats) {
    inst.validate();
    SolveStats local;
    SolveStats& st = stats ? *stats : local;
    st = SolveStats{};
    const auto start = Clock::now();
    PruneCtx ctx{inst, scheme, st};
    PrunedResult result = dcdp_prune_rec(ctx, range, lower_bound, 1, nullptr);
    st.wall_time_us = elapsed_us(start);
    return result;
}

std::pair<PolygonSolution, SolveStats> dcdp_solve(const ContourInstance& inst, SplitScheme scheme) {
    SolveStats stats;
    PrunedResult result = dcdp_prune(inst, inst.full_range(), kNegInf, scheme, &stats);
    PolygonSolution sol;
    sol.p = std::move(*result.p);  // bound -inf guarantees Case G
    sol.objective = result.objective_value;
    return {std::move(sol), stats};
}

}  // namespace glodet::solver
