#ifndef GLODET_BENCH_HPP
#define GLODET_BENCH_HPP

#include <string>
#include <vector>

#include "glodet/contour.hpp"
#include "glodet/solver.hpp"

namespace glodet::bench {

/// One timed solver run on one instance.
struct BenchRow {
    std::string instance;   ///< instance label (file stem)
    std::string solver;     ///< "edp", "half", "max", or "adap"
    double objective = 0.0;
    int n_dp = 0;           ///< dynamic programs solved
    int repeated_relaxed = 0;
    double median_us = 0.0;
    double p75_us = 0.0;
};

/// Aggregates per solver over the whole corpus.
struct BenchSummary {
    std::string solver;
    double median_n_dp = 0.0;
    double p75_n_dp = 0.0;
    double median_us = 0.0;
    double p75_us = 0.0;
    long total_repeated_relaxed = 0;
    double fraction_single_dp = 0.0;  ///< share of instances solved with one DP
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::vector<BenchSummary> summaries;
};

/// Runs every solver on every instance `repetitions` times and records the
/// median and 75th-percentile wall time. All solvers must agree on the
/// objective value per instance; a mismatch throws.
BenchReport run_bench(const std::vector<std::string>& instance_paths, int repetitions = 5);

/// CSV with one row per (instance, solver) followed by one summary row per
/// solver (instance column set to "SUMMARY").
void write_csv(const BenchReport& report, const std::string& path);

/// Percentile of a sample by linear interpolation; q in [0, 1].
double percentile(std::vector<double> values, double q);

}  // namespace glodet::bench

#endif
