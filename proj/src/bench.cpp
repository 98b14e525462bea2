#include "glodet/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>

namespace glodet::bench {

namespace {

using Clock = std::chrono::steady_clock;

struct SolverDef {
    std::string name;
    std::function<std::pair<contour::PolygonSolution, solver::SolveStats>(
        const contour::ContourInstance&)>
        run;
};

const std::vector<SolverDef>& solvers() {
    static const std::vector<SolverDef> defs = {
        {"edp", [](const contour::ContourInstance& i) { return solver::edp_solve(i); }},
        {"half",
         [](const contour::ContourInstance& i) {
             return solver::dcdp_solve(i, solver::SplitScheme::Half);
         }},
        {"max",
         [](const contour::ContourInstance& i) {
             return solver::dcdp_solve(i, solver::SplitScheme::Max);
         }},
        {"adap",
         [](const contour::ContourInstance& i) {
             return solver::dcdp_solve(i, solver::SplitScheme::Adap);
         }},
    };
    return defs;
}

}  // namespace

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("percentile order must be in [0,1]");
    std::sort(values.begin(), values.end());
    const double pos = q * (values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - lo;
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

BenchReport run_bench(const std::vector<std::string>& instance_paths, int repetitions) {
    if (repetitions < 1) throw std::invalid_argument("repetitions must be positive");
    BenchReport report;
    for (const auto& path : instance_paths) {
        const auto inst = contour::load_instance(path);
        const std::string label = std::filesystem::path(path).stem().string();
        double reference = 0.0;
        bool have_reference = false;
        for (const auto& def : solvers()) {
            BenchRow row;
            row.instance = label;
            row.solver = def.name;
            std::vector<double> times;
            for (int rep = 0; rep < repetitions; ++rep) {
                const auto start = Clock::now();
                auto [sol, stats] = def.run(inst);
                const auto stop = Clock::now();
                times.push_back(
                    std::chrono::duration<double, std::micro>(stop - start).count());
                if (rep == 0) {
                    row.objective = sol.objective;
                    row.n_dp = stats.n_dp;
                    row.repeated_relaxed = stats.repeated_relaxed_count;
                }
            }
            row.median_us = percentile(times, 0.5);
            row.p75_us = percentile(times, 0.75);
            if (!have_reference) {
                reference = row.objective;
                have_reference = true;
            } else if (std::abs(row.objective - reference) > 1e-9 * (1.0 + std::abs(reference))) {
                throw std::runtime_error("solver objective mismatch on " + label);
            }
            report.rows.push_back(std::move(row));
        }
    }

    for (const auto& def : solvers()) {
        BenchSummary summary;
        summary.solver = def.name;
        std::vector<double> n_dps, times;
        int single = 0, total = 0;
        for (const auto& row : report.rows) {
            if (row.solver != def.name) continue;
            n_dps.push_back(row.n_dp);
            times.push_back(row.median_us);
            summary.total_repeated_relaxed += row.repeated_relaxed;
            ++total;
            if (row.n_dp == 1) ++single;
        }
        if (total == 0) continue;
        summary.median_n_dp = percentile(n_dps, 0.5);
        summary.p75_n_dp = percentile(n_dps, 0.75);
        summary.median_us = percentile(times, 0.5);
        summary.p75_us = percentile(times, 0.75);
        summary.fraction_single_dp = static_cast<double>(single) / total;
        report.summaries.push_back(std::move(summary));
    }
    return report;
}

void write_csv(const BenchReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "instance,solver,objective,n_dp,median_us,p75_us\n";
    for (const auto& row : report.rows)
        out << row.instance << ',' << row.solver << ',' << row.objective << ',' << row.n_dp
            << ',' << row.median_us << ',' << row.p75_us << "\n";
    out << "summary_solver,median_n_dp,p75_n_dp,median_us,p75_us,total_repeated_relaxed,"
           "fraction_single_dp\n";
    for (const auto& s : report.summaries)
        out << s.solver << ',' << s.median_n_dp << ',' << s.p75_n_dp << ',' << s.median_us
            << ',' << s.p75_us << ',' << s.total_repeated_relaxed << ','
            << s.fraction_single_dp << "\n";
}

}  // namespace glodet::bench
