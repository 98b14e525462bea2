#include "glodet/contour.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace glodet::contour {

void ContourInstance::validate() const {
    if (n < 1 || m < 1 || sigma < 1)
        throw std::invalid_argument("instance requires n, m, sigma >= 1");
    if (table.size() != static_cast<std::size_t>(n) * m)
        throw std::invalid_argument("likeliness table must be m x n");
    for (double v : table)
        if (!std::isfinite(v)) throw std::invalid_argument("likeliness table entry not finite");
}

namespace {

void check_vector(const ContourInstance& inst, std::span<const int> p) {
    if (static_cast<int>(p.size()) != inst.m)
        throw std::invalid_argument("vertex vector length must equal m");
    for (int v : p)
        if (v < 1 || v > inst.n) throw std::invalid_argument("vertex position out of range");
}

bool chain_ok(const ContourInstance& inst, std::span<const int> p) {
    for (int i = 0; i + 1 < inst.m; ++i)
        if (std::abs(p[i] - p[i + 1]) > inst.sigma) return false;
    return true;
}

}  // namespace

double objective(const ContourInstance& inst, std::span<const int> p) {
    check_vector(inst, p);
    double sum = 0.0;
    for (int i = 0; i < inst.m; ++i) sum += inst.likeliness(i, p[i]);
    return sum;
}

bool is_feasible(const ContourInstance& inst, std::span<const int> p, IndexRange range) {
    check_vector(inst, p);
    if (!range.contains(p[inst.m - 1])) return false;
    if (std::abs(p[inst.m - 1] - p[0]) > inst.sigma) return false;
    return chain_ok(inst, p);
}

bool is_feasible_relaxed(const ContourInstance& inst, std::span<const int> p, IndexRange range) {
    check_vector(inst, p);
    if (!range.contains(p[inst.m - 1])) return false;
    if (p[0] < range.lo - inst.sigma || p[0] > range.hi + inst.sigma) return false;
    return chain_ok(inst, p);
}

namespace {

PolygonSolution enumerate_best(const ContourInstance& inst, IndexRange range, bool relaxed,
                               std::uint64_t cap) {
    inst.validate();
    double combos = 1.0;
    for (int i = 0; i < inst.m; ++i) combos *= inst.n;
    if (combos > static_cast<double>(cap))
        throw std::invalid_argument("instance too large for exhaustive enumeration");

    std::vector<int> p(inst.m, 1);
    PolygonSolution best;
    best.objective = -std::numeric_limits<double>::infinity();
    // Odometer enumeration visits vectors in lexicographic order, so the
    // first maximizer found is the lexicographically smallest.
    for (;;) {
        const bool ok = relaxed ? is_feasible_relaxed(inst, p, range)
                                : is_feasible(inst, p, range);
        if (ok) {
            const double j = objective(inst, p);
            if (j > best.objective) {
                best.objective = j;
                best.p = p;
            }
        }
        int i = inst.m - 1;
        while (i >= 0 && p[i] == inst.n) p[i--] = 1;
        if (i < 0) break;
        ++p[i];
    }
    return best;
}

}  // namespace

PolygonSolution brute_force_solve(const ContourInstance& inst, std::uint64_t enumeration_cap) {
    return enumerate_best(inst, inst.full_range(), false, enumeration_cap);
}

PolygonSolution brute_force_over(const ContourInstance& inst, IndexRange range, bool relaxed,
                                 std::uint64_t enumeration_cap) {
    return enumerate_best(inst, range, relaxed, enumeration_cap);
}

ContourInstance parse_instance(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("instance parse error: ") + e.what());
    }
    ContourInstance inst;
    inst.n = j.at("n").get<int>();
    inst.m = j.at("m").get<int>();
    inst.sigma = j.at("sigma").get<int>();
    const auto& rows = j.at("L");
    if (static_cast<int>(rows.size()) != inst.m)
        throw std::runtime_error("instance L must have m rows");
    inst.table.reserve(static_cast<std::size_t>(inst.n) * inst.m);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != inst.n)
            throw std::runtime_error("instance L row must have n entries");
        for (const auto& v : row) inst.table.push_back(v.get<double>());
    }
    inst.validate();
    return inst;
}

ContourInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

void save_instance(const ContourInstance& inst, const std::string& path) {
    inst.validate();
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < inst.m; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int p = 1; p <= inst.n; ++p) row.push_back(inst.likeliness(i, p));
        rows.push_back(std::move(row));
    }
    nlohmann::json j{{"n", inst.n}, {"m", inst.m}, {"sigma", inst.sigma}, {"L", std::move(rows)}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump() << "\n";
}

}  // namespace glodet::contour
