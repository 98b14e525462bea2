#ifndef GLODET_CONTOUR_HPP
#define GLODET_CONTOUR_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace glodet::contour {

/// Contiguous inclusive interval of candidate positions, 1-based.
struct IndexRange {
    int lo = 1;
    int hi = 1;

    int size() const { return hi - lo + 1; }
    bool contains(int v) const { return v >= lo && v <= hi; }
    bool operator==(const IndexRange&) const = default;
};

/// Closed-polygon boundary optimization problem on m rays with n candidate
/// positions each: maximize sum_i L[i][p_i] subject to the cyclic smoothness
/// constraints |p_i - p_{i+1}| <= sigma (indices mod m).
struct ContourInstance {
    int n = 0;      ///< positions per ray
    int m = 0;      ///< rays
    int sigma = 1;  ///< smoothness bound
    std::vector<double> table;  ///< m x n row-major likeliness table

    /// Likeliness of 1-based position `pos` on 0-based ray `ray`.
    double likeliness(int ray, int pos) const {
        return table[static_cast<std::size_t>(ray) * n + (pos - 1)];
    }
    double& likeliness(int ray, int pos) {
        return table[static_cast<std::size_t>(ray) * n + (pos - 1)];
    }

    IndexRange full_range() const { return {1, n}; }

    /// Throws std::invalid_argument if dimensions or entries are malformed.
    void validate() const;
};

struct PolygonSolution {
    std::vector<int> p;  ///< 1-based vertex positions, length m
    double objective = 0.0;
};

/// Sum of per-ray likeliness at the given vertex vector.
double objective(const ContourInstance& inst, std::span<const int> p);

/// Strict feasibility: p_m in I and all m cyclic adjacent pairs within sigma.
bool is_feasible(const ContourInstance& inst, std::span<const int> p, IndexRange range);

/// Relaxed feasibility: the wraparound pair constraint is dropped; instead
/// p_1 must lie in (I + [-sigma, sigma]) intersected with {1..n}.
bool is_feasible_relaxed(const ContourInstance& inst, std::span<const int> p, IndexRange range);

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// Exhaustive maximizer of the objective over the strictly feasible region
/// with p_m unrestricted; ties broken by lexicographically smallest vector.
/// Throws std::invalid_argument when n^m exceeds the cap.
PolygonSolution brute_force_solve(const ContourInstance& inst,
                                  std::uint64_t enumeration_cap = kDefaultEnumerationCap);

/// Brute-force maximizer over S(I) (strict) or S_L(I) (relaxed). Returns a
/// solution with empty p when the region is empty.
PolygonSolution brute_force_over(const ContourInstance& inst, IndexRange range, bool relaxed,
                                 std::uint64_t enumeration_cap = kDefaultEnumerationCap);

/// JSON instance format: {"n": int, "m": int, "sigma": int, "L": [[real;n];m]}.
ContourInstance parse_instance(const std::string& json_text);
ContourInstance load_instance(const std::string& path);
void save_instance(const ContourInstance& inst, const std::string& path);

}  // namespace glodet::contour

#endif
