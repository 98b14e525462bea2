#include <cmath>
#include <stdexcept>
#include <cstdio>
#include <random>

#include "doctest.h"
#include "glodet/contour.hpp"

using namespace glodet::contour;

namespace {

ContourInstance make_instance(int n, int m, int sigma, std::vector<double> table) {
    ContourInstance inst;
    inst.n = n;
    inst.m = m;
    inst.sigma = sigma;
    inst.table = std::move(table);
    inst.validate();
    return inst;
}

ContourInstance random_instance(int n, int m, int sigma, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> table(static_cast<std::size_t>(n) * m);
    for (auto& v : table) v = dist(rng);
    return make_instance(n, m, sigma, std::move(table));
}

// Definition-level constraint checker, written independently of is_feasible:
// checks each cyclic pair by modular indexing rather than chain + wraparound.
bool feasible_by_definition(const ContourInstance& inst, const std::vector<int>& p, IndexRange r) {
    if (p[inst.m - 1] < r.lo || p[inst.m - 1] > r.hi) return false;
    for (int i = 0; i < inst.m; ++i) {
        const int next = (i + 1) % inst.m;
        if (std::abs(p[i] - p[next]) > inst.sigma) return false;
    }
    return true;
}

bool relaxed_by_definition(const ContourInstance& inst, const std::vector<int>& p, IndexRange r) {
    if (p[inst.m - 1] < r.lo || p[inst.m - 1] > r.hi) return false;
    bool p1_ok = false;
    for (int h = r.lo; h <= r.hi; ++h)
        for (int d = -inst.sigma; d <= inst.sigma; ++d)
            if (h + d >= 1 && h + d <= inst.n && p[0] == h + d) p1_ok = true;
    if (!p1_ok) return false;
    for (int i = 0; i + 1 < inst.m; ++i)
        if (std::abs(p[i] - p[i + 1]) > inst.sigma) return false;
    return true;
}

template <typename Fn>
void for_all_vectors(int n, int m, Fn&& fn) {
    std::vector<int> p(m, 1);
    for (;;) {
        fn(p);
        int i = m - 1;
        while (i >= 0 && p[i] == n) p[i--] = 1;
        if (i < 0) break;
        ++p[i];
    }
}

}  // namespace

TEST_CASE("objective basics") {
    auto zeros = make_instance(3, 4, 1, std::vector<double>(12, 0.0));
    CHECK(objective(zeros, std::vector<int>{1, 2, 3, 2}) == 0.0);

    // L[i][p] = p: any vector sums its entries.
    std::vector<double> linear;
    for (int i = 0; i < 3; ++i)
        for (int p = 1; p <= 3; ++p) linear.push_back(p);
    auto inst = make_instance(3, 3, 2, std::move(linear));
    CHECK(objective(inst, std::vector<int>{3, 3, 3}) == 9.0);

    CHECK_THROWS_AS(objective(inst, std::vector<int>{1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(objective(inst, std::vector<int>{1, 2, 4}), std::invalid_argument);
}

TEST_CASE("objective matches oracle re-summation on random instance") {
    std::mt19937 rng(7);
    auto inst = random_instance(5, 4, 1, rng);
    for_all_vectors(5, 4, [&](const std::vector<int>& p) {
        double sum = 0;
        for (int i = 0; i < 4; ++i) sum += inst.table[i * 5 + p[i] - 1];
        CHECK(objective(inst, p) == sum);
    });
}

TEST_CASE("feasibility definitions") {
    auto inst = make_instance(4, 4, 1, std::vector<double>(16, 0.0));
    CHECK(is_feasible(inst, std::vector<int>{2, 2, 2, 2}, inst.full_range()));
    CHECK_FALSE(is_feasible(inst, std::vector<int>{1, 2, 3, 1}, inst.full_range()));

    // Exhaustive cross-check against the independent definition checkers.
    auto small = make_instance(4, 3, 1, std::vector<double>(12, 0.0));
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> lo_dist(1, 4);
    for (int trial = 0; trial < 20; ++trial) {
        int a = lo_dist(rng), b = lo_dist(rng);
        IndexRange r{std::min(a, b), std::max(a, b)};
        for_all_vectors(4, 3, [&](const std::vector<int>& p) {
            CHECK(is_feasible(small, p, r) == feasible_by_definition(small, p, r));
            CHECK(is_feasible_relaxed(small, p, r) == relaxed_by_definition(small, p, r));
            // S(I) is a subset of S_L(I).
            if (is_feasible(small, p, r)) CHECK(is_feasible_relaxed(small, p, r));
        });
    }
}

TEST_CASE("strict region is the union over a disjoint split") {
    auto inst = make_instance(5, 4, 1, std::vector<double>(20, 0.0));
    for (int cut = 1; cut < 5; ++cut) {
        IndexRange left{1, cut}, right{cut + 1, 5};
        for_all_vectors(5, 4, [&](const std::vector<int>& p) {
            const bool whole = is_feasible(inst, p, inst.full_range());
            const bool split = is_feasible(inst, p, left) || is_feasible(inst, p, right);
            CHECK(whole == split);
        });
    }
}

TEST_CASE("brute force: degenerate cases") {
    // n = 1: single feasible vector.
    std::vector<double> t{1.5, -0.5, 2.0};
    auto inst = make_instance(1, 3, 1, t);
    auto sol = brute_force_solve(inst);
    CHECK(sol.p == std::vector<int>{1, 1, 1});
    CHECK(sol.objective == doctest::Approx(3.0).epsilon(1e-12));

    // sigma >= n-1: constraints vacuous, per-ray argmax with lowest-index ties.
    std::mt19937 rng(3);
    auto big_sigma = random_instance(4, 3, 3, rng);
    auto sol2 = brute_force_solve(big_sigma);
    for (int i = 0; i < 3; ++i) {
        int best = 1;
        for (int p = 2; p <= 4; ++p)
            if (big_sigma.likeliness(i, p) > big_sigma.likeliness(i, best)) best = p;
        CHECK(sol2.p[i] == best);
    }
}

TEST_CASE("brute force returns a feasible maximizer") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        auto inst = random_instance(4, 4, 1, rng);
        auto sol = brute_force_solve(inst);
        CHECK(is_feasible(inst, sol.p, inst.full_range()));
        for_all_vectors(4, 4, [&](const std::vector<int>& p) {
            if (is_feasible(inst, p, inst.full_range()))
                CHECK(objective(inst, p) <= sol.objective + 1e-12);
        });
    }
}

TEST_CASE("brute force enumeration cap") {
    auto inst = make_instance(10, 10, 1, std::vector<double>(100, 0.0));
    CHECK_THROWS_AS(brute_force_solve(inst, 1000), std::invalid_argument);
}

TEST_CASE("objective shifts by a constant added to one ray") {
    std::mt19937 rng(5);
    auto inst = random_instance(5, 4, 1, rng);
    auto shifted = inst;
    const double c = 2.75;
    for (int p = 1; p <= 5; ++p) shifted.likeliness(2, p) += c;
    for_all_vectors(5, 4, [&](const std::vector<int>& p) {
        CHECK(objective(shifted, p) == doctest::Approx(objective(inst, p) + c).epsilon(1e-12));
    });
}

TEST_CASE("instance JSON round trip") {
    std::mt19937 rng(9);
    auto inst = random_instance(6, 5, 2, rng);
    const std::string path = "contour_roundtrip.json";
    save_instance(inst, path);
    auto back = load_instance(path);
    CHECK(back.n == inst.n);
    CHECK(back.m == inst.m);
    CHECK(back.sigma == inst.sigma);
    for (std::size_t i = 0; i < inst.table.size(); ++i)
        CHECK(back.table[i] == doctest::Approx(inst.table[i]).epsilon(1e-15));
    std::remove(path.c_str());

    CHECK_THROWS(parse_instance("{not json"));
    CHECK_THROWS(parse_instance(R"({"n":2,"m":2,"sigma":1,"L":[[1,2]]})"));
}
