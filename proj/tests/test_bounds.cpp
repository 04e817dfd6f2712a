#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "chebpa/bounds.hpp"
#include "chebpa/core.hpp"

using namespace chebpa;

namespace {

// Independent oracle: count permutations with |p_i - i| <= d by full scan.
BigCount ball_size_brute(int n, int d) {
    std::vector<int> cur(static_cast<std::size_t>(n));
    std::iota(cur.begin(), cur.end(), 1);
    BigCount count = 0;
    do {
        bool in_ball = true;
        for (int i = 1; i <= n && in_ball; ++i)
            in_ball = std::abs(cur[static_cast<std::size_t>(i) - 1] - i) <= d;
        if (in_ball) ++count;
    } while (std::next_permutation(cur.begin(), cur.end()));
    return count;
}

}  // namespace

TEST_CASE("ball size matches brute force for n <= 8") {
    for (int n = 1; n <= 8; ++n)
        for (int d = 0; d <= n; ++d)
            CHECK(permanent_ball_size(n, d) == ball_size_brute(n, d));
}

TEST_CASE("ball size known values and trivia") {
    CHECK(permanent_ball_size(7, 0) == 1);
    CHECK(permanent_ball_size(7, 6) == factorial(7));
    CHECK(permanent_ball_size(7, 9) == factorial(7));
    CHECK(permanent_ball_size(3, 1) == 3);
    CHECK(permanent_ball_size(11, 2) == 5081);
    CHECK(permanent_ball_size(12, 2) == 11854);
    CHECK(permanent_ball_size(12, 3) == 183988);
    CHECK(permanent_ball_size(13, 3) == 563172);
    CHECK_THROWS_AS(permanent_ball_size(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(permanent_ball_size(64, 20), resource_error);
}

TEST_CASE("ball size Fibonacci recurrence at d = 1") {
    BallTable balls;
    BigCount prev2 = balls.get(1, 1), prev1 = balls.get(2, 1);
    CHECK(prev2 == 1);
    CHECK(prev1 == 2);
    for (int n = 3; n <= 60; ++n) {
        BigCount cur = balls.get(n, 1);
        CHECK(cur == prev1 + prev2);
        prev2 = prev1;
        prev1 = cur;
    }
}

TEST_CASE("ball size monotone in d") {
    BallTable balls;
    for (int n : {6, 10, 13}) {
        BigCount prev = 0;
        for (int d = 0; d <= n; ++d) {
            BigCount cur = balls.get(n, d);
            CHECK(cur >= prev);
            prev = cur;
        }
    }
}

TEST_CASE("ball table caching and persistence") {
    BallTable balls;
    CHECK(balls.get(11, 2) == 5081);
    std::ostringstream out;
    balls.dump(out);

    BallTable fresh;
    std::istringstream in(out.str());
    auto warnings = fresh.load(in);
    CHECK(warnings.empty());
    CHECK(fresh.snapshot() == balls.snapshot());

    BallTable strict;
    std::istringstream corrupt("11 2 5081\ngarbage line\n5 -1 7\n12 3 notanumber\n");
    auto w = strict.load(corrupt);
    CHECK(w.size() == 3);
    CHECK(strict.snapshot().size() == 1);
}

TEST_CASE("gilbert lower bound") {
    BallTable balls;
    CHECK(gilbert_lower(3, 2, balls) == 2);
    CHECK(gilbert_lower(4, 3, balls) == 2);  // ceil(24 / 14)
    CHECK(gilbert_lower(11, 6, balls) == ceil_div(factorial(11), ball_size_brute(11, 5)));
    CHECK_THROWS_AS(gilbert_lower(3, 1, balls), std::invalid_argument);
    CHECK_THROWS_AS(gilbert_lower(3, 3, balls), std::invalid_argument);
}

TEST_CASE("hamming upper bound") {
    BallTable balls;
    CHECK(hamming_upper(11, 6, 0, balls) == factorial(11) / 5081);
    CHECK(hamming_upper(11, 6, 1, balls) == factorial(12) / 183988);
    CHECK(hamming_upper(9, 1, 0, balls) == factorial(9));
    CHECK(hamming_upper_best(11, 6, balls) == factorial(12) / 183988);
    CHECK(hamming_upper_best(11, 7, balls) == hamming_upper(11, 7, 0, balls));
    CHECK_THROWS_AS(hamming_upper(11, 7, 1, balls), precondition_error);  // odd d
    CHECK_THROWS_AS(hamming_upper(13, 6, 1, balls), precondition_error);  // n > 2d
    CHECK_THROWS_AS(hamming_upper(6, 6, 0, balls), precondition_error);
}

TEST_CASE("row-sum bound dominates every computed ball size") {
    BallTable balls;
    for (int n = 1; n <= 12; ++n)
        for (int d = 0; d <= n; ++d)
            CHECK(count_to_double(balls.get(n, d)) <= vupper_bound(n, d) * (1 + 1e-9));
    CHECK(vupper_bound(1, 1) == doctest::Approx(std::pow(6.0, 1.0 / 3.0)));
}

TEST_CASE("corollary lower bound") {
    CHECK(corollary_lower(6, 1) == doctest::Approx(720.0));
    CHECK(corollary_lower(7, 2) ==
          doctest::Approx(5040.0 / std::pow(6.0, 7.0 / 3.0)).epsilon(1e-9));
    // never exceeds the exact maximum on brute-forced small cases
    CHECK(corollary_lower(3, 2) <= 3.0 + 1e-9);
    CHECK(corollary_lower(4, 3) <= 3.0 + 1e-9);
}

TEST_CASE("growth-rate estimates") {
    BallTable balls;
    auto m1 = mu_estimate(1, 40, balls);
    CHECK(m1.estimate == doctest::Approx(1.61803).epsilon(1e-4));
    CHECK(m1.estimate <= m1.upper);
    auto m2 = mu_estimate(2, 40, balls);
    CHECK(m2.estimate == doctest::Approx(2.33355).epsilon(1e-3));
    auto m3 = mu_estimate(3, 40, balls);
    CHECK(m3.estimate == doctest::Approx(3.06177).epsilon(1e-2));
    CHECK(m3.ratios.size() == static_cast<std::size_t>(40 - 3 - 1));
    CHECK_THROWS_AS(mu_estimate(0, 40, balls), std::invalid_argument);
}

TEST_CASE("bound grid aggregation") {
    BallTable balls;
    std::vector<RegisteredBound> seeds{
        {7, 4, BigCount(28), "greedy", false},
        {7, 2, BigCount(582), "greedy", false},
    };
    auto grid = best_known_lower(10, 7, seeds, balls);

    auto find = [&](int n, int d) -> const BoundRecord& {
        for (const auto& rec : grid)
            if (rec.n == n && rec.d == d) return rec;
        throw std::logic_error("cell missing");
    };

    CHECK(find(8, 5).lower >= 28);
    CHECK(find(8, 5).lower_provenance == "tr1");
    CHECK(find(10, 7).lower >= 28);
    CHECK(find(10, 7).lower_provenance == "tr1");
    CHECK(find(8, 2).lower == 2328);
    CHECK(find(8, 2).lower_provenance == "c2b1");

    CHECK(find(6, 1).lower == factorial(6));
    CHECK(find(6, 6).lower == 1);
    CHECK(find(7, 2).lower == 582);
    CHECK(find(7, 2).lower_provenance == "greedy");

    for (const auto& rec : grid) {
        CHECK(rec.lower >= 1);
        if (rec.upper != 0) CHECK(rec.lower <= rec.upper);
        CHECK_FALSE(rec.lower_provenance.empty());
    }
}

TEST_CASE("registered exact values pin both sides") {
    BallTable balls;
    std::vector<RegisteredBound> seeds{{5, 3, BigCount(9), "exact", true}};
    auto grid = best_known_lower(6, 4, seeds, balls);
    for (const auto& rec : grid) {
        if (rec.n == 5 && rec.d == 3) {
            CHECK(rec.lower == 9);
            CHECK(rec.upper == 9);
            CHECK(rec.upper_provenance == "exact");
        }
    }
}
