#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "chebpa/bigint.hpp"
#include "chebpa/core.hpp"

namespace chebpa {

inline constexpr int kDefaultBandGuard = 14;

// ---------------------------------------------------------------------------
// Ball sizes. V(n,d) = number of permutations within Chebyshev distance d of a
// fixed center = permanent of the 0-1 matrix with a_{ij} = 1 iff |i-j| <= d.
//
// The band makes a profile DP over the 2d+1 active columns exact and cheap:
// O(n * 2^(2d)) with big-integer accumulation. Row i sees columns i-d..i+d as a
// bitmask (bit k = column i-d+k, set = used or nonexistent); after assigning
// row i, column i-d leaves the window and must be used.
// ---------------------------------------------------------------------------

inline BigCount permanent_ball_size(int n, int d, int band_guard = kDefaultBandGuard) {
    if (n < 1 || d < 0) throw std::invalid_argument("ball_size: need n >= 1, d >= 0");
    if (d == 0) return 1;
    if (d >= n - 1) return factorial(n);
    if (d > band_guard)
        throw resource_error("ball_size: band half-width d=" + std::to_string(d) +
                             " exceeds guard " + std::to_string(band_guard));

    const int w = 2 * d + 1;
    const std::uint32_t full = (w >= 32) ? 0xffffffffu : ((1u << w) - 1u);
    std::uint32_t init = 0;
    for (int k = 0; k < w; ++k)
        if (1 - d + k < 1) init |= (1u << k);  // columns left of the matrix

    std::unordered_map<std::uint32_t, BigCount> cur;
    cur.emplace(init, 1);
    for (int i = 1; i <= n; ++i) {
        std::unordered_map<std::uint32_t, BigCount> next;
        next.reserve(cur.size() * 2);
        for (const auto& [mask, count] : cur) {
            for (int k = 0; k < w; ++k) {
                if (mask & (1u << k)) continue;
                std::uint32_t used = mask | (1u << k);
                if (i == n) {
                    if (used == full) next[used] += count;
                    continue;
                }
                if (!(used & 1u)) continue;  // column i-d would leave the window unused
                std::uint32_t shifted = used >> 1;
                if (i + 1 + d > n) shifted |= (1u << (w - 1));  // column beyond the matrix
                next[shifted] += count;
            }
        }
        cur = std::move(next);
    }
    BigCount total = 0;
    for (const auto& [mask, count] : cur) total += count;
    return total;
}

// Thread-safe cache of exact ball sizes, optionally persisted as an
// append-only file of `n d value` lines.
class BallTable {
  public:
    explicit BallTable(int band_guard = kDefaultBandGuard) : band_guard_(band_guard) {}

    BigCount get(int n, int d) {
        if (n >= 1 && d >= n - 1) return factorial(n);  // not worth caching
        {
            std::lock_guard lock(mu_);
            auto it = entries_.find({n, d});
            if (it != entries_.end()) return it->second;
        }
        BigCount v = permanent_ball_size(n, d, band_guard_);
        std::lock_guard lock(mu_);
        entries_.emplace(std::pair{n, d}, v);
        return v;
    }

    // Lines that do not parse as `n d value` are rejected and reported, never
    // silently folded into the table.
    std::vector<std::string> load(std::istream& in) {
        std::vector<std::string> warnings;
        std::string line;
        std::size_t lineno = 0;
        std::lock_guard lock(mu_);
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line[0] == '#') continue;
            std::stringstream ss(line);
            int n = 0, d = 0;
            std::string value;
            if (!(ss >> n >> d >> value) || n < 1 || d < 0) {
                warnings.push_back("ball cache line " + std::to_string(lineno) +
                                   " rejected: " + line);
                continue;
            }
            BigCount v;
            try {
                v = BigCount(value);
            } catch (const std::exception&) {
                warnings.push_back("ball cache line " + std::to_string(lineno) +
                                   " rejected: " + line);
                continue;
            }
            entries_.emplace(std::pair{n, d}, std::move(v));
        }
        return warnings;
    }

    void dump(std::ostream& out) const {
        std::lock_guard lock(mu_);
        for (const auto& [key, v] : entries_)
            out << key.first << ' ' << key.second << ' ' << v.str() << '\n';
    }

    std::map<std::pair<int, int>, BigCount> snapshot() const {
        std::lock_guard lock(mu_);
        return entries_;
    }

    int band_guard() const { return band_guard_; }

  private:
    int band_guard_;
    mutable std::mutex mu_;
    std::map<std::pair<int, int>, BigCount> entries_;
};

// ---------------------------------------------------------------------------
// Bound formulas.
// ---------------------------------------------------------------------------

// Gilbert-type lower bound: P(n,d) >= n!/V(n,d-1), rounded up.
inline BigCount gilbert_lower(int n, int d, BallTable& balls) {
    if (!(n > d && d >= 2))
        throw std::invalid_argument("gilbert_lower: need n > d >= 2");
    return ceil_div(factorial(n), balls.get(n, d - 1));
}

// Hamming-type upper bound with shift r: P(n,d) <= (n+r)!/V(n+r, floor((d+r-1)/2)).
// r = 0 is the plain sphere-packing bound (n > d >= 1). r >= 1 additionally
// requires n <= 2d (each shift step needs it), and r = 1 requires even d.
inline BigCount hamming_upper(int n, int d, int r, BallTable& balls) {
    if (r < 0) throw std::invalid_argument("hamming_upper: need r >= 0");
    if (r == 0) {
        if (!(n > d && d >= 1))
            throw precondition_error("hamming_upper (sphere packing, r=0): need n > d >= 1");
    } else if (r == 1) {
        if (!(d % 2 == 0 && 2 * d >= n && n > d && d >= 2))
            throw precondition_error(
                "hamming_upper (shifted bound, r=1): need even d and 2d >= n > d >= 2");
    } else {
        if (!(2 * d >= n && n > d && d >= 1))
            throw precondition_error("hamming_upper (shifted bound): need 2d >= n > d >= 1");
    }
    return factorial(n + r) / balls.get(n + r, (d + r - 1) / 2);
}

// Minimum over r in {0,1}, honoring each r's preconditions.
inline BigCount hamming_upper_best(int n, int d, BallTable& balls) {
    BigCount best = hamming_upper(n, d, 0, balls);
    if (d % 2 == 0 && 2 * d >= n && n > d && d >= 2) {
        BigCount r1 = hamming_upper(n, d, 1, balls);
        if (r1 < best) best = r1;
    }
    return best;
}

// Row-sum permanent bound: V(n,d) <= [(2d+1)!]^(n/(2d+1)). Computed via
// log-gamma; relative precision well under 1e-12 at desk scale.
inline double vupper_bound(int n, int d) {
    if (n < 1 || d < 0) throw std::invalid_argument("vupper_bound: need n >= 1, d >= 0");
    double log_fact = std::lgamma(2.0 * d + 2.0);
    return std::exp(static_cast<double>(n) / (2.0 * d + 1.0) * log_fact);
}

// Lower bound P(n,d) >= n!/[(2d-1)!]^(n/(2d-1)) (Gilbert combined with the
// row-sum bound on V).
inline double corollary_lower(int n, int d) {
    if (!(n > d && d >= 1))
        throw std::invalid_argument("corollary_lower: need n > d >= 1");
    double log_num = std::lgamma(n + 1.0);
    double log_den = static_cast<double>(n) / (2.0 * d - 1.0) * std::lgamma(2.0 * d);
    return std::exp(log_num - log_den);
}

// ---------------------------------------------------------------------------
// Growth rate mu_d = lim V(n,d)^(1/n), estimated from consecutive ratios.
// ---------------------------------------------------------------------------

struct MuEstimate {
    int d = 0;
    int n_max = 0;
    double estimate = 0.0;            // V(n_max,d) / V(n_max-1,d)
    double upper = 0.0;               // [(2d+1)!]^(1/(2d+1))
    std::vector<double> ratios;       // ratio at n = d+2 .. n_max, for diagnostics
};

inline MuEstimate mu_estimate(int d, int n_max, BallTable& balls) {
    if (d < 1) throw std::invalid_argument("mu_estimate: need d >= 1");
    if (n_max < d + 2) throw std::invalid_argument("mu_estimate: need n_max >= d + 2");
    MuEstimate est;
    est.d = d;
    est.n_max = n_max;
    est.upper = vupper_bound(1, d);
    BigCount prev = balls.get(d + 1, d);
    for (int n = d + 2; n <= n_max; ++n) {
        BigCount curr = balls.get(n, d);
        est.ratios.push_back(count_to_double(curr) / count_to_double(prev));
        prev = std::move(curr);
    }
    est.estimate = est.ratios.back();
    return est;
}

// ---------------------------------------------------------------------------
// Best-known-bound aggregation over an (n,d) grid.
// ---------------------------------------------------------------------------

struct RegisteredBound {
    int n = 0;
    int d = 0;
    BigCount size;
    std::string provenance;  // "greedy" or "exact"
    bool exact = false;
};

struct BoundRecord {
    int n = 0;
    int d = 0;
    BigCount lower;
    BigCount upper;
    std::string lower_provenance;
    std::string upper_provenance;
};

// Seeds each cell with the explicit construction, the Gilbert bound, exact
// trivia P(n,1) = n! and P(n,n) = 1, and any registered search results, then
// propagates the recursive-construction inequalities to a fixed point.
// Propagation order is ascending n then d, so provenance is reproducible.
inline std::vector<BoundRecord> best_known_lower(int n_max, int d_max,
                                                 std::span<const RegisteredBound> registered,
                                                 BallTable& balls) {
    if (n_max < 1 || d_max < 1)
        throw std::invalid_argument("best_known_lower: grid limits must be positive");

    auto key = [d_max](int n, int d) { return (n - 1) * d_max + (d - 1); };
    std::vector<BoundRecord> grid;
    for (int n = 1; n <= n_max; ++n)
        for (int d = 1; d <= d_max; ++d)
            grid.push_back(BoundRecord{n, d, BigCount(0), BigCount(0), "", ""});

    auto cell = [&](int n, int d) -> BoundRecord& {
        return grid[static_cast<std::size_t>(key(n, d))];
    };
    auto in_grid = [&](int n, int d) { return n >= 1 && n <= n_max && d >= 1 && d <= d_max; };
    auto improve = [&](int n, int d, const BigCount& v, const std::string& prov) {
        auto& c = cell(n, d);
        if (v > c.lower) {
            c.lower = v;
            c.lower_provenance = prov;
            return true;
        }
        return false;
    };

    // Seeds.
    for (int n = 1; n <= n_max; ++n) {
        for (int d = 1; d <= std::min(n, d_max); ++d) {
            if (d == 1 || d == n) {
                BigCount exact_v = (d == 1) ? factorial(n) : BigCount(1);
                cell(n, d).lower = exact_v;
                cell(n, d).upper = exact_v;
                cell(n, d).lower_provenance = "exact";
                cell(n, d).upper_provenance = "exact";
                continue;
            }
            int a = n / d, b = n % d;
            BigCount expl = pow_count(factorial(a + 1), static_cast<unsigned>(b)) *
                            pow_count(factorial(a), static_cast<unsigned>(d - b));
            improve(n, d, expl, "explicit");
            if (d - 1 <= balls.band_guard())
                improve(n, d, gilbert_lower(n, d, balls), "gilbert");
        }
    }
    for (const auto& reg : registered) {
        if (!in_grid(reg.n, reg.d)) continue;
        improve(reg.n, reg.d, reg.size, reg.provenance);
        if (reg.exact) {
            cell(reg.n, reg.d).upper = reg.size;
            cell(reg.n, reg.d).upper_provenance = reg.provenance;
        }
    }

    // Fixed-point propagation.
    bool changed = true;
    while (changed) {
        changed = false;
        for (int n = 1; n <= n_max; ++n) {
            for (int d = 1; d <= std::min(n, d_max); ++d) {
                const BigCount& low = cell(n, d).lower;
                if (low == 0) continue;
                // prefix extension with t = floor(n/d) + 1 branches
                if (n > d && in_grid(n + 1, d))
                    changed |= improve(n + 1, d, BigCount(n / d + 1) * low, "c2b1");
                // distance-raising extension (n = 2d excluded; see extend())
                if (d < n && n <= 2 * d - 1 && in_grid(n + 1, d + 1))
                    changed |= improve(n + 1, d + 1, low, "tr1");
                // interleaving recursion
                if (n > d)
                    for (int r = 2; r * n <= n_max; ++r)
                        if (in_grid(r * n, r * d))
                            changed |= improve(r * n, r * d,
                                               pow_count(low, static_cast<unsigned>(r)),
                                               "first-recursive");
            }
        }
    }

    // Upper bounds from sphere packing wherever not already pinned exactly.
    for (int n = 1; n <= n_max; ++n) {
        for (int d = 2; d <= std::min(n - 1, d_max); ++d) {
            auto& c = cell(n, d);
            if (c.upper_provenance == "exact" ||
                (!c.upper_provenance.empty() && c.upper != 0))
                continue;
            BigCount r0 = hamming_upper(n, d, 0, balls);
            c.upper = r0;
            c.upper_provenance = "hamming-r0";
            if (d % 2 == 0 && 2 * d >= n && d >= 2) {
                BigCount r1 = hamming_upper(n, d, 1, balls);
                if (r1 < c.upper) {
                    c.upper = r1;
                    c.upper_provenance = "hamming-r1";
                }
            }
        }
    }

    // Drop cells with d > n (never populated).
    std::vector<BoundRecord> out;
    out.reserve(grid.size());
    for (auto& rec : grid)
        if (rec.d <= rec.n) out.push_back(std::move(rec));
    return out;
}

}  // namespace chebpa
