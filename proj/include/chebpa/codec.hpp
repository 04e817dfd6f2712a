#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "chebpa/constructions.hpp"
#include "chebpa/core.hpp"

namespace chebpa {

// Direct (non-materializing) encoding of message vectors into chain-code
// permutations and the matching error-tolerant decoders.
//
// Binary fast path: scanning positions left to right, if t of the previous
// digits were zeros then position i holds either t+1 (digit 0) or n-i+t+1
// (digit 1). The two candidates differ by n-i, so any error of magnitude
// < (n-i)/2 is recoverable by thresholding.

inline void check_message(std::span<const int> digits, int q, int expected_len,
                          const char* who) {
    if (static_cast<int>(digits.size()) != expected_len)
        throw std::invalid_argument(std::string(who) + ": message length must be " +
                                    std::to_string(expected_len));
    for (int x : digits)
        if (x < 0 || x >= q)
            throw std::invalid_argument(std::string(who) + ": digit out of [0, q-1]");
}

inline Permutation encode_binary(std::span<const int> x, int n, int d) {
    if (d < 1 || n <= d) throw std::invalid_argument("encode_binary: need n > d >= 1");
    check_message(x, 2, n - d, "encode_binary");
    std::vector<int> pi(static_cast<std::size_t>(n));
    int t = 0;  // zeros seen so far (trailing pad digits are all zero)
    for (int i = 1; i <= n; ++i) {
        int xi = (i <= n - d) ? x[static_cast<std::size_t>(i) - 1] : 0;
        if (xi == 0) {
            pi[static_cast<std::size_t>(i) - 1] = t + 1;
            ++t;
        } else {
            pi[static_cast<std::size_t>(i) - 1] = n - i + t + 1;
        }
    }
    return Permutation{std::move(pi)};
}

// Threshold decoder; accepts arbitrary integers (corrupted words need not be
// permutations). Only positions 1..n-d participate. A value at the exact
// midpoint (n-i)/2 + t + 1 decodes to digit 1.
inline std::vector<int> decode_binary(std::span<const int> y, int n, int d) {
    if (d < 1 || n <= d) throw std::invalid_argument("decode_binary: need n > d >= 1");
    if (static_cast<int>(y.size()) != n)
        throw std::invalid_argument("decode_binary: word length must be n");
    std::vector<int> x(static_cast<std::size_t>(n - d));
    int t = 0;
    for (int i = 1; i <= n - d; ++i) {
        // y_i < (n-i)/2 + t + 1, evaluated exactly: 2*y_i < n - i + 2t + 2
        if (2 * y[static_cast<std::size_t>(i) - 1] < n - i + 2 * t + 2) {
            x[static_cast<std::size_t>(i) - 1] = 0;
            ++t;
        } else {
            x[static_cast<std::size_t>(i) - 1] = 1;
        }
    }
    return x;
}

// q-ary generalization. Digit x_i selects a branch of the chain step at length
// nu = n - i. The value at position i under branch j is the s_j(nu)-th smallest
// value not used by positions 1..i-1; consecutive candidates are >= d apart.
namespace detail {

inline std::vector<int> qary_candidates(const std::vector<int>& unused, int nu, int q) {
    auto s = qary_prefix_schedule(nu, q);
    std::vector<int> cand;
    cand.reserve(s.size());
    for (int rank : s) cand.push_back(unused[static_cast<std::size_t>(rank) - 1]);
    return cand;
}

}  // namespace detail

inline Permutation encode_qary(std::span<const int> x, int n, int d, int q) {
    if (q < 2) throw std::invalid_argument("encode_qary: need q >= 2");
    if (d < 1 || n <= (q - 1) * d)
        throw std::invalid_argument("encode_qary: need n > (q-1)d, d >= 1");
    const int k = n - (q - 1) * d;
    check_message(x, q, k, "encode_qary");
    std::vector<int> unused(static_cast<std::size_t>(n));
    for (int v = 1; v <= n; ++v) unused[static_cast<std::size_t>(v) - 1] = v;
    std::vector<int> pi(static_cast<std::size_t>(n));
    for (int i = 1; i <= k; ++i) {
        auto cand = detail::qary_candidates(unused, n - i, q);
        int value = cand[static_cast<std::size_t>(x[static_cast<std::size_t>(i) - 1])];
        pi[static_cast<std::size_t>(i) - 1] = value;
        unused.erase(std::find(unused.begin(), unused.end(), value));
    }
    // below the message levels the chain is the single identity word:
    // remaining positions take the unused values in increasing order
    for (int i = k + 1; i <= n; ++i)
        pi[static_cast<std::size_t>(i) - 1] = unused[static_cast<std::size_t>(i - k) - 1];
    return Permutation{std::move(pi)};
}

// Nearest-candidate decoder; ties at exact midpoints resolve to the larger
// candidate, so q = 2 agrees with decode_binary on every input.
inline std::vector<int> decode_qary(std::span<const int> y, int n, int d, int q) {
    if (q < 2) throw std::invalid_argument("decode_qary: need q >= 2");
    if (d < 1 || n <= (q - 1) * d)
        throw std::invalid_argument("decode_qary: need n > (q-1)d, d >= 1");
    if (static_cast<int>(y.size()) != n)
        throw std::invalid_argument("decode_qary: word length must be n");
    const int k = n - (q - 1) * d;
    std::vector<int> unused(static_cast<std::size_t>(n));
    for (int v = 1; v <= n; ++v) unused[static_cast<std::size_t>(v) - 1] = v;
    std::vector<int> x(static_cast<std::size_t>(k));
    for (int i = 1; i <= k; ++i) {
        auto cand = detail::qary_candidates(unused, n - i, q);
        int yi = y[static_cast<std::size_t>(i) - 1];
        int best = 0;
        for (int j = 1; j < q; ++j)
            if (std::abs(yi - cand[static_cast<std::size_t>(j)]) <=
                std::abs(yi - cand[static_cast<std::size_t>(best)]))
                best = j;
        x[static_cast<std::size_t>(i) - 1] = best;
        unused.erase(std::find(unused.begin(), unused.end(),
                               cand[static_cast<std::size_t>(best)]));
    }
    return x;
}

}  // namespace chebpa
