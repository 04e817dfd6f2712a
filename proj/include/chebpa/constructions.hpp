#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chebpa/bigint.hpp"
#include "chebpa/core.hpp"

namespace chebpa {

inline constexpr std::size_t kDefaultMaterializeLimit = 1'000'000;

// ---------------------------------------------------------------------------
// Residue-class code: all permutations with pi_i ≡ i (mod d).
// Lazy handle; the code is usually far too large to materialize.
// ---------------------------------------------------------------------------

class ExplicitCode {
  public:
    ExplicitCode(int n, int d) : n_(n), d_(d) {
        if (d < 1 || d > n) throw std::invalid_argument("explicit_code: need 1 <= d <= n");
        a_ = n / d;
        b_ = n % d;
        class_positions_.resize(static_cast<std::size_t>(d));
        for (int i = 1; i <= n; ++i) {
            int cls = (i - 1) % d;  // class index 0..d-1 holds residue cls+1 (class d == residue 0)
            class_positions_[static_cast<std::size_t>(cls)].push_back(i);
        }
        cardinality_ = 1;
        class_cardinality_.reserve(static_cast<std::size_t>(d));
        for (const auto& cls : class_positions_) {
            BigCount f = factorial(static_cast<int>(cls.size()));
            class_cardinality_.push_back(f);
            cardinality_ *= f;
        }
    }

    int n() const { return n_; }
    int d() const { return d_; }
    int a() const { return a_; }
    int b() const { return b_; }
    const BigCount& cardinality() const { return cardinality_; }

    bool contains(const Permutation& p) const {
        if (p.size() != n_) return false;
        for (int i = 1; i <= n_; ++i)
            if ((p[i] - i) % d_ != 0) return false;
        return true;
    }

    // Codeword ordering: class 1 is the most significant mixed-radix digit; within a
    // class, values are assigned to the class positions by lexicographic (factorial
    // number system) rank of the value sequence.
    Permutation unrank(BigCount k) const {
        if (k < 0 || k >= cardinality_)
            throw std::out_of_range("explicit_code::unrank: index out of range");
        std::vector<BigCount> class_index(static_cast<std::size_t>(d_));
        for (int c = d_ - 1; c >= 0; --c) {
            const BigCount& radix = class_cardinality_[static_cast<std::size_t>(c)];
            class_index[static_cast<std::size_t>(c)] = k % radix;
            k /= radix;
        }
        std::vector<int> out(static_cast<std::size_t>(n_));
        for (int c = 0; c < d_; ++c)
            place_class(c, class_index[static_cast<std::size_t>(c)], out);
        return Permutation{std::move(out)};
    }

    std::vector<Permutation> enumerate(std::size_t limit = kDefaultMaterializeLimit) const {
        if (cardinality_ > limit)
            throw resource_error("explicit_code::enumerate: cardinality " +
                                 to_decimal(cardinality_) + " exceeds limit " +
                                 std::to_string(limit));
        std::vector<Permutation> out;
        out.reserve(cardinality_.convert_to<std::size_t>());
        for (BigCount k = 0; k < cardinality_; ++k) out.push_back(unrank(k));
        return out;
    }

    // Uniform random codeword: independent uniform Lehmer digits per class.
    template <class Urbg>
    Permutation random_codeword(Urbg& gen) const {
        std::vector<int> out(static_cast<std::size_t>(n_));
        for (int c = 0; c < d_; ++c) {
            const auto& positions = class_positions_[static_cast<std::size_t>(c)];
            std::vector<int> avail = positions;  // class values == class positions as a set
            for (std::size_t j = 0; j < positions.size(); ++j) {
                std::size_t pick = static_cast<std::size_t>(gen() % avail.size());
                out[static_cast<std::size_t>(positions[j]) - 1] = avail[pick];
                avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(pick));
            }
        }
        return Permutation{std::move(out)};
    }

  private:
    // Assign class values to class positions by factorial-number-system index.
    void place_class(int c, BigCount idx, std::vector<int>& out) const {
        const auto& positions = class_positions_[static_cast<std::size_t>(c)];
        std::vector<int> avail = positions;
        std::size_t m = positions.size();
        for (std::size_t j = 0; j < m; ++j) {
            BigCount suffix = factorial(static_cast<int>(m - 1 - j));
            BigCount digit = idx / suffix;
            idx %= suffix;
            std::size_t pick = digit.convert_to<std::size_t>();
            out[static_cast<std::size_t>(positions[j]) - 1] = avail[pick];
            avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(pick));
        }
    }

    int n_, d_, a_, b_;
    BigCount cardinality_;
    std::vector<std::vector<int>> class_positions_;
    std::vector<BigCount> class_cardinality_;
};

inline ExplicitCode explicit_code(int n, int d) { return ExplicitCode(n, d); }

// Per-coordinate decoding of the residue-class code. Works on raw integers; the
// result can fail the permutation property under excess noise, which is flagged
// rather than treated as an error.
struct ExplicitDecodeResult {
    std::vector<int> word;
    bool is_permutation = false;
    int guaranteed_radius = 0;  // (d-1)/2 for odd d, d/2 - 1 for even d
};

inline ExplicitDecodeResult explicit_decode(int n, int d, std::span<const int> received) {
    if (d < 1 || d > n) throw std::invalid_argument("explicit_decode: need 1 <= d <= n");
    if (static_cast<int>(received.size()) != n)
        throw std::invalid_argument("explicit_decode: received length != n");
    ExplicitDecodeResult res;
    res.guaranteed_radius = (d % 2 == 1) ? (d - 1) / 2 : d / 2 - 1;
    res.word.resize(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        int sigma = received[static_cast<std::size_t>(i) - 1];
        int a = ((i - sigma) % d + d) % d;  // centered: odd d -> [-(d-1)/2, (d-1)/2]
        if (2 * a > d) a -= d;
        res.word[static_cast<std::size_t>(i) - 1] = sigma + a;
    }
    res.is_permutation = is_permutation_vector(res.word);
    return res;
}

// ---------------------------------------------------------------------------
// Interleaving recursion: an (n,d) PA of size M yields an (rn,rd) PA of size M^r.
// ---------------------------------------------------------------------------

inline PermutationArray first_recursive(const PermutationArray& c, int r,
                                        std::size_t limit = kDefaultMaterializeLimit) {
    if (r < 2) throw std::invalid_argument("first_recursive: need r >= 2");
    auto rep = validate_pa(c);
    if (!rep.valid())
        throw std::invalid_argument("first_recursive: input PA invalid: " + rep.violations[0]);
    BigCount out_size = pow_count(BigCount(c.words.size()), static_cast<unsigned>(r));
    if (out_size > limit)
        throw resource_error("first_recursive: output size " + to_decimal(out_size) +
                             " exceeds limit " + std::to_string(limit));

    const int n = c.n;
    PermutationArray out;
    out.n = r * n;
    out.d = r * c.d;
    std::vector<std::size_t> tuple(static_cast<std::size_t>(r), 0);
    const std::size_t m = c.words.size();
    while (true) {
        std::vector<int> word;
        word.reserve(static_cast<std::size_t>(r) * static_cast<std::size_t>(n));
        for (int j = 0; j < r; ++j) {
            const auto& pi = c.words[tuple[static_cast<std::size_t>(j)]];
            for (int v : pi.values) word.push_back(r * v - j);
        }
        out.words.push_back(Permutation{std::move(word)});
        // odometer over ordered r-tuples, last slot fastest
        int j = r - 1;
        while (j >= 0 && ++tuple[static_cast<std::size_t>(j)] == m) {
            tuple[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Prefix extension: prepend m, shift values >= m up by one. Lifts S_n to S_{n+1}.
// ---------------------------------------------------------------------------

inline Permutation phi(const Permutation& p, int m) {
    const int n = p.size();
    if (m < 1 || m > n + 1) throw std::invalid_argument("phi: m out of [1, n+1]");
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    out.push_back(m);
    for (int v : p.values) out.push_back(v < m ? v : v + 1);
    return Permutation{std::move(out)};
}

// Two validity regimes for extend(c, s):
//  - keep_distance: consecutive prefixes spaced >= d apart; output is an (n+1, d) PA of size t*|c|.
//  - raise_distance: single prefix s = {d} with n <= 2d-1; output is an (n+1, d+1) PA of size |c|.
//    n = 2d is excluded: a word can then hold value d at a coordinate where its partner
//    holds 2d, both values shift, and the lifted pair stays at distance d
//    (e.g. n=4, d=2: (4,1,3,2) and (2,1,3,4) lift to (2,5,1,4,3) and (2,3,1,4,5)).
enum class ExtendMode { keep_distance, raise_distance };

inline PermutationArray extend(const PermutationArray& c, std::span<const int> s,
                               ExtendMode mode = ExtendMode::keep_distance) {
    if (s.empty()) throw std::invalid_argument("extend: empty prefix list");
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[j] < 1 || s[j] > c.n + 1)
            throw std::invalid_argument("extend: prefix value out of [1, n+1]");
        if (j > 0 && s[j] <= s[j - 1])
            throw std::invalid_argument("extend: prefix values must be strictly increasing");
    }
    int out_d;
    if (mode == ExtendMode::keep_distance) {
        for (std::size_t j = 0; j + 1 < s.size(); ++j)
            if (s[j + 1] - s[j] < c.d)
                throw precondition_error(
                    "extend (spacing rule): consecutive prefixes must differ by at least d");
        out_d = c.d;
    } else {
        if (s.size() != 1 || s[0] != c.d || c.n > 2 * c.d - 1)
            throw precondition_error(
                "extend (distance-raising rule): requires s = {d} and n <= 2d-1");
        out_d = c.d + 1;
    }
    PermutationArray out;
    out.n = c.n + 1;
    out.d = out_d;
    out.words.reserve(s.size() * c.words.size());
    for (int m : s)
        for (const auto& w : c.words) out.words.push_back(phi(w, m));
    return out;
}

// ---------------------------------------------------------------------------
// Chain codes: iterated prefix extensions starting from a single identity word.
// ---------------------------------------------------------------------------

struct ChainCode {
    int n = 0;
    int d = 0;
    int q = 2;
    BigCount size;  // q^(n - (q-1)d)
    PermutationArray words;
};

inline ChainCode build_chain_binary(int n, int d, std::size_t limit = kDefaultMaterializeLimit) {
    if (d < 1 || n < d) throw std::invalid_argument("build_chain_binary: need n >= d >= 1");
    BigCount size = pow_count(2, static_cast<unsigned>(n - d));
    if (size > limit)
        throw resource_error("build_chain_binary: size 2^" + std::to_string(n - d) +
                             " exceeds limit " + std::to_string(limit) +
                             "; use the codec for direct encoding instead");
    PermutationArray pa;
    pa.n = d;
    pa.d = d;
    pa.words.push_back(Permutation::identity(d));
    for (int nu = d; nu < n; ++nu) {
        const int s[2] = {1, nu + 1};
        pa = extend(pa, std::span<const int>(s, 2), ExtendMode::keep_distance);
        pa.d = d;  // extension preserves the original distance guarantee
    }
    return ChainCode{n, d, 2, std::move(size), std::move(pa)};
}

// Prefix schedule for one q-ary chain step at length nu:
// s_j = (j-1) * floor(nu/(q-1)) + 1 for j = 1..q-1, and s_q = nu + 1.
inline std::vector<int> qary_prefix_schedule(int nu, int q) {
    std::vector<int> s;
    s.reserve(static_cast<std::size_t>(q));
    for (int j = 1; j <= q - 1; ++j) s.push_back((j - 1) * (nu / (q - 1)) + 1);
    s.push_back(nu + 1);
    return s;
}

inline ChainCode build_chain_qary(int n, int d, int q,
                                  std::size_t limit = kDefaultMaterializeLimit) {
    if (q < 2) throw std::invalid_argument("build_chain_qary: need q >= 2");
    if (d < 1 || n < (q - 1) * d)
        throw std::invalid_argument("build_chain_qary: need n >= (q-1)d, d >= 1");
    const int base = (q - 1) * d;
    BigCount size = pow_count(q, static_cast<unsigned>(n - base));
    if (size > limit)
        throw resource_error("build_chain_qary: size " + std::to_string(q) + "^" +
                             std::to_string(n - base) + " exceeds limit " +
                             std::to_string(limit) +
                             "; use the codec for direct encoding instead");
    PermutationArray pa;
    pa.n = base;
    pa.d = d;
    pa.words.push_back(Permutation::identity(base));
    for (int nu = base; nu < n; ++nu) {
        auto s = qary_prefix_schedule(nu, q);
        pa = extend(pa, s, ExtendMode::keep_distance);
        pa.d = d;
    }
    return ChainCode{n, d, q, std::move(size), std::move(pa)};
}

}  // namespace chebpa
