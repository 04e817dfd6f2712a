#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "chebpa/core.hpp"

namespace chebpa {

inline constexpr int kDefaultGreedyGuard = 12;
inline constexpr int kDefaultExactGuard = 6;

struct SearchResult {
    int n = 0;
    int d = 0;
    std::size_t size = 0;
    PermutationArray words;
    std::string method;
    std::chrono::duration<double> elapsed{};
    std::uint64_t permutations_scanned = 0;
};

// Deterministic greedy scan: start from the identity, walk S_n in
// lexicographic order, keep every permutation at distance >= d from all kept
// words. The result size is a lower bound on P(n,d).
inline SearchResult greedy_lex(int n, int d, int guard = kDefaultGreedyGuard) {
    if (!(n > d && d >= 1)) throw std::invalid_argument("greedy_lex: need n > d >= 1");
    if (n > guard)
        throw resource_error("greedy_lex: n=" + std::to_string(n) + " exceeds scan guard " +
                             std::to_string(guard) + " (" + std::to_string(n) +
                             "! permutations); raise the guard explicitly to override");
    auto t0 = std::chrono::steady_clock::now();
    SearchResult res;
    res.n = n;
    res.d = d;
    res.method = "greedy";
    res.words.n = n;
    res.words.d = d;

    std::vector<int> cur(static_cast<std::size_t>(n));
    std::iota(cur.begin(), cur.end(), 1);
    std::vector<std::vector<int>> chosen;
    do {
        ++res.permutations_scanned;
        bool ok = true;
        for (const auto& w : chosen) {
            bool far = false;
            for (int j = 0; j < n; ++j) {
                if (std::abs(cur[static_cast<std::size_t>(j)] -
                             w[static_cast<std::size_t>(j)]) >= d) {
                    far = true;
                    break;
                }
            }
            if (!far) {
                ok = false;
                break;
            }
        }
        if (ok) chosen.push_back(cur);
    } while (std::next_permutation(cur.begin(), cur.end()));

    for (auto& w : chosen) res.words.words.push_back(Permutation{std::move(w)});
    res.size = res.words.words.size();
    res.elapsed = std::chrono::steady_clock::now() - t0;
    return res;
}

namespace detail {

// Bitset over S_n vertices, 64-bit blocks.
struct VertexSet {
    std::vector<std::uint64_t> bits;

    explicit VertexSet(std::size_t n_vertices = 0)
        : bits((n_vertices + 63) / 64, 0) {}

    void set(std::size_t v) { bits[v / 64] |= (std::uint64_t{1} << (v % 64)); }
    bool test(std::size_t v) const { return bits[v / 64] >> (v % 64) & 1; }
    bool empty() const {
        for (auto b : bits)
            if (b) return false;
        return true;
    }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto b : bits) c += static_cast<std::size_t>(__builtin_popcountll(b));
        return c;
    }
    VertexSet intersect(const VertexSet& o) const {
        VertexSet r;
        r.bits.resize(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i) r.bits[i] = bits[i] & o.bits[i];
        return r;
    }
    void clear(std::size_t v) { bits[v / 64] &= ~(std::uint64_t{1} << (v % 64)); }

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t blk = 0; blk < bits.size(); ++blk) {
            std::uint64_t b = bits[blk];
            while (b) {
                std::size_t v = blk * 64 + static_cast<std::size_t>(__builtin_ctzll(b));
                fn(v);
                b &= b - 1;
            }
        }
    }
};

struct CliqueSearcher {
    const std::vector<VertexSet>& adj;
    std::size_t n_vertices;
    std::vector<std::size_t> best;
    std::vector<std::size_t> stack;

    // Greedy coloring upper bound on the clique number of the candidate set;
    // returns candidates ordered by color so high-color vertices branch first.
    std::size_t color_bound(const VertexSet& cand, std::vector<std::size_t>& order,
                            std::vector<std::size_t>& colors) const {
        order.clear();
        colors.clear();
        std::size_t n_colors = 0;
        VertexSet uncolored = cand;
        while (!uncolored.empty()) {
            ++n_colors;
            VertexSet cls = uncolored;
            while (!cls.empty()) {
                std::size_t v = 0;
                // lowest vertex in the class
                for (std::size_t blk = 0; blk < cls.bits.size(); ++blk) {
                    if (cls.bits[blk]) {
                        v = blk * 64 + static_cast<std::size_t>(__builtin_ctzll(cls.bits[blk]));
                        break;
                    }
                }
                order.push_back(v);
                colors.push_back(n_colors);
                uncolored.clear(v);
                cls.clear(v);
                // keep only non-neighbors in the same color class
                for (std::size_t blk = 0; blk < cls.bits.size(); ++blk)
                    cls.bits[blk] &= ~adj[v].bits[blk];
            }
        }
        return n_colors;
    }

    void expand(VertexSet cand) {
        std::vector<std::size_t> order, colors;
        color_bound(cand, order, colors);
        for (std::size_t idx = order.size(); idx-- > 0;) {
            if (stack.size() + colors[idx] <= best.size()) return;
            std::size_t v = order[idx];
            VertexSet next = cand.intersect(adj[v]);
            stack.push_back(v);
            if (next.empty()) {
                if (stack.size() > best.size()) best = stack;
            } else {
                expand(std::move(next));
            }
            stack.pop_back();
            cand.clear(v);  // processed; excluded from later branches
        }
    }
};

}  // namespace detail

// Exact maximum (n,d) PA size by branch-and-bound maximum clique on the graph
// with vertex set S_n and edges between permutations at distance >= d.
// Vertices are ordered lexicographically; the witness is the first maximum
// clique found (the size is contractual, the witness is not canonical).
inline SearchResult exact_max_pa(int n, int d, int guard = kDefaultExactGuard) {
    if (!(n >= d && d >= 1)) throw std::invalid_argument("exact_max_pa: need n >= d >= 1");
    if (n > guard)
        throw resource_error("exact_max_pa: n=" + std::to_string(n) + " exceeds guard " +
                             std::to_string(guard) + "; raise the guard explicitly to override");
    auto t0 = std::chrono::steady_clock::now();

    std::vector<Permutation> verts;
    {
        std::vector<int> cur(static_cast<std::size_t>(n));
        std::iota(cur.begin(), cur.end(), 1);
        do {
            verts.push_back(Permutation{cur});
        } while (std::next_permutation(cur.begin(), cur.end()));
    }
    const std::size_t m = verts.size();
    std::vector<detail::VertexSet> adj(m, detail::VertexSet(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (chebyshev_distance(verts[i], verts[j]) >= d) {
                adj[i].set(j);
                adj[j].set(i);
            }

    detail::CliqueSearcher searcher{adj, m, {}, {}};
    detail::VertexSet all(m);
    for (std::size_t v = 0; v < m; ++v) all.set(v);
    searcher.expand(all);

    SearchResult res;
    res.n = n;
    res.d = d;
    res.method = "exact";
    res.permutations_scanned = m;
    res.words.n = n;
    res.words.d = d;
    std::sort(searcher.best.begin(), searcher.best.end());
    for (std::size_t v : searcher.best) res.words.words.push_back(verts[v]);
    res.size = res.words.words.size();
    res.elapsed = std::chrono::steady_clock::now() - t0;
    return res;
}

}  // namespace chebpa
