#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <istream>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace chebpa {

// A stated precondition of a construction/bound does not hold for the inputs.
class precondition_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A feasibility guard (materialization limit, scan limit, band width) refused the request.
class resource_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline bool is_permutation_vector(std::span<const int> v) {
    const int n = static_cast<int>(v.size());
    if (n == 0) return false;
    std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
    for (int x : v) {
        if (x < 1 || x > n || seen[static_cast<std::size_t>(x)]) return false;
        seen[static_cast<std::size_t>(x)] = 1;
    }
    return true;
}

// A bijection of [n], stored as its 1-based value sequence.
struct Permutation {
    std::vector<int> values;

    int size() const { return static_cast<int>(values.size()); }
    int operator[](int pos) const { return values[static_cast<std::size_t>(pos) - 1]; }  // 1-based

    auto operator<=>(const Permutation&) const = default;

    static Permutation identity(int n) {
        if (n < 1) throw std::invalid_argument("identity: n must be >= 1");
        Permutation p;
        p.values.resize(static_cast<std::size_t>(n));
        std::iota(p.values.begin(), p.values.end(), 1);
        return p;
    }

    static Permutation from_values(std::vector<int> v) {
        if (!is_permutation_vector(v))
            throw std::invalid_argument("Permutation: values are not a bijection of [n]");
        return Permutation{std::move(v)};
    }
};

inline int chebyshev_distance(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("chebyshev_distance: length mismatch");
    int best = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        best = std::max(best, std::abs(a.values[i] - b.values[i]));
    return best;
}

inline int min_distance(std::span<const Permutation> words) {
    if (words.size() < 2)
        throw std::invalid_argument("min_distance: need at least 2 words");
    int best = words[0].size();  // distances never exceed n-1
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = i + 1; j < words.size(); ++j)
            best = std::min(best, chebyshev_distance(words[i], words[j]));
    return best;
}

// Composition convention: (a ∘ b)_i = a_{b_i}.
inline Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw std::invalid_argument("compose: length mismatch");
    Permutation r;
    r.values.resize(a.values.size());
    for (std::size_t i = 0; i < b.values.size(); ++i)
        r.values[i] = a.values[static_cast<std::size_t>(b.values[i]) - 1];
    return r;
}

// A set of equal-length permutations with a declared minimum Chebyshev distance.
// Word order is preserved (greedy output order is meaningful).
struct PermutationArray {
    int n = 0;
    int d = 0;
    std::vector<Permutation> words;

    std::size_t size() const { return words.size(); }
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool valid() const { return violations.empty(); }
};

inline ValidationReport validate_pa(const PermutationArray& pa) {
    ValidationReport rep;
    for (std::size_t i = 0; i < pa.words.size(); ++i) {
        const auto& w = pa.words[i];
        if (w.size() != pa.n)
            rep.violations.push_back("word " + std::to_string(i) + ": length " +
                                     std::to_string(w.size()) + " != n=" + std::to_string(pa.n));
        else if (!is_permutation_vector(w.values))
            rep.violations.push_back("word " + std::to_string(i) + ": not a bijection of [n]");
    }
    for (std::size_t i = 0; i < pa.words.size(); ++i) {
        for (std::size_t j = i + 1; j < pa.words.size(); ++j) {
            if (pa.words[i].size() != pa.words[j].size()) continue;
            if (pa.words[i] == pa.words[j]) {
                rep.violations.push_back("words " + std::to_string(i) + "," + std::to_string(j) +
                                         ": duplicate");
                continue;
            }
            int dist = chebyshev_distance(pa.words[i], pa.words[j]);
            if (dist < pa.d)
                rep.violations.push_back("words " + std::to_string(i) + "," + std::to_string(j) +
                                         ": distance " + std::to_string(dist) + " < d=" +
                                         std::to_string(pa.d));
        }
    }
    return rep;
}

// Serialization: comma-separated 1-based values; PA files carry a
// `n=<n> d=<d> size=<M>` header followed by one permutation per line.

inline std::string to_string(const Permutation& p) {
    std::string s;
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(p.values[i]);
    }
    return s;
}

inline std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> v;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw std::invalid_argument("parse_int_list: empty field");
        v.push_back(std::stoi(tok));
    }
    if (v.empty()) throw std::invalid_argument("parse_int_list: no values");
    return v;
}

inline Permutation parse_permutation(const std::string& text) {
    return Permutation::from_values(parse_int_list(text));
}

inline std::string serialize(const PermutationArray& pa) {
    std::string out = "n=" + std::to_string(pa.n) + " d=" + std::to_string(pa.d) +
                      " size=" + std::to_string(pa.words.size()) + "\n";
    for (const auto& w : pa.words) out += to_string(w) + "\n";
    return out;
}

inline PermutationArray parse_pa(std::istream& in) {
    PermutationArray pa;
    std::string header;
    if (!std::getline(in, header)) throw std::invalid_argument("parse_pa: missing header");
    std::size_t declared = 0;
    {
        std::stringstream ss(header);
        std::string field;
        bool got_n = false, got_d = false, got_size = false;
        while (ss >> field) {
            if (field.starts_with("n=")) { pa.n = std::stoi(field.substr(2)); got_n = true; }
            else if (field.starts_with("d=")) { pa.d = std::stoi(field.substr(2)); got_d = true; }
            else if (field.starts_with("size=")) { declared = std::stoul(field.substr(5)); got_size = true; }
        }
        if (!got_n || !got_d || !got_size)
            throw std::invalid_argument("parse_pa: malformed header: " + header);
    }
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        pa.words.push_back(parse_permutation(line));
    }
    if (pa.words.size() != declared)
        throw std::invalid_argument("parse_pa: header declares " + std::to_string(declared) +
                                    " words, file has " + std::to_string(pa.words.size()));
    return pa;
}

}  // namespace chebpa
