#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "chebpa/codec.hpp"
#include "chebpa/constructions.hpp"
#include "chebpa/core.hpp"

namespace chebpa {

// Monte-Carlo PAM/AWGN simulation: draw a uniform message, encode, add
// Gaussian noise per coordinate, quantize to the nearest integer level,
// decode, tally. Fully reproducible from the seed: each trial gets its own
// splitmix64-derived substream, so the trial count never perturbs earlier
// trials.

enum class CodecKind { binary, qary, explicit_residue };

inline CodecKind parse_codec_kind(const std::string& s) {
    if (s == "binary") return CodecKind::binary;
    if (s == "qary") return CodecKind::qary;
    if (s == "explicit") return CodecKind::explicit_residue;
    throw std::invalid_argument("unknown codec: " + s);
}

struct ChannelConfig {
    double sigma = 0.0;     // noise std dev, in units of one amplitude level
    int trials = 1;
    std::uint64_t seed = 0;
    bool clip = false;      // bound post-quantization error magnitude
    int clip_radius = 0;
};

struct SimStats {
    int trials = 0;
    std::uint64_t symbol_errors_pre_decode = 0;  // quantized coordinate != sent
    std::uint64_t block_decode_failures = 0;
    std::uint64_t message_digit_errors = 0;
    std::uint64_t symbols_total = 0;
    std::uint64_t digits_total = 0;

    double symbol_error_rate() const {
        return symbols_total ? static_cast<double>(symbol_errors_pre_decode) /
                                   static_cast<double>(symbols_total)
                             : 0.0;
    }
    double block_failure_rate() const {
        return trials ? static_cast<double>(block_decode_failures) / trials : 0.0;
    }
    double digit_error_rate() const {
        return digits_total ? static_cast<double>(message_digit_errors) /
                                  static_cast<double>(digits_total)
                            : 0.0;
    }
};

namespace detail {

// splitmix64; doubles as the seed mixer and the per-trial stream generator.
struct Splitmix64 {
    std::uint64_t state;

    std::uint64_t operator()() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in (0, 1]
    double uniform01() { return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1p-53; }

    // Box-Muller, one variate per call (the sine twin is discarded for
    // stream-position independence between coordinates)
    double gaussian() {
        double u1 = uniform01();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t uniform_below(std::uint64_t bound) { return (*this)() % bound; }
};

// round half away from zero
inline int quantize(double x) {
    return static_cast<int>(x < 0 ? std::ceil(x - 0.5) : std::floor(x + 0.5));
}

}  // namespace detail

inline SimStats simulate(CodecKind codec, int n, int d, int q, const ChannelConfig& cfg) {
    if (cfg.sigma < 0) throw std::invalid_argument("simulate: sigma must be >= 0");
    if (cfg.trials < 1) throw std::invalid_argument("simulate: trials must be >= 1");
    if (cfg.clip && cfg.clip_radius < 0)
        throw std::invalid_argument("simulate: clip radius must be >= 0");

    int k = 0;  // message digits per trial (0 for the explicit codec)
    switch (codec) {
        case CodecKind::binary:
            if (!(n > d && d >= 1)) throw std::invalid_argument("simulate: need n > d >= 1");
            q = 2;
            k = n - d;
            break;
        case CodecKind::qary:
            if (q < 2) throw std::invalid_argument("simulate: need q >= 2");
            if (!(n > (q - 1) * d && d >= 1))
                throw std::invalid_argument("simulate: need n > (q-1)d, d >= 1");
            k = n - (q - 1) * d;
            break;
        case CodecKind::explicit_residue:
            if (!(d >= 1 && d <= n)) throw std::invalid_argument("simulate: need 1 <= d <= n");
            break;
    }

    ExplicitCode expl = (codec == CodecKind::explicit_residue) ? explicit_code(n, d)
                                                               : explicit_code(1, 1);

    SimStats stats;
    stats.trials = cfg.trials;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        detail::Splitmix64 rng{cfg.seed ^ (0x7f4a7c15ull + static_cast<std::uint64_t>(trial) *
                                                               0x9e3779b97f4a7c15ull)};
        std::vector<int> message(static_cast<std::size_t>(k));
        for (auto& digit : message)
            digit = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(q)));

        Permutation sent = [&] {
            switch (codec) {
                case CodecKind::binary: return encode_binary(message, n, d);
                case CodecKind::qary: return encode_qary(message, n, d, q);
                default: return expl.random_codeword(rng);
            }
        }();

        std::vector<int> received(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            double noisy = sent.values[static_cast<std::size_t>(i)] +
                           cfg.sigma * rng.gaussian();
            int level = detail::quantize(noisy);
            if (cfg.clip) {
                int err = level - sent.values[static_cast<std::size_t>(i)];
                err = std::max(-cfg.clip_radius, std::min(cfg.clip_radius, err));
                level = sent.values[static_cast<std::size_t>(i)] + err;
            }
            received[static_cast<std::size_t>(i)] = level;
            if (level != sent.values[static_cast<std::size_t>(i)])
                ++stats.symbol_errors_pre_decode;
        }
        stats.symbols_total += static_cast<std::uint64_t>(n);

        if (codec == CodecKind::explicit_residue) {
            auto dec = explicit_decode(n, d, received);
            if (dec.word != sent.values) ++stats.block_decode_failures;
            for (int i = 0; i < n; ++i)
                if (dec.word[static_cast<std::size_t>(i)] !=
                    sent.values[static_cast<std::size_t>(i)])
                    ++stats.message_digit_errors;
            stats.digits_total += static_cast<std::uint64_t>(n);
        } else {
            std::vector<int> decoded = (codec == CodecKind::binary)
                                           ? decode_binary(received, n, d)
                                           : decode_qary(received, n, d, q);
            if (decoded != message) ++stats.block_decode_failures;
            for (int i = 0; i < k; ++i)
                if (decoded[static_cast<std::size_t>(i)] != message[static_cast<std::size_t>(i)])
                    ++stats.message_digit_errors;
            stats.digits_total += static_cast<std::uint64_t>(k);
        }
    }
    return stats;
}

}  // namespace chebpa
