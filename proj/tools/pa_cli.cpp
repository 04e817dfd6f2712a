// pa: command-line front end for the permutation-array library.
//
// Subcommands: construct | encode | decode | ball-size | bounds | mu |
// greedy | exact | simulate | reproduce-tables.
//
// Exit codes: 0 success, 2 usage error, 3 precondition error,
// 4 resource-guard refusal.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "chebpa/bounds.hpp"
#include "chebpa/channel.hpp"
#include "chebpa/codec.hpp"
#include "chebpa/constructions.hpp"
#include "chebpa/core.hpp"
#include "chebpa/search.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace chebpa;

namespace {

// ---------------------------------------------------------------------------
// Cache directory: --cache-dir flag > PA_CACHE_DIR env > per-user default.
// ---------------------------------------------------------------------------

fs::path resolve_cache_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("PA_CACHE_DIR"); env && *env) return env;
    if (const char* home = std::getenv("HOME"); home && *home)
        return fs::path(home) / ".cache" / "pa";
    return fs::path(".pa-cache");
}

struct Cache {
    fs::path dir;
    BallTable balls;

    explicit Cache(const std::string& flag_value, int band_guard)
        : dir(resolve_cache_dir(flag_value)), balls(band_guard) {
        std::ifstream in(dir / "balls.txt");
        if (in) {
            for (const auto& w : balls.load(in))
                std::cerr << "warning: ball cache: " << w << "\n";
        }
    }

    void persist_balls() {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) return;  // cache is best-effort; results were already printed
        std::ofstream out(dir / "balls.txt", std::ios::trunc);
        if (out) balls.dump(out);
    }

    std::vector<RegisteredBound> registered_results() const {
        std::vector<RegisteredBound> out;
        std::ifstream in(dir / "results.txt");
        std::string line;
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            RegisteredBound rb;
            std::string size_str;
            int exact_flag = 0;
            if (!(ls >> rb.n >> rb.d >> size_str >> rb.provenance >> exact_flag)) {
                if (!line.empty()) std::cerr << "warning: results cache: bad line: " << line << "\n";
                continue;
            }
            try {
                rb.size = BigCount(size_str);
            } catch (const std::exception&) {
                std::cerr << "warning: results cache: bad size: " << line << "\n";
                continue;
            }
            rb.exact = exact_flag != 0;
            out.push_back(std::move(rb));
        }
        return out;
    }

    void register_result(const SearchResult& res, bool exact) {
        std::error_code ec;
        fs::create_directories(dir, ec);
        std::ofstream out(dir / "results.txt", std::ios::app);
        if (out)
            out << res.n << ' ' << res.d << ' ' << res.size << ' ' << res.method << ' '
                << (exact ? 1 : 0) << '\n';
    }
};

// ---------------------------------------------------------------------------
// Output plumbing.
// ---------------------------------------------------------------------------

using Params = std::vector<std::pair<std::string, std::string>>;

// Reproducibility header: every run states the exact parameter set used.
void print_header(const std::string& cmd, const Params& params) {
    std::cout << "# pa " << cmd;
    for (const auto& [k, v] : params) std::cout << ' ' << k << '=' << v;
    std::cout << '\n';
}

ordered_json params_json(const std::string& cmd, const Params& params) {
    ordered_json j;
    j["command"] = cmd;
    ordered_json p = ordered_json::object();
    for (const auto& [k, v] : params) p[k] = v;
    j["params"] = p;
    return j;
}

std::vector<int> parse_csv_ints(const std::string& text, const char* what) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(std::string(what) + ": bad integer '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
}

std::string join_csv(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bounds grid emission (shared by `bounds` and `reproduce-tables`).
// ---------------------------------------------------------------------------

// Seeds the grid with everything in the results cache plus fresh greedy runs
// for the cells cheap enough to scan outright (n <= 7).
std::vector<RegisteredBound> grid_seeds(int n_max, Cache& cache) {
    auto seeds = cache.registered_results();
    for (int n = 3; n <= std::min(n_max, 7); ++n)
        for (int d = 2; d < n; ++d) {
            auto res = greedy_lex(n, d);
            seeds.push_back(RegisteredBound{n, d, BigCount(res.size), "greedy", false});
        }
    return seeds;
}

void emit_grid(const std::vector<BoundRecord>& grid, const std::string& format,
               const std::string& cmd, const Params& params) {
    if (format == "json") {
        ordered_json j = params_json(cmd, params);
        ordered_json rows = ordered_json::array();
        for (const auto& rec : grid) {
            ordered_json row;
            row["n"] = rec.n;
            row["d"] = rec.d;
            row["lower"] = to_decimal(rec.lower);
            row["lower_provenance"] = rec.lower_provenance;
            row["upper"] = rec.upper == 0 ? "" : to_decimal(rec.upper);
            row["upper_provenance"] = rec.upper_provenance;
            rows.push_back(std::move(row));
        }
        j["rows"] = std::move(rows);
        std::cout << j.dump() << '\n';
        return;
    }
    print_header(cmd, params);
    std::cout << "n,d,lower,lower_provenance,upper,upper_provenance\n";
    for (const auto& rec : grid) {
        std::cout << rec.n << ',' << rec.d << ',' << to_decimal(rec.lower) << ','
                  << rec.lower_provenance << ',' << (rec.upper == 0 ? "" : to_decimal(rec.upper))
                  << ',' << rec.upper_provenance << '\n';
    }
}

void emit_search_result(const SearchResult& res, bool emit_words, const std::string& cmd,
                        const Params& params) {
    print_header(cmd, params);
    std::cout << "size " << res.size << '\n';
    std::cout << "scanned " << res.permutations_scanned << '\n';
    if (emit_words) std::cout << serialize(res.words);
}

// ---------------------------------------------------------------------------
// Subcommand bodies.
// ---------------------------------------------------------------------------

int run_construct(const std::string& kind, int n, int d, int q, std::size_t max_words,
                  bool emit_words, const Params& params) {
    print_header("construct", params);
    if (kind == "explicit") {
        auto code = explicit_code(n, d);
        std::cout << "cardinality " << to_decimal(code.cardinality()) << '\n';
        if (emit_words) {
            auto words = code.enumerate(max_words);
            PermutationArray pa{n, d, std::move(words)};
            std::cout << serialize(pa);
        }
        return 0;
    }
    ChainCode chain = kind == "chain-binary" ? build_chain_binary(n, d, max_words)
                                             : build_chain_qary(n, d, q, max_words);
    std::cout << "size " << to_decimal(chain.size) << '\n';
    if (emit_words) std::cout << serialize(chain.words);
    return 0;
}

int run_simulate(CodecKind codec, int n, int d, int q, const ChannelConfig& cfg,
                 const std::string& format, const Params& params) {
    SimStats stats = simulate(codec, n, d, q, cfg);
    if (format == "json") {
        ordered_json j = params_json("simulate", params);
        j["trials"] = stats.trials;
        j["symbol_errors_pre_decode"] = stats.symbol_errors_pre_decode;
        j["block_decode_failures"] = stats.block_decode_failures;
        j["message_digit_errors"] = stats.message_digit_errors;
        j["symbols_total"] = stats.symbols_total;
        j["digits_total"] = stats.digits_total;
        j["symbol_error_rate"] = stats.symbol_error_rate();
        j["block_failure_rate"] = stats.block_failure_rate();
        j["digit_error_rate"] = stats.digit_error_rate();
        std::cout << j.dump() << '\n';
        return 0;
    }
    print_header("simulate", params);
    std::cout << "trials " << stats.trials << '\n'
              << "symbol_errors_pre_decode " << stats.symbol_errors_pre_decode << '\n'
              << "block_decode_failures " << stats.block_decode_failures << '\n'
              << "message_digit_errors " << stats.message_digit_errors << '\n'
              << "symbol_error_rate " << stats.symbol_error_rate() << '\n'
              << "block_failure_rate " << stats.block_failure_rate() << '\n'
              << "digit_error_rate " << stats.digit_error_rate() << '\n';
    return 0;
}

int run_reproduce_tables(int mu_n_max, int n_max, int d_max, Cache& cache, const Params& params) {
    print_header("reproduce-tables", params);

    std::cout << "table: growth rates (estimate vs row-sum upper bound)\n";
    std::cout << "d,estimate,upper\n";
    bool partial = false;
    for (int d = 1; d <= 8; ++d) {
        if (d > cache.balls.band_guard() || mu_n_max < d + 2) {
            std::cout << d << ",SKIPPED (guard),\n";
            partial = true;
            continue;
        }
        auto est = mu_estimate(d, mu_n_max, cache.balls);
        std::cout << d << ',' << est.estimate << ',' << est.upper << '\n';
    }

    std::cout << "table: best known bounds on maximum PA size\n";
    auto seeds = grid_seeds(n_max, cache);
    auto grid = best_known_lower(n_max, d_max, seeds, cache.balls);
    std::cout << "n,d,lower,lower_provenance,upper,upper_provenance\n";
    for (const auto& rec : grid) {
        if (rec.d > rec.n) continue;
        std::cout << rec.n << ',' << rec.d << ',' << to_decimal(rec.lower) << ','
                  << rec.lower_provenance << ',' << (rec.upper == 0 ? "" : to_decimal(rec.upper))
                  << ',' << rec.upper_provenance << '\n';
    }
    if (partial) std::cout << "note: PARTIAL - some rows skipped by feasibility guards\n";
    cache.persist_balls();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"permutation arrays under the Chebyshev distance"};
    app.require_subcommand(1);

    std::string cache_dir_flag;
    int max_band = kDefaultBandGuard;
    std::size_t max_words = kDefaultMaterializeLimit;
    app.add_option("--cache-dir", cache_dir_flag, "cache directory (default: PA_CACHE_DIR or ~/.cache/pa)");
    app.add_option("--max-band", max_band, "ball-size band guard (default 14)");
    app.add_option("--max-words", max_words, "materialization limit (default 1e6)");

    // construct
    auto* c_construct = app.add_subcommand("construct", "build a PA");
    std::string kind = "explicit";
    int n = 0, d = 0, q = 2;
    bool emit_words = false;
    c_construct->add_option("--kind", kind, "explicit | chain-binary | chain-qary")
        ->check(CLI::IsMember({"explicit", "chain-binary", "chain-qary"}));
    c_construct->add_option("--n", n)->required();
    c_construct->add_option("--d", d)->required();
    c_construct->add_option("--q", q);
    c_construct->add_flag("--emit-words", emit_words);

    // encode / decode
    auto* c_encode = app.add_subcommand("encode", "message digits -> chain codeword");
    auto* c_decode = app.add_subcommand("decode", "received word -> message digits");
    std::string message_csv, word_csv;
    for (auto* c : {c_encode, c_decode}) {
        c->add_option("--n", n)->required();
        c->add_option("--d", d)->required();
        c->add_option("--q", q);
    }
    c_encode->add_option("--message", message_csv, "comma-separated digits")->required();
    c_decode->add_option("--word", word_csv, "comma-separated integers")->required();

    // ball-size
    auto* c_ball = app.add_subcommand("ball-size", "permutations within distance d of a fixed center");
    c_ball->add_option("--n", n)->required();
    c_ball->add_option("--d", d)->required();

    // bounds
    auto* c_bounds = app.add_subcommand("bounds", "best-known-bound grid");
    int n_max = 8, d_max = 4;
    std::string format = "text";
    c_bounds->add_option("--n-max", n_max)->required();
    c_bounds->add_option("--d-max", d_max)->required();
    c_bounds->add_option("--format", format)->check(CLI::IsMember({"text", "csv", "json"}));

    // mu
    auto* c_mu = app.add_subcommand("mu", "growth-rate estimate");
    int mu_n_max = 40;
    c_mu->add_option("--d", d)->required();
    c_mu->add_option("--n-max", mu_n_max);

    // greedy / exact
    auto* c_greedy = app.add_subcommand("greedy", "deterministic greedy lexicographic scan");
    auto* c_exact = app.add_subcommand("exact", "exact maximum PA (tiny n)");
    bool force = false, do_register = false;
    for (auto* c : {c_greedy, c_exact}) {
        c->add_option("--n", n)->required();
        c->add_option("--d", d)->required();
        c->add_flag("--force", force, "raise the feasibility guard to this n");
        c->add_flag("--register", do_register, "record the result in the cache");
    }
    c_greedy->add_flag("--emit-words", emit_words);
    c_exact->add_flag("--emit-words", emit_words);

    // simulate
    auto* c_sim = app.add_subcommand("simulate", "Monte-Carlo PAM/AWGN channel run");
    std::string codec_name = "binary";
    ChannelConfig cfg;
    c_sim->add_option("--codec", codec_name)->check(CLI::IsMember({"binary", "qary", "explicit"}));
    c_sim->add_option("--n", n)->required();
    c_sim->add_option("--d", d)->required();
    c_sim->add_option("--q", q);
    c_sim->add_option("--sigma", cfg.sigma)->required();
    c_sim->add_option("--trials", cfg.trials)->required();
    c_sim->add_option("--seed", cfg.seed)->required();
    c_sim->add_flag("--clip", cfg.clip);
    c_sim->add_option("--clip-radius", cfg.clip_radius);
    c_sim->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    // reproduce-tables
    auto* c_tables = app.add_subcommand("reproduce-tables", "emit the growth-rate and bounds tables");
    c_tables->add_option("--mu-n-max", mu_n_max);
    c_tables->add_option("--n-max", n_max);
    c_tables->add_option("--d-max", d_max);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        Cache cache(cache_dir_flag, max_band);
        auto ns = std::to_string(n), ds = std::to_string(d), qs = std::to_string(q);

        if (*c_construct)
            return run_construct(kind, n, d, q, max_words, emit_words,
                                 {{"kind", kind}, {"n", ns}, {"d", ds}, {"q", qs}});

        if (*c_encode) {
            auto digits = parse_csv_ints(message_csv, "--message");
            Permutation word = q == 2 ? encode_binary(digits, n, d) : encode_qary(digits, n, d, q);
            print_header("encode", {{"n", ns}, {"d", ds}, {"q", qs}, {"message", message_csv}});
            std::cout << to_string(word) << '\n';
            return 0;
        }
        if (*c_decode) {
            auto received = parse_csv_ints(word_csv, "--word");
            auto digits = q == 2 ? decode_binary(received, n, d) : decode_qary(received, n, d, q);
            print_header("decode", {{"n", ns}, {"d", ds}, {"q", qs}, {"word", word_csv}});
            std::cout << join_csv(digits) << '\n';
            return 0;
        }
        if (*c_ball) {
            print_header("ball-size", {{"n", ns}, {"d", ds}});
            std::cout << to_decimal(cache.balls.get(n, d)) << '\n';
            cache.persist_balls();
            return 0;
        }
        if (*c_bounds) {
            Params params{{"n-max", std::to_string(n_max)},
                          {"d-max", std::to_string(d_max)},
                          {"format", format}};
            auto seeds = grid_seeds(n_max, cache);
            auto grid = best_known_lower(n_max, d_max, seeds, cache.balls);
            emit_grid(grid, format, "bounds", params);
            cache.persist_balls();
            return 0;
        }
        if (*c_mu) {
            auto est = mu_estimate(d, mu_n_max, cache.balls);
            print_header("mu", {{"d", ds}, {"n-max", std::to_string(mu_n_max)}});
            std::cout << "estimate " << est.estimate << '\n' << "upper " << est.upper << '\n';
            std::cout << "ratios";
            for (double r : est.ratios) std::cout << ' ' << r;
            std::cout << '\n';
            cache.persist_balls();
            return 0;
        }
        if (*c_greedy || *c_exact) {
            bool exact = static_cast<bool>(*c_exact);
            int guard = exact ? kDefaultExactGuard : kDefaultGreedyGuard;
            if (force) guard = n;
            SearchResult res = exact ? exact_max_pa(n, d, guard) : greedy_lex(n, d, guard);
            emit_search_result(res, emit_words, exact ? "exact" : "greedy",
                               {{"n", ns}, {"d", ds}});
            if (do_register) cache.register_result(res, exact);
            return 0;
        }
        if (*c_sim) {
            CodecKind codec = parse_codec_kind(codec_name);
            return run_simulate(codec, n, d, q, cfg, format,
                                {{"codec", codec_name},
                                 {"n", ns},
                                 {"d", ds},
                                 {"q", qs},
                                 {"sigma", std::to_string(cfg.sigma)},
                                 {"trials", std::to_string(cfg.trials)},
                                 {"seed", std::to_string(cfg.seed)},
                                 {"clip", cfg.clip ? "1" : "0"},
                                 {"clip-radius", std::to_string(cfg.clip_radius)}});
        }
        if (*c_tables)
            return run_reproduce_tables(mu_n_max, n_max, d_max, cache,
                                        {{"mu-n-max", std::to_string(mu_n_max)},
                                         {"n-max", std::to_string(n_max)},
                                         {"d-max", std::to_string(d_max)}});
    } catch (const precondition_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const resource_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
