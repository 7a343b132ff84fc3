#include "streak/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "streak/errors.hpp"
#include "streak/exact_engine.hpp"
#include "streak/montecarlo.hpp"
#include "streak/oracle.hpp"
#include "streak/prob_model.hpp"

#ifndef STREAK_VERSION
#define STREAK_VERSION "dev"
#endif

namespace streak::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return hex.str();
}

struct LoadedInput {
    ProbabilitySequence seq;
    std::string digest;
};

LoadedInput load_input(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw InputError(0, "cannot open input '" + path + "'");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    const std::string bytes = buffer.str();
    std::istringstream in(bytes);
    return {load_sequence(in), sha256_hex(bytes)};
}

// `#`-prefixed manifest lines at the top of every CSV this tool writes.
class Manifest {
public:
    explicit Manifest(std::string command) { add("command", std::move(command)); }

    void add(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }

    void write(std::ostream& out) const {
        out << "# streak " << STREAK_VERSION << '\n';
        for (const auto& [key, value] : entries_) out << "# " << key << ": " << value << '\n';
    }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

void emit(const std::string& content, const std::string& output_path, std::ostream& out) {
    if (output_path.empty()) {
        out << content;
        return;
    }
    std::ofstream file(output_path, std::ios::binary | std::ios::trunc);
    if (!file) throw InputError(0, "cannot open output '" + output_path + "'");
    file << content;
    if (!file) throw std::runtime_error("failed writing '" + output_path + "'");
}

std::string join_ints(const std::vector<int>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + std::to_string(values[i]);
    return s;
}

const std::vector<std::string> kKindNames = {"pure", "nonlosing", "non-losing", "inbetween", "in-between"};

// Options --------------------------------------------------------------------

struct ExactOptions {
    std::string input, kind, output;
    std::optional<int> k, max_k;
    unsigned threads = 0;
};

struct SimulateOptions {
    std::string input, kind, output;
    int k = 0;
    std::uint64_t reps = 0, seed = 0;
    double level = 0.95;
    unsigned threads = 0;
};

struct ScenarioOptions {
    std::size_t n = 0;
    std::string win, draw = "constant:0", loss, output;
    std::uint64_t seed = 0;
};

struct TableOptions {
    std::string input, kind, output;
    std::vector<int> ks;
    std::uint64_t reps = 0, seed = 0;
    double level = 0.95;
    unsigned threads = 0;
};

struct OracleOptions {
    std::string input, kind;
    int k = 0;
};

// Commands -------------------------------------------------------------------

void cmd_exact(const ExactOptions& opt, std::ostream& out) {
    if (opt.k.has_value() == opt.max_k.has_value()) throw UsageError("exact: give exactly one of --k or --max-k");
    const auto input = load_input(opt.input);
    const auto kind = parse_streak_kind(opt.kind);

    Manifest manifest("exact");
    manifest.add("input", opt.input);
    manifest.add("input_sha256", input.digest);
    manifest.add("games", std::to_string(input.seq.size()));
    manifest.add("kind", std::string(to_string(kind)));

    std::ostringstream body;
    if (opt.max_k) {
        const auto grid = streak_grid(input.seq, kind, *opt.max_k, opt.threads);
        manifest.add("max_k", std::to_string(*opt.max_k));
        manifest.write(body);
        body << "k,streak_probability\n";
        for (int k = 1; k <= grid.k_max; ++k) body << k << ',' << format_number(grid.streak_probability[k - 1]) << '\n';
    } else {
        const auto curve = no_streak_curve(input.seq, {kind, *opt.k});
        manifest.add("k", std::to_string(*opt.k));
        manifest.write(body);
        body << "m,no_streak_probability\n";
        for (std::size_t m = 1; m <= curve.n(); ++m) body << m << ',' << format_number(curve.at(m)) << '\n';
    }
    emit(body.str(), opt.output, out);
}

void write_interval_manifest(Manifest& manifest, std::uint64_t reps, std::uint64_t seed, double level) {
    manifest.add("reps", std::to_string(reps));
    manifest.add("seed", std::to_string(seed));
    manifest.add("interval", "normal-approximation, level " + format_number(level));
    manifest.add("rng", "mt19937_64 per replicate, seeded by SplitMix64(seed) output r+1");
}

void cmd_simulate(const SimulateOptions& opt, std::ostream& out) {
    const auto input = load_input(opt.input);
    const auto kind = parse_streak_kind(opt.kind);
    const auto res = simulate(input.seq, {kind, opt.k}, opt.reps, opt.seed, opt.level, opt.threads);

    Manifest manifest("simulate");
    manifest.add("input", opt.input);
    manifest.add("input_sha256", input.digest);
    manifest.add("games", std::to_string(input.seq.size()));
    manifest.add("kind", std::string(to_string(kind)));
    write_interval_manifest(manifest, opt.reps, opt.seed, opt.level);

    std::ostringstream body;
    manifest.write(body);
    body << "k,estimate,ci_low,ci_high,reps,seed\n";
    body << res.k << ',' << format_number(res.estimate) << ',' << format_number(res.ci_low) << ','
         << format_number(res.ci_high) << ',' << res.reps << ',' << res.seed << '\n';
    emit(body.str(), opt.output, out);
}

void cmd_scenario(const ScenarioOptions& opt, std::ostream& out) {
    ScenarioSpec spec;
    spec.n = opt.n;
    spec.seed = opt.seed;
    spec.draw = parse_component_law(opt.draw);
    if (opt.win.empty() && opt.loss.empty()) throw UsageError("scenario: give --win or --loss");
    spec.win = opt.win.empty() ? ComponentLaw{Remainder{}} : parse_component_law(opt.win);
    spec.loss = opt.loss.empty() ? ComponentLaw{Remainder{}} : parse_component_law(opt.loss);
    const auto seq = generate_scenario(spec);

    Manifest manifest("scenario");
    manifest.add("games", std::to_string(spec.n));
    manifest.add("loss", to_string(spec.loss));
    manifest.add("draw", to_string(spec.draw));
    manifest.add("win", to_string(spec.win));
    manifest.add("seed", std::to_string(spec.seed));
    manifest.add("rng", "mt19937_64(seed); per game draw, loss, win; u = (x >> 11) * 2^-53");

    std::ostringstream body;
    manifest.write(body);
    write_sequence(body, seq);
    emit(body.str(), opt.output, out);
}

void cmd_table(const TableOptions& opt, std::ostream& out) {
    if (opt.ks.empty()) throw UsageError("table: --k needs at least one value");
    const auto input = load_input(opt.input);
    const auto kind = parse_streak_kind(opt.kind);
    const auto estimates = simulate_many(input.seq, kind, opt.ks, opt.reps, opt.seed, opt.level, opt.threads);

    Manifest manifest("table");
    manifest.add("input", opt.input);
    manifest.add("input_sha256", input.digest);
    manifest.add("games", std::to_string(input.seq.size()));
    manifest.add("kind", std::string(to_string(kind)));
    manifest.add("k", join_ints(opt.ks));
    write_interval_manifest(manifest, opt.reps, opt.seed, opt.level);

    std::ostringstream body;
    manifest.write(body);
    body << "k,exact,mc_estimate,ci_low,ci_high\n";
    for (std::size_t i = 0; i < opt.ks.size(); ++i) {
        const double exact = streak_probability(input.seq, {kind, opt.ks[i]});
        const auto& mc = estimates[i];
        body << opt.ks[i] << ',' << format_number(exact) << ',' << format_number(mc.estimate) << ','
             << format_number(mc.ci_low) << ',' << format_number(mc.ci_high) << '\n';
    }
    emit(body.str(), opt.output, out);
}

void cmd_oracle(const OracleOptions& opt, std::ostream& out) {
    const auto input = load_input(opt.input);
    const auto kind = parse_streak_kind(opt.kind);
    out << format_number(enumerate(input.seq, {kind, opt.k})) << '\n';
}

const CLI::Validator kAtLeastOne(
    [](std::string& text) -> std::string {
        long long v = 0;
        const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || end != text.data() + text.size() || v < 1) return "must be an integer >= 1, got " + text;
        return {};
    },
    "INT>=1");

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact and simulated probabilities of winning streaks", "streak"};
    app.require_subcommand(1);
    app.set_version_flag("--version", STREAK_VERSION);

    auto add_kind = [](CLI::App* sub, std::string& target) {
        sub->add_option("--kind", target, "pure | nonlosing | inbetween")->required()->check(CLI::IsMember(kKindNames));
    };

    ExactOptions exact;
    auto* exact_cmd = app.add_subcommand("exact", "Exact no-streak curve (--k) or streak grid (--max-k)");
    exact_cmd->add_option("--input", exact.input, "Sequence CSV")->required();
    add_kind(exact_cmd, exact.kind);
    exact_cmd->add_option("--k", exact.k, "Streak length; writes the no-streak curve")->check(kAtLeastOne);
    exact_cmd->add_option("--max-k", exact.max_k, "Writes streak probabilities for k = 1..max-k")
        ->check(kAtLeastOne);
    exact_cmd->add_option("--output", exact.output, "Output CSV (default stdout)");
    exact_cmd->add_option("--threads", exact.threads, "Worker threads (0 = all cores)");

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo estimate with a normal-approximation interval");
    sim_cmd->add_option("--input", sim.input, "Sequence CSV")->required();
    add_kind(sim_cmd, sim.kind);
    sim_cmd->add_option("--k", sim.k, "Streak length")->required()->check(kAtLeastOne);
    sim_cmd->add_option("--reps", sim.reps, "Replicates")->required()->check(kAtLeastOne);
    sim_cmd->add_option("--seed", sim.seed, "Random seed")->required();
    sim_cmd->add_option("--level", sim.level, "Confidence level")->check(CLI::Range(0.0, 1.0));
    sim_cmd->add_option("--output", sim.output, "Output CSV (default stdout)");
    sim_cmd->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");

    ScenarioOptions scen;
    auto* scen_cmd = app.add_subcommand("scenario", "Generate a synthetic sequence from uniform families");
    scen_cmd->add_option("--n", scen.n, "Number of games")->required()->check(kAtLeastOne);
    scen_cmd->add_option("--win", scen.win, "uniform:a,b | constant:x | remainder");
    scen_cmd->add_option("--draw", scen.draw, "uniform:a,b | constant:x")->capture_default_str();
    scen_cmd->add_option("--loss", scen.loss, "uniform:a,b | constant:x | remainder");
    scen_cmd->add_option("--seed", scen.seed, "Random seed")->required();
    scen_cmd->add_option("--output", scen.output, "Output CSV (default stdout)");

    TableOptions table;
    auto* table_cmd = app.add_subcommand("table", "Exact vs Monte-Carlo comparison for a list of k");
    table_cmd->add_option("--input", table.input, "Sequence CSV")->required();
    add_kind(table_cmd, table.kind);
    table_cmd->add_option("--k", table.ks, "Comma-separated streak lengths")
        ->required()
        ->delimiter(',')
        ->check(kAtLeastOne);
    table_cmd->add_option("--reps", table.reps, "Replicates")->required()->check(kAtLeastOne);
    table_cmd->add_option("--seed", table.seed, "Random seed")->required();
    table_cmd->add_option("--level", table.level, "Confidence level")->check(CLI::Range(0.0, 1.0));
    table_cmd->add_option("--output", table.output, "Output CSV (default stdout)");
    table_cmd->add_option("--threads", table.threads, "Worker threads (0 = all cores)");

    OracleOptions oracle;
    auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive enumeration (n <= 16)");
    oracle_cmd->add_option("--input", oracle.input, "Sequence CSV")->required();
    add_kind(oracle_cmd, oracle.kind);
    oracle_cmd->add_option("--k", oracle.k, "Streak length")->required()->check(kAtLeastOne);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const auto started = std::chrono::steady_clock::now();
    try {
        if (*exact_cmd) cmd_exact(exact, out);
        else if (*sim_cmd) cmd_simulate(sim, out);
        else if (*scen_cmd) cmd_scenario(scen, out);
        else if (*table_cmd) cmd_table(table, out);
        else if (*oracle_cmd) cmd_oracle(oracle, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InputError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "invalid argument: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CapError& e) {
        err << "limit exceeded: " << e.what() << '\n';
        return kExitCap;
    } catch (const NumericalError& e) {
        err << "numerical invariant violated: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started);
    err << "# elapsed_ms: " << format_number(std::round(elapsed.count() * 1000.0) / 1000.0) << '\n';
    return kExitOk;
}

}  // namespace streak::cli
