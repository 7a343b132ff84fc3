#include "streak/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/normal.hpp>

namespace streak {

namespace {

// Streak level reached by replicate `r`, sampling stops once `stop_at` is hit.
std::size_t replicate_level(const ProbabilitySequence& seq, StreakKind kind, std::uint64_t seed, std::uint64_t r,
                            std::size_t stop_at) {
    auto engine = rng::stream_engine(seed, r);
    StreakScanner scanner(kind);
    for (const auto& game : seq) {
        scanner.push(sample_outcome(game, rng::unit_uniform(engine)));
        if (scanner.level() >= stop_at) break;
    }
    return scanner.level();
}

void check_args(std::uint64_t reps, double level) {
    if (reps == 0) throw std::invalid_argument("reps must be >= 1");
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must lie in (0,1)");
}

}  // namespace

double SimulationResult::standard_error() const {
    return std::sqrt(estimate * (1.0 - estimate) / static_cast<double>(reps));
}

Interval normal_interval(std::uint64_t successes, std::uint64_t reps, double level) {
    check_args(reps, level);
    const double p = static_cast<double>(successes) / static_cast<double>(reps);
    const double z = boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + level / 2.0);
    const double half = z * std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
    return {std::clamp(p - half, 0.0, 1.0), std::clamp(p + half, 0.0, 1.0)};
}

Outcome sample_outcome(const OutcomeDistribution& game, double u) {
    if (u < game.loss) return Outcome::loss;
    if (u < game.loss + game.draw) return Outcome::draw;
    return Outcome::win;
}

OutcomeSequence sample_outcomes(const ProbabilitySequence& seq, rng::Engine& engine) {
    OutcomeSequence out;
    out.reserve(seq.size());
    for (const auto& game : seq) out.push_back(sample_outcome(game, rng::unit_uniform(engine)));
    return out;
}

SimulationResult simulate(const ProbabilitySequence& seq, StreakQuery query, std::uint64_t reps, std::uint64_t seed,
                          double level, unsigned threads) {
    const int ks[] = {query.k};
    return simulate_many(seq, query.kind, ks, reps, seed, level, threads).front();
}

std::vector<SimulationResult> simulate_many(const ProbabilitySequence& seq, StreakKind kind, std::span<const int> ks,
                                            std::uint64_t reps, std::uint64_t seed, double level, unsigned threads) {
    check_args(reps, level);
    if (ks.empty()) throw std::invalid_argument("need at least one k");
    for (int k : ks) {
        if (k < 1) throw std::invalid_argument("streak length k must be >= 1, got " + std::to_string(k));
    }
    const auto stop_at = static_cast<std::size_t>(*std::max_element(ks.begin(), ks.end()));

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, reps));

    // Contiguous replicate blocks; each worker keeps its own integer tallies
    // so the merged counts do not depend on scheduling.
    std::vector<std::vector<std::uint64_t>> tallies(threads, std::vector<std::uint64_t>(ks.size(), 0));
    std::vector<std::exception_ptr> failures(threads);
    auto work = [&](unsigned w) {
        try {
            const std::uint64_t begin = reps * w / threads;
            const std::uint64_t end = reps * (w + 1) / threads;
            for (std::uint64_t r = begin; r < end; ++r) {
                const auto reached = replicate_level(seq, kind, seed, r, stop_at);
                for (std::size_t i = 0; i < ks.size(); ++i) {
                    if (reached >= static_cast<std::size_t>(ks[i])) ++tallies[w][i];
                }
            }
        } catch (...) {
            failures[w] = std::current_exception();
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    }
    for (const auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }

    std::vector<SimulationResult> results;
    results.reserve(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        SimulationResult res;
        res.k = ks[i];
        res.reps = reps;
        res.seed = seed;
        res.level = level;
        for (const auto& t : tallies) res.successes += t[i];
        res.estimate = static_cast<double>(res.successes) / static_cast<double>(reps);
        const auto ci = normal_interval(res.successes, reps, level);
        res.ci_low = ci.low;
        res.ci_high = ci.high;
        results.push_back(res);
    }
    return results;
}

}  // namespace streak
