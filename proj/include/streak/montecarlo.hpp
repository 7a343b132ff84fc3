#pragma once

// Seeded Monte-Carlo estimate of a streak probability.
//
// Replicate r draws its games from rng::stream_engine(seed, r), one uniform
// per game in game order, so a result depends only on (sequence, query,
// reps, seed) and not on the number of worker threads.

#include <cstdint>
#include <span>
#include <vector>

#include "streak/exact_engine.hpp"
#include "streak/oracle.hpp"
#include "streak/prob_model.hpp"
#include "streak/rng.hpp"

namespace streak {

enum class IntervalMethod { normal_approximation };

struct SimulationResult {
    int k = 0;
    double estimate = 0.0;
    std::uint64_t successes = 0;
    std::uint64_t reps = 0;
    std::uint64_t seed = 0;
    double level = 0.95;
    double ci_low = 0.0;
    double ci_high = 0.0;
    IntervalMethod method = IntervalMethod::normal_approximation;

    /// sqrt(p (1 - p) / reps) at the estimate.
    double standard_error() const;
};

struct Interval {
    double low;
    double high;
};

/// p +- z sqrt(p (1 - p) / reps), z the two-sided normal quantile for
/// `level`, clamped to [0, 1]. Throws std::invalid_argument for reps = 0 or
/// level outside (0, 1).
Interval normal_interval(std::uint64_t successes, std::uint64_t reps, double level);

/// Inverse CDF over (loss, draw, win) in that order: u < loss is a loss,
/// u < loss + draw a draw, otherwise a win.
Outcome sample_outcome(const OutcomeDistribution& game, double u);

OutcomeSequence sample_outcomes(const ProbabilitySequence& seq, rng::Engine& engine);

/// `threads` = 0 uses the hardware concurrency.
SimulationResult simulate(const ProbabilitySequence& seq, StreakQuery query, std::uint64_t reps, std::uint64_t seed,
                          double level = 0.95, unsigned threads = 0);

/// One simulation shared across several k of the same kind. Entry i equals
/// simulate(seq, {kind, ks[i]}, reps, seed, level) exactly.
std::vector<SimulationResult> simulate_many(const ProbabilitySequence& seq, StreakKind kind, std::span<const int> ks,
                                            std::uint64_t reps, std::uint64_t seed, double level = 0.95,
                                            unsigned threads = 0);

}  // namespace streak
