#pragma once

// Ground truth for small n: the literal streak definitions and exhaustive
// enumeration over every outcome sequence.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "streak/exact_engine.hpp"
#include "streak/prob_model.hpp"

namespace streak {

/// Game result; the value is the score in half points.
enum class Outcome : std::uint8_t { loss = 0, draw = 1, win = 2 };

using OutcomeSequence = std::vector<Outcome>;

inline constexpr std::size_t kEnumerationCap = 16;

/// Window definition of each streak kind:
///   pure       some k consecutive games are all wins
///   nonlosing  some k consecutive games contain no loss
///   inbetween  some k+1 consecutive games score at least k + 1/2
bool has_streak(std::span<const Outcome> outcomes, StreakQuery query);

/// Sum over all outcome sequences of P(sequence) * has_streak. Iterates a
/// base-3 counter (base 2 when the sequence is draw-free). Throws CapError
/// when n > kEnumerationCap.
double enumerate(const ProbabilitySequence& seq, StreakQuery query);

/// Same loop without the indicator; should be 1 up to rounding.
double enumerate_total_mass(const ProbabilitySequence& seq);

/// Online streak scan, one game at a time.
///
/// level() is the largest k for which the games seen so far hold a streak
/// (0 if none), so has_streak(seen, {kind, k}) == (level() >= k). The
/// in-between level is the longest stretch with no loss and at most one
/// draw, minus one.
class StreakScanner {
public:
    explicit StreakScanner(StreakKind kind) : kind_(kind) {}

    void push(Outcome outcome);
    std::size_t level() const noexcept { return level_; }

private:
    StreakKind kind_;
    std::size_t index_ = 0;       // games pushed so far
    std::size_t run_start_ = 0;   // first game of the current qualifying stretch (0-based)
    std::size_t last_draw_ = 0;   // 1-based index of the latest draw in the stretch, 0 if none
    std::size_t level_ = 0;
};

}  // namespace streak
