#pragma once

// Exact streak probabilities by forward recurrence over the games.
//
// pure       only wins extend a streak; "streak of k" = k consecutive wins.
// nonlosing  wins and draws extend; the pure recurrence on merge_draws(seq).
// inbetween  "streak of k" = k+1 consecutive games scoring >= k + 1/2, i.e.
//            all wins or k wins and one draw. The recurrence uses an upper
//            bound for one boundary term (see h_term), so the no-streak value
//            is an upper bound and the streak probability a lower bound.
//
// Index conventions used throughout (games are 1-based in the formulas):
//   no-streak value = 1 at every index <= 0, and for m < k (pure) or m <= k
//   (inbetween); virtual game 0 is a certain loss; sum terms whose index
//   falls below 0 are dropped.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "streak/prob_model.hpp"

namespace streak {

enum class StreakKind { pure, nonlosing, inbetween };

std::string_view to_string(StreakKind kind);
/// Accepts pure | nonlosing | non-losing | inbetween | in-between.
StreakKind parse_streak_kind(std::string_view text);

struct StreakQuery {
    StreakKind kind = StreakKind::pure;
    int k = 1;
};

/// Probability of no streak within the first m games, for m = 1..n.
struct NoStreakCurve {
    StreakKind kind = StreakKind::pure;
    int k = 1;
    std::vector<double> values;  // values[m - 1] holds the value for m games

    std::size_t n() const noexcept { return values.size(); }
    double at(std::size_t m) const { return values.at(m - 1); }
    double final_value() const { return values.back(); }
    double streak_probability() const { return 1.0 - values.back(); }
};

/// Streak probability over all n games for k = 1..k_max.
struct StreakGrid {
    StreakKind kind = StreakKind::pure;
    int k_max = 0;
    std::size_t n = 0;
    std::vector<double> streak_probability;  // [k - 1]
};

/// Pure-win curve. Requires a draw-free sequence; k > n gives all ones.
NoStreakCurve pure_no_streak_curve(const ProbabilitySequence& seq, int k);

/// Pure curve of merge_draws(seq).
NoStreakCurve nonlosing_no_streak_curve(const ProbabilitySequence& seq, int k);
double nonlosing_streak_probability(const ProbabilitySequence& seq, int k);

/// In-between curve, O(n k). k + 1 > n gives all ones.
NoStreakCurve inbetween_no_streak_curve(const ProbabilitySequence& seq, int k);

/// Boundary term h_{a,b,k}: probability that the first b games hold no
/// in-between streak, game a is a non-win and games a+1..b are all wins.
///
///   b - a == k:  g(a-1) * loss(a) * prod_{j=a+1..b} win(j)         (exact)
///   b - a <  k:  g(a-1) * (loss(a) + draw(a)) * prod win(j)        (upper bound for a > 1)
///
/// `g` is a curve prefix laid out like NoStreakCurve::values (g[j-1] is the
/// value for j games); values for j <= k are 1 and need not be present.
/// Throws std::out_of_range when a > b, b - a > k, b > n, or g(a-1) is needed
/// but missing from `g`.
double h_term(std::size_t a, std::size_t b, int k, const ProbabilitySequence& seq, std::span<const double> g);

NoStreakCurve no_streak_curve(const ProbabilitySequence& seq, StreakQuery query);
double streak_probability(const ProbabilitySequence& seq, StreakQuery query);

/// k = 1..k_max, spread over `threads` workers (0 = hardware concurrency).
/// Output is identical for any thread count.
StreakGrid streak_grid(const ProbabilitySequence& seq, StreakKind kind, int k_max, unsigned threads = 0);

}  // namespace streak
