#pragma once

// Per-game outcome probabilities: the data model, CSV ingestion, validation,
// the non-losing reduction and uniform scenario generation.
//
// Games are assumed mutually independent; every engine in this project relies
// on that.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace streak {

inline constexpr double kSumTolerance = 1e-9;

struct OutcomeDistribution {
    double loss = 0.0;
    double draw = 0.0;
    double win = 0.0;

    friend bool operator==(const OutcomeDistribution&, const OutcomeDistribution&) = default;
};

struct Violation {
    std::size_t game = 0;  // 1-based
    std::string rule;
    OutcomeDistribution values;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
};

inline constexpr const char* kRuleComponentRange = "component in [0,1]";
inline constexpr const char* kRuleTripletSum = "loss + draw + win = 1";
inline constexpr const char* kRuleNonEmpty = "at least one game";

/// Lists every violated invariant. Never throws.
ValidationReport validate(std::span<const OutcomeDistribution> games);

/// Non-empty, validated, immutable list of per-game distributions.
class ProbabilitySequence {
public:
    /// Throws InputError describing the first violation if `games` is invalid.
    explicit ProbabilitySequence(std::vector<OutcomeDistribution> games);

    std::size_t size() const noexcept { return games_.size(); }
    const OutcomeDistribution& operator[](std::size_t i) const noexcept { return games_[i]; }
    std::span<const OutcomeDistribution> games() const noexcept { return games_; }
    auto begin() const noexcept { return games_.begin(); }
    auto end() const noexcept { return games_.end(); }

    bool draw_free() const noexcept;

    friend bool operator==(const ProbabilitySequence&, const ProbabilitySequence&) = default;

private:
    std::vector<OutcomeDistribution> games_;
};

inline ValidationReport validate(const ProbabilitySequence& seq) { return validate(seq.games()); }

/// Reads the `game,loss,draw,win` CSV format. Lines starting with '#' and
/// blank lines are skipped. Throws InputError with the offending line number.
ProbabilitySequence load_sequence(std::istream& in);
ProbabilitySequence load_sequence_file(const std::string& path);

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

/// Writes the canonical CSV (header plus one row per game). Values use the
/// shortest representation that parses back to the same double.
void write_sequence(std::ostream& out, const ProbabilitySequence& seq);

/// Folds draws into wins: (loss, draw, win) -> (loss, 0, win + draw).
ProbabilitySequence merge_draws(const ProbabilitySequence& seq);

// Scenario generation ------------------------------------------------------

struct Uniform {
    double lo = 0.0;
    double hi = 1.0;
};
struct Constant {
    double value = 0.0;
};
/// The component is 1 minus the other two.
struct Remainder {};

using ComponentLaw = std::variant<Uniform, Constant, Remainder>;

struct ScenarioSpec {
    std::size_t n = 0;
    ComponentLaw loss = Remainder{};
    ComponentLaw draw = Constant{0.0};
    ComponentLaw win = Uniform{0.0, 1.0};
    std::uint64_t seed = 0;
};

/// Throws InputError if the scenario cannot produce valid triplets: n = 0, an
/// interval outside [0,1] or reversed, a Remainder on draw, not exactly one
/// Remainder among loss/win, or maxima of the sampled parts summing above 1.
void check_scenario(const ScenarioSpec& spec);

/// Deterministic in (spec, seed). One std::mt19937_64 seeded with `seed`;
/// games in order, and within a game the uniform components in the order
/// draw, loss, win. Constants and the remainder consume no draws.
ProbabilitySequence generate_scenario(const ScenarioSpec& spec);

/// Parses "uniform:a,b", "constant:x" or "remainder". Throws InputError.
ComponentLaw parse_component_law(const std::string& text);
std::string to_string(const ComponentLaw& law);

}  // namespace streak
