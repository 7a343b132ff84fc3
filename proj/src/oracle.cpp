#include "streak/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "streak/errors.hpp"

namespace streak {

namespace {

// Per-game credit, window length and the credit total a window must reach.
struct WindowRule {
    std::size_t width;
    int need;
    int (*credit)(Outcome);
};

WindowRule window_rule(StreakQuery query) {
    const auto k = static_cast<std::size_t>(query.k);
    switch (query.kind) {
        case StreakKind::pure:
            return {k, query.k, [](Outcome o) { return o == Outcome::win ? 1 : 0; }};
        case StreakKind::nonlosing:
            return {k, query.k, [](Outcome o) { return o == Outcome::loss ? 0 : 1; }};
        case StreakKind::inbetween:
            return {k + 1, 2 * query.k + 1, [](Outcome o) { return static_cast<int>(o); }};
    }
    throw std::invalid_argument("unknown streak kind");
}

double outcome_probability(const OutcomeDistribution& d, Outcome o) {
    switch (o) {
        case Outcome::loss: return d.loss;
        case Outcome::draw: return d.draw;
        case Outcome::win: return d.win;
    }
    return 0.0;
}

void check_cap(const ProbabilitySequence& seq) {
    if (seq.size() > kEnumerationCap) {
        throw CapError("enumeration is capped at " + std::to_string(kEnumerationCap) + " games, got " +
                       std::to_string(seq.size()));
    }
}

// Calls visit(outcomes, probability) for every outcome sequence in counter order.
template <typename Visit>
void for_each_outcome_sequence(const ProbabilitySequence& seq, Visit visit) {
    const std::size_t n = seq.size();
    const bool binary = seq.draw_free();
    const Outcome digits_binary[] = {Outcome::loss, Outcome::win};
    const Outcome digits_ternary[] = {Outcome::loss, Outcome::draw, Outcome::win};
    const Outcome* digits = binary ? digits_binary : digits_ternary;
    const std::size_t base = binary ? 2 : 3;

    std::vector<std::size_t> counter(n, 0);
    OutcomeSequence outcomes(n, digits[0]);
    while (true) {
        double p = 1.0;
        for (std::size_t i = 0; i < n; ++i) p *= outcome_probability(seq[i], outcomes[i]);
        visit(std::span<const Outcome>(outcomes), p);

        std::size_t pos = 0;
        while (pos < n && ++counter[pos] == base) {
            counter[pos] = 0;
            outcomes[pos] = digits[0];
            ++pos;
        }
        if (pos == n) break;
        outcomes[pos] = digits[counter[pos]];
    }
}

}  // namespace

bool has_streak(std::span<const Outcome> outcomes, StreakQuery query) {
    if (query.k < 1) throw std::invalid_argument("streak length k must be >= 1");
    const auto rule = window_rule(query);
    if (outcomes.size() < rule.width) return false;

    int sum = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        sum += rule.credit(outcomes[i]);
        if (i >= rule.width) sum -= rule.credit(outcomes[i - rule.width]);
        if (i + 1 >= rule.width && sum >= rule.need) return true;
    }
    return false;
}

double enumerate(const ProbabilitySequence& seq, StreakQuery query) {
    if (query.k < 1) throw std::invalid_argument("streak length k must be >= 1");
    check_cap(seq);
    long double total = 0.0L;
    for_each_outcome_sequence(seq, [&](std::span<const Outcome> outcomes, double p) {
        if (has_streak(outcomes, query)) total += p;
    });
    return static_cast<double>(total);
}

double enumerate_total_mass(const ProbabilitySequence& seq) {
    check_cap(seq);
    long double total = 0.0L;
    for_each_outcome_sequence(seq, [&](std::span<const Outcome>, double p) { total += p; });
    return static_cast<double>(total);
}

void StreakScanner::push(Outcome outcome) {
    const std::size_t i = index_++;
    bool extends = false;
    switch (kind_) {
        case StreakKind::pure: extends = outcome == Outcome::win; break;
        case StreakKind::nonlosing: extends = outcome != Outcome::loss; break;
        case StreakKind::inbetween:
            extends = outcome != Outcome::loss;
            if (outcome == Outcome::draw) {
                // A second draw restarts the stretch just after the first one.
                if (last_draw_ != 0) run_start_ = last_draw_;
                last_draw_ = i + 1;
            }
            break;
    }
    if (!extends) {
        run_start_ = i + 1;
        last_draw_ = 0;
        return;
    }
    const std::size_t length = i + 1 - run_start_;
    const std::size_t level = kind_ == StreakKind::inbetween ? length - 1 : length;
    level_ = std::max(level_, level);
}

}  // namespace streak
