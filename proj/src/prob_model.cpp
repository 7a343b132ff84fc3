#include "streak/prob_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "streak/errors.hpp"
#include "streak/rng.hpp"

namespace streak {

namespace {

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

bool parse_double(std::string_view text, double& out) {
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

bool parse_positive_integer(std::string_view text, std::uint64_t& out) {
    if (text.empty()) return false;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size() && out > 0;
}

std::string describe(const OutcomeDistribution& d) {
    return "(loss=" + format_number(d.loss) + ", draw=" + format_number(d.draw) +
           ", win=" + format_number(d.win) + ")";
}

}  // namespace

std::string format_number(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ec == std::errc() ? ptr : buf);
}

ValidationReport validate(std::span<const OutcomeDistribution> games) {
    ValidationReport report;
    if (games.empty()) report.violations.push_back({0, kRuleNonEmpty, {}});
    for (std::size_t i = 0; i < games.size(); ++i) {
        const auto& g = games[i];
        const bool in_range = in_unit_interval(g.loss) && in_unit_interval(g.draw) && in_unit_interval(g.win);
        if (!in_range) {
            report.violations.push_back({i + 1, kRuleComponentRange, g});
        } else if (std::abs(g.loss + g.draw + g.win - 1.0) > kSumTolerance) {
            report.violations.push_back({i + 1, kRuleTripletSum, g});
        }
        // NaN fails both range comparisons above, so it lands in the range rule.
    }
    report.ok = report.violations.empty();
    return report;
}

ProbabilitySequence::ProbabilitySequence(std::vector<OutcomeDistribution> games) : games_(std::move(games)) {
    const auto report = validate(std::span<const OutcomeDistribution>(games_));
    if (!report.ok) {
        const auto& v = report.violations.front();
        if (v.rule == kRuleNonEmpty) throw InputError(0, "sequence must contain at least one game");
        throw InputError(0, "game " + std::to_string(v.game) + " violates " + v.rule + ": " + describe(v.values));
    }
}

bool ProbabilitySequence::draw_free() const noexcept {
    return std::all_of(games_.begin(), games_.end(), [](const auto& g) { return g.draw == 0.0; });
}

ProbabilitySequence load_sequence(std::istream& in) {
    std::vector<OutcomeDistribution> games;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;

    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;

        const auto fields = split_fields(body);
        if (!header_seen) {
            if (fields.size() != 4 || fields[0] != "game" || fields[1] != "loss" || fields[2] != "draw" ||
                fields[3] != "win") {
                throw InputError(line_no, "expected header 'game,loss,draw,win'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 4) {
            throw InputError(line_no, "expected 4 fields, found " + std::to_string(fields.size()));
        }
        std::uint64_t game_id = 0;
        if (!parse_positive_integer(fields[0], game_id)) {
            throw InputError(line_no, "game column must be a positive integer, got '" + std::string(fields[0]) + "'");
        }
        OutcomeDistribution d;
        double* targets[] = {&d.loss, &d.draw, &d.win};
        const char* names[] = {"loss", "draw", "win"};
        for (int c = 0; c < 3; ++c) {
            if (!parse_double(fields[c + 1], *targets[c])) {
                throw InputError(line_no, std::string(names[c]) + " is not a number: '" + std::string(fields[c + 1]) + "'");
            }
            if (!in_unit_interval(*targets[c])) {
                throw InputError(line_no, std::string(names[c]) + " outside [0,1]: " + format_number(*targets[c]));
            }
        }
        const double sum = d.loss + d.draw + d.win;
        if (std::abs(sum - 1.0) > kSumTolerance) {
            throw InputError(line_no, "triplet sums to " + format_number(sum) + ", expected 1 within 1e-9");
        }
        games.push_back(d);
    }
    if (!header_seen) throw InputError(0, "empty input: missing header 'game,loss,draw,win'");
    if (games.empty()) throw InputError(line_no, "no data rows");
    return ProbabilitySequence(std::move(games));
}

ProbabilitySequence load_sequence_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(0, "cannot open '" + path + "'");
    return load_sequence(in);
}

void write_sequence(std::ostream& out, const ProbabilitySequence& seq) {
    out << "game,loss,draw,win\n";
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto& g = seq[i];
        out << (i + 1) << ',' << format_number(g.loss) << ',' << format_number(g.draw) << ','
            << format_number(g.win) << '\n';
    }
}

ProbabilitySequence merge_draws(const ProbabilitySequence& seq) {
    std::vector<OutcomeDistribution> merged;
    merged.reserve(seq.size());
    for (const auto& g : seq) merged.push_back({g.loss, 0.0, g.win + g.draw});
    return ProbabilitySequence(std::move(merged));
}

// Scenarios ------------------------------------------------------------------

namespace {

struct LawRange {
    double lo;
    double hi;
};

LawRange check_law(const ComponentLaw& law, const char* name) {
    if (const auto* u = std::get_if<Uniform>(&law)) {
        if (!(in_unit_interval(u->lo) && in_unit_interval(u->hi)) || u->lo > u->hi) {
            throw InputError(0, std::string(name) + ": uniform interval must satisfy 0 <= a <= b <= 1");
        }
        return {u->lo, u->hi};
    }
    if (const auto* c = std::get_if<Constant>(&law)) {
        if (!in_unit_interval(c->value)) throw InputError(0, std::string(name) + ": constant outside [0,1]");
        return {c->value, c->value};
    }
    return {0.0, 0.0};
}

double sample(const ComponentLaw& law, rng::Engine& engine) {
    if (const auto* u = std::get_if<Uniform>(&law)) return u->lo + (u->hi - u->lo) * rng::unit_uniform(engine);
    return std::get<Constant>(law).value;
}

}  // namespace

void check_scenario(const ScenarioSpec& spec) {
    if (spec.n == 0) throw InputError(0, "scenario needs n >= 1");
    if (std::holds_alternative<Remainder>(spec.draw)) throw InputError(0, "draw cannot be the remainder");
    const bool loss_rem = std::holds_alternative<Remainder>(spec.loss);
    const bool win_rem = std::holds_alternative<Remainder>(spec.win);
    if (loss_rem == win_rem) throw InputError(0, "exactly one of loss and win must be the remainder");

    const auto draw = check_law(spec.draw, "draw");
    const auto other = loss_rem ? check_law(spec.win, "win") : check_law(spec.loss, "loss");
    if (draw.hi + other.hi > 1.0) {
        throw InputError(0, std::string("remainder (") + (loss_rem ? "loss" : "win") +
                                ") can go negative: sampled components reach " + format_number(draw.hi + other.hi));
    }
}

ProbabilitySequence generate_scenario(const ScenarioSpec& spec) {
    check_scenario(spec);
    const bool loss_rem = std::holds_alternative<Remainder>(spec.loss);
    rng::Engine engine(spec.seed);

    std::vector<OutcomeDistribution> games(spec.n);
    for (auto& g : games) {
        g.draw = sample(spec.draw, engine);
        if (loss_rem) {
            g.win = sample(spec.win, engine);
            g.loss = std::max(0.0, 1.0 - g.draw - g.win);
        } else {
            g.loss = sample(spec.loss, engine);
            g.win = std::max(0.0, 1.0 - g.draw - g.loss);
        }
    }
    return ProbabilitySequence(std::move(games));
}

ComponentLaw parse_component_law(const std::string& text) {
    const std::string_view t = trim(text);
    if (t == "remainder") return Remainder{};
    const auto colon = t.find(':');
    if (colon == std::string_view::npos) {
        throw InputError(0, "bad distribution '" + text + "': use uniform:a,b | constant:x | remainder");
    }
    const auto family = t.substr(0, colon);
    const auto params = split_fields(t.substr(colon + 1));
    if (family == "uniform" && params.size() == 2) {
        Uniform u;
        if (parse_double(params[0], u.lo) && parse_double(params[1], u.hi)) return u;
    } else if (family == "constant" && params.size() == 1) {
        Constant c;
        if (parse_double(params[0], c.value)) return c;
    }
    throw InputError(0, "bad distribution '" + text + "': use uniform:a,b | constant:x | remainder");
}

std::string to_string(const ComponentLaw& law) {
    if (const auto* u = std::get_if<Uniform>(&law)) return "uniform:" + format_number(u->lo) + "," + format_number(u->hi);
    if (const auto* c = std::get_if<Constant>(&law)) return "constant:" + format_number(c->value);
    return "remainder";
}

}  // namespace streak
