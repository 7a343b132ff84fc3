#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "streak/errors.hpp"
#include "streak/exact_engine.hpp"
#include "support/test_support.hpp"

using namespace streak;

TEST_CASE("pure: certain win, one game") {
    const auto curve = pure_no_streak_curve(test::constant_sequence(1, 0.0, 0.0, 1.0), 1);
    CHECK(curve.at(1) == 0.0);
    CHECK(curve.streak_probability() == 1.0);
}

TEST_CASE("pure: 61 straight wins at 0.8") {
    const auto seq = test::constant_sequence(61, 0.2, 0.0, 0.8);
    const double p = pure_no_streak_curve(seq, 61).streak_probability();
    CHECK(p == doctest::Approx(std::pow(0.8, 61)).epsilon(1e-12));
    CHECK(std::abs(p - 1.2e-6) / 1.2e-6 < 0.05);
}

TEST_CASE("pure: fair coin, brute-force counts") {
    // Of the 32 strings of length 5, 13 avoid two consecutive wins.
    const auto five = pure_no_streak_curve(test::constant_sequence(5, 0.5, 0.0, 0.5), 2);
    CHECK(five.at(5) == doctest::Approx(13.0 / 32.0).epsilon(1e-15));
    CHECK(five.streak_probability() == doctest::Approx(19.0 / 32.0).epsilon(1e-15));
    // Of the 16 strings of length 4, 3 hold a run of three wins.
    const auto four = pure_no_streak_curve(test::constant_sequence(4, 0.5, 0.0, 0.5), 3);
    CHECK(four.at(4) == doctest::Approx(13.0 / 16.0).epsilon(1e-15));
    // Partial curve: m < k is 1, m = k is 1 - 2^-k.
    CHECK(four.at(1) == 1.0);
    CHECK(four.at(2) == 1.0);
    CHECK(four.at(3) == doctest::Approx(7.0 / 8.0).epsilon(1e-15));
}

TEST_CASE("pure: errors and trivial curves") {
    const auto with_draws = test::constant_sequence(3, 0.2, 0.3, 0.5);
    CHECK_THROWS_WITH_AS(pure_no_streak_curve(with_draws, 2), "pure path requires draw-free sequence",
                         std::invalid_argument);
    const auto seq = test::constant_sequence(3, 0.5, 0.0, 0.5);
    CHECK_THROWS_AS(pure_no_streak_curve(seq, 0), std::invalid_argument);
    CHECK_THROWS_AS(pure_no_streak_curve(seq, -3), std::invalid_argument);

    const auto long_k = pure_no_streak_curve(seq, 10);
    REQUIRE(long_k.n() == 3);
    for (double v : long_k.values) CHECK(v == 1.0);
}

TEST_CASE("pure: two-run closed form for n = k, streak k - 1") {
    // No run of k-1 wins in k games: inclusion-exclusion over the two run
    // positions puts + on the all-k product.
    test::Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const int k = 2 + trial % 9;
        const auto seq = test::random_draw_free(rng, static_cast<std::size_t>(k));
        double first = 1, last = 1, all = 1;
        for (int i = 0; i < k; ++i) {
            const double w = seq[static_cast<std::size_t>(i)].win;
            if (i < k - 1) first *= w;
            if (i > 0) last *= w;
            all *= w;
        }
        const double engine = pure_no_streak_curve(seq, k - 1).at(static_cast<std::size_t>(k));
        CHECK(engine == doctest::Approx(1 - first - last + all).epsilon(1e-14));
        if (all > 1e-6) CHECK(std::abs(engine - (1 - first - last - all)) > 1e-7);
    }
}

TEST_CASE("pure: zero and one probabilities inside the sliding window") {
    // win probabilities of exactly 0 or 1 must neither divide by zero nor stick.
    std::vector<OutcomeDistribution> games;
    for (int i = 0; i < 40; ++i) {
        const double w = (i % 7 == 3) ? 0.0 : (i % 5 == 0 ? 1.0 : 0.9);
        games.push_back({1.0 - w, 0.0, w});
    }
    const ProbabilitySequence seq(games);
    for (int k = 1; k <= 12; ++k) {
        const auto curve = pure_no_streak_curve(seq, k);
        for (std::size_t m = 2; m <= curve.n(); ++m) CHECK(curve.at(m) <= curve.at(m - 1));
    }
    // A certain loss every 7th game caps any run of wins at 6.
    const auto curve7 = pure_no_streak_curve(seq, 7);
    CHECK(curve7.final_value() == 1.0);
}

TEST_CASE("nonlosing: examples") {
    const auto seq = test::constant_sequence(2, 0.2, 0.3, 0.5);
    CHECK(nonlosing_streak_probability(seq, 2) == doctest::Approx(0.64).epsilon(1e-15));

    const auto all_loss = test::constant_sequence(5, 1.0, 0.0, 0.0);
    for (int k = 1; k <= 6; ++k) CHECK(nonlosing_streak_probability(all_loss, k) == 0.0);

    test::Rng rng(3);
    const auto draw_free = test::random_draw_free(rng, 25);
    for (int k = 1; k <= 8; ++k) {
        CHECK(nonlosing_streak_probability(draw_free, k) == pure_no_streak_curve(draw_free, k).streak_probability());
    }
    CHECK_THROWS_AS(nonlosing_streak_probability(seq, 0), std::invalid_argument);
}

TEST_CASE("inbetween: two games, k = 1") {
    // Score >= 1.5 over two games: WW + WD + DW = 0.25 + 0.125 + 0.125.
    const auto seq = test::constant_sequence(2, 0.25, 0.25, 0.5);
    const auto curve = inbetween_no_streak_curve(seq, 1);
    CHECK(curve.at(1) == 1.0);
    CHECK(curve.at(2) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("inbetween: all wins always streak once m >= k + 1") {
    const auto seq = test::constant_sequence(12, 0.0, 0.0, 1.0);
    for (int k = 1; k <= 11; ++k) {
        const auto curve = inbetween_no_streak_curve(seq, k);
        for (std::size_t m = 1; m <= 12; ++m) CHECK(curve.at(m) == (m <= static_cast<std::size_t>(k) ? 1.0 : 0.0));
    }
}

TEST_CASE("inbetween: without draws it is the pure curve at k + 1") {
    test::Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const auto seq = test::random_draw_free(rng, 60);
        for (int k = 1; k <= 10; ++k) {
            const auto ib = inbetween_no_streak_curve(seq, k);
            const auto pure = pure_no_streak_curve(seq, k + 1);
            for (std::size_t m = 1; m <= seq.size(); ++m) CHECK(std::abs(ib.at(m) - pure.at(m)) <= 1e-12);
        }
    }
}

TEST_CASE("inbetween: k + 1 > n gives all ones; k < 1 is an error") {
    const auto seq = test::constant_sequence(4, 0.1, 0.1, 0.8);
    for (double v : inbetween_no_streak_curve(seq, 4).values) CHECK(v == 1.0);
    for (double v : inbetween_no_streak_curve(seq, 9).values) CHECK(v == 1.0);
    CHECK_THROWS_AS(inbetween_no_streak_curve(seq, 0), std::invalid_argument);
}

TEST_CASE("inbetween: first non-trivial value matches the closed form") {
    test::Rng rng(29);
    for (int trial = 0; trial < 40; ++trial) {
        const int k = 1 + trial % 8;
        const auto seq = test::random_three_outcome(rng, static_cast<std::size_t>(k + 1), 0.3);
        double all = 1.0, one_draw = 0.0;
        for (int i = 0; i <= k; ++i) all *= seq[static_cast<std::size_t>(i)].win;
        for (int i = 0; i <= k; ++i) {
            double p = seq[static_cast<std::size_t>(i)].draw;
            for (int j = 0; j <= k; ++j)
                if (j != i) p *= seq[static_cast<std::size_t>(j)].win;
            one_draw += p;
        }
        const double engine = inbetween_no_streak_curve(seq, k).at(static_cast<std::size_t>(k + 1));
        CHECK(std::abs(engine - (1.0 - all - one_draw)) <= 1e-15);
    }
}

TEST_CASE("inbetween: prefix-sum evaluation agrees with the literal h_term transcription") {
    test::Rng rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        const auto n = static_cast<std::size_t>(5 + trial % 30);
        const auto seq = test::random_three_outcome(rng, n, 0.4, trial % 2 ? 0.2 : 1.0);
        for (int k = 1; k <= 7; ++k) {
            const auto fast = inbetween_no_streak_curve(seq, k);
            const auto slow = test::reference_inbetween(seq, k);
            double envelope = 1.0;
            for (std::size_t m = 1; m <= n; ++m) {
                envelope = std::min(envelope, slow[m - 1]);
                CHECK(std::abs(fast.at(m) - envelope) <= 1e-12);
            }
        }
    }
}

TEST_CASE("h_term examples") {
    const std::vector<double> no_cache;
    {
        const ProbabilitySequence seq({{0.1, 0.0, 0.9}, {0.2, 0.0, 0.8}});
        CHECK(h_term(0, 2, 2, seq, no_cache) == doctest::Approx(0.72).epsilon(1e-15));
    }
    {
        const ProbabilitySequence seq({{0.1, 0.0, 0.9}, {0.1, 0.0, 0.9}, {0.1, 0.0, 0.9}});
        CHECK(h_term(1, 3, 2, seq, no_cache) == doctest::Approx(0.081).epsilon(1e-15));
    }
    {
        const ProbabilitySequence seq({{0.1, 0.05, 0.85}, {0.1, 0.0, 0.9}});
        CHECK(h_term(1, 2, 2, seq, no_cache) == doctest::Approx(0.135).epsilon(1e-15));
    }
}

TEST_CASE("h_term uses g(a-1) beyond the trivial prefix") {
    const auto seq = test::constant_sequence(8, 0.1, 0.1, 0.8);
    const auto curve = inbetween_no_streak_curve(seq, 1);
    // a = 4, b = 5, k = 1: b - a = k, so the loss-only gate applies.
    CHECK(h_term(4, 5, 1, seq, curve.values) == doctest::Approx(curve.at(3) * 0.1 * 0.8).epsilon(1e-15));
    // a = 4, b = 4: b - a < k, gate is loss + draw.
    CHECK(h_term(4, 4, 1, seq, curve.values) == doctest::Approx(curve.at(3) * 0.2).epsilon(1e-15));
}

TEST_CASE("h_term index errors") {
    const auto seq = test::constant_sequence(6, 0.1, 0.1, 0.8);
    const std::vector<double> short_cache = {1.0, 1.0};
    CHECK_THROWS_AS(h_term(3, 2, 2, seq, short_cache), std::out_of_range);
    CHECK_THROWS_AS(h_term(0, 3, 2, seq, short_cache), std::out_of_range);
    CHECK_THROWS_AS(h_term(5, 7, 2, seq, short_cache), std::out_of_range);
    CHECK_THROWS_AS(h_term(5, 6, 2, seq, short_cache), std::out_of_range);  // needs g(4)
}

TEST_CASE("streak_grid") {
    test::Rng rng(37);
    const auto seq = test::random_draw_free(rng, 200);

    const auto grid1 = streak_grid(seq, StreakKind::pure, 1);
    double all_lose = 1.0;
    for (const auto& g : seq) all_lose *= g.loss;
    CHECK(grid1.streak_probability[0] == doctest::Approx(1.0 - all_lose).epsilon(1e-15));

    const auto grid = streak_grid(seq, StreakKind::pure, 30, 1);
    for (int k = 1; k <= 30; ++k) {
        CHECK(grid.streak_probability[k - 1] == pure_no_streak_curve(seq, k).streak_probability());
    }

    const auto draws = test::random_three_outcome(rng, 300, 0.2, 0.3);
    for (auto kind : {StreakKind::nonlosing, StreakKind::inbetween}) {
        const auto serial = streak_grid(draws, kind, 25, 1);
        for (unsigned threads : {2u, 3u, 8u}) {
            CHECK(streak_grid(draws, kind, 25, threads).streak_probability == serial.streak_probability);
        }
    }
    CHECK_THROWS_AS(streak_grid(draws, StreakKind::pure, 5), std::invalid_argument);
    CHECK_THROWS_AS(streak_grid(seq, StreakKind::pure, 0), std::invalid_argument);
}

TEST_CASE("streak kind names") {
    CHECK(parse_streak_kind("pure") == StreakKind::pure);
    CHECK(parse_streak_kind("non-losing") == StreakKind::nonlosing);
    CHECK(parse_streak_kind("in-between") == StreakKind::inbetween);
    CHECK(to_string(StreakKind::inbetween) == "inbetween");
    CHECK_THROWS_AS(parse_streak_kind("hot-hand"), std::invalid_argument);
}
