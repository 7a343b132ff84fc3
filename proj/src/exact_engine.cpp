#include "streak/exact_engine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "streak/errors.hpp"

namespace streak {

namespace {

constexpr double kRangeSlack = 1e-12;

void require_positive_k(int k) {
    if (k < 1) throw std::invalid_argument("streak length k must be >= 1, got " + std::to_string(k));
}

// Product of the last `width` pushed factors. Zeros are counted rather than
// multiplied in, so leaving the window never divides by zero. The running
// product is rebuilt from the ring every `width` pushes to stop the
// multiply/divide drift from accumulating, and whenever it underflows.
class WindowProduct {
public:
    explicit WindowProduct(std::size_t width) : ring_(width, 1.0), width_(width) {}

    void push(double x) {
        if (width_ == 0) return;
        if (size_ == width_) {
            const double old = ring_[head_];
            if (old == 0.0) --zeros_;
            else product_ /= old;
        } else {
            ++size_;
        }
        ring_[head_] = x;
        head_ = (head_ + 1) % width_;
        if (x == 0.0) ++zeros_;
        else product_ *= x;

        if (++since_rebuild_ >= width_ || !std::isnormal(product_)) rebuild();
    }

    double value() const noexcept { return zeros_ > 0 ? 0.0 : product_; }

private:
    void rebuild() {
        product_ = 1.0;
        // Oldest to newest, so the result does not depend on where head_ sits.
        for (std::size_t i = 0; i < size_; ++i) {
            const double x = ring_[(head_ + width_ - size_ + i) % width_];
            if (x != 0.0) product_ *= x;
        }
        since_rebuild_ = 0;
    }

    std::vector<double> ring_;
    std::size_t width_;
    std::size_t head_ = 0;
    std::size_t size_ = 0;
    std::size_t zeros_ = 0;
    double product_ = 1.0;
    std::size_t since_rebuild_ = 0;
};

// raw[m] for m = 0..n; raw[0] is the empty-prefix value 1.
NoStreakCurve finish(StreakKind kind, int k, const std::vector<double>& raw) {
    NoStreakCurve curve{kind, k, {}};
    curve.values.reserve(raw.size() - 1);
    for (std::size_t m = 1; m < raw.size(); ++m) {
        const double v = raw[m];
        if (!(v >= -kRangeSlack && v <= 1.0 + kRangeSlack)) {
            throw NumericalError("no-streak probability " + format_number(v) + " at m=" + std::to_string(m) + " (" +
                                 std::string(to_string(kind)) + ", k=" + std::to_string(k) +
                                 ") is outside [0,1]");
        }
        curve.values.push_back(std::clamp(v, 0.0, 1.0));
    }
    return curve;
}

// Pure-streak recurrence with loss probability q(i) for games i = 1..n and
// win probability 1 - q(i):
//   p(m+1) = p(m) - win(m+1) * q(m-k+1) * p(m-k) * prod_{j=m-k+2..m} win(j)
// The subtracted term is the chance that game m+1 completes the first run of
// k wins: the k-1 games before it are wins, the game before those is a loss,
// and the prefix ending there is streak-free.
template <typename LossProb>
std::vector<double> pure_recurrence(std::size_t n, int k, LossProb q) {
    const auto kk = static_cast<std::ptrdiff_t>(k);
    std::vector<double> p(n + 1, 1.0);
    const auto at = [&](std::ptrdiff_t j) { return j <= 0 ? 1.0 : p[static_cast<std::size_t>(j)]; };
    const auto loss = [&](std::ptrdiff_t i) { return i == 0 ? 1.0 : q(i); };
    const auto win = [&](std::ptrdiff_t i) { return 1.0 - q(i); };

    WindowProduct window(static_cast<std::size_t>(k - 1));
    for (std::ptrdiff_t next = 1; next <= static_cast<std::ptrdiff_t>(n); ++next) {
        const std::ptrdiff_t m = next - 1;
        if (next < kk) {
            p[next] = 1.0;
        } else {
            // Cancellation can leave a tiny negative once p is essentially 0.
            p[next] = std::max(0.0, p[m] - win(next) * loss(m - kk + 1) * at(m - kk) * window.value());
        }
        window.push(win(next));
    }
    return p;
}

}  // namespace

std::string_view to_string(StreakKind kind) {
    switch (kind) {
        case StreakKind::pure: return "pure";
        case StreakKind::nonlosing: return "nonlosing";
        case StreakKind::inbetween: return "inbetween";
    }
    return "?";
}

StreakKind parse_streak_kind(std::string_view text) {
    if (text == "pure") return StreakKind::pure;
    if (text == "nonlosing" || text == "non-losing") return StreakKind::nonlosing;
    if (text == "inbetween" || text == "in-between") return StreakKind::inbetween;
    throw std::invalid_argument("unknown streak kind '" + std::string(text) + "'");
}

NoStreakCurve pure_no_streak_curve(const ProbabilitySequence& seq, int k) {
    require_positive_k(k);
    if (!seq.draw_free()) throw std::invalid_argument("pure path requires draw-free sequence");
    const auto raw = pure_recurrence(seq.size(), k, [&](std::ptrdiff_t i) { return seq[i - 1].loss; });
    return finish(StreakKind::pure, k, raw);
}

NoStreakCurve nonlosing_no_streak_curve(const ProbabilitySequence& seq, int k) {
    require_positive_k(k);
    const auto merged = merge_draws(seq);
    const auto raw = pure_recurrence(merged.size(), k, [&](std::ptrdiff_t i) { return merged[i - 1].loss; });
    return finish(StreakKind::nonlosing, k, raw);
}

double nonlosing_streak_probability(const ProbabilitySequence& seq, int k) {
    return nonlosing_no_streak_curve(seq, k).streak_probability();
}

// In-between recurrence. With g(j) the no-streak value after j games and the
// window w = games m-k+1..m, the value after m+1 games is
//
//   g(m+1) = g(m) - draw(m+1) * X - win(m+1) * Y
//
//   X = g(m-k-1) * loss(m-k) * W
//   Y = g(m-k-1) * loss(m-k) * (W + S)
//       + draw(m-k) * sum_l [ g(m-k-1) - sum_{a=m-2k-1}^{l-k-2} h(a, m-k-1) ] * F(l)
//
// where W = prod_w win, F(l) = draw(l) * prod_{w, j != l} win(j), S = sum_l F(l).
// This is the loss/draw/win split g = loss*g + draw*(g - X) + win*(g - Y)
// with loss + draw + win = 1. The inner h sum is a prefix sum over a, so one
// step costs O(k).
NoStreakCurve inbetween_no_streak_curve(const ProbabilitySequence& seq, int k) {
    require_positive_k(k);
    const auto n = static_cast<std::ptrdiff_t>(seq.size());
    const auto kk = static_cast<std::ptrdiff_t>(k);

    std::vector<double> g(static_cast<std::size_t>(n) + 1, 1.0);
    const auto G = [&](std::ptrdiff_t j) { return j <= kk ? 1.0 : g[static_cast<std::size_t>(j)]; };
    const auto loss = [&](std::ptrdiff_t i) { return i == 0 ? 1.0 : seq[i - 1].loss; };
    const auto draw = [&](std::ptrdiff_t i) { return i == 0 ? 0.0 : seq[i - 1].draw; };
    const auto win = [&](std::ptrdiff_t i) { return i == 0 ? 0.0 : seq[i - 1].win; };

    std::vector<double> prefix(k + 1), suffix(k + 1), share(k), h(k);

    for (std::ptrdiff_t m = kk; m < n; ++m) {
        const std::ptrdiff_t first = m - kk + 1;  // window start, >= 1
        const std::ptrdiff_t lead = m - kk;       // game just before the window, >= 0
        const std::ptrdiff_t b = lead - 1;        // end of the prefix before `lead`

        prefix[0] = 1.0;
        for (std::ptrdiff_t t = 0; t < kk; ++t) prefix[t + 1] = prefix[t] * win(first + t);
        suffix[k] = 1.0;
        for (std::ptrdiff_t t = kk - 1; t >= 0; --t) suffix[t] = suffix[t + 1] * win(first + t);

        const double all_win = prefix[k];
        double one_draw = 0.0;
        for (std::ptrdiff_t t = 0; t < kk; ++t) {
            share[t] = draw(first + t) * prefix[t] * suffix[t + 1];
            one_draw += share[t];
        }

        const double g_before = G(b);
        const double via_loss = g_before * loss(lead);
        const double draw_hit = via_loss * all_win;
        double win_hit = via_loss * (all_win + one_draw);

        if (draw(lead) > 0.0) {
            // h[t] is h(a, b) for a = b - k + t; terms with a < 0 are dropped.
            double run = 1.0;
            for (std::ptrdiff_t t = kk - 1; t >= 0; --t) {
                const std::ptrdiff_t a = b - kk + t;
                if (a < 0) {
                    h[t] = 0.0;
                    continue;
                }
                run *= win(a + 1);
                const double gate = (b - a == kk) ? loss(a) : loss(a) + draw(a);
                h[t] = G(a - 1) * gate * run;
            }
            double boundary = 0.0;
            double lead_draw_sum = 0.0;
            for (std::ptrdiff_t t = 0; t < kk; ++t) {
                boundary += h[t];
                lead_draw_sum += (g_before - boundary) * share[t];
            }
            win_hit += draw(lead) * lead_draw_sum;
        }

        g[m + 1] = g[m] - draw(m + 1) * draw_hit - win(m + 1) * win_hit;
    }
    // The h overestimate is uneven across m, so the raw values can tick up
    // when losses are rare. Every raw value bounds the (non-increasing) true
    // value from above, hence so does the running minimum; report that. The
    // recurrence itself keeps using the raw values.
    std::partial_sum(g.begin(), g.end(), g.begin(), [](double lo, double x) { return std::min(lo, x); });
    return finish(StreakKind::inbetween, k, g);
}

double h_term(std::size_t a, std::size_t b, int k, const ProbabilitySequence& seq, std::span<const double> g) {
    require_positive_k(k);
    const auto kk = static_cast<std::size_t>(k);
    if (a > b) throw std::out_of_range("h_term: a > b");
    if (b - a > kk) throw std::out_of_range("h_term: b - a > k");
    if (b > seq.size()) throw std::out_of_range("h_term: b beyond the last game");

    double product = 1.0;
    for (std::size_t j = a + 1; j <= b; ++j) product *= seq[j - 1].win;

    const double loss_a = a == 0 ? 1.0 : seq[a - 1].loss;
    const double draw_a = a == 0 ? 0.0 : seq[a - 1].draw;
    const double gate = (b - a == kk) ? loss_a : loss_a + draw_a;

    double g_prev = 1.0;
    if (a >= 1 && a - 1 > kk) {
        if (a - 1 > g.size()) throw std::out_of_range("h_term: g cache does not reach index a-1");
        g_prev = g[a - 2];
    }
    return g_prev * gate * product;
}

NoStreakCurve no_streak_curve(const ProbabilitySequence& seq, StreakQuery query) {
    switch (query.kind) {
        case StreakKind::pure: return pure_no_streak_curve(seq, query.k);
        case StreakKind::nonlosing: return nonlosing_no_streak_curve(seq, query.k);
        case StreakKind::inbetween: return inbetween_no_streak_curve(seq, query.k);
    }
    throw std::invalid_argument("unknown streak kind");
}

double streak_probability(const ProbabilitySequence& seq, StreakQuery query) {
    return no_streak_curve(seq, query).streak_probability();
}

StreakGrid streak_grid(const ProbabilitySequence& seq, StreakKind kind, int k_max, unsigned threads) {
    require_positive_k(k_max);
    if (kind == StreakKind::pure && !seq.draw_free()) {
        throw std::invalid_argument("pure path requires draw-free sequence");
    }
    StreakGrid grid{kind, k_max, seq.size(), std::vector<double>(static_cast<std::size_t>(k_max))};

    // Merge once rather than per k.
    const auto merged = kind == StreakKind::nonlosing ? merge_draws(seq) : seq;
    const auto curve_kind = kind == StreakKind::nonlosing ? StreakKind::pure : kind;

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(k_max));

    std::vector<std::exception_ptr> failures(threads);
    auto work = [&](unsigned worker) {
        try {
            for (int k = static_cast<int>(worker) + 1; k <= k_max; k += static_cast<int>(threads)) {
                grid.streak_probability[k - 1] = no_streak_curve(merged, {curve_kind, k}).streak_probability();
            }
        } catch (...) {
            failures[worker] = std::current_exception();
        }
    };

    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    }
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }
    return grid;
}

}  // namespace streak
