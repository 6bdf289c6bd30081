#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace polyelast {

// Dormand-Prince 5(4) with per-component mixed error control.
template <std::size_t N>
class DormandPrince {
public:
    using State = std::array<double, N>;

    struct Settings {
        double rtol = 1e-9;
        double atol = 1e-300;
        double h_init = 1e-3;
        double h_max = 0.1;
        long max_steps = 10'000'000;
        // abort when any |y_k| exceeds this bound
        double blowup = 1e6;
        // steps that cross a change of regime are shortened to at most this
        double h_switch = 1e-6;
    };

    struct Result {
        std::vector<State> states;  // one per requested output abscissa
        bool diverged = false;
        long steps = 0;
    };

    // Integrates y' = f(x, y) from (x0, y0) through the increasing abscissae xs
    // (xs[0] >= x0), landing exactly on each of them.
    template <class F>
    static Result integrate(F&& f, double x0, const State& y0, const std::vector<double>& xs, const Settings& s) {
        return integrate(f, [](double, const State&) { return 0; }, x0, y0, xs, s);
    }

    // Same, but `regime(x, y)` labels smooth pieces of f; a step whose end lies
    // in a different piece is retried shorter until it is below h_switch, so
    // the error estimate never straddles a loss of smoothness.
    template <class F, class G>
    static Result integrate(F&& f, G&& regime, double x0, const State& y0, const std::vector<double>& xs,
                            const Settings& s) {
        Result res;
        res.states.reserve(xs.size());
        double x = x0;
        State y = y0;
        State k1 = f(x, y);
        int piece = regime(x, y);
        double h = s.h_init;
        for (double target : xs) {
            if (target < x - 1e-14 * std::max(1.0, std::abs(x))) throw std::invalid_argument("DormandPrince: output abscissae must increase");
            while (x < target) {
                if (++res.steps > s.max_steps) throw std::runtime_error("DormandPrince: step budget exhausted");
                bool last = false;
                double step = std::min(h, s.h_max);
                if (x + step >= target) {
                    step = target - x;
                    last = true;
                }
                State y5, err;
                State k7;
                attempt(f, x, y, k1, step, y5, err, k7);
                double e = 0.0;
                for (std::size_t i = 0; i < N; ++i) {
                    const double sc = s.atol + s.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
                    e = std::max(e, std::abs(err[i]) / sc);
                }
                if (!std::isfinite(e)) e = 1e10;
                if (e <= 1.0 && step > s.h_switch && regime(x + step, y5) != piece) {
                    h = 0.5 * step;
                    continue;
                }
                if (e <= 1.0) {
                    x = last ? target : x + step;
                    y = y5;
                    k1 = k7;
                    piece = regime(x, y);
                    for (std::size_t i = 0; i < N; ++i) {
                        if (!std::isfinite(y[i]) || std::abs(y[i]) > s.blowup) {
                            res.diverged = true;
                            return res;
                        }
                    }
                }
                const double fac = (e == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
                const double hn = step * fac;
                // a step shortened only to hit an output node should not shrink h
                h = (last && e <= 1.0) ? std::max(h, hn) : hn;
                if (h < 1e-14 * std::max(1.0, std::abs(x))) throw std::runtime_error("DormandPrince: step size underflow");
            }
            res.states.push_back(y);
        }
        return res;
    }

private:
    template <class F>
    static void attempt(F& f, double x, const State& y, const State& k1, double h, State& y5, State& err, State& k7) {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                                a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                                e6 = 22.0 / 525, e7 = -1.0 / 40;
        State t;
        for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * a21 * k1[i];
        const State k2 = f(x + c2 * h, t);
        for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        const State k3 = f(x + c3 * h, t);
        for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        const State k4 = f(x + c4 * h, t);
        for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        const State k5 = f(x + c5 * h, t);
        for (std::size_t i = 0; i < N; ++i)
            t[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        const State k6 = f(x + h, t);
        for (std::size_t i = 0; i < N; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        k7 = f(x + h, y5);
        for (std::size_t i = 0; i < N; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
};

}  // namespace polyelast
