#pragma once

// Adaptive embedded Runge-Kutta 5(4) (Dormand-Prince coefficients) for
// linear time-dependent complex systems. The 5th-order solution is
// propagated; the embedded 4th-order difference drives step control with
// relative and absolute criteria applied component-wise to the real and
// imaginary parts. Dense output between accepted steps uses cubic Hermite
// interpolation on the stored (y, y') pairs.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "nhberry/errors.hpp"
#include "nhberry/numerics.hpp"

namespace nhberry::numerics {

struct OdeTol {
    double rel = 1e-10;
    double abs = 1e-12;
};

// Accepted-step record with continuous (Hermite) sampling.
template <std::size_t N>
class OdeSolution {
public:
    std::vector<double> times;          // accepted step endpoints, t0 first
    std::vector<CVec<N>> states;        // y at those times
    std::vector<CVec<N>> derivs;        // y' at those times
    std::size_t n_steps = 0;
    std::size_t n_rejected = 0;

    const CVec<N>& final_state() const { return states.back(); }
    double final_time() const { return times.back(); }

    // Hermite interpolation inside the bracketing accepted step.
    CVec<N> sample(double t) const {
        if (t <= times.front()) return states.front();
        if (t >= times.back()) return states.back();
        auto it = std::upper_bound(times.begin(), times.end(), t);
        const std::size_t k = static_cast<std::size_t>(it - times.begin()) - 1;
        const double h = times[k + 1] - times[k];
        const double s = (t - times[k]) / h;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1;
        const double h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2;
        const double h11 = s3 - s2;
        CVec<N> y;
        for (std::size_t i = 0; i < N; ++i)
            y[i] = h00 * states[k][i] + (h10 * h) * derivs[k][i] +
                   h01 * states[k + 1][i] + (h11 * h) * derivs[k + 1][i];
        return y;
    }
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// 5th-order weights equal the last a-row (FSAL); e = b5 - b4.
inline constexpr double dp_e[7] = {
    71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920,
    -17253.0 / 339200, 22.0 / 525, -1.0 / 40,
};

template <std::size_t N>
double error_ratio(const CVec<N>& err, const CVec<N>& y0, const CVec<N>& y1,
                   const OdeTol& tol) {
    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sr = tol.abs + tol.rel * std::max(std::abs(y0[i].real()), std::abs(y1[i].real()));
        const double si = tol.abs + tol.rel * std::max(std::abs(y0[i].imag()), std::abs(y1[i].imag()));
        worst = std::max(worst, std::abs(err[i].real()) / sr);
        worst = std::max(worst, std::abs(err[i].imag()) / si);
    }
    return worst;
}

}  // namespace detail

// Integrate y' = rhs(t, y) from t0 to t1 (t1 > t0). rhs must be linear in y
// for the guarantees quoted here to be meaningful; the stepper itself only
// requires smoothness. The final time is hit exactly (last step clamped).
template <std::size_t N, typename Rhs>
OdeSolution<N> integrate(Rhs&& rhs, const CVec<N>& y0, double t0, double t1,
                         const OdeTol& tol = {}) {
    if (!(t1 > t0)) throw std::invalid_argument("integrate: need t1 > t0");
    const double span = t1 - t0;

    OdeSolution<N> sol;
    sol.times.push_back(t0);
    sol.states.push_back(y0);
    CVec<N> f0 = rhs(t0, y0);
    sol.derivs.push_back(f0);

    double t = t0;
    CVec<N> y = y0;
    double h = span / 100.0;

    while (t < t1) {
        if (t + h > t1) h = t1 - t;
        if (std::abs(h) < 1e-12 * span)
            throw NumericalError("integrate: step size underflow (stiffness or singularity)");

        CVec<N> k[7];
        k[0] = f0;
        for (int s = 1; s < 7; ++s) {
            CVec<N> ys = y;
            for (int j = 0; j < s; ++j)
                if (detail::dp_a[s][j] != 0.0) ys += (detail::dp_a[s][j] * h) * k[j];
            k[s] = rhs(t + detail::dp_c[s] * h, ys);
        }
        // k[6] was evaluated at the 5th-order solution point (FSAL).
        CVec<N> y5 = y;
        for (int j = 0; j < 6; ++j)
            if (detail::dp_a[6][j] != 0.0) y5 += (detail::dp_a[6][j] * h) * k[j];

        CVec<N> err;
        for (int j = 0; j < 7; ++j)
            if (detail::dp_e[j] != 0.0) err += (detail::dp_e[j] * h) * k[j];

        // Error-per-unit-time acceptance: each step may spend h times the
        // tolerance (capped at tol itself), so the accumulated estimate
        // grows with elapsed time rather than with the step count.
        const double q = detail::error_ratio(err, y, y5, tol) / std::min(h, 1.0);
        if (q <= 1.0) {
            t += h;
            y = y5;
            f0 = k[6];  // FSAL
            sol.times.push_back(t);
            sol.states.push_back(y);
            sol.derivs.push_back(f0);
            ++sol.n_steps;
        } else {
            ++sol.n_rejected;
        }
        const double factor = (q > 0.0) ? 0.9 * std::pow(q, -0.25) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
    return sol;
}

// Spec-facing wrapper: y' = G(t) y with a time-dependent matrix generator.
template <std::size_t N, typename Gen>
OdeSolution<N> integrate_linear(Gen&& gen, const CVec<N>& y0, double t0,
                                double t1, const OdeTol& tol = {}) {
    return integrate<N>(
        [&gen](double t, const CVec<N>& y) { return gen(t) * y; }, y0, t0, t1, tol);
}

}  // namespace nhberry::numerics
