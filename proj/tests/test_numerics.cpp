#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nhberry/numerics.hpp"
#include "nhberry/ode.hpp"

using namespace nhberry::numerics;

namespace {

constexpr double pi = std::numbers::pi;

// Independent oracle for the principal square root: polar form
// r^(1/2) e^(i theta / 2) with theta in (-pi, pi].
Complex sqrt_polar_oracle(Complex z) {
    const double r = std::abs(z);
    const double theta = std::atan2(z.imag() == 0.0 ? +0.0 : z.imag(), z.real());
    return std::polar(std::sqrt(r), 0.5 * theta);
}

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("principal_sqrt: perfect square and branch-cut value") {
    const Complex a = principal_sqrt({4.0, 0.0});
    CHECK(a.real() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(a.imag() == doctest::Approx(0.0).epsilon(1e-15));

    const Complex b = principal_sqrt({-1.0, 0.0});
    CHECK(b.real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(b.imag() == doctest::Approx(1.0).epsilon(1e-15));

    // Signed-zero imaginary part must not drop below the cut.
    const Complex c = principal_sqrt({-1.0, -0.0});
    CHECK(c.imag() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("principal_sqrt: J^2 + eps^2/4 for the Fig. 5 parameter set") {
    // Input is J^2 + eps^2/4 at J = 2.17, Delta = 2 pi 0.51, Gamma = 0.426.
    const Complex z{7.23060, -0.68254};
    const Complex expected = sqrt_polar_oracle(z);
    const Complex got = principal_sqrt(z);
    CHECK(std::abs(got - expected) < 1e-14);
    CHECK(got.real() == doctest::Approx(2.69197).epsilon(2e-5));
    CHECK(got.imag() == doctest::Approx(-0.12678).epsilon(2e-4));
}

TEST_CASE("principal_sqrt: squares back and stays on the right half plane") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> mag(-50.0, 50.0);
    for (int i = 0; i < 10000; ++i) {
        const Complex z{mag(rng), mag(rng)};
        const Complex w = principal_sqrt(z);
        CHECK(std::abs(w * w - z) <= 1e-12 * std::abs(z));
        CHECK(w.real() >= 0.0);
        if (w.real() == 0.0) CHECK(w.imag() >= 0.0);
        CHECK(std::abs(w - sqrt_polar_oracle(z)) <= 1e-12 * std::abs(w));
    }
}

TEST_CASE("complex field arithmetic: ring identities on random triples") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> d(-10.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const Complex a{d(rng), d(rng)}, b{d(rng), d(rng)}, c{d(rng), d(rng)};
        CHECK(std::abs((a + b) + c - (a + (b + c))) <= 1e-13 * (std::abs(a) + std::abs(b) + std::abs(c)));
        CHECK(std::abs((a * b) * c - (a * (b * c))) <= 1e-12 * std::abs(a * b * c) + 1e-13);
        CHECK(std::abs(a * (b + c) - (a * b + a * c)) <= 1e-12 * (std::abs(a * b) + std::abs(a * c)) + 1e-13);
    }
}

TEST_CASE("matrix products associate on random inputs") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    auto rand_mat3 = [&] {
        CMat3 m;
        for (auto& x : m.m) x = Complex{d(rng), d(rng)};
        return m;
    };
    for (int i = 0; i < 200; ++i) {
        const CMat3 a = rand_mat3(), b = rand_mat3(), c = rand_mat3();
        const CMat3 lhs = (a * b) * c;
        const CMat3 rhs = a * (b * c);
        CHECK(max_abs(lhs - rhs) <= 1e-12 * std::max(1.0, max_abs(lhs)));

        CVec3 v;
        for (auto& x : v.v) x = Complex{d(rng), d(rng)};
        const CVec3 lv = (a * b) * v;
        const CVec3 rv = a * (b * v);
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(lv[k] - rv[k]) <= 1e-12 * std::max(1.0, std::abs(lv[k])));
    }
}

TEST_CASE("central_diff: identity and exp(ix)") {
    const Complex one = central_diff([](double x) { return Complex{x, 0.0}; }, 3.0, 1e-4);
    CHECK(std::abs(one - Complex{1.0, 0.0}) < 1e-10);

    const Complex di = central_diff([](double x) { return std::exp(Complex{0.0, x}); }, 0.0, 1e-5);
    CHECK(std::abs(di - Complex{0.0, 1.0}) < 1e-9);
}

TEST_CASE("central_diff: phi derivative of the |1> eigenvector component") {
    // f(phi) = c_- e^{-i phi} / N_-, so f' = -i f; coefficients from the
    // closed-form spectral data at the Fig. 5 parameter set.
    const double J = 2.17, Delta = 2.0 * pi * 0.51, Gamma = 0.426;
    const Complex eps{Delta, -Gamma};
    const Complex delta = 2.0 * sqrt_polar_oracle(Complex{J * J, 0.0} + 0.25 * eps * eps);
    const Complex cm = (-eps - delta) / (2.0 * J);
    const double n = std::sqrt(1.0 + std::norm(cm));
    auto f = [&](double phi) { return cm * std::exp(Complex{0.0, -phi}) / n; };
    const double phi0 = 0.37;
    const Complex fd = central_diff(f, phi0, 1e-6);
    CHECK(std::abs(fd - Complex{0.0, -1.0} * f(phi0)) < 1e-8);
}

TEST_CASE("simpson: constants, sine, and odd n rejection") {
    const Complex full = simpson([](double) { return Complex{1.0, 0.0}; }, 0.0, 2.0 * pi, 8);
    CHECK(std::abs(full - Complex{2.0 * pi, 0.0}) < 1e-13);

    // Composite Simpson over n subintervals: |err| <= ((b-a)/180) h^4 max|f''''|,
    // which is 1.01e-7 for sin at n = 64 and 6.3e-9 at n = 128.
    const Complex two64 = simpson([](double x) { return Complex{std::sin(x), 0.0}; }, 0.0, pi, 64);
    CHECK(std::abs(two64 - Complex{2.0, 0.0}) < 1.1e-7);
    const Complex two128 = simpson([](double x) { return Complex{std::sin(x), 0.0}; }, 0.0, pi, 128);
    CHECK(std::abs(two128 - Complex{2.0, 0.0}) < 1e-8);

    CHECK_THROWS_AS(simpson([](double) { return Complex{}; }, 0.0, 1.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(simpson([](double) { return Complex{}; }, 0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("simpson: loop integral of the constant Berry connection") {
    const double J = 2.17, Delta = 2.0 * pi * 0.51, Gamma = 0.426;
    const Complex eps{Delta, -Gamma};
    const Complex delta = 2.0 * sqrt_polar_oracle(Complex{J * J, 0.0} + 0.25 * eps * eps);
    const Complex a_minus = 0.5 + eps / (2.0 * delta);
    const Complex loop = simpson([&](double) { return a_minus; }, 0.0, 2.0 * pi, 16);
    const Complex theta = pi * (1.0 + eps / delta);
    CHECK(std::abs(loop - theta) < 1e-12);
}

TEST_CASE("integrate_linear: constant diagonal generator is exact") {
    CMat2 g;
    g(0, 0) = Complex{0.0, -1.0};
    g(1, 1) = Complex{0.0, -2.0};
    const CVec2 y0{{Complex{1.0, 0.0}, Complex{1.0, 0.0}}};
    const auto sol = integrate_linear<2>([&](double) { return g; }, y0, 0.0, pi,
                                         OdeTol{1e-10, 1e-12});
    const CVec2 yT = sol.final_state();
    CHECK(sol.final_time() == doctest::Approx(pi).epsilon(1e-15));
    CHECK(std::abs(yT[0] - Complex{-1.0, 0.0}) < 1e-9);
    CHECK(std::abs(yT[1] - Complex{1.0, 0.0}) < 1e-9);
}

TEST_CASE("integrate_linear: Hermitian generator preserves the norm") {
    const double J = 1.0, Delta = 0.7, phi = 0.3;
    CMat2 h;
    h(0, 0) = Delta;
    h(0, 1) = J * std::exp(Complex{0.0, phi});
    h(1, 0) = J * std::exp(Complex{0.0, -phi});
    const CMat2 g = Complex{0.0, -1.0} * h;
    const CVec2 y0{{Complex{0.8, 0.1}, Complex{0.2, -0.55}}};
    const double n0 = std::sqrt(norm_sq(y0));
    const double tol = 1e-10;
    const auto sol = integrate_linear<2>([&](double) { return g; }, y0, 0.0, 12.0,
                                         OdeTol{tol, 1e-12});
    for (double t : {1.7, 5.0, 9.3, 12.0}) {
        const double n = std::sqrt(norm_sq(sol.sample(t)));
        CHECK(std::abs(n - n0) < 10.0 * tol);
    }
}

TEST_CASE("integrate_linear: frozen-phi eigenstate decays at the closed-form rate") {
    const double J = 2.17, Delta = 2.0 * pi * 0.51, Gamma = 0.426, T = 3.0;
    const Complex eps{Delta, -Gamma};
    const Complex delta = 2.0 * sqrt_polar_oracle(Complex{J * J, 0.0} + 0.25 * eps * eps);
    const double delta_i = -delta.imag();
    const Complex cm = (-eps - delta) / (2.0 * J);
    const double n = std::sqrt(1.0 + std::norm(cm));
    const CVec2 psi0{{1.0 / n, cm / n}};

    CMat2 h;
    h(0, 0) = eps;
    h(0, 1) = J;
    h(1, 0) = J;
    const auto sol = integrate_linear<2>(
        [&](double) { return Complex{0.0, -1.0} * h; }, psi0, 0.0, T, OdeTol{1e-11, 1e-13});

    const double lambda_im = T * (Gamma - delta_i) / 2.0;
    CHECK(norm_sq(sol.final_state()) ==
          doctest::Approx(std::exp(-2.0 * lambda_im)).epsilon(1e-8));
}

TEST_CASE("integrate: step-size underflow reports a numerical failure") {
    // Generator diverging inside the span forces unbounded rejection.
    auto g = [](double t) {
        CMat2 m;
        m(0, 0) = Complex{0.0, -1.0 / (1.0 - t)};
        return m;
    };
    const CVec2 y0{{Complex{1.0, 0.0}, Complex{0.0, 0.0}}};
    CHECK_THROWS_AS(integrate_linear<2>(g, y0, 0.0, 2.0, OdeTol{1e-10, 1e-12}),
                    nhberry::NumericalError);
}

TEST_CASE("integrate: halving the tolerance at least halves the end-state error") {
    // Eq.-style test problem: rotating drive phase at the Fig. 5 parameters.
    const double J = 2.17, Delta = 2.0 * pi * 0.51, Gamma = 0.426, T = 3.0;
    const Complex eps{Delta, -Gamma};
    auto gen = [&](double t) {
        const double phi = 2.0 * pi * t / T;
        CMat2 h;
        h(0, 0) = eps;
        h(0, 1) = J * std::exp(Complex{0.0, phi});
        h(1, 0) = J * std::exp(Complex{0.0, -phi});
        return Complex{0.0, -1.0} * h;
    };
    const CVec2 y0{{Complex{1.0, 0.0}, Complex{0.0, 0.0}}};

    auto end_state = [&](double rtol, double atol) {
        return integrate_linear<2>(gen, y0, 0.0, T, OdeTol{rtol, atol}).final_state();
    };
    const CVec2 ref = end_state(1e-13, 1e-15);
    auto err_at = [&](double rtol) {
        const CVec2 y = end_state(rtol, 1e-2 * rtol);
        return std::sqrt(norm_sq(y - ref));
    };

    double prev = err_at(1e-6);
    for (double rtol : {5e-7, 2.5e-7, 1.25e-7}) {
        const double cur = err_at(rtol);
        CHECK(cur <= 0.5 * prev);
        prev = cur;
    }
}

}  // TEST_SUITE
