#include "nhberry/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace nhberry::model {

using numerics::bilinear;
using numerics::principal_sqrt;

namespace {

constexpr double pi = std::numbers::pi;

Complex delta_of(double J, Complex eps) {
    return 2.0 * principal_sqrt(Complex{J * J, 0.0} + 0.25 * eps * eps);
}

}  // namespace

DriveParams::DriveParams(double j, double delta, double gamma)
    : J(j), Delta(delta), Gamma(gamma) {
    if (!(std::isfinite(j) && std::isfinite(delta) && std::isfinite(gamma)))
        throw DomainError("DriveParams: non-finite parameter");
    if (j < 0.0) throw DomainError("DriveParams: J must be >= 0");
    if (gamma < 0.0) throw DomainError("DriveParams: Gamma must be >= 0");
    if (std::abs(delta_of(j, epsilon())) <= ep_tol)
        throw DomainError("DriveParams: exceptional point (|delta| <= ep_tol), eigensystem degenerate");
}

Complex DriveParams::delta() const { return delta_of(J, epsilon()); }

ComplexPhase::ComplexPhase(Complex z) : real_part(z.real()), imag_part(z.imag()) {
    if (!std::isfinite(real_part) || !std::isfinite(imag_part))
        throw DomainError("ComplexPhase: non-finite value");
}

ComplexPhase::ComplexPhase(double re, double im) : ComplexPhase(Complex{re, im}) {}

CMat2 hamiltonian(const DriveParams& p, double phi) {
    CMat2 h;
    h(0, 0) = p.epsilon();
    h(0, 1) = p.J * std::exp(Complex{0.0, phi});
    h(1, 0) = p.J * std::exp(Complex{0.0, -phi});
    h(1, 1) = 0.0;
    return h;
}

BiorthogonalFrame frame(const DriveParams& p, double phi) {
    BiorthogonalFrame f;
    f.phi = phi;
    f.epsilon = p.epsilon();
    f.delta = p.delta();
    if (std::abs(f.delta) <= DriveParams::ep_tol)
        throw DomainError("frame: exceptional point, eigensystem degenerate");
    f.delta_r = f.delta.real();
    f.delta_i = -f.delta.imag();
    f.E_plus = 0.5 * (f.epsilon + f.delta);
    f.E_minus = 0.5 * (f.epsilon - f.delta);

    const Complex gauge_ket = std::exp(Complex{0.0, -phi});
    const Complex gauge_bra = std::exp(Complex{0.0, +phi});

    if (p.J == 0.0) {
        // Limit frame: one coefficient vanishes, the other diverges; the
        // diverging branch normalizes to the bare |1> (up to the phi gauge).
        // delta = +eps puts the eps eigenvalue on the + branch, delta = -eps
        // on the - branch; assign kets accordingly.
        const bool plus_is_zero = std::abs(f.delta - f.epsilon) <= std::abs(f.delta + f.epsilon);
        CVec2 ket0{{Complex{1.0, 0.0}, Complex{0.0, 0.0}}};
        CVec2 ket1{{Complex{0.0, 0.0}, gauge_ket}};
        CVec2 bra0{{Complex{1.0, 0.0}, Complex{0.0, 0.0}}};
        CVec2 bra1{{Complex{0.0, 0.0}, gauge_bra}};
        if (plus_is_zero) {
            f.c_plus = 0.0;
            f.c_minus = std::numeric_limits<double>::infinity();
            f.R_plus = ket0; f.L_plus = bra0;
            f.R_minus = ket1; f.L_minus = bra1;
        } else {
            f.c_minus = 0.0;
            f.c_plus = std::numeric_limits<double>::infinity();
            f.R_minus = ket0; f.L_minus = bra0;
            f.R_plus = ket1; f.L_plus = bra1;
        }
        f.s_plus = 1.0;
        f.s_minus = 1.0;
        return f;
    }

    f.c_plus = (-f.epsilon + f.delta) / (2.0 * p.J);
    f.c_minus = (-f.epsilon - f.delta) / (2.0 * p.J);

    const double n_plus = std::sqrt(1.0 + std::norm(f.c_plus));
    const double n_minus = std::sqrt(1.0 + std::norm(f.c_minus));

    f.R_plus = CVec2{{1.0 / n_plus, f.c_plus * gauge_ket / n_plus}};
    f.R_minus = CVec2{{1.0 / n_minus, f.c_minus * gauge_ket / n_minus}};
    f.L_plus = CVec2{{1.0 / n_plus, f.c_plus * gauge_bra / n_plus}};
    f.L_minus = CVec2{{1.0 / n_minus, f.c_minus * gauge_bra / n_minus}};

    f.s_plus = (1.0 + f.c_plus * f.c_plus) / (n_plus * n_plus);
    f.s_minus = (1.0 + f.c_minus * f.c_minus) / (n_minus * n_minus);
    return f;
}

Complex berry_connection(const DriveParams& p, Branch branch) {
    const Complex d = p.delta();
    if (std::abs(d) <= DriveParams::ep_tol)
        throw DomainError("berry_connection: exceptional point");
    return 0.5 - static_cast<double>(sign_of(branch)) * p.epsilon() / (2.0 * d);
}

ComplexPhase berry_phase(const DriveParams& p, Branch branch, int eta, double winding_fraction) {
    const Complex d = p.delta();
    if (std::abs(d) <= DriveParams::ep_tol)
        throw DomainError("berry_phase: exceptional point");
    const Complex theta = winding_fraction * pi * static_cast<double>(eta) *
                          (1.0 - static_cast<double>(sign_of(branch)) * p.epsilon() / d);
    return ComplexPhase{theta};
}

ComplexPhase dynamical_phase(const DriveParams& p, Branch branch, double T) {
    const Complex E = (branch == Branch::Plus) ? 0.5 * (p.epsilon() + p.delta())
                                               : 0.5 * (p.epsilon() - p.delta());
    return ComplexPhase{-E * T};
}

CMat2 swap_operator(const DriveParams& p, double phi) {
    const BiorthogonalFrame f = frame(p, phi);
    return numerics::outer(f.R_minus, f.L_plus) * (1.0 / f.s_plus) -
           numerics::outer(f.R_plus, f.L_minus) * (1.0 / f.s_minus);
}

TomographyXY tomography_xy(const CVec2& state, const DriveParams& p, double phi) {
    const BiorthogonalFrame f = frame(p, phi);
    const Complex lp = bilinear(f.L_plus, state);
    const Complex lm = bilinear(f.L_minus, state);
    TomographyXY out;
    out.x = std::conj(lm) * lp + std::conj(lp) * lm;
    out.y = numerics::I * (std::conj(lm) * lp - std::conj(lp) * lm);
    return out;
}

}  // namespace nhberry::model
