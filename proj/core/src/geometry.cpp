#include "nhberry/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nhberry::geometry {

namespace {

constexpr double pi = std::numbers::pi;

double wrap_2pi(double x) {
    double y = std::fmod(x, 2.0 * pi);
    if (y < 0.0) y += 2.0 * pi;
    return y;
}

int branch_sign(Branch b) { return model::sign_of(b); }

}  // namespace

MixingAngle alpha_from_params(const DriveParams& p) {
    if (p.Gamma == 0.0) {
        if (!(p.J > 0.0))
            throw std::invalid_argument("alpha_from_params: Hermitian path needs J > 0");
        return {std::atan2(2.0 * p.J, p.Delta), 0.0};
    }
    if (!(p.J > 0.0))
        throw std::invalid_argument("alpha_from_params: J > 0 required for Gamma > 0");

    const Complex num{p.Delta, 2.0 * p.J - p.Gamma};
    const Complex den{p.Delta, -(2.0 * p.J + p.Gamma)};
    if (std::abs(num) <= 1e-12 * std::abs(den))
        throw DomainError("alpha_from_params: parameters on the log singularity (Delta = 0, 2J = Gamma)");

    const Complex alpha = std::log(num / den) / (2.0 * numerics::I);
    double ar = alpha.real();
    const double ai = alpha.imag();

    // Two cover sheets alpha_r and alpha_r + pi map to the same (J, Delta);
    // pick the one consistent with the spectral branch, cos(alpha) = eps/delta.
    const Complex target = p.epsilon() / p.delta();
    const Complex c0 = std::cos(Complex{ar, ai});
    if (std::abs(c0 - target) > std::abs(-c0 - target)) ar += pi;
    return {wrap_2pi(ar), ai};
}

MixingAngle track_alpha(const MixingAngle& prev, const DriveParams& p) {
    const MixingAngle a = alpha_from_params(p);
    double best = a.alpha_r;
    double dist = std::abs(a.alpha_r - prev.alpha_r);
    for (int k = -2; k <= 2; ++k) {
        const double cand = a.alpha_r + k * pi;
        if (std::abs(cand - prev.alpha_r) < dist) {
            best = cand;
            dist = std::abs(cand - prev.alpha_r);
        }
    }
    return {best, a.alpha_i};
}

DriveParams params_from_alpha(const MixingAngle& alpha, double Gamma) {
    if (!(Gamma > 0.0))
        throw std::invalid_argument("params_from_alpha: Gamma > 0 required");
    if (!(alpha.alpha_i > 0.0))
        throw DomainError("params_from_alpha: alpha_i = 0 is the Hermitian boundary");
    const double sh = std::sinh(2.0 * alpha.alpha_i);
    const double J = Gamma * (std::cosh(2.0 * alpha.alpha_i) - std::cos(2.0 * alpha.alpha_r)) /
                     (2.0 * sh);
    const double Delta = Gamma * std::sin(2.0 * alpha.alpha_r) / sh;
    return DriveParams(J, Delta, Gamma);
}

ConnectionComponents global_connection(const ExtendedPoint& pt, Branch branch) {
    ConnectionComponents c;
    c.A_phi = 0.5 * (1.0 - static_cast<double>(branch_sign(branch)) * std::cos(pt.alpha.value()));
    c.A_alpha_r = -0.5;
    c.A_alpha_i = 0.0;
    return c;
}

CurvatureComponents curvature(const ExtendedPoint& pt, Branch branch) {
    const Complex s = std::sin(pt.alpha.value());
    const double sgn = branch_sign(branch);
    return {0.5 * sgn * s, 0.5 * sgn * numerics::I * s};
}

LineIntegralResult line_integral_phase(std::span<const ExtendedPoint> path, Branch branch) {
    if (path.size() < 3)
        throw std::invalid_argument("line_integral_phase: need at least 3 path points");
    Complex phi_acc = 0.0;
    double ar_acc = 0.0;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const auto& a = path[k];
        const auto& b = path[k + 1];
        const Complex Aa = global_connection(a, branch).A_phi;
        const Complex Ab = global_connection(b, branch).A_phi;
        phi_acc += 0.5 * (Aa + Ab) * (b.phi - a.phi);
        ar_acc += -0.5 * (b.alpha.alpha_r - a.alpha.alpha_r);
    }
    LineIntegralResult r;
    r.phi_part = ComplexPhase{phi_acc};
    r.alpha_r_part = ar_acc;
    return r;
}

ComplexPhase surface_integral_phase(const SurfacePatch& patch, Branch branch) {
    if (patch.n_alpha < 8 || patch.n_phi < 8)
        throw std::invalid_argument("surface_integral_phase: resolution >= 8x8 required");
    const int na = patch.n_alpha + (patch.n_alpha % 2);  // Simpson needs even counts
    const int np = patch.n_phi + (patch.n_phi % 2);

    auto f_of = [&](double a, double /*phi*/) {
        ExtendedPoint pt;
        if (patch.plane == PatchPlane::AlphaRPhi)
            pt.alpha = {a, patch.alpha_other};
        else
            pt.alpha = {patch.alpha_other, a};
        const auto F = curvature(pt, branch);
        return patch.plane == PatchPlane::AlphaRPhi ? F.F_alpha_r_phi : F.F_alpha_i_phi;
    };

    // The curvature is phi independent; Simpson over phi is exact, so the
    // double integral reduces to (phi span) x Simpson over alpha. Keep the
    // full 2-D composite rule anyway: the patch contract is 2-D.
    const double ha = (patch.alpha_hi - patch.alpha_lo) / na;
    const double hp = (patch.phi_hi - patch.phi_lo) / np;
    auto w = [](int i, int n) { return (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0); };
    Complex acc = 0.0;
    for (int i = 0; i <= na; ++i)
        for (int j = 0; j <= np; ++j)
            acc += w(i, na) * w(j, np) * f_of(patch.alpha_lo + ha * i, patch.phi_lo + hp * j);
    acc *= (ha / 3.0) * (hp / 3.0);
    return ComplexPhase{acc};
}

double adiabatic_z(const DriveParams& p, Branch branch) {
    const auto f = model::frame(p, 0.0);
    return dynamics::bloch_of(f.right(branch))[2];
}

double delta_z_prediction(const DriveParams& p, const dynamics::LoopSchedule& s,
                          Branch branch, double t) {
    if (!(p.Gamma > 0.0))
        throw std::invalid_argument("delta_z_prediction: Gamma > 0 required");
    if (std::abs(dynamics::phi_of_t(s, 0.0).phi_dot) > 1e-12)
        throw std::invalid_argument("delta_z_prediction: schedule must have phi_dot(0) = 0");
    const MixingAngle a = alpha_from_params(p);
    const double geom = std::sin(a.alpha_r) * std::sinh(a.alpha_i);
    const double phi_dot = dynamics::phi_of_t(s, t).phi_dot;
    return adiabatic_z(p, branch) +
           static_cast<double>(branch_sign(branch)) * geom * phi_dot / p.Gamma;
}

}  // namespace nhberry::geometry
