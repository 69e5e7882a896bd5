#include "nhberry/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nhberry::dynamics {

namespace {

constexpr double pi = std::numbers::pi;

void check_schedule(const LoopSchedule& s) {
    if (s.direction != +1 && s.direction != -1)
        throw std::invalid_argument("LoopSchedule: direction must be +1 or -1");
    if (!(s.T > 0.0)) throw std::invalid_argument("LoopSchedule: T must be > 0");
    if (!(s.winding_fraction > 0.0 && s.winding_fraction <= 1.0))
        throw std::invalid_argument("LoopSchedule: winding fraction must be in (0, 1]");
}

}  // namespace

LoopSchedule LoopSchedule::cosine_flat(int eta, double half_period, double flat,
                                       double fraction) {
    if (!(half_period > 0.0) || flat < 0.0)
        throw std::invalid_argument("cosine_flat: need half_period > 0 and flat >= 0");
    LoopSchedule s;
    s.direction = eta;
    s.T = 2.0 * half_period + flat;
    s.winding_fraction = fraction;
    s.ramp = Ramp::CosineFlat;
    s.ramp_half_period = half_period;
    s.flat_duration = flat;
    check_schedule(s);
    return s;
}

LoopSchedule LoopSchedule::full_cosine(int eta, double period, double fraction) {
    LoopSchedule s;
    s.direction = eta;
    s.T = period;
    s.winding_fraction = fraction;
    s.ramp = Ramp::FullCosine;
    check_schedule(s);
    return s;
}

LoopSchedule LoopSchedule::constant_rate(int eta, double T, double fraction) {
    LoopSchedule s;
    s.direction = eta;
    s.T = T;
    s.winding_fraction = fraction;
    s.ramp = Ramp::ConstantRate;
    check_schedule(s);
    return s;
}

double LoopSchedule::total_winding() const {
    return 2.0 * pi * winding_fraction * direction;
}

PhiPoint phi_of_t(const LoopSchedule& s, double t) {
    if (t < -1e-12 || t > s.T + 1e-12)
        throw std::invalid_argument("phi_of_t: t outside [0, T]");
    t = std::clamp(t, 0.0, s.T);
    const double W = s.total_winding();

    switch (s.ramp) {
        case Ramp::ConstantRate:
            return {W * t / s.T, W / s.T};
        case Ramp::FullCosine: {
            const double v = W / s.T;  // mean rate; peak is 2v
            const double w = 2.0 * pi / s.T;
            return {v * (t - std::sin(w * t) / w), v * (1.0 - std::cos(w * t))};
        }
        case Ramp::CosineFlat: {
            const double h = s.ramp_half_period;
            const double flat = s.flat_duration;
            const double v = W / (h + flat);  // plateau rate
            if (t <= h) {
                const double u = pi * t / h;
                return {0.5 * v * (t - (h / pi) * std::sin(u)),
                        0.5 * v * (1.0 - std::cos(u))};
            }
            if (t <= h + flat) {
                return {0.5 * v * h + v * (t - h), v};
            }
            const double r = s.T - t;  // time from the end
            const double u = pi * r / h;
            return {W - 0.5 * v * (r - (h / pi) * std::sin(u)),
                    0.5 * v * (1.0 - std::cos(u))};
        }
    }
    throw std::logic_error("phi_of_t: unknown ramp");
}

ThreeLevelParams::ThreeLevelParams(double ge, double gf, const DriveParams& d)
    : gamma_e(ge), gamma_f(gf), drive(d) {
    if (!(ge >= gf && gf >= 0.0))
        throw DomainError("ThreeLevelParams: need gamma_e >= gamma_f >= 0");
    if (std::abs(0.5 * (ge - gf) - d.Gamma) > 1e-12)
        throw DomainError("ThreeLevelParams: (gamma_e - gamma_f)/2 must equal drive.Gamma");
}

ThreeLevelParams ThreeLevelParams::from_drive(const DriveParams& d, double gf) {
    return ThreeLevelParams(gf + 2.0 * d.Gamma, gf, d);
}

std::array<double, 3> bloch_of(const CVec2& psi) {
    const double n = numerics::norm_sq(psi);
    if (n <= 0.0) throw NumericalError("bloch_of: zero-norm state");
    const Complex cross = std::conj(psi[0]) * psi[1];
    return {2.0 * cross.real() / n, 2.0 * cross.imag() / n,
            (std::norm(psi[0]) - std::norm(psi[1])) / n};
}

std::array<double, 3> bloch_of(const CMat2& rho) {
    const double n = (rho(0, 0) + rho(1, 1)).real();
    if (n <= 0.0) throw NumericalError("bloch_of: zero-weight state");
    const Complex cross = rho(1, 0);  // <0|sigma_-|..> ordering: x + iy = 2 rho_10
    return {2.0 * cross.real() / n, 2.0 * cross.imag() / n,
            (rho(0, 0) - rho(1, 1)).real() / n};
}

CMat3 embed_ef(const CMat2& m) {
    CMat3 r = CMat3::identity();
    r(0, 0) = m(0, 0);
    r(0, 1) = m(0, 1);
    r(1, 0) = m(1, 0);
    r(1, 1) = m(1, 1);
    return r;
}

CMat3 pure_state_ef(const CVec2& psi) {
    CMat3 rho;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) rho(a, b) = psi[a] * std::conj(psi[b]);
    return rho;
}

CMat2 ef_block(const CMat3& rho) {
    CMat2 b;
    b(0, 0) = rho(0, 0);
    b(0, 1) = rho(0, 1);
    b(1, 0) = rho(1, 0);
    b(1, 1) = rho(1, 1);
    return b;
}

TrajectoryRecord propagate_nh(const DriveParams& p, const LoopSchedule& s,
                              const CVec2& psi0, const OdeTol& tol, int n_samples) {
    if (n_samples < 2) throw std::invalid_argument("propagate_nh: n_samples >= 2");
    if (!std::isfinite(numerics::norm_sq(psi0)))
        throw std::invalid_argument("propagate_nh: non-finite initial state");

    // Integrate in the traceless gauge psi = exp(-i eps t / 2) chi, which
    // removes the uniform decay exp(-Gamma t / 2) from the integrated state
    // and keeps both branch amplitudes well scaled over long loops. The
    // recorded states are the true unnormalized psi.
    const Complex half_eps = 0.5 * p.epsilon();
    auto rhs = [&](double t, const CVec2& y) {
        CMat2 g = Complex{0.0, -1.0} * model::hamiltonian(p, phi_of_t(s, t).phi);
        g(0, 0) += numerics::I * half_eps;
        g(1, 1) += numerics::I * half_eps;
        return g * y;
    };
    const auto sol = numerics::integrate<2>(rhs, psi0, 0.0, s.T, tol);

    TrajectoryRecord rec;
    rec.kind = RecordKind::TwoLevel;
    rec.times.reserve(n_samples);
    for (int k = 0; k < n_samples; ++k) {
        const double t = s.T * k / (n_samples - 1);
        CVec2 y = (k == n_samples - 1) ? sol.final_state() : sol.sample(t);
        y *= std::exp(Complex{0.0, -1.0} * half_eps * t);
        rec.times.push_back(t);
        rec.states.push_back(y);
        rec.norms_sq.push_back(numerics::norm_sq(y));
        rec.bloch.push_back(bloch_of(y));
        rec.schedule_phi.push_back(phi_of_t(s, t).phi);
    }
    return rec;
}

namespace {

using numerics::CVec;

// Flatten rho (3x3) into CVec<9> row-major and back.
CVec<9> flatten(const CMat3& m) {
    CVec<9> v;
    for (int i = 0; i < 9; ++i) v[i] = m.m[i];
    return v;
}
CMat3 unflatten(const CVec<9>& v) {
    CMat3 m;
    for (int i = 0; i < 9; ++i) m.m[i] = v[i];
    return m;
}

void check_density(const CMat3& rho) {
    const double tr_dev = std::abs(numerics::trace(rho) - Complex{1.0, 0.0});
    double herm_dev = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            herm_dev = std::max(herm_dev, std::abs(rho(a, b) - std::conj(rho(b, a))));
    if (tr_dev > 1e-9 || herm_dev > 1e-9)
        throw std::invalid_argument("propagate_lindblad: rho0 not a unit-trace Hermitian matrix");
    // Positive semidefiniteness via principal minors of the Hermitian part.
    const double d0 = rho(0, 0).real(), d1 = rho(1, 1).real(), d2 = rho(2, 2).real();
    auto minor2 = [&](int a, int b) {
        return (rho(a, a) * rho(b, b) - rho(a, b) * rho(b, a)).real();
    };
    const Complex det3 = rho(0, 0) * (rho(1, 1) * rho(2, 2) - rho(1, 2) * rho(2, 1)) -
                         rho(0, 1) * (rho(1, 0) * rho(2, 2) - rho(1, 2) * rho(2, 0)) +
                         rho(0, 2) * (rho(1, 0) * rho(2, 1) - rho(1, 1) * rho(2, 0));
    const double tol = -1e-9;
    if (d0 < tol || d1 < tol || d2 < tol || minor2(0, 1) < tol || minor2(0, 2) < tol ||
        minor2(1, 2) < tol || det3.real() < tol)
        throw std::invalid_argument("propagate_lindblad: rho0 not positive semidefinite");
}

}  // namespace

TrajectoryRecord propagate_lindblad(const ThreeLevelParams& p3, const LoopSchedule& s,
                                    const CMat3& rho0, const OdeTol& tol, int n_samples) {
    if (n_samples < 2) throw std::invalid_argument("propagate_lindblad: n_samples >= 2");
    check_density(rho0);

    const double ge = p3.gamma_e, gf = p3.gamma_f;
    const DriveParams& dp = p3.drive;

    // Basis order {e, f, g}. H3 carries only the Hermitian part of the
    // drive; all dissipation lives in the jump operators
    // L1 = sqrt(ge) |g><e| and L2 = sqrt(gf) |e><f|.
    auto rhs = [&](double t, const CVec<9>& y) {
        const CMat3 rho = unflatten(y);
        const double phi = phi_of_t(s, t).phi;
        const Complex j01 = dp.J * std::exp(Complex{0.0, phi});

        CMat3 h;
        h(0, 0) = dp.Delta;
        h(0, 1) = j01;
        h(1, 0) = std::conj(j01);

        CMat3 d = (Complex{0.0, -1.0}) * (h * rho - rho * h);
        // L1 rho L1^dag feeds |g><g| from rho_ee; anticommutator drains e.
        d(2, 2) += ge * rho(0, 0);
        // L2 rho L2^dag feeds |e><e| from rho_ff; anticommutator drains f.
        d(0, 0) += gf * rho(1, 1);
        for (int k = 0; k < 3; ++k) {
            d(0, k) -= 0.5 * ge * rho(0, k);
            d(k, 0) -= 0.5 * ge * rho(k, 0);
            d(1, k) -= 0.5 * gf * rho(1, k);
            d(k, 1) -= 0.5 * gf * rho(k, 1);
        }
        return flatten(d);
    };

    const auto sol = numerics::integrate<9>(rhs, flatten(rho0), 0.0, s.T, tol);

    TrajectoryRecord rec;
    rec.kind = RecordKind::ThreeLevel;
    for (int k = 0; k < n_samples; ++k) {
        const double t = s.T * k / (n_samples - 1);
        const CMat3 rho = unflatten(k == n_samples - 1 ? sol.final_state() : sol.sample(t));
        rec.times.push_back(t);
        rec.rhos.push_back(rho);
        rec.norms_sq.push_back((rho(0, 0) + rho(1, 1)).real());
        rec.bloch.push_back(bloch_of(ef_block(rho)));
        rec.schedule_phi.push_back(phi_of_t(s, t).phi);
    }
    return rec;
}

std::vector<double> survival_probability(const TrajectoryRecord& rec) {
    if (rec.norms_sq.empty()) throw std::invalid_argument("survival_probability: empty record");
    const double p0 = rec.norms_sq.front();
    if (p0 <= 0.0) throw DomainError("survival_probability: zero initial weight");
    std::vector<double> p(rec.norms_sq.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = rec.norms_sq[i] / p0;
    return p;
}

std::vector<std::array<double, 3>> bloch_trajectory(const TrajectoryRecord& rec,
                                                    bool frame_rotation) {
    if (rec.kind != RecordKind::TwoLevel)
        throw std::invalid_argument("bloch_trajectory: two-level record required");
    std::vector<std::array<double, 3>> out;
    out.reserve(rec.states.size());
    for (std::size_t i = 0; i < rec.states.size(); ++i) {
        CVec2 psi = rec.states[i];
        if (frame_rotation)
            psi[1] *= std::exp(Complex{0.0, rec.schedule_phi[i]});
        out.push_back(bloch_of(psi));
    }
    return out;
}

}  // namespace nhberry::dynamics
