#pragma once

// Analytic layer for the dissipative two-level system
//
//   H(phi) = [[Delta - i*Gamma, J e^{+i phi}],
//             [J e^{-i phi},    0            ]]   (basis {|0>,|1>} = {|e>,|f>})
//
// with eps = Delta - i*Gamma and delta = 2 sqrt(J^2 + eps^2/4) on the
// principal branch, written delta = delta_r - i*delta_i. Eigenvalues are
// E_pm = (eps pm delta)/2; right kets and left bras share the coefficients
// c_pm = (-eps pm delta)/(2J) and the normalization <R|R> = 1, which makes
// the bi-orthogonal scalar <L|R> a nontrivial factor carried explicitly.

#include <complex>

#include "nhberry/errors.hpp"
#include "nhberry/numerics.hpp"

namespace nhberry::model {

using numerics::CMat2;
using numerics::Complex;
using numerics::CVec2;

enum class Branch { Plus, Minus };

inline constexpr int sign_of(Branch b) { return b == Branch::Plus ? +1 : -1; }

// Static drive parameters, angular-frequency units (rad/us, 1/us).
// Construction is refused within ep_tol of the exceptional point, where
// every 1/delta formula diverges.
struct DriveParams {
    double J = 0.0;
    double Delta = 0.0;
    double Gamma = 0.0;

    static constexpr double ep_tol = 1e-9;  // rad/us

    DriveParams(double j, double delta, double gamma);

    Complex epsilon() const { return {Delta, -Gamma}; }
    Complex delta() const;
};

// Eigensystem at a given phi: values, right kets, left bras (stored by
// their row components; contract with numerics::bilinear).
struct BiorthogonalFrame {
    double phi = 0.0;
    Complex epsilon{};
    Complex delta{};
    double delta_r = 0.0;
    double delta_i = 0.0;
    Complex E_plus{}, E_minus{};
    Complex c_plus{}, c_minus{};   // |1> coefficients before the e^{-i phi} gauge
    CVec2 R_plus{}, R_minus{};
    CVec2 L_plus{}, L_minus{};
    Complex s_plus{}, s_minus{};   // <L_pm|R_pm> = (1 + c^2) / (1 + |c|^2)

    Complex eps_over_delta() const { return epsilon / delta; }
    const CVec2& right(Branch b) const { return b == Branch::Plus ? R_plus : R_minus; }
    const CVec2& left(Branch b) const { return b == Branch::Plus ? L_plus : L_minus; }
    Complex lr(Branch b) const { return b == Branch::Plus ? s_plus : s_minus; }
    Complex energy(Branch b) const { return b == Branch::Plus ? E_plus : E_minus; }
};

// A complex phase split into real (rad) and imaginary (log-amplitude) parts.
struct ComplexPhase {
    double real_part = 0.0;
    double imag_part = 0.0;

    ComplexPhase() = default;
    explicit ComplexPhase(Complex z);
    ComplexPhase(double re, double im);

    Complex value() const { return {real_part, imag_part}; }
};

CMat2 hamiltonian(const DriveParams& p, double phi);

BiorthogonalFrame frame(const DriveParams& p, double phi);

// Berry connection A_pm = 1/2 -+ eps/(2 delta); independent of phi.
Complex berry_connection(const DriveParams& p, Branch branch);

// Complex geometric phase for winding fraction f in (0,1] and loop
// direction eta = +-1:  theta = f * pi * eta * (1 -+ eps/delta).
ComplexPhase berry_phase(const DriveParams& p, Branch branch, int eta, double winding_fraction = 1.0);

// lambda_pm = -E_pm * T for a phi-only schedule of duration T.
ComplexPhase dynamical_phase(const DriveParams& p, Branch branch, double T);

// Exact instantaneous eigenstate-swap map: M|R+> = +|R->, M|R-> = -|R+>.
CMat2 swap_operator(const DriveParams& p, double phi);

// Tomography observables x = <psi|Sx|psi>, y = <psi|Sy|psi> built from the
// left eigenvectors, Sx = |L-><L+| + |L+><L-|, Sy = i|L-><L+| - i|L+><L-|.
struct TomographyXY {
    Complex x{};
    Complex y{};
};
TomographyXY tomography_xy(const CVec2& state, const DriveParams& p, double phi);

}  // namespace nhberry::model
