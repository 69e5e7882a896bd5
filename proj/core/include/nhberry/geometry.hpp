#pragma once

// Global geometric formulation on the extended parameter space
// (phi, alpha_R, alpha_I) in S1 x S1 x (0, inf), a double cover of the
// physical (phi, J, Delta) space at fixed Gamma. The complex mixing angle
// satisfies cos(alpha) = eps/delta, so
//
//   alpha = (1/2i) log[(Delta + 2iJ - i Gamma) / (Delta - 2iJ - i Gamma)],
//
// the branch chosen so that cos(alpha) reproduces the principal-branch
// eps/delta of the spectral problem. In the Hermitian limit alpha is the
// Bloch polar angle. Connection components in the globally smooth gauge:
// A_phi = (1 -+ cos alpha)/2, A_alphaR = -1/2, A_alphaI = 0; curvature
// F_alphaR,phi = +-(1/2) sin alpha, F_alphaI,phi = +-(i/2) sin alpha.

#include <span>
#include <vector>

#include "nhberry/dynamics.hpp"
#include "nhberry/model.hpp"

namespace nhberry::geometry {

using model::Branch;
using model::ComplexPhase;
using model::DriveParams;
using numerics::Complex;

struct MixingAngle {
    double alpha_r = 0.0;  // [0, 2*pi)
    double alpha_i = 0.0;  // > 0 for Gamma > 0; 0 only on the Hermitian boundary

    Complex value() const { return {alpha_r, alpha_i}; }
};

struct ExtendedPoint {
    double phi = 0.0;
    MixingAngle alpha{};
};

MixingAngle alpha_from_params(const DriveParams& p);

// Nearest-representative continuation: shifts alpha_r by multiples of pi
// (the cover sheets) to the representative closest to prev.
MixingAngle track_alpha(const MixingAngle& prev, const DriveParams& p);

DriveParams params_from_alpha(const MixingAngle& alpha, double Gamma);

struct ConnectionComponents {
    Complex A_phi{};
    Complex A_alpha_r{};
    Complex A_alpha_i{};
};
ConnectionComponents global_connection(const ExtendedPoint& pt, Branch branch);

struct CurvatureComponents {
    Complex F_alpha_r_phi{};
    Complex F_alpha_i_phi{};
};
CurvatureComponents curvature(const ExtendedPoint& pt, Branch branch);

// Trapezoidal line integral of A_phi dphi + A_alphaR dalphaR along a
// discretized path. The alpha_R term (an integer multiple of pi on closed
// loops in the extended space) is reported separately.
struct LineIntegralResult {
    ComplexPhase phi_part{};
    double alpha_r_part = 0.0;

    ComplexPhase total() const {
        return {phi_part.real_part + alpha_r_part, phi_part.imag_part};
    }
};
LineIntegralResult line_integral_phase(std::span<const ExtendedPoint> path, Branch branch);

// Coordinate-aligned rectangle in (alpha_R, phi) or (alpha_I, phi); the
// complementary alpha coordinate is held fixed.
enum class PatchPlane { AlphaRPhi, AlphaIPhi };
struct SurfacePatch {
    PatchPlane plane = PatchPlane::AlphaRPhi;
    double alpha_lo = 0.0;
    double alpha_hi = 0.0;
    double alpha_other = 0.0;
    double phi_lo = 0.0;
    double phi_hi = 0.0;
    int n_alpha = 32;
    int n_phi = 32;
};
ComplexPhase surface_integral_phase(const SurfacePatch& patch, Branch branch);

// Bloch-z of the evolving normalized state predicted from the imaginary
// connection: z(t) = z_ad(0) +- (sin aR sinh aI / Gamma) * phi_dot(t),
// valid for schedules with phi_dot(0) = 0.
double delta_z_prediction(const DriveParams& p, const dynamics::LoopSchedule& s,
                          Branch branch, double t);

// Instantaneous-eigenstate Bloch-z (phi independent).
double adiabatic_z(const DriveParams& p, Branch branch);

}  // namespace nhberry::geometry
