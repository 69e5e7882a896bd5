#pragma once

// Time-domain propagation: phi(t) control schedules, no-jump Schroedinger
// evolution of the unnormalized two-level state, three-level Lindblad
// evolution with gamma_e and f->e jumps, and extraction of norms, survival
// probabilities and Bloch trajectories.

#include <array>
#include <vector>

#include "nhberry/model.hpp"
#include "nhberry/numerics.hpp"
#include "nhberry/ode.hpp"

namespace nhberry::dynamics {

using model::DriveParams;
using numerics::CMat2;
using numerics::CMat3;
using numerics::Complex;
using numerics::CVec2;
using numerics::CVec3;
using numerics::OdeTol;

enum class Ramp { CosineFlat, FullCosine, ConstantRate };

// phi(0) = 0, phi(T) = 2*pi*f*eta, with phi_dot(0) = phi_dot(T) = 0 for the
// cosine ramps. cosine_flat rises over a cosine half-period to a plateau
// rate, holds, then falls symmetrically; full_cosine is a single
// (1 - cos(2 pi t / T))/2 velocity pulse.
struct LoopSchedule {
    int direction = +1;            // eta
    double T = 0.0;                // us
    double winding_fraction = 1.0; // f in (0, 1]
    Ramp ramp = Ramp::ConstantRate;
    double ramp_half_period = 0.0; // cosine_flat rise/fall duration
    double flat_duration = 0.0;    // cosine_flat plateau duration

    static LoopSchedule cosine_flat(int eta, double half_period, double flat,
                                    double fraction = 1.0);
    static LoopSchedule full_cosine(int eta, double period, double fraction = 1.0);
    static LoopSchedule constant_rate(int eta, double T, double fraction = 1.0);

    double total_winding() const;  // 2*pi*f*eta
};

struct PhiPoint {
    double phi = 0.0;
    double phi_dot = 0.0;
};

PhiPoint phi_of_t(const LoopSchedule& s, double t);

// Three-level rates: |e> decays to |g> at gamma_e, |f> relaxes to |e> at
// gamma_f; the drive's differential decay must satisfy
// Gamma = (gamma_e - gamma_f)/2.
struct ThreeLevelParams {
    double gamma_e = 0.0;
    double gamma_f = 0.0;
    DriveParams drive;

    ThreeLevelParams(double ge, double gf, const DriveParams& d);
    static ThreeLevelParams from_drive(const DriveParams& d, double gf);
};

enum class RecordKind { TwoLevel, ThreeLevel };

// Uniformly sampled trajectory. For two-level records states holds the
// unnormalized psi and norms_sq = <psi|psi>; for three-level records rhos
// holds the density matrix and norms_sq = Tr over the {e,f} block.
struct TrajectoryRecord {
    RecordKind kind = RecordKind::TwoLevel;
    std::vector<double> times;
    std::vector<CVec2> states;
    std::vector<CMat3> rhos;
    std::vector<double> norms_sq;
    std::vector<std::array<double, 3>> bloch;  // normalized Pauli expectations
    std::vector<double> schedule_phi;
};

TrajectoryRecord propagate_nh(const DriveParams& p, const LoopSchedule& s,
                              const CVec2& psi0, const OdeTol& tol = {},
                              int n_samples = 600);

TrajectoryRecord propagate_lindblad(const ThreeLevelParams& p3, const LoopSchedule& s,
                                    const CMat3& rho0, const OdeTol& tol = {},
                                    int n_samples = 600);

// Survival in the driven manifold, normalized to t = 0.
std::vector<double> survival_probability(const TrajectoryRecord& rec);

// Pauli expectations of the normalized two-level state; with frame_rotation
// the phi(t) gauge winding is removed so the trajectory lives in the
// undriven frame (|R-> near |f>, |R+> near |e>).
std::vector<std::array<double, 3>> bloch_trajectory(const TrajectoryRecord& rec,
                                                    bool frame_rotation);

// Helpers shared with the protocol layer.
CMat3 embed_ef(const CMat2& m);                // block {e,f}, identity on |g>
CMat3 pure_state_ef(const CVec2& psi);         // |psi><psi| embedded on {e,f}
CMat2 ef_block(const CMat3& rho);
std::array<double, 3> bloch_of(const CVec2& psi);
std::array<double, 3> bloch_of(const CMat2& rho);

}  // namespace nhberry::dynamics
