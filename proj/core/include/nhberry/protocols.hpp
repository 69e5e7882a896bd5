#pragma once

// Composite experiment sequences and their estimators:
//   - four-step interferometric measurement of the real geometric phase,
//   - loop-direction survival ratio for the imaginary part,
//   - open-loop (fractional winding) scans,
//   - the non-unitary geometric gate and its transfer function,
//   - adiabaticity diagnostics and time-resolved survival curves.
//
// Loop ordering is fixed here once: eta_first always denotes the loop that
// acts first on the state.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nhberry/dynamics.hpp"
#include "nhberry/model.hpp"

namespace nhberry::protocols {

using dynamics::LoopSchedule;
using dynamics::ThreeLevelParams;
using dynamics::TrajectoryRecord;
using model::Branch;
using model::DriveParams;
using numerics::OdeTol;

enum class Engine { Analytic, Simulated, Lindblad };

std::string engine_name(Engine e);

struct SimOptions {
    OdeTol tol{};
    double gamma_f = 0.1;  // three-level split used by Lindblad engines
    int n_samples = 600;
};

// Extraction output plus every raw observable the estimator consumed, so
// an extracted value can always be recomputed from the raw map alone.
struct ProtocolResult {
    std::optional<double> theta_r;
    std::optional<double> theta_im;
    std::map<std::string, double> raw;

    std::string method;
    std::string engine;
    double T = 0.0;
    double winding_fraction = 1.0;
    int eta_first = 0;
    int eta_second = 0;
};

// Unwraps a sequence of modulo-ambiguous estimator outputs by nearest
// continuation; the quarter-arctangent estimator has modulus pi/2.
class BranchTracker {
public:
    explicit BranchTracker(double modulus) : modulus_(modulus) {}
    void seed(double value) { prev_ = value; have_prev_ = true; }
    double unwrap(double raw);

private:
    double modulus_;
    double prev_ = 0.0;
    bool have_prev_ = false;
};

// Canonical interferometry/ratio loop: the lab cosine ramp scaled to T
// (rise T/4, plateau T/2, fall T/4).
LoopSchedule protocol_schedule(int eta, double T, double fraction = 1.0);

ProtocolResult real_phase_interferometry(const DriveParams& p, double T, int eta_first,
                                         int eta_second, Engine engine,
                                         const SimOptions& opt = {});

ProtocolResult imag_phase_ratio(const DriveParams& p, double T, Branch branch,
                                Engine engine, const SimOptions& opt = {},
                                double winding_fraction = 1.0);

struct OpenLoopScan {
    std::vector<ProtocolResult> results;
    double slope = 0.0;      // least-squares fit of theta_im vs fraction
    double intercept = 0.0;
};
OpenLoopScan open_loop_scan(const DriveParams& p, double T, Branch branch,
                            std::span<const double> fractions, Engine engine,
                            const SimOptions& opt = {});

// Gate sequence: loop(eta_first), swap, loop(eta_second), swap, on the
// input alpha|R+> + beta|R-> with |beta|^2 = p_minus_in. theta_im_eff is
// the per-branch imaginary phase recovered by inverting the transfer
// function; NaN at the endpoints where the inversion is singular.
struct GateResult {
    double p_minus_out = 0.0;
    double theta_im_eff = 0.0;
    std::map<std::string, double> raw;
};
GateResult nonunitary_gate(const DriveParams& p, double T_each, int eta_first,
                           int eta_second, double p_minus_in, Engine engine,
                           const SimOptions& opt = {});

// theta_im_eff over a (J, Delta) grid at p_in = 1/2; cells[d][j]. Failed
// cells (exceptional point, vanishing survival) hold NaN and never abort
// the sweep.
struct ThetaImMap {
    std::vector<double> j_values;
    std::vector<double> delta_values;
    std::vector<std::vector<double>> cells;
};
ThetaImMap theta_im_map(std::span<const double> j_grid, std::span<const double> delta_grid,
                        double Gamma, double T_each, int eta_first, int eta_second,
                        Engine engine, const SimOptions& opt = {}, int workers = 1);

// a_pm(t) = J |phi_dot| / |delta|^2 * exp(+- delta_i t): the growing branch
// is the transition out of the more damped eigenstate.
struct AdiabaticityAmplitudes {
    std::vector<double> a_plus;
    std::vector<double> a_minus;
};
AdiabaticityAmplitudes adiabaticity_amplitudes(const DriveParams& p, const LoopSchedule& s,
                                               std::span<const double> t_grid);

// Survival records for both loop directions plus the idle reference
// (drive off, state held at its initial preparation).
struct SurvivalCurves {
    TrajectoryRecord c_plus;
    TrajectoryRecord c_minus;
    TrajectoryRecord idle;
};
SurvivalCurves time_resolved_survival(const DriveParams& p, double T, Branch branch,
                                      Engine engine, const SimOptions& opt = {});

}  // namespace nhberry::protocols
