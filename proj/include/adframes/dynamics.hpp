#pragma once

#include <string>
#include <vector>

#include "adframes/frames.hpp"
#include "adframes/models.hpp"
#include "adframes/spectral.hpp"

namespace adframes {

struct PropagationResult {
    PropagationResult(TimeGrid g) : grid(g) {}

    TimeGrid grid;
    std::vector<DensityMatrix> states; // one per grid point
    double unitarity_drift = 0.0;      // max per-step |U^dag U - I|
    double unitarity_accumulated = 0.0;
    std::string frame = "inertial";
};

/// Midpoint-exponential propagation of the commutator equation of motion:
/// U_i = exp(-i H(t_i + dt/2) dt), rho_{i+1} = U_i rho_i U_i^dag.
/// Trace and purity are checked every step against the closed-dynamics
/// tolerances (1e-8 and 1e-7); a breach raises NumericalError naming the step.
PropagationResult propagate(const HamiltonianModel& model, const DensityMatrix& rho0,
                            const TimeGrid& grid, std::string frame_tag = "inertial",
                            bool enforce_resolution = true);

/// Rank-1 projectors onto a tracked level; gauge-independent.
std::vector<DensityMatrix> adiabatic_reference(const EigensystemTrajectory& traj, int level);

/// Tracked level with maximal overlap <v|rho0|v> at t0.
int reference_level_for_state(const EigensystemTrajectory& traj, const DensityMatrix& rho0);

struct FidelityTrace {
    FidelityTrace(TimeGrid g) : grid(g) {}

    TimeGrid grid;
    Eigen::VectorXd values;
    int reference_level = 0;

    double terminal() const { return values(values.size() - 1); }
    double minimum() const { return values.minCoeff(); }
};

/// F(t_i) = |tr(rho_i rho_ad_i)| pointwise; grids must agree.
FidelityTrace fidelity(const PropagationResult& result,
                       const std::vector<DensityMatrix>& reference, int reference_level);

/// Propagates in the inertial frame and conjugates by O(t), then propagates
/// the transformed model directly; returns the max trace-norm difference
/// over the grid. Nothing is stored, so arbitrarily fine grids are cheap.
double frame_consistency_check(const HamiltonianModel& model, const FrameSpec& frame,
                               const DensityMatrix& rho0, const TimeGrid& grid);

} // namespace adframes
