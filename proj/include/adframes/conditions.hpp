#pragma once

#include <limits>
#include <string>

#include "adframes/models.hpp"
#include "adframes/parallel.hpp"
#include "adframes/spectral.hpp"

namespace adframes {

/// Tracked-branch indices entering the two-level coefficient formulas.
/// `reference` plays the role of E0 and `other` of E1; all four coefficients
/// are invariant under swapping the pair.
struct LevelPair {
    int reference = 0;
    int other = 1;
};

/// One coefficient plus the per-time trace whose maximum it equals.
struct Coefficient {
    double value = 0.0;
    Eigen::VectorXd trace;
    double argmax_time = 0.0;
    bool pole = false; // C3 only: denominator collapsed, value = +inf
    double pole_time = std::numeric_limits<double>::quiet_NaN();
};

/// C1 = max |<E0|dH|E1>| / (E0-E1)^2, the standard adiabatic coefficient.
Coefficient coefficient_c1(const EigensystemTrajectory& traj, const HamiltonianModel& model,
                           LevelPair levels = {}, Exec exec = Exec::Parallel, int workers = 0);

/// C2 = max |d/dt(|<E0|dH|E1>| / (E0-E1)^2)| * tau. The inner quantity is
/// the modulus ratio, which keeps the coefficient independent of the
/// eigenvector gauge; its derivative is evaluated through
/// d|M|/dt = Re(conj(M) Mdot)/|M| so zero crossings of M stay second-order
/// accurate.
Coefficient coefficient_c2(const EigensystemTrajectory& traj, const HamiltonianModel& model,
                           double tau, LevelPair levels = {}, Exec exec = Exec::Parallel,
                           int workers = 0);

/// C3 = max |d10| / |E1 - E0 - Delta10| with
/// d10 = <E1|dH|E0>/(E0-E1) and
/// Delta10 = i*gamma1 - i*gamma0 - d/dt arg(i*d10) (unwrapped phase; the
/// minus sign makes the combination gauge-invariant and equal to the
/// stationary-basis value, where the denominator collapse marks resonance).
/// A collapsing denominator is reported as value = +inf with the witness
/// time, not as an error.
Coefficient coefficient_c3(const EigensystemTrajectory& traj, const HamiltonianModel& model,
                           LevelPair levels = {}, Exec exec = Exec::Parallel, int workers = 0);

/// C4 = max over t of tau^2 * max{ |dH|^3/gap^4 , |dH|*|d2H|/gap^3 }.
Coefficient coefficient_c4(const EigensystemTrajectory& traj, const HamiltonianModel& model,
                           double tau, LevelPair levels = {}, Exec exec = Exec::Parallel,
                           int workers = 0);

struct ConditionReport {
    Coefficient c1, c2, c3, c4;
    LevelPair levels;
    std::string frame = "inertial";
};

ConditionReport condition_report(const EigensystemTrajectory& traj,
                                 const HamiltonianModel& model, double tau,
                                 LevelPair levels = {}, std::string frame_tag = "inertial",
                                 Exec exec = Exec::Parallel, int workers = 0);

} // namespace adframes
