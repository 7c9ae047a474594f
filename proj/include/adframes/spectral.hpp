#pragma once

#include <array>
#include <string>
#include <vector>

#include "adframes/linalg.hpp"
#include "adframes/models.hpp"
#include "adframes/parallel.hpp"

namespace adframes {

/// Uniform time grid over [t0, tau], endpoints inclusive.
struct TimeGrid {
    TimeGrid(double t0_, double tau_, int steps_);

    double t0;
    double tau;
    int steps;

    double dt() const { return (tau - t0) / (steps - 1); }
    double time(int i) const { return t0 + dt() * i; }
};

/// Steps needed so that dt <= (2pi/omega_max) / points_per_period.
int required_steps(double t0, double tau, double omega_max, int points_per_period = 40);

/// Throws ConfigError (with the suggested minimum) when the grid breaks the
/// resolution rule.
void validate_resolution(const TimeGrid& grid, double omega_max, int points_per_period = 40);

/// Instantaneous eigensystem over a grid with branch labels ordered by
/// maximal overlap with the previous step and phases fixed so successive
/// overlaps are real positive.
struct EigensystemTrajectory {
    EigensystemTrajectory(TimeGrid g) : grid(g) {}

    TimeGrid grid;
    Eigen::MatrixXd energies;   // steps x dim, rad/us
    std::vector<Matrix> states; // per step; column n is tracked level n
    double max_overlap_deficit = 0.0;

    int dim() const { return static_cast<int>(energies.cols()); }
    double gap(int i, int lo, int hi) const { return energies(i, hi) - energies(i, lo); }
};

/// Diagonalizes H(t) at every grid point, then runs the sequential
/// ordering/gauge pass. Per-point work runs under `exec`; the output is
/// identical for both policies. Tracking aborts with NumericalError when a
/// matched overlap magnitude drops below 0.9.
EigensystemTrajectory track_eigensystem(const HamiltonianModel& model, const TimeGrid& grid,
                                        bool enforce_resolution = true,
                                        Exec exec = Exec::Parallel, int workers = 0);

/// Berry term gamma_n(t_i) = <E_n|dE_n/dt>, central differences inside and
/// one-sided second order at the endpoints.
Vector berry_term(const EigensystemTrajectory& traj, int level);

/// Published closed-form eigensystem of the oscillating qubit, evaluated
/// under both candidate angle conventions and compared against direct
/// diagonalization. Reports deviations; never throws on mismatch.
struct ClosedFormVariant {
    std::string theta_convention;
    double theta = 0.0;
    double sigma = 0.0;
    std::array<double, 2> energies_printed{};
    std::array<double, 2> energy_deviation{};
    std::array<double, 2> state_overlap_deficit{};
};

struct ClosedFormRecord {
    double omega0 = 0.0, omegaT = 0.0, omega = 0.0, t = 0.0;
    bool evaluable = false;
    std::string note;
    std::array<double, 2> energies_numeric{};
    std::vector<ClosedFormVariant> variants;
};

ClosedFormRecord closed_form_crosscheck(double omega0, double omegaT, double omega, double t);

} // namespace adframes
