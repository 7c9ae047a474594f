#include "adframes/spectral.hpp"

#include <cmath>
#include <sstream>

#include "adframes/constants.hpp"

namespace adframes {

TimeGrid::TimeGrid(double t0_, double tau_, int steps_) : t0(t0_), tau(tau_), steps(steps_) {
    if (steps < 2) throw std::domain_error("TimeGrid: steps must be >= 2");
    if (!(tau > t0)) throw std::domain_error("TimeGrid: tau must exceed t0");
    if (!std::isfinite(t0) || !std::isfinite(tau))
        throw std::domain_error("TimeGrid: endpoints must be finite");
}

int required_steps(double t0, double tau, double omega_max, int points_per_period) {
    if (omega_max <= 0.0) return 2;
    const double dt_max = (kTwoPi / omega_max) / points_per_period;
    return std::max(2, static_cast<int>(std::ceil((tau - t0) / dt_max)) + 1);
}

void validate_resolution(const TimeGrid& grid, double omega_max, int points_per_period) {
    const int need = required_steps(grid.t0, grid.tau, omega_max, points_per_period);
    if (grid.steps < need) {
        std::ostringstream os;
        os << "grid too coarse: " << grid.steps << " steps over [" << grid.t0 << ", "
           << grid.tau << "] us, but omega_max = " << omega_max << " rad/us needs at least "
           << need << " steps (" << points_per_period
           << " points per fastest period); pass an explicit override to proceed";
        throw ConfigError(os.str());
    }
}

EigensystemTrajectory track_eigensystem(const HamiltonianModel& model, const TimeGrid& grid,
                                        bool enforce_resolution, Exec exec, int workers) {
    if (enforce_resolution) validate_resolution(grid, model.max_angular_frequency());

    const int n = grid.steps;
    const int dim = model.dim();

    // per-point diagonalization, independent slots
    std::vector<Eigensystem> raw(n);
    parallel_for(
        n, [&](std::ptrdiff_t i) { raw[i] = eig_hermitian(model.H(grid.time(int(i)))); },
        exec, workers);

    EigensystemTrajectory traj(grid);
    traj.energies.resize(n, dim);
    traj.states.resize(n);

    // step 0: ascending energies, gauge from eig_hermitian
    traj.states[0] = raw[0].vectors;
    traj.energies.row(0) = raw[0].values.transpose();

    // sequential ordering + gauge pass
    for (int i = 1; i < n; ++i) {
        const Matrix overlap = traj.states[i - 1].adjoint() * raw[i].vectors; // (prev m, new k)
        std::vector<int> match(dim, -1);
        std::vector<bool> used(dim, false);
        // greedy assignment by descending |overlap|
        for (int pick = 0; pick < dim; ++pick) {
            double best = -1.0;
            int bm = -1, bk = -1;
            for (int m = 0; m < dim; ++m) {
                if (match[m] >= 0) continue;
                for (int k = 0; k < dim; ++k) {
                    if (used[k]) continue;
                    const double a = std::abs(overlap(m, k));
                    if (a > best) {
                        best = a;
                        bm = m;
                        bk = k;
                    }
                }
            }
            match[bm] = bk;
            used[bk] = true;
        }

        Matrix cols(dim, dim);
        for (int m = 0; m < dim; ++m) {
            const int k = match[m];
            const Complex s = overlap(m, k);
            const double mag = std::abs(s);
            if (mag < 0.9) {
                std::ostringstream os;
                os << "grid too coarse near avoided crossing at t = " << grid.time(i)
                   << " us: tracked overlap |<v_" << m << "(t_prev)|v(t)>| = " << mag
                   << " fell below 0.9";
                throw NumericalError(os.str());
            }
            traj.max_overlap_deficit = std::max(traj.max_overlap_deficit, 1.0 - mag);
            // <v_prev|raw_k> = s, so raw_k * conj(s)/|s| has real positive overlap
            const Complex phase = std::conj(s) / mag;
            cols.col(m) = raw[i].vectors.col(k) * phase;
            traj.energies(i, m) = raw[i].values(k);
        }
        traj.states[i] = std::move(cols);
    }
    return traj;
}

Vector berry_term(const EigensystemTrajectory& traj, int level) {
    const int n = traj.grid.steps;
    if (n < 3) throw std::domain_error("berry_term: need at least 3 grid points");
    if (level < 0 || level >= traj.dim())
        throw std::domain_error("berry_term: level index out of range");
    const double dt = traj.grid.dt();
    Vector gamma(n);
    auto col = [&](int i) { return traj.states[i].col(level); };
    for (int i = 0; i < n; ++i) {
        Vector deriv;
        if (i == 0) {
            deriv = (-3.0 * col(0) + 4.0 * col(1) - col(2)) / (2.0 * dt);
        } else if (i == n - 1) {
            deriv = (3.0 * col(n - 1) - 4.0 * col(n - 2) + col(n - 3)) / (2.0 * dt);
        } else {
            deriv = (col(i + 1) - col(i - 1)) / (2.0 * dt);
        }
        gamma(i) = col(i).dot(deriv); // <v|v'>; Eigen dot conjugates the left factor
    }
    return gamma;
}

ClosedFormRecord closed_form_crosscheck(double omega0, double omegaT, double omega, double t) {
    ClosedFormRecord rec;
    rec.omega0 = omega0;
    rec.omegaT = omegaT;
    rec.omega = omega;
    rec.t = t;

    const double s = std::sin(omega * t);
    const Matrix h = omega0 * pauli_z() + omegaT * s * pauli_x();
    const Eigensystem sys = eig_hermitian(HermitianOperator(h));
    rec.energies_numeric = {sys.values(0), sys.values(1)};

    if (std::abs(s) < 1e-12) {
        rec.evaluable = false;
        rec.note = "not evaluable at this t: csc(omega t) singular";
        return rec;
    }
    rec.evaluable = true;

    struct Option {
        const char* label;
        double theta;
    };
    const Option options[] = {
        {"theta=arctan(omega0/omegaT)", std::atan2(omega0, omegaT)},
        {"theta=arctan(omegaT/omega0)", std::atan2(omegaT, omega0)},
    };

    for (const auto& opt : options) {
        ClosedFormVariant var;
        var.theta_convention = opt.label;
        var.theta = opt.theta;
        const double sigma_sq = 3.0 + std::cos(2.0 * opt.theta) -
                                2.0 * std::cos(2.0 * omega * t) * std::pow(std::sin(opt.theta), 2);
        var.sigma = std::sqrt(std::max(0.0, sigma_sq));
        for (int level = 0; level < 2; ++level) {
            // printed labels: E_n = -(-1)^n omega0 Sigma / 2, n in {0, 1}
            const double sign = (level == 0) ? -1.0 : 1.0;
            const double e_printed = sign * omega0 * var.sigma / 2.0;
            var.energies_printed[level] = e_printed;
            var.energy_deviation[level] = std::abs(e_printed - rec.energies_numeric[level]);

            const double alpha = 0.5 * std::cos(opt.theta) / s *
                                 (-2.0 * std::pow(-1.0, level) * std::cos(opt.theta) + var.sigma);
            Vector v(2);
            v << -std::pow(-1.0, level) * alpha, 1.0;
            v /= v.norm();
            const double overlap = std::abs((v.adjoint() * sys.vectors.col(level))(0, 0));
            var.state_overlap_deficit[level] = 1.0 - overlap;
        }
        rec.variants.push_back(std::move(var));
    }
    return rec;
}

} // namespace adframes
