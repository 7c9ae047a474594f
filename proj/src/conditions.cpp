#include "adframes/conditions.hpp"

#include <cmath>
#include <sstream>

#include "adframes/constants.hpp"

namespace adframes {

namespace {

struct PairData {
    Eigen::VectorXd gap;     // E_other - E_reference, sign kept
    Vector element;          // <E_ref|dH|E_other>
    Eigen::VectorXd hdot_norm;
};

void check_levels(const EigensystemTrajectory& traj, LevelPair levels) {
    const int dim = traj.dim();
    if (levels.reference < 0 || levels.reference >= dim || levels.other < 0 ||
        levels.other >= dim || levels.reference == levels.other) {
        throw std::domain_error("conditions: invalid level pair");
    }
}

PairData pair_data(const EigensystemTrajectory& traj, const HamiltonianModel& model,
                   LevelPair levels, bool need_norm, Exec exec, int workers) {
    const int n = traj.grid.steps;
    PairData out;
    out.gap.resize(n);
    out.element.resize(n);
    if (need_norm) out.hdot_norm.resize(n);
    parallel_for(
        n,
        [&](std::ptrdiff_t i) {
            const Matrix hdot = model.dH(traj.grid.time(int(i))).mat();
            const auto vref = traj.states[i].col(levels.reference);
            const auto voth = traj.states[i].col(levels.other);
            out.element(i) = (vref.adjoint() * hdot * voth)(0, 0);
            out.gap(i) = traj.energies(i, levels.other) - traj.energies(i, levels.reference);
            if (need_norm) out.hdot_norm(i) = spectral_norm(hdot);
        },
        exec, workers);
    for (int i = 0; i < n; ++i) {
        if (std::abs(out.gap(i)) <= 1e-12) {
            std::ostringstream os;
            os << "degenerate gap at t = " << traj.grid.time(i) << " us (|E_" << levels.other
               << " - E_" << levels.reference << "| <= 1e-12 rad/us)";
            throw NumericalError(os.str());
        }
    }
    return out;
}

Coefficient reduce_max(const TimeGrid& grid, Eigen::VectorXd trace) {
    Coefficient c;
    c.trace = std::move(trace);
    int imax = 0;
    double best = -1.0;
    for (int i = 0; i < c.trace.size(); ++i) {
        if (c.trace(i) > best) { // strict: first index attaining the max
            best = c.trace(i);
            imax = i;
        }
    }
    c.value = best;
    c.argmax_time = grid.time(imax);
    return c;
}

// d/dt of a sampled scalar: central inside, one-sided third order at the
// ends so endpoint truncation cannot dominate a max-over-grid scan
Eigen::VectorXd ddt(const Eigen::VectorXd& f, double dt) {
    const int n = static_cast<int>(f.size());
    Eigen::VectorXd out(n);
    if (n >= 4) {
        out(0) = (-11.0 * f(0) + 18.0 * f(1) - 9.0 * f(2) + 2.0 * f(3)) / (6.0 * dt);
        out(n - 1) =
            (11.0 * f(n - 1) - 18.0 * f(n - 2) + 9.0 * f(n - 3) - 2.0 * f(n - 4)) / (6.0 * dt);
    } else {
        out(0) = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * dt);
        out(n - 1) = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * dt);
    }
    for (int i = 1; i < n - 1; ++i) out(i) = (f(i + 1) - f(i - 1)) / (2.0 * dt);
    return out;
}

} // namespace

Coefficient coefficient_c1(const EigensystemTrajectory& traj, const HamiltonianModel& model,
                           LevelPair levels, Exec exec, int workers) {
    check_levels(traj, levels);
    const PairData d = pair_data(traj, model, levels, false, exec, workers);
    Eigen::VectorXd trace = d.element.cwiseAbs().array() / d.gap.array().square();
    return reduce_max(traj.grid, std::move(trace));
}

namespace {

Vector ddt_complex(const Vector& f, double dt) {
    const int n = static_cast<int>(f.size());
    Vector out(n);
    if (n >= 4) {
        out(0) = (-11.0 * f(0) + 18.0 * f(1) - 9.0 * f(2) + 2.0 * f(3)) / (6.0 * dt);
        out(n - 1) =
            (11.0 * f(n - 1) - 18.0 * f(n - 2) + 9.0 * f(n - 3) - 2.0 * f(n - 4)) / (6.0 * dt);
    } else {
        out(0) = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * dt);
        out(n - 1) = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * dt);
    }
    for (int i = 1; i < n - 1; ++i) out(i) = (f(i + 1) - f(i - 1)) / (2.0 * dt);
    return out;
}

} // namespace

Coefficient coefficient_c2(const EigensystemTrajectory& traj, const HamiltonianModel& model,
                           double tau, LevelPair levels, Exec exec, int workers) {
    check_levels(traj, levels);
    const int n = traj.grid.steps;
    const PairData d = pair_data(traj, model, levels, false, exec, workers);

    // d/dt(|M|/gap^2) through d|M|/dt = Re(conj(M) Mdot)/|M|, which is
    // gauge-invariant and stays second-order accurate at zero crossings of M
    // (there the one-sided limit |Mdot| applies).
    const Vector mdot = ddt_complex(d.element, traj.grid.dt());
    const Eigen::VectorXd gdot = ddt(d.gap.cwiseAbs(), traj.grid.dt());
    const double floor = 1e-12 * d.element.cwiseAbs().maxCoeff();

    Eigen::VectorXd trace(n);
    for (int i = 0; i < n; ++i) {
        const double mag = std::abs(d.element(i));
        const double g = std::abs(d.gap(i));
        const double mag_dot =
            mag > floor ? std::real(std::conj(d.element(i)) * mdot(i)) / mag
                        : std::abs(mdot(i));
        trace(i) = std::abs(mag_dot / (g * g) - 2.0 * mag * gdot(i) / (g * g * g)) * tau;
    }
    return reduce_max(traj.grid, std::move(trace));
}

Coefficient coefficient_c3(const EigensystemTrajectory& traj, const HamiltonianModel& model,
                           LevelPair levels, Exec exec, int workers) {
    check_levels(traj, levels);
    const int n = traj.grid.steps;
    const PairData d = pair_data(traj, model, levels, false, exec, workers);

    // d10 = <E1|dH|E0> / (E0 - E1) = conj(element) / (-gap)
    Vector d10(n);
    for (int i = 0; i < n; ++i) d10(i) = std::conj(d.element(i)) / (-d.gap(i));
    const double d10_max = d10.cwiseAbs().maxCoeff();
    if (d10_max == 0.0) {
        Coefficient c;
        c.trace = Eigen::VectorXd::Zero(n);
        c.value = 0.0;
        c.argmax_time = traj.grid.t0;
        return c;
    }

    // phase of i*d10 where defined; removable zero crossings of |d10| are
    // bridged by linear interpolation so they cannot poison the derivative
    const double defined_floor = 1e-8 * d10_max;
    std::vector<bool> defined(n);
    Eigen::VectorXd phase(n);
    for (int i = 0; i < n; ++i) {
        defined[i] = std::abs(d10(i)) > defined_floor;
        phase(i) = defined[i] ? std::arg(Complex(0, 1) * d10(i)) : 0.0;
    }
    // unwrap over defined points
    int prev = -1;
    for (int i = 0; i < n; ++i) {
        if (!defined[i]) continue;
        if (prev >= 0) {
            double delta = phase(i) - phase(prev);
            delta -= kTwoPi * std::round(delta / kTwoPi);
            phase(i) = phase(prev) + delta;
        }
        prev = i;
    }
    // fill undefined stretches linearly between their defined neighbours
    int left = -1;
    for (int i = 0; i < n; ++i) {
        if (defined[i]) {
            left = i;
            continue;
        }
        int right = i + 1;
        while (right < n && !defined[right]) ++right;
        if (left < 0 && right >= n) break; // nothing defined (handled above)
        for (int j = i; j < (right < n ? right : n); ++j) {
            if (left < 0) {
                phase(j) = phase(right);
            } else if (right >= n) {
                phase(j) = phase(left);
            } else {
                const double w =
                    double(j - left) / double(right - left);
                phase(j) = (1.0 - w) * phase(left) + w * phase(right);
            }
        }
        i = right - 1;
    }

    const Vector gamma_ref = berry_term(traj, levels.reference);
    const Vector gamma_oth = berry_term(traj, levels.other);
    const Eigen::VectorXd phase_dot = ddt(phase, traj.grid.dt());

    Coefficient c;
    c.trace.resize(n);
    for (int i = 0; i < n; ++i) {
        // i*gamma is real for normalized states; the residual real part of
        // gamma is a discretization artifact. The phase-derivative term
        // enters with a minus sign: under a gauge change both i*gamma and
        // d/dt arg(i d10) shift by the same amount, so this combination is
        // the gauge-invariant completion of the quantity (it reproduces the
        // stationary-basis value in any smooth gauge).
        const double delta10 =
            (Complex(0, 1) * (gamma_oth(i) - gamma_ref(i))).real() - phase_dot(i);
        const double denom = std::abs(d.gap(i) - delta10);
        if (denom <= 1e-12) {
            c.pole = true;
            if (std::isnan(c.pole_time)) c.pole_time = traj.grid.time(i);
            c.trace(i) = std::numeric_limits<double>::infinity();
        } else {
            c.trace(i) = std::abs(d10(i)) / denom;
        }
    }
    if (c.pole) {
        c.value = std::numeric_limits<double>::infinity();
        c.argmax_time = c.pole_time;
        return c;
    }
    Coefficient reduced = reduce_max(traj.grid, std::move(c.trace));
    return reduced;
}

Coefficient coefficient_c4(const EigensystemTrajectory& traj, const HamiltonianModel& model,
                           double tau, LevelPair levels, Exec exec, int workers) {
    check_levels(traj, levels);
    const int n = traj.grid.steps;
    const PairData d = pair_data(traj, model, levels, true, exec, workers);
    Eigen::VectorXd hddot_norm(n);
    parallel_for(
        n,
        [&](std::ptrdiff_t i) {
            hddot_norm(i) = spectral_norm(model.d2H(traj.grid.time(int(i))).mat());
        },
        exec, workers);
    Eigen::VectorXd trace(n);
    for (int i = 0; i < n; ++i) {
        const double gap = std::abs(d.gap(i));
        const double a = std::pow(d.hdot_norm(i), 3) / std::pow(gap, 4);
        const double b = d.hdot_norm(i) * hddot_norm(i) / std::pow(gap, 3);
        trace(i) = tau * tau * std::max(a, b);
    }
    return reduce_max(traj.grid, std::move(trace));
}

ConditionReport condition_report(const EigensystemTrajectory& traj,
                                 const HamiltonianModel& model, double tau, LevelPair levels,
                                 std::string frame_tag, Exec exec, int workers) {
    ConditionReport rep;
    rep.levels = levels;
    rep.frame = std::move(frame_tag);
    rep.c1 = coefficient_c1(traj, model, levels, exec, workers);
    rep.c2 = coefficient_c2(traj, model, tau, levels, exec, workers);
    rep.c3 = coefficient_c3(traj, model, levels, exec, workers);
    rep.c4 = coefficient_c4(traj, model, tau, levels, exec, workers);
    return rep;
}

} // namespace adframes
