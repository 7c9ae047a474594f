#include "adframes/frames.hpp"

#include <cmath>
#include <sstream>

#include "adframes/constants.hpp"

namespace adframes {

FrameSpec::FrameSpec(HermitianOperator generator, double rate, std::string id)
    : generator_(std::move(generator)), rate_(rate), id_(std::move(id)) {
    const Eigensystem es = eig_hermitian(generator_);
    gen_values_ = es.values;
    gen_vectors_ = es.vectors;
    spread_ = gen_values_.maxCoeff() - gen_values_.minCoeff();
}

Matrix FrameSpec::O(double t) const {
    Vector phases(gen_values_.size());
    for (Eigen::Index i = 0; i < gen_values_.size(); ++i)
        phases(i) = std::exp(Complex(0.0, rate_ * t * gen_values_(i)));
    return gen_vectors_ * phases.asDiagonal() * gen_vectors_.adjoint();
}

Matrix FrameSpec::Odot(double t) const { return Complex(0, 1) * rate_ * generator_.mat() * O(t); }

FrameSpec spin_half_z_frame(double rate) {
    return FrameSpec(HermitianOperator(0.5 * pauli_z()), rate, "exp(i*w*t*sz/2)");
}

FrameSpec full_z_frame(double rate) {
    return FrameSpec(HermitianOperator(pauli_z()), rate, "exp(i*w*t*sz)");
}

HamiltonianModel transform_hamiltonian(const HamiltonianModel& model, const FrameSpec& frame) {
    if (model.dim() != frame.dim()) {
        std::ostringstream os;
        os << "transform_hamiltonian: model dim " << model.dim() << " != frame dim "
           << frame.dim();
        throw std::domain_error(os.str());
    }
    const FrameSpec fr = frame; // captured by value; cheap (precomputed eig)
    const HamiltonianModel base = model;
    const Matrix g = fr.generator().mat();
    const double rate = fr.rate();
    const Complex irate(0.0, rate);

    auto h = [base, fr, g, rate](double t) -> Matrix {
        const Matrix o = fr.O(t);
        return o * base.H(t).mat() * o.adjoint() - rate * g;
    };
    auto dh = [base, fr, g, irate](double t) -> Matrix {
        const Matrix o = fr.O(t);
        const Matrix k_h = o * base.H(t).mat() * o.adjoint();
        const Matrix k_dh = o * base.dH(t).mat() * o.adjoint();
        return k_dh + irate * (g * k_h - k_h * g);
    };
    auto d2h = [base, fr, g, irate, rate](double t) -> Matrix {
        const Matrix o = fr.O(t);
        const Matrix k_h = o * base.H(t).mat() * o.adjoint();
        const Matrix k_dh = o * base.dH(t).mat() * o.adjoint();
        const Matrix k_d2h = o * base.d2H(t).mat() * o.adjoint();
        const Matrix c1 = g * k_dh - k_dh * g;
        const Matrix c2 = g * k_h - k_h * g;
        const Matrix c2c = g * c2 - c2 * g;
        return k_d2h + 2.0 * irate * c1 - rate * rate * c2c;
    };

    const double max_omega =
        model.max_angular_frequency() + std::abs(rate) * frame.generator_spread();
    return HamiltonianModel(model.name() + "@" + frame.id(), model.dim(), model.params(), h,
                            dh, d2h, max_omega, model.fd_step());
}

namespace {

TheoremVerdict reduce_verdict(std::string condition, const TimeGrid& grid,
                              Eigen::MatrixXd dev_trace, double tol) {
    TheoremVerdict v;
    v.condition = std::move(condition);
    v.tolerance = tol;
    v.grid = grid;
    v.deviation_trace = std::move(dev_trace);
    const int n = static_cast<int>(v.deviation_trace.rows());
    const int dim = static_cast<int>(v.deviation_trace.cols());
    v.per_index_deviation.assign(dim, 0.0);
    v.max_deviation = 0.0;
    v.witness_index = 0;
    v.witness_time = grid.t0;
    for (int m = 0; m < dim; ++m) {
        for (int i = 0; i < n; ++i) {
            const double d = v.deviation_trace(i, m);
            if (d > v.per_index_deviation[m]) v.per_index_deviation[m] = d;
            if (d > v.max_deviation) {
                v.max_deviation = d;
                v.witness_index = m;
                v.witness_time = grid.time(i);
            }
        }
    }
    v.holds = v.max_deviation <= tol;
    return v;
}

} // namespace

TheoremVerdict theorem1_check(const EigensystemTrajectory& traj,
                              const EigensystemTrajectory& traj_o, const FrameSpec& frame,
                              int k, double tol, Exec exec, int workers) {
    if (k < 0 || k >= traj.dim()) throw std::domain_error("theorem1_check: bad level index");
    const TimeGrid& grid = traj.grid;
    if (traj_o.grid.steps != grid.steps)
        throw std::domain_error("theorem1_check: trajectories use different grids");
    const int n = grid.steps;
    const int dim = traj.dim();
    Eigen::MatrixXd vals(n, dim);
    parallel_for(
        n,
        [&](std::ptrdiff_t i) {
            const Vector mapped = frame.O(grid.time(int(i))) * traj.states[i].col(k);
            for (int m = 0; m < dim; ++m)
                vals(i, m) = std::abs(traj_o.states[i].col(m).dot(mapped));
        },
        exec, workers);

    Eigen::MatrixXd dev(n, dim);
    for (int m = 0; m < dim; ++m)
        for (int i = 0; i < n; ++i) dev(i, m) = std::abs(vals(i, m) - vals(0, m));
    return reduce_verdict("T1", grid, std::move(dev), tol);
}

TheoremVerdict theorem1_check(const HamiltonianModel& model, const FrameSpec& frame, int k,
                              const TimeGrid& grid, double tol, Exec exec, int workers) {
    const HamiltonianModel rotated = transform_hamiltonian(model, frame);
    const EigensystemTrajectory traj = track_eigensystem(model, grid, true, exec, workers);
    const EigensystemTrajectory traj_o = track_eigensystem(rotated, grid, true, exec, workers);
    return theorem1_check(traj, traj_o, frame, k, tol, exec, workers);
}

TheoremVerdict theorem1_reduced_check(const HamiltonianModel& model, const FrameSpec& frame,
                                      int k, const TimeGrid& grid, double tol, Exec exec,
                                      int workers) {
    if (k < 0 || k >= model.dim())
        throw std::domain_error("theorem1_reduced_check: bad level index");
    const HamiltonianModel rotated = transform_hamiltonian(model, frame);
    const EigensystemTrajectory traj_o = track_eigensystem(rotated, grid, true, exec, workers);
    const Vector ref = eig_hermitian(model.H(grid.t0)).vectors.col(k);

    const int n = grid.steps;
    const int dim = model.dim();
    Eigen::MatrixXd vals(n, dim);
    parallel_for(
        n,
        [&](std::ptrdiff_t i) {
            for (int m = 0; m < dim; ++m)
                vals(i, m) = std::abs(traj_o.states[i].col(m).dot(ref));
        },
        exec, workers);
    Eigen::MatrixXd dev(n, dim);
    for (int m = 0; m < dim; ++m)
        for (int i = 0; i < n; ++i) dev(i, m) = std::abs(vals(i, m) - vals(0, m));
    return reduce_verdict("T1-reduced", grid, std::move(dev), tol);
}

TheoremVerdict theorem2_check(const HamiltonianModel& model, const FrameSpec& frame,
                              const HermitianOperator& h_o_constant, int n_level,
                              const TimeGrid& grid, double tol, Exec exec, int workers) {
    if (n_level < 0 || n_level >= model.dim())
        throw std::domain_error("theorem2_check: bad level index");
    const HamiltonianModel rotated = transform_hamiltonian(model, frame);

    // Theorem 2 is stated for constant H_O only; verify before using it.
    {
        const int probes = std::min(grid.steps, 257);
        double worst = 0.0;
        for (int p = 0; p < probes; ++p) {
            const double t =
                grid.t0 + (grid.tau - grid.t0) * double(p) / double(probes - 1);
            worst = std::max(worst,
                             spectral_norm(rotated.H(t).mat() - h_o_constant.mat()));
        }
        if (worst > 1e-9) {
            std::ostringstream os;
            os << "Theorem 2 requires constant H_O: max |H_O(t) - H_O(t0)| = " << worst
               << " exceeds 1e-9 over the grid";
            throw std::domain_error(os.str());
        }
    }

    const EigensystemTrajectory traj = track_eigensystem(model, grid, true, exec, workers);
    const Eigensystem ho_eig = eig_hermitian(h_o_constant);
    const Matrix o0 = frame.O(grid.t0);
    const Vector initial = traj.states[0].col(n_level);
    const Vector rotated_initial = o0 * initial;

    const int n = grid.steps;
    const int dim = model.dim();
    Eigen::MatrixXd vals(n, dim);
    parallel_for(
        n,
        [&](std::ptrdiff_t i) {
            const double dt = grid.time(int(i)) - grid.t0;
            Vector phases(ho_eig.values.size());
            for (Eigen::Index q = 0; q < ho_eig.values.size(); ++q)
                phases(q) = std::exp(Complex(0.0, -dt * ho_eig.values(q)));
            const Vector evolved_o =
                ho_eig.vectors * (phases.asDiagonal() * (ho_eig.vectors.adjoint() * rotated_initial));
            const Vector evolved = frame.O(grid.time(int(i))).adjoint() * evolved_o;
            for (int m = 0; m < dim; ++m)
                vals(i, m) = std::abs(traj.states[i].col(m).dot(evolved));
        },
        exec, workers);

    Eigen::MatrixXd dev(n, dim);
    for (int m = 0; m < dim; ++m) {
        const double base = std::abs(traj.states[0].col(m).dot(initial));
        for (int i = 0; i < n; ++i) dev(i, m) = std::abs(vals(i, m) - base);
    }
    return reduce_verdict("T2", grid, std::move(dev), tol);
}

RotatedFormRecord printed_rotated_form_crosscheck(double omega0, double omegaT, double omega,
                                                  const TimeGrid& grid) {
    RotatedFormRecord rec;
    rec.omega0 = omega0;
    rec.omegaT = omegaT;
    rec.omega = omega;
    rec.note =
        "printed closed form: H_O = (omega0-omega)*sz/2 + sin(w t)*tan(theta)*"
        "(omega0/2)*(cos(w t)*sx - sin(w t)*sy); deviations vs transform_hamiltonian";

    struct Base {
        const char* label;
        HamiltonianModel model;
    };
    const Base bases[] = {
        {"literal", oscillating_qubit(omega0, omegaT, omega)},
        {"spin_half", oscillating_qubit_spin(omega0, omegaT, omega)},
    };
    const FrameSpec frames_to_try[] = {full_z_frame(omega), spin_half_z_frame(omega)};
    struct Angle {
        const char* label;
        double theta;
    };
    const Angle angles[] = {
        {"theta=arctan(omega0/omegaT)", std::atan2(omega0, omegaT)},
        {"theta=arctan(omegaT/omega0)", std::atan2(omegaT, omega0)},
    };

    const Matrix sz = pauli_z(), sx = pauli_x(), sy = pauli_y();
    for (const auto& base : bases) {
        for (const auto& fr : frames_to_try) {
            const HamiltonianModel rotated = transform_hamiltonian(base.model, fr);
            for (const auto& ang : angles) {
                double worst = 0.0;
                const double tan_theta = std::tan(ang.theta);
                for (int i = 0; i < grid.steps; ++i) {
                    const double t = grid.time(i);
                    const double wt = omega * t;
                    const Matrix printed =
                        0.5 * (omega0 - omega) * sz +
                        std::sin(wt) * tan_theta * 0.5 * omega0 *
                            (std::cos(wt) * sx - std::sin(wt) * sy);
                    worst = std::max(worst, spectral_norm(printed - rotated.H(t).mat()));
                }
                rec.rows.push_back(
                    {base.label, fr.id(), ang.label, worst});
            }
        }
    }
    return rec;
}

} // namespace adframes
