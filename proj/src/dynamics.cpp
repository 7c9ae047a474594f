#include "adframes/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace adframes {

namespace {

Matrix step_unitary(const HamiltonianModel& model, double t_mid, double dt, double* udev) {
    const Eigensystem es = eig_hermitian(model.H(t_mid));
    Vector phases(es.values.size());
    for (Eigen::Index k = 0; k < es.values.size(); ++k)
        phases(k) = std::exp(Complex(0.0, -dt * es.values(k)));
    Matrix u = es.vectors * phases.asDiagonal() * es.vectors.adjoint();
    if (udev) {
        *udev = spectral_norm(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
    }
    return u;
}

} // namespace

PropagationResult propagate(const HamiltonianModel& model, const DensityMatrix& rho0,
                            const TimeGrid& grid, std::string frame_tag,
                            bool enforce_resolution) {
    if (rho0.dim() != model.dim())
        throw std::domain_error("propagate: rho0 dimension does not match model");
    if (enforce_resolution) validate_resolution(grid, model.max_angular_frequency());

    PropagationResult out(grid);
    out.frame = std::move(frame_tag);
    out.states.reserve(grid.steps);
    out.states.push_back(rho0);

    const double dt = grid.dt();
    const double purity0 = rho0.purity();
    Matrix rho = rho0.mat();

    for (int i = 0; i + 1 < grid.steps; ++i) {
        double udev = 0.0;
        const Matrix u = step_unitary(model, grid.time(i) + 0.5 * dt, dt, &udev);
        out.unitarity_drift = std::max(out.unitarity_drift, udev);
        out.unitarity_accumulated += udev;
        rho = u * rho * u.adjoint();

        const double trace_dev = std::abs(rho.trace() - Complex(1.0, 0.0));
        if (trace_dev > 1e-8) {
            std::ostringstream os;
            os << "propagate: |tr(rho) - 1| = " << trace_dev << " at step " << i + 1
               << " (t = " << grid.time(i + 1) << " us) exceeds 1e-8";
            throw NumericalError(os.str());
        }
        const double purity = (rho * rho).trace().real();
        if (std::abs(purity - purity0) > 1e-7) {
            std::ostringstream os;
            os << "propagate: purity drift " << std::abs(purity - purity0) << " at step "
               << i + 1 << " (t = " << grid.time(i + 1) << " us) exceeds 1e-7";
            throw NumericalError(os.str());
        }
        out.states.emplace_back(rho);
    }
    return out;
}

std::vector<DensityMatrix> adiabatic_reference(const EigensystemTrajectory& traj, int level) {
    if (level < 0 || level >= traj.dim())
        throw std::domain_error("adiabatic_reference: level index out of range");
    std::vector<DensityMatrix> out;
    out.reserve(traj.states.size());
    for (const Matrix& v : traj.states) {
        const Vector col = v.col(level);
        out.emplace_back((col * col.adjoint()).eval());
    }
    return out;
}

int reference_level_for_state(const EigensystemTrajectory& traj, const DensityMatrix& rho0) {
    int best = 0;
    double best_overlap = -1.0;
    for (int m = 0; m < traj.dim(); ++m) {
        const Vector v = traj.states[0].col(m);
        const double overlap = std::real((v.adjoint() * rho0.mat() * v)(0, 0));
        if (overlap > best_overlap) {
            best_overlap = overlap;
            best = m;
        }
    }
    return best;
}

FidelityTrace fidelity(const PropagationResult& result,
                       const std::vector<DensityMatrix>& reference, int reference_level) {
    if (reference.size() != result.states.size())
        throw std::domain_error("fidelity: grids do not match (different lengths)");
    FidelityTrace out(result.grid);
    out.reference_level = reference_level;
    out.values.resize(result.grid.steps);
    for (int i = 0; i < result.grid.steps; ++i) {
        out.values(i) = std::abs((result.states[i].mat() * reference[i].mat()).trace());
    }
    return out;
}

double frame_consistency_check(const HamiltonianModel& model, const FrameSpec& frame,
                               const DensityMatrix& rho0, const TimeGrid& grid) {
    if (model.dim() != frame.dim())
        throw std::domain_error("frame_consistency_check: dimension mismatch");
    const HamiltonianModel rotated = transform_hamiltonian(model, frame);

    const double dt = grid.dt();
    Matrix rho = rho0.mat();
    Matrix rho_o = (frame.O(grid.t0) * rho0.mat() * frame.O(grid.t0).adjoint()).eval();

    double worst = 0.0;
    for (int i = 0;; ++i) {
        const Matrix conjugated = frame.O(grid.time(i)) * rho * frame.O(grid.time(i)).adjoint();
        worst = std::max(worst, trace_norm_hermitian(conjugated - rho_o));
        if (i + 1 >= grid.steps) break;
        const double t_mid = grid.time(i) + 0.5 * dt;
        const Matrix u = step_unitary(model, t_mid, dt, nullptr);
        const Matrix u_o = step_unitary(rotated, t_mid, dt, nullptr);
        rho = u * rho * u.adjoint();
        rho_o = u_o * rho_o * u_o.adjoint();
    }
    return worst;
}

} // namespace adframes
