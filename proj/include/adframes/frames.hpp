#pragma once

#include <string>
#include <vector>

#include "adframes/conditions.hpp"
#include "adframes/models.hpp"
#include "adframes/spectral.hpp"

namespace adframes {

/// Exponential-family frame O(t) = exp(i * rate * t * G) with constant
/// Hermitian generator G. Covers every frame used here (z rotations at
/// arbitrary rate and generic exp(i w H0 t)) and admits an exact Odot:
/// i*Odot*O^dag = -rate*G.
class FrameSpec {
public:
    FrameSpec(HermitianOperator generator, double rate, std::string id);

    const HermitianOperator& generator() const { return generator_; }
    double rate() const { return rate_; }
    const std::string& id() const { return id_; }
    Eigen::Index dim() const { return generator_.dim(); }

    Matrix O(double t) const;
    Matrix Odot(double t) const;
    /// The constant fictitious potential i*Odot*O^dag.
    Matrix fictitious() const { return -rate_ * generator_.mat(); }
    /// Spread of the generator spectrum; conjugation adds harmonics up to
    /// rate * spread to the transformed family.
    double generator_spread() const { return spread_; }

private:
    HermitianOperator generator_;
    double rate_;
    std::string id_;
    Eigen::VectorXd gen_values_;
    Matrix gen_vectors_;
    double spread_;
};

/// z-rotation frame with generator sz/2 (spin-1/2 convention).
FrameSpec spin_half_z_frame(double rate);
/// z-rotation frame with generator sz.
FrameSpec full_z_frame(double rate);

/// H_O(t) = O H O^dag + i Odot O^dag with analytic derivatives via the
/// product rule. The fictitious term is exact for the exponential family.
HamiltonianModel transform_hamiltonian(const HamiltonianModel& model, const FrameSpec& frame);

struct TheoremVerdict {
    std::string condition;           // "T1" or "T2"
    bool holds = false;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    double witness_time = 0.0;
    int witness_index = -1;
    std::vector<double> per_index_deviation; // max over t for each m (or k)
    Eigen::MatrixXd deviation_trace;         // steps x dim
    TimeGrid grid{0.0, 1.0, 2};
};

/// Overlap-invariance check |<E_m^O(t)|O(t)|E_k(t)>| = const for all m.
TheoremVerdict theorem1_check(const HamiltonianModel& model, const FrameSpec& frame, int k,
                              const TimeGrid& grid, double tol = 1e-3,
                              Exec exec = Exec::Parallel, int workers = 0);

/// Same check on already-tracked trajectories (both on the same grid).
TheoremVerdict theorem1_check(const EigensystemTrajectory& traj,
                              const EigensystemTrajectory& traj_rotated,
                              const FrameSpec& frame, int k, double tol = 1e-3,
                              Exec exec = Exec::Parallel, int workers = 0);

/// Resonance-regime reduction: |<E_m^O(t)|E_k(t0)>| = const for all m.
TheoremVerdict theorem1_reduced_check(const HamiltonianModel& model, const FrameSpec& frame,
                                      int k, const TimeGrid& grid, double tol = 1e-3,
                                      Exec exec = Exec::Parallel, int workers = 0);

/// Constant-H_O check |<E_k(t)|U_O(t,t0)|E_n(t0)>| = |<E_k(t0)|E_n(t0)>|
/// with U_O(t,t0) = O^dag(t) exp(-i H_O (t-t0)) O(t0). The rotated
/// Hamiltonian must be constant within 1e-9 over the grid.
TheoremVerdict theorem2_check(const HamiltonianModel& model, const FrameSpec& frame,
                              const HermitianOperator& h_o_constant, int n,
                              const TimeGrid& grid, double tol = 1e-3,
                              Exec exec = Exec::Parallel, int workers = 0);

/// Published closed form of the rotated oscillating-qubit Hamiltonian,
/// evaluated against transform_hamiltonian for candidate base conventions,
/// frame conventions and angle conventions. Reports deviations; non-fatal.
struct RotatedFormRow {
    std::string base_convention;  // "literal" or "spin_half"
    std::string frame_convention; // frame id
    std::string theta_convention;
    double max_deviation = 0.0;
};

struct RotatedFormRecord {
    double omega0 = 0.0, omegaT = 0.0, omega = 0.0;
    std::vector<RotatedFormRow> rows;
    std::string note;
};

RotatedFormRecord printed_rotated_form_crosscheck(double omega0, double omegaT, double omega,
                                                  const TimeGrid& grid);

} // namespace adframes
