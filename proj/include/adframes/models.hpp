#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "adframes/linalg.hpp"

namespace adframes {

using ParamMap = std::map<std::string, double>;

/// A named time-parametrized Hamiltonian family H(t) with first and second
/// time derivatives, analytic where available and second-order central
/// differences otherwise. Evaluators are pure; models are immutable and safe
/// to evaluate concurrently at distinct times.
class HamiltonianModel {
public:
    using Evaluator = std::function<Matrix(double)>;

    HamiltonianModel(std::string name, int dim, ParamMap params, Evaluator h,
                     Evaluator dh, Evaluator d2h, double max_angular_frequency,
                     double fd_step);

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }
    const ParamMap& params() const { return params_; }

    /// Largest angular frequency present in the family (spectral range and
    /// drive harmonics); drives the grid-resolution rule.
    double max_angular_frequency() const { return max_omega_; }
    bool has_analytic_derivatives() const { return bool(dh_); }
    double fd_step() const { return fd_step_; }

    HermitianOperator H(double t) const;
    HermitianOperator dH(double t) const;
    HermitianOperator d2H(double t) const;

private:
    std::string name_;
    int dim_;
    ParamMap params_;
    Evaluator h_, dh_, d2h_;
    double max_omega_;
    double fd_step_;
};

/// H(t) = w0*sz + wT*sin(w t)*sx, exactly as printed in the source study.
/// The level gap is 2*sqrt(w0^2 + wT^2 sin^2), i.e. about 2*w0.
/// Emits a warning when |w0| <= 10 |wT| (outside the weak-drive regime).
HamiltonianModel oscillating_qubit(double omega0, double omegaT, double omega,
                                   std::vector<std::string>* warnings = nullptr);

/// Spin-1/2 convention of the same oscillating field:
/// H(t) = (w0/2)*sz + (wT/2)*sin(w t)*sx. The level gap equals
/// sqrt(w0^2 + wT^2 sin^2) ~ w0, so the Rabi resonance of a sin(w t) drive
/// sits at w = w0. Identical to oscillating_qubit at halved coefficients.
HamiltonianModel oscillating_qubit_spin(double omega0, double omegaT, double omega,
                                        std::vector<std::string>* warnings = nullptr);

/// Rotating-field NMR Hamiltonian
/// H(t) = (w0/2)*sz + (wrf/2)*(cos(w t)*sx + sin(w t)*sy).
HamiltonianModel nmr_rotating(double omega0, double omegaRF, double omega,
                              std::vector<std::string>* warnings = nullptr);

/// Perpendicular-field decomposition H(w,t) = w0*H0 + wT*HT(w,t) with a
/// static part H0 and a transverse drive family HT. The transverse family
/// must fail to commute with H0 somewhere on the probe grid.
struct GenericDecomposition {
    double omega0 = 0.0;
    double omegaT = 0.0;
    double omega = 0.0; // drive angular frequency, used for the fd step
    Matrix h0;
    std::function<Matrix(double)> hT;
    std::function<Matrix(double)> hT_dot;  // optional analytic derivatives
    std::function<Matrix(double)> hT_ddot; // optional
    std::string name = "generic";
};

HamiltonianModel generic_decomposed(const GenericDecomposition& g);

/// Tabulated model: H sampled on a uniform time grid, derivatives by
/// second-order finite differences, values between samples by linear
/// interpolation.
HamiltonianModel tabulated_model(std::vector<double> times, std::vector<Matrix> samples,
                                 std::string name = "tabulated");

/// CSV ingestion, header `t,re_00,im_00,re_01,im_01,...` in row-major (i,j)
/// order; uniform t spacing is validated.
HamiltonianModel tabulated_from_csv(const std::string& path);

} // namespace adframes
