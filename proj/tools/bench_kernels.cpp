// Timing harness for the OpenMP kernels against their serial reference:
// per-grid-point diagonalization/tracking, coefficient pipelines, and sweep
// rows. Results must be identical between the two paths (the unit tests
// assert that); this binary reports wall time and speedup.

#include <chrono>
#include <cstdio>
#include <functional>

#include "adframes/conditions.hpp"
#include "adframes/constants.hpp"
#include "adframes/scenario.hpp"
#include "adframes/spectral.hpp"

using namespace adframes;

namespace {

double time_ms(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-38s %10.1f ms %10.1f ms %7.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

HamiltonianModel two_qubit_model() {
    GenericDecomposition g;
    g.omega0 = kTwoPi;
    g.omegaT = 0.02 * kTwoPi;
    g.omega = 0.5 * kTwoPi;
    g.h0 = 0.5 * (kron(pauli_z(), Matrix::Identity(2, 2)) +
                  kron(Matrix::Identity(2, 2), pauli_z()));
    const Matrix hx = kron(pauli_x(), Matrix::Identity(2, 2));
    const double w = g.omega;
    g.hT = [hx, w](double t) { return (std::sin(w * t) * hx).eval(); };
    g.name = "two_qubit_bench";
    return generic_decomposed(g);
}

} // namespace

int main() {
    std::printf("%-38s %13s %13s %8s\n", "kernel", "serial", "openmp", "speedup");
    std::printf("workers available: %d\n", hardware_workers());

    // 1) grid diagonalization + tracking, qubit, fast drive (a = 10)
    {
        const HamiltonianModel model =
            oscillating_qubit_spin(kTwoPi, 0.02 * kTwoPi, 10.0 * kTwoPi);
        const TimeGrid grid(0.0, 100.0, required_steps(0.0, 100.0, 20.0 * kTwoPi));
        double s = time_ms([&] { track_eigensystem(model, grid, true, Exec::Serial); });
        double p = time_ms([&] { track_eigensystem(model, grid, true, Exec::Parallel); });
        row("track_eigensystem dim=2 (80k pts)", s, p);
    }

    // 2) grid diagonalization + tracking, two-qubit generic model
    {
        const HamiltonianModel model = two_qubit_model();
        const TimeGrid grid(0.0, 100.0, 20001);
        double s = time_ms([&] { track_eigensystem(model, grid, false, Exec::Serial); });
        double p = time_ms([&] { track_eigensystem(model, grid, false, Exec::Parallel); });
        row("track_eigensystem dim=4 (20k pts)", s, p);
    }

    // 3) full coefficient pipeline on a tracked trajectory
    {
        const HamiltonianModel model =
            oscillating_qubit_spin(kTwoPi, 0.02 * kTwoPi, 10.0 * kTwoPi);
        const TimeGrid grid(0.0, 100.0, required_steps(0.0, 100.0, 20.0 * kTwoPi));
        const EigensystemTrajectory traj = track_eigensystem(model, grid);
        double s = time_ms(
            [&] { condition_report(traj, model, 100.0, {0, 1}, "inertial", Exec::Serial); });
        double p = time_ms(
            [&] { condition_report(traj, model, 100.0, {0, 1}, "inertial", Exec::Parallel); });
        row("condition_report dim=2 (80k pts)", s, p);
    }

    // 4) sweep rows (16 values, full per-row pipeline)
    {
        ScenarioConfig cfg;
        cfg.name = "bench_sweep";
        cfg.model_name = "oscillating_qubit_spin";
        cfg.omega0 = kTwoPi;
        cfg.omegaT = 0.02 * kTwoPi;
        cfg.tau = 100.0;
        cfg.sweep_log_min = 0.2;
        cfg.sweep_log_max = 8.0;
        cfg.sweep_log_points = 16;
        cfg.output_dir = "/tmp/adframes_bench";
        RunOptions serial_opt;
        serial_opt.exec = Exec::Serial;
        RunOptions parallel_opt;
        parallel_opt.exec = Exec::Parallel;
        double s = time_ms([&] { run_sweep(cfg, serial_opt); });
        double p = time_ms([&] { run_sweep(cfg, parallel_opt); });
        row("sweep 16 rows (full pipeline)", s, p);
    }
    return 0;
}
