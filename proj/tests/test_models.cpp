#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "adframes/constants.hpp"
#include "adframes/models.hpp"

using namespace adframes;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// central-difference reference, independent of the model's own fallback
Matrix central_diff(const HamiltonianModel& m, double t, double h) {
    return (m.H(t + h).mat() - m.H(t - h).mat()) / (2.0 * h);
}

} // namespace

TEST_CASE("oscillating_qubit: snapshots and static limit") {
    const double w0 = kTwoPi, wT = 0.02 * kTwoPi, w = kTwoPi;
    auto model = oscillating_qubit(w0, wT, w);
    CHECK(max_abs(model.H(0.0).mat() - w0 * pauli_z()) < 1e-14);

    const double t_peak = M_PI / (2.0 * w); // sin = 1
    CHECK(max_abs(model.H(t_peak).mat() - (w0 * pauli_z() + wT * pauli_x())) < 1e-12);

    auto static_model = oscillating_qubit(w0, 0.0, w);
    CHECK(max_abs(static_model.H(3.7).mat() - w0 * pauli_z()) < 1e-14);
    CHECK(max_abs(static_model.dH(3.7).mat()) < 1e-14);

    CHECK_THROWS_AS(oscillating_qubit(0.0, wT, w), std::domain_error);
}

TEST_CASE("oscillating_qubit: weak-drive regime warning") {
    std::vector<std::string> warnings;
    oscillating_qubit(kTwoPi, 0.02 * kTwoPi, kTwoPi, &warnings);
    CHECK(warnings.empty());
    oscillating_qubit(kTwoPi, 0.5 * kTwoPi, kTwoPi, &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("regime") != std::string::npos);
}

TEST_CASE("oscillating_qubit_spin equals the printed family at halved coefficients") {
    const double w0 = kTwoPi, wT = 0.02 * kTwoPi, w = 0.73 * kTwoPi;
    auto spin = oscillating_qubit_spin(w0, wT, w);
    auto halved = oscillating_qubit(0.5 * w0, 0.5 * wT, w);
    for (double t : {0.0, 0.21, 1.7, 55.0}) {
        CHECK(max_abs(spin.H(t).mat() - halved.H(t).mat()) < 1e-14);
        CHECK(max_abs(spin.dH(t).mat() - halved.dH(t).mat()) < 1e-14);
        CHECK(max_abs(spin.d2H(t).mat() - halved.d2H(t).mat()) < 1e-14);
    }
}

TEST_CASE("nmr_rotating: phase zero snapshot and flat spectrum") {
    const double w0 = kTwoPi, wrf = 0.01 * kTwoPi, w = 0.5 * kTwoPi;
    auto model = nmr_rotating(w0, wrf, w);
    CHECK(max_abs(model.H(0.0).mat() - (0.5 * w0 * pauli_z() + 0.5 * wrf * pauli_x())) <
          1e-14);

    // eigenvalues are time-independent: +-sqrt(w0^2 + wrf^2)/2
    const double expected = 0.5 * std::sqrt(w0 * w0 + wrf * wrf);
    double lo_min = 1e300, lo_max = -1e300, hi_min = 1e300, hi_max = -1e300;
    for (int i = 0; i < 100; ++i) {
        const double t = 100.0 * i / 99.0;
        const Eigensystem es = eig_hermitian(model.H(t));
        lo_min = std::min(lo_min, es.values(0));
        lo_max = std::max(lo_max, es.values(0));
        hi_min = std::min(hi_min, es.values(1));
        hi_max = std::max(hi_max, es.values(1));
    }
    CHECK(hi_max - hi_min < 1e-10);
    CHECK(lo_max - lo_min < 1e-10);
    CHECK(hi_max == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("analytic derivatives match central differences at second order") {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        const double w0 = (1.0 + 9.0 * u01(rng)) * (u01(rng) < 0.5 ? -1.0 : 1.0);
        const double wT = 0.01 + 0.5 * u01(rng);
        const double w = 0.5 + 19.5 * u01(rng);
        const double t = 10.0 * u01(rng) + 0.05;

        for (int which = 0; which < 3; ++which) {
            HamiltonianModel model = which == 0   ? oscillating_qubit(w0, wT, w)
                                     : which == 1 ? oscillating_qubit_spin(w0, wT, w)
                                                  : nmr_rotating(w0, wT, w);
            const double h = 1e-2 / w;
            const double err_h = max_abs(model.dH(t).mat() - central_diff(model, t, h));
            const double err_h2 =
                max_abs(model.dH(t).mat() - central_diff(model, t, 0.5 * h));
            if (err_h2 > 1e-11) {
                const double ratio = err_h / err_h2;
                CHECK(ratio > 3.2);
                CHECK(ratio < 4.8);
            }
        }
    }
}

TEST_CASE("models stay Hermitian at random times") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> tdist(0.0, 1000.0);
    auto a = oscillating_qubit(kTwoPi, 0.02 * kTwoPi, 10.0 * kTwoPi);
    auto b = nmr_rotating(kTwoPi, 0.01 * kTwoPi, kTwoPi);
    for (int i = 0; i < 1000; ++i) {
        const double t = tdist(rng);
        CHECK_NOTHROW(a.H(t)); // HermitianOperator construction validates
        CHECK_NOTHROW(b.H(t));
    }
}

TEST_CASE("generic_decomposed embeds the oscillating qubit exactly") {
    const double w0 = kTwoPi, wT = 0.02 * kTwoPi, w = 2.3 * kTwoPi;
    GenericDecomposition g;
    g.omega0 = w0;
    g.omegaT = wT;
    g.omega = w;
    g.h0 = pauli_z();
    const Matrix sx = pauli_x();
    g.hT = [w, sx](double t) { return (std::sin(w * t) * sx).eval(); };
    g.hT_dot = [w, sx](double t) { return (w * std::cos(w * t) * sx).eval(); };
    g.hT_ddot = [w, sx](double t) { return (-w * w * std::sin(w * t) * sx).eval(); };
    auto generic = generic_decomposed(g);
    auto direct = oscillating_qubit(w0, wT, w);
    for (double t : {0.0, 0.11, 2.2}) {
        CHECK(max_abs(generic.H(t).mat() - direct.H(t).mat()) < 1e-13);
        CHECK(max_abs(generic.dH(t).mat() - direct.dH(t).mat()) < 1e-13);
        CHECK(max_abs(generic.d2H(t).mat() - direct.d2H(t).mat()) < 1e-12);
    }

    // finite-difference fallback agrees to second order
    GenericDecomposition g_fd = g;
    g_fd.hT_dot = nullptr;
    g_fd.hT_ddot = nullptr;
    auto fallback = generic_decomposed(g_fd);
    CHECK(max_abs(fallback.dH(0.31).mat() - direct.dH(0.31).mat()) < 1e-5);
    CHECK(max_abs(fallback.d2H(0.31).mat() - direct.d2H(0.31).mat()) < 1e-4);
}

TEST_CASE("generic_decomposed: two-qubit family and error paths") {
    const double w = kTwoPi;
    GenericDecomposition g;
    g.omega0 = kTwoPi;
    g.omegaT = 0.02 * kTwoPi;
    g.omega = w;
    g.h0 = kron(pauli_z(), Matrix::Identity(2, 2)) + kron(Matrix::Identity(2, 2), pauli_z());
    const Matrix hx = kron(pauli_x(), Matrix::Identity(2, 2));
    g.hT = [w, hx](double t) { return (std::sin(w * t) * hx).eval(); };
    auto model = generic_decomposed(g);
    CHECK(model.dim() == 4);
    CHECK_NOTHROW(model.H(0.4));
    CHECK_NOTHROW(model.dH(0.4));

    // dimension mismatch
    GenericDecomposition bad = g;
    bad.hT = [](double) { return pauli_x(); };
    CHECK_THROWS_AS(generic_decomposed(bad), std::domain_error);

    // commuting transverse part is rejected
    GenericDecomposition comm = g;
    const Matrix hz = kron(pauli_z(), Matrix::Identity(2, 2));
    comm.hT = [w, hz](double t) { return (std::sin(w * t) * hz).eval(); };
    CHECK_THROWS_AS(generic_decomposed(comm), std::domain_error);

    // static limit: omegaT = 0 kills the derivative
    GenericDecomposition quiet = g;
    quiet.omegaT = 0.0;
    auto static_model = generic_decomposed(quiet);
    CHECK(max_abs(static_model.dH(0.7).mat()) < 1e-12);
}

TEST_CASE("tabulated model: ingestion, interpolation, validation") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "adframes_tab_test";
    fs::create_directories(dir);
    const std::string path = (dir / "model.csv").string();

    // H(t) = cos(t) sz + 0.3 sin(t) sx sampled densely
    {
        std::ofstream out(path);
        out << "t,re_00,im_00,re_01,im_01,re_10,im_10,re_11,im_11\n";
        const int n = 201;
        for (int i = 0; i < n; ++i) {
            const double t = 2.0 * i / (n - 1);
            const double a = std::cos(t), b = 0.3 * std::sin(t);
            out << t << ',' << a << ",0," << b << ",0," << b << ",0," << -a << ",0\n";
        }
    }
    auto model = tabulated_from_csv(path);
    CHECK(model.dim() == 2);
    const double t = 0.873;
    CHECK(max_abs(model.H(t).mat() - (std::cos(t) * pauli_z() + 0.3 * std::sin(t) * pauli_x())
                      .eval()) < 1e-4);
    CHECK(max_abs(model.dH(t).mat() -
                  (-std::sin(t) * pauli_z() + 0.3 * std::cos(t) * pauli_x()).eval()) < 1e-3);
    CHECK_THROWS_AS(model.H(5.0), std::domain_error); // outside the table

    // non-uniform spacing is rejected
    const std::string bad_path = (dir / "bad.csv").string();
    {
        std::ofstream out(bad_path);
        out << "t,re_00,im_00,re_01,im_01,re_10,im_10,re_11,im_11\n";
        out << "0,1,0,0,0,0,0,-1,0\n";
        out << "0.1,1,0,0,0,0,0,-1,0\n";
        out << "0.3,1,0,0,0,0,0,-1,0\n";
    }
    CHECK_THROWS_WITH_AS(tabulated_from_csv(bad_path), doctest::Contains("non-uniform"),
                         std::domain_error);

    // non-Hermitian sample is rejected
    const std::string nh_path = (dir / "nonherm.csv").string();
    {
        std::ofstream out(nh_path);
        out << "t,re_00,im_00,re_01,im_01,re_10,im_10,re_11,im_11\n";
        out << "0,1,0,0.5,0,0.4,0,-1,0\n";
        out << "0.1,1,0,0.5,0,0.4,0,-1,0\n";
        out << "0.2,1,0,0.5,0,0.4,0,-1,0\n";
    }
    CHECK_THROWS_AS(tabulated_from_csv(nh_path), std::domain_error);

    // malformed header
    const std::string hdr_path = (dir / "hdr.csv").string();
    {
        std::ofstream out(hdr_path);
        out << "time,re_00\n0,1\n";
    }
    CHECK_THROWS_AS(tabulated_from_csv(hdr_path), std::domain_error);
}
