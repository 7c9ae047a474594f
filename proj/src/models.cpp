#include "adframes/models.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "adframes/constants.hpp"

namespace adframes {

namespace {

double fd_step_for_drive(double omega) {
    const double base = 1e-3;
    if (omega == 0.0) return base;
    return std::min(base, 1e-3 * kTwoPi / std::abs(omega));
}

void warn_regime(double omega0, double transverse, const char* name,
                 std::vector<std::string>* warnings) {
    if (warnings && std::abs(omega0) <= 10.0 * std::abs(transverse)) {
        std::ostringstream os;
        os << name << ": |omega0| = " << std::abs(omega0) << " is not large against "
           << "10*|transverse| = " << 10.0 * std::abs(transverse)
           << "; the weak-drive regime assumption is violated";
        warnings->push_back(os.str());
    }
}

} // namespace

HamiltonianModel::HamiltonianModel(std::string name, int dim, ParamMap params, Evaluator h,
                                   Evaluator dh, Evaluator d2h, double max_angular_frequency,
                                   double fd_step)
    : name_(std::move(name)),
      dim_(dim),
      params_(std::move(params)),
      h_(std::move(h)),
      dh_(std::move(dh)),
      d2h_(std::move(d2h)),
      max_omega_(max_angular_frequency),
      fd_step_(fd_step) {
    if (dim_ < 1) throw std::domain_error("HamiltonianModel: dim must be >= 1");
    if (!h_) throw std::domain_error("HamiltonianModel: missing H(t) evaluator");
    if (!(fd_step_ > 0.0)) throw std::domain_error("HamiltonianModel: fd step must be > 0");
}

HermitianOperator HamiltonianModel::H(double t) const { return HermitianOperator(h_(t)); }

HermitianOperator HamiltonianModel::dH(double t) const {
    if (dh_) return HermitianOperator(dh_(t));
    const double h = fd_step_;
    return HermitianOperator(((h_(t + h) - h_(t - h)) / (2.0 * h)).eval());
}

HermitianOperator HamiltonianModel::d2H(double t) const {
    if (d2h_) return HermitianOperator(d2h_(t));
    const double h = fd_step_;
    return HermitianOperator(((h_(t + h) - 2.0 * h_(t) + h_(t - h)) / (h * h)).eval());
}

HamiltonianModel oscillating_qubit(double omega0, double omegaT, double omega,
                                   std::vector<std::string>* warnings) {
    if (omega0 == 0.0) throw std::domain_error("oscillating_qubit: omega0 must be nonzero");
    warn_regime(omega0, omegaT, "oscillating_qubit", warnings);
    const Matrix sz = pauli_z(), sx = pauli_x();
    auto h = [=](double t) -> Matrix { return omega0 * sz + omegaT * std::sin(omega * t) * sx; };
    auto dh = [=](double t) -> Matrix { return omega * omegaT * std::cos(omega * t) * sx; };
    auto d2h = [=](double t) -> Matrix {
        return -omega * omega * omegaT * std::sin(omega * t) * sx;
    };
    const double spread = 2.0 * std::sqrt(omega0 * omega0 + omegaT * omegaT);
    const double max_omega = std::max(spread, std::abs(omega));
    return HamiltonianModel("oscillating_qubit", 2,
                            {{"omega0", omega0}, {"omegaT", omegaT}, {"omega", omega}}, h, dh,
                            d2h, max_omega, fd_step_for_drive(omega));
}

HamiltonianModel oscillating_qubit_spin(double omega0, double omegaT, double omega,
                                        std::vector<std::string>* warnings) {
    if (omega0 == 0.0)
        throw std::domain_error("oscillating_qubit_spin: omega0 must be nonzero");
    warn_regime(omega0, omegaT, "oscillating_qubit_spin", warnings);
    const Matrix sz = pauli_z(), sx = pauli_x();
    auto h = [=](double t) -> Matrix {
        return 0.5 * omega0 * sz + 0.5 * omegaT * std::sin(omega * t) * sx;
    };
    auto dh = [=](double t) -> Matrix {
        return 0.5 * omega * omegaT * std::cos(omega * t) * sx;
    };
    auto d2h = [=](double t) -> Matrix {
        return -0.5 * omega * omega * omegaT * std::sin(omega * t) * sx;
    };
    const double spread = std::sqrt(omega0 * omega0 + omegaT * omegaT);
    const double max_omega = std::max(spread, std::abs(omega));
    return HamiltonianModel("oscillating_qubit_spin", 2,
                            {{"omega0", omega0}, {"omegaT", omegaT}, {"omega", omega}}, h, dh,
                            d2h, max_omega, fd_step_for_drive(omega));
}

HamiltonianModel nmr_rotating(double omega0, double omegaRF, double omega,
                              std::vector<std::string>* warnings) {
    if (omega0 == 0.0) throw std::domain_error("nmr_rotating: omega0 must be nonzero");
    warn_regime(omega0, omegaRF, "nmr_rotating", warnings);
    const Matrix sz = pauli_z(), sx = pauli_x(), sy = pauli_y();
    auto h = [=](double t) -> Matrix {
        return 0.5 * omega0 * sz +
               0.5 * omegaRF * (std::cos(omega * t) * sx + std::sin(omega * t) * sy);
    };
    auto dh = [=](double t) -> Matrix {
        return 0.5 * omegaRF * omega * (-std::sin(omega * t) * sx + std::cos(omega * t) * sy);
    };
    auto d2h = [=](double t) -> Matrix {
        return -0.5 * omegaRF * omega * omega *
               (std::cos(omega * t) * sx + std::sin(omega * t) * sy);
    };
    const double spread = std::sqrt(omega0 * omega0 + omegaRF * omegaRF);
    const double max_omega = std::max(spread, std::abs(omega));
    return HamiltonianModel("nmr_rotating", 2,
                            {{"omega0", omega0}, {"omegaRF", omegaRF}, {"omega", omega}}, h,
                            dh, d2h, max_omega, fd_step_for_drive(omega));
}

HamiltonianModel generic_decomposed(const GenericDecomposition& g) {
    if (!g.hT) throw std::domain_error("generic_decomposed: missing HT evaluator");
    const HermitianOperator h0_checked(g.h0); // validates Hermiticity
    const int dim = static_cast<int>(g.h0.rows());
    const Matrix probe = g.hT(0.0);
    if (probe.rows() != dim || probe.cols() != dim) {
        std::ostringstream os;
        os << "generic_decomposed: dimension mismatch, H0 is " << dim << "x" << dim
           << " but HT(0) is " << probe.rows() << "x" << probe.cols();
        throw std::domain_error(os.str());
    }

    // perpendicular-field check: HT must fail to commute with H0 somewhere
    const double period = g.omega != 0.0 ? kTwoPi / std::abs(g.omega) : 1.0;
    double max_comm = 0.0;
    double max_ht_norm = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double t = period * k / 99.0;
        const Matrix ht = g.hT(t);
        HermitianOperator checked(ht);
        max_comm = std::max(max_comm, spectral_norm(ht * g.h0 - g.h0 * ht));
        max_ht_norm = std::max(max_ht_norm, spectral_norm(ht));
    }
    if (max_comm <= 1e-12) {
        throw std::domain_error(
            "generic_decomposed: [HT(t), H0] vanishes on the probe grid; the "
            "decomposition requires a transverse drive");
    }

    const double w0 = g.omega0, wT = g.omegaT;
    const Matrix h0 = g.h0;
    auto hT = g.hT;
    auto h = [=](double t) -> Matrix { return w0 * h0 + wT * hT(t); };
    HamiltonianModel::Evaluator dh, d2h;
    if (g.hT_dot) {
        auto hT_dot = g.hT_dot;
        dh = [=](double t) -> Matrix { return wT * hT_dot(t); };
    }
    if (g.hT_ddot) {
        auto hT_ddot = g.hT_ddot;
        d2h = [=](double t) -> Matrix { return wT * hT_ddot(t); };
    }

    const double spread = 2.0 * (std::abs(w0) * spectral_norm(h0) + std::abs(wT) * max_ht_norm);
    const double max_omega = std::max(spread, std::abs(g.omega));
    return HamiltonianModel(g.name, dim,
                            {{"omega0", w0}, {"omegaT", wT}, {"omega", g.omega}}, h, dh, d2h,
                            std::max(max_omega, 1e-6), fd_step_for_drive(g.omega));
}

namespace {

struct Table {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<Matrix> h, dh, d2h;
};

Matrix interp(const Table& tab, const std::vector<Matrix>& rows, double t) {
    const double last = tab.t0 + tab.dt * static_cast<double>(rows.size() - 1);
    const double slack = 1e-9 * tab.dt;
    if (t < tab.t0 - slack || t > last + slack) {
        std::ostringstream os;
        os << "tabulated model evaluated at t = " << t << " outside [" << tab.t0 << ", "
           << last << "]";
        throw std::domain_error(os.str());
    }
    const double x = std::clamp((t - tab.t0) / tab.dt, 0.0, double(rows.size() - 1));
    const auto i = std::min(static_cast<std::size_t>(x), rows.size() - 2);
    const double w = x - static_cast<double>(i);
    return (1.0 - w) * rows[i] + w * rows[i + 1];
}

} // namespace

HamiltonianModel tabulated_model(std::vector<double> times, std::vector<Matrix> samples,
                                 std::string name) {
    if (times.size() != samples.size())
        throw std::domain_error("tabulated_model: times/samples size mismatch");
    if (times.size() < 3)
        throw std::domain_error("tabulated_model: need at least 3 samples");
    const int dim = static_cast<int>(samples.front().rows());
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) throw std::domain_error("tabulated_model: times must increase");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (std::abs((times[i] - times[i - 1]) - dt) > 1e-9 * dt) {
            std::ostringstream os;
            os << "tabulated_model: non-uniform spacing at sample " << i << " (got "
               << times[i] - times[i - 1] << ", expected " << dt << ")";
            throw std::domain_error(os.str());
        }
    }
    for (const Matrix& m : samples) HermitianOperator checked(m); // validates each row

    auto tab = std::make_shared<Table>();
    tab->t0 = times.front();
    tab->dt = dt;
    tab->h = std::move(samples);
    const std::size_t n = tab->h.size();
    tab->dh.resize(n);
    tab->d2h.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0) {
            tab->dh[i] = (-3.0 * tab->h[0] + 4.0 * tab->h[1] - tab->h[2]) / (2.0 * dt);
            tab->d2h[i] = (tab->h[0] - 2.0 * tab->h[1] + tab->h[2]) / (dt * dt);
        } else if (i == n - 1) {
            tab->dh[i] =
                (3.0 * tab->h[n - 1] - 4.0 * tab->h[n - 2] + tab->h[n - 3]) / (2.0 * dt);
            tab->d2h[i] = (tab->h[n - 1] - 2.0 * tab->h[n - 2] + tab->h[n - 3]) / (dt * dt);
        } else {
            tab->dh[i] = (tab->h[i + 1] - tab->h[i - 1]) / (2.0 * dt);
            tab->d2h[i] = (tab->h[i + 1] - 2.0 * tab->h[i] + tab->h[i - 1]) / (dt * dt);
        }
    }

    double max_norm = 0.0;
    for (const Matrix& m : tab->h) max_norm = std::max(max_norm, spectral_norm(m));
    const double max_omega = std::max(2.0 * max_norm, 1e-6);

    auto h = [tab](double t) -> Matrix { return interp(*tab, tab->h, t); };
    auto dh = [tab](double t) -> Matrix { return interp(*tab, tab->dh, t); };
    auto d2h = [tab](double t) -> Matrix { return interp(*tab, tab->d2h, t); };
    return HamiltonianModel(std::move(name), dim, {}, h, dh, d2h, max_omega, dt);
}

namespace {

double parse_double(const std::string& field, std::size_t line_no, std::size_t col) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{}) {
        std::ostringstream os;
        os << "tabulated CSV line " << line_no << ", column " << col + 1
           << ": cannot parse number from '" << field << "'";
        throw std::domain_error(os.str());
    }
    (void)ptr;
    return value;
}

} // namespace

HamiltonianModel tabulated_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("tabulated_from_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::domain_error("tabulated_from_csv: empty file " + path);
    if (line.rfind("t,", 0) != 0)
        throw std::domain_error("tabulated_from_csv: header must start with 't,'");
    const std::size_t ncols = 1 + std::count(line.begin(), line.end(), ',');
    if (ncols < 3 || (ncols - 1) % 2 != 0)
        throw std::domain_error("tabulated_from_csv: expected 1 + 2*dim^2 columns");
    const auto dim_sq = (ncols - 1) / 2;
    const int dim = static_cast<int>(std::lround(std::sqrt(double(dim_sq))));
    if (static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim) != dim_sq)
        throw std::domain_error("tabulated_from_csv: column count is not 1 + 2*dim^2");

    std::vector<double> times;
    std::vector<Matrix> samples;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != ncols) {
            std::ostringstream os;
            os << "tabulated CSV line " << line_no << ": expected " << ncols
               << " fields, got " << fields.size();
            throw std::domain_error(os.str());
        }
        times.push_back(parse_double(fields[0], line_no, 0));
        Matrix m(dim, dim);
        std::size_t col = 1;
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                const double re = parse_double(fields[col], line_no, col);
                const double im = parse_double(fields[col + 1], line_no, col + 1);
                m(i, j) = Complex(re, im);
                col += 2;
            }
        }
        samples.push_back(std::move(m));
    }
    return tabulated_model(std::move(times), std::move(samples), "tabulated:" + path);
}

} // namespace adframes
