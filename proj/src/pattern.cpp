// SPDX-License-Identifier: Apache-2.0
//
// cluskit: feed-weight optimization and MIMO evaluation for antenna clusters

#include "cluskit/pattern.hpp"

#include "cluskit/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace cluskit {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Node counts must come out integral to ~1e-9 of a step.
int exact_div(double range, double step) {
    if (!(step > 0.0))
        return -1;
    const double q = range / step;
    const double r = std::round(q);
    if (std::abs(q - r) > 1e-9 || r < 1.0)
        return -1;
    return static_cast<int>(r);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool parse_field(const std::string& tok, double& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

} // namespace

int SphericalGrid::n_theta() const {
    const int n = exact_div(180.0, theta_step_deg);
    return n < 0 ? -1 : n + 1;
}

int SphericalGrid::n_phi() const { return exact_div(360.0, phi_step_deg); }

double SphericalGrid::theta_rad(int i) const {
    return theta_deg(i) * kDegToRad;
}

double SphericalGrid::phi_rad(int j) const { return phi_deg(j) * kDegToRad; }

void SphericalGrid::validate() const {
    if (n_theta() < 2)
        throw validation_error("theta step must divide 180 degrees");
    if (n_phi() < 1)
        throw validation_error("phi step must divide 360 degrees");
}

Eigen::VectorXd SphericalGrid::theta_weights() const {
    const int n = n_theta();
    const double step = theta_step_deg * kDegToRad;
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) {
        const double trap = (i == 0 || i == n - 1) ? step / 2.0 : step;
        w(i) = trap * std::sin(theta_rad(i));
    }
    // Euler-Maclaurin endpoint corrections for the sin-weighted integrand
    // g = f*sin(theta). sin vanishes at the poles, so the odd derivatives
    // reduce to g'(0) = f(0), g'(pi) = -f(pi), g''' = 3f'' -+ f, and the
    // corrections stay a plain weight vector:
    //   + step^2/12 [f(0) + f(pi)]                     (order 4)
    //   + step^4/720 [f(0) + f(pi)]
    //   - step^4/240 [f''(0) + f''(pi)]                (order 6)
    // with f'' taken from one-sided second differences. All weights remain
    // positive.
    const double s2 = step * step;
    w(0) += s2 / 12.0;
    w(n - 1) += s2 / 12.0;
    if (n >= 4) {
        const double s4 = s2 * s2;
        w(0) += s4 / 720.0;
        w(n - 1) += s4 / 720.0;
        const double k = s2 / 240.0;
        const int stencil[2][4] = {{0, 1, 2, 3}, {n - 1, n - 2, n - 3, n - 4}};
        for (const auto& idx : stencil) {
            w(idx[0]) -= 2.0 * k;
            w(idx[1]) += 5.0 * k;
            w(idx[2]) -= 4.0 * k;
            w(idx[3]) += k;
        }
    }
    return w;
}

double SphericalGrid::phi_weight() const { return phi_step_deg * kDegToRad; }

double FarFieldPattern::self_overlap() const {
    return integrate_overlap(*this, *this).real();
}

void FarFieldPattern::validate() const {
    grid.validate();
    const int nt = grid.n_theta();
    const int np = grid.n_phi();
    if (e_theta.rows() != nt || e_theta.cols() != np ||
        e_phi.rows() != nt || e_phi.cols() != np)
        throw validation_error("pattern field dimensions do not match grid");
    if (!e_theta.allFinite() || !e_phi.allFinite())
        throw validation_error("pattern has non-finite field values");
    const double p = self_overlap();
    if (p < 0.0 || p > 1.0 + 1e-6)
        throw validation_error("pattern self-overlap " + std::to_string(p) +
                               " outside [0, 1]");
}

std::complex<double> integrate_overlap(const FarFieldPattern& f_i,
                                       const FarFieldPattern& f_j) {
    if (f_i.grid != f_j.grid)
        throw validation_error("pattern overlap requires identical grids");
    if (f_i.frequency_hz != f_j.frequency_hz)
        throw validation_error("pattern overlap requires identical "
                               "frequencies");

    const Eigen::VectorXd w_theta = f_i.grid.theta_weights();
    const double w_phi = f_i.grid.phi_weight();

    const Eigen::MatrixXcd prod =
        f_i.e_theta.cwiseProduct(f_j.e_theta.conjugate()) +
        f_i.e_phi.cwiseProduct(f_j.e_phi.conjugate());
    const std::complex<double> acc =
        (w_theta.transpose().cast<std::complex<double>>() * prod).sum();
    return acc * w_phi / (4.0 * std::numbers::pi);
}

FarFieldPattern mirror_pattern(const FarFieldPattern& f, SymmetryPlane plane) {
    f.grid.validate();
    const int np = f.grid.n_phi();
    const int half = exact_div(180.0, f.grid.phi_step_deg);
    if (half < 0)
        throw validation_error("mirroring requires the phi step to divide "
                               "180 degrees");

    // XZ: phi -> -phi; YZ: phi -> 180 - phi. Both are index permutations.
    const int offset = plane == SymmetryPlane::XZ ? 0 : half;
    FarFieldPattern out;
    out.frequency_hz = f.frequency_hz;
    out.grid = f.grid;
    out.e_theta.resize(f.e_theta.rows(), np);
    out.e_phi.resize(f.e_phi.rows(), np);
    for (int j = 0; j < np; ++j) {
        const int src = ((offset - j) % np + np) % np;
        out.e_theta.col(j) = f.e_theta.col(src);
        out.e_phi.col(j) = -f.e_phi.col(src);
    }
    return out;
}

FarFieldPattern parse_pattern_file(std::istream& in) {
    std::string line;
    int line_no = 0;

    if (!std::getline(in, line))
        throw parse_error("empty pattern file", 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != "freq_hz,theta_deg,phi_deg,re_etheta,im_etheta,re_ephi,"
                "im_ephi")
        throw parse_error("unexpected pattern CSV header", 1);

    struct Row {
        double freq, theta, phi;
        std::complex<double> et, ep;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::istringstream ss(line);
        std::string tok;
        double v[7];
        int k = 0;
        while (std::getline(ss, tok, ',')) {
            if (k >= 7 || !parse_field(tok, v[k]))
                throw parse_error("invalid pattern CSV row", line_no);
            ++k;
        }
        if (k != 7)
            throw parse_error("pattern CSV row needs 7 fields, got " +
                                  std::to_string(k),
                              line_no);
        rows.push_back(
            {v[0], v[1], v[2], {v[3], v[4]}, {v[5], v[6]}});
    }
    if (rows.empty())
        throw parse_error("pattern file has no data rows", line_no);

    // Infer the grid: smallest positive theta/phi values give the steps.
    double theta_step = 180.0;
    double phi_step = 360.0;
    for (const Row& r : rows) {
        if (r.theta > 1e-12 && r.theta < theta_step)
            theta_step = r.theta;
        if (r.phi > 1e-12 && r.phi < phi_step)
            phi_step = r.phi;
    }

    FarFieldPattern f;
    f.frequency_hz = rows.front().freq;
    f.grid = SphericalGrid{theta_step, phi_step};
    f.grid.validate();
    const int nt = f.grid.n_theta();
    const int np = f.grid.n_phi();
    f.e_theta = Eigen::MatrixXcd::Zero(nt, np);
    f.e_phi = Eigen::MatrixXcd::Zero(nt, np);

    std::vector<char> seen(static_cast<std::size_t>(nt) * np, 0);
    for (const Row& r : rows) {
        if (r.freq != f.frequency_hz)
            throw validation_error("pattern file mixes frequencies");
        const double ti = r.theta / theta_step;
        const double pj = r.phi / phi_step;
        const int i = static_cast<int>(std::round(ti));
        const int j = static_cast<int>(std::round(pj));
        if (std::abs(ti - i) > 1e-6 || std::abs(pj - j) > 1e-6 || i < 0 ||
            i >= nt || j < 0 || j >= np)
            throw validation_error(
                "pattern node (" + format_double(r.theta) + ", " +
                format_double(r.phi) + ") is off the uniform grid");
        const std::size_t idx = static_cast<std::size_t>(i) * np + j;
        if (seen[idx])
            throw validation_error("duplicate pattern node (" +
                                   format_double(r.theta) + ", " +
                                   format_double(r.phi) + ")");
        seen[idx] = 1;
        f.e_theta(i, j) = r.et;
        f.e_phi(i, j) = r.ep;
    }
    for (int i = 0; i < nt; ++i)
        for (int j = 0; j < np; ++j)
            if (!seen[static_cast<std::size_t>(i) * np + j])
                throw validation_error(
                    "incomplete grid: missing pattern node (" +
                    format_double(f.grid.theta_deg(i)) + ", " +
                    format_double(f.grid.phi_deg(j)) + ")");

    f.validate();
    return f;
}

FarFieldPattern load_pattern_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open pattern file: " + path.string());
    try {
        return parse_pattern_file(in);
    } catch (const parse_error& e) {
        throw parse_error(path.string() + ": " + e.what());
    } catch (const validation_error& e) {
        throw validation_error(path.string() + ": " + e.what());
    }
}

void write_pattern_file(const FarFieldPattern& f, std::ostream& out) {
    f.grid.validate();
    out << "freq_hz,theta_deg,phi_deg,re_etheta,im_etheta,re_ephi,im_ephi\n";
    const int nt = f.grid.n_theta();
    const int np = f.grid.n_phi();
    for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < np; ++j) {
            const std::complex<double> et = f.e_theta(i, j);
            const std::complex<double> ep = f.e_phi(i, j);
            out << format_double(f.frequency_hz) << ','
                << format_double(f.grid.theta_deg(i)) << ','
                << format_double(f.grid.phi_deg(j)) << ','
                << format_double(et.real()) << ',' << format_double(et.imag())
                << ',' << format_double(ep.real()) << ','
                << format_double(ep.imag()) << '\n';
        }
    }
}

void save_pattern_file(const FarFieldPattern& f,
                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw io_error("cannot write pattern file: " + path.string());
    write_pattern_file(f, out);
    out << std::flush;
    if (!out)
        throw io_error("write failed: " + path.string());
}

} // namespace cluskit
