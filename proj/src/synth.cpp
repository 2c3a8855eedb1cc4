// SPDX-License-Identifier: Apache-2.0
//
// cluskit: feed-weight optimization and MIMO evaluation for antenna clusters

#include "cluskit/synth.hpp"

#include "cluskit/error.hpp"
#include "cluskit/rng.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

namespace cluskit {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr std::complex<double> kJ{0.0, 1.0};

Eigen::MatrixXcd random_complex_matrix(int n, SampleRng& rng) {
    Eigen::MatrixXcd m(n, n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r)
            m(r, c) = rng.complex_normal();
    return m;
}

// Low-order trigonometric seed patterns, one phi harmonic per mode so the
// family starts out nearly orthogonal.
FarFieldPattern seed_mode(int q, double frequency_hz,
                          const SphericalGrid& grid) {
    const int nt = grid.n_theta();
    const int np = grid.n_phi();
    const int u = 1 + q % 4;
    FarFieldPattern f;
    f.frequency_hz = frequency_hz;
    f.grid = grid;
    f.e_theta.resize(nt, np);
    f.e_phi.resize(nt, np);
    for (int i = 0; i < nt; ++i) {
        const double th = grid.theta_rad(i);
        const double st = std::sin(th);
        const double a = st * std::cos(u * th);
        const double b = st * std::sin(u * th);
        for (int j = 0; j < np; ++j) {
            const std::complex<double> azim =
                std::exp(kJ * static_cast<double>(q) * grid.phi_rad(j));
            f.e_theta(i, j) = a * azim;
            f.e_phi(i, j) = b * azim;
        }
    }
    return f;
}

void scale_pattern(FarFieldPattern& f, std::complex<double> c) {
    f.e_theta *= c;
    f.e_phi *= c;
}

void axpy_pattern(FarFieldPattern& y, std::complex<double> c,
                  const FarFieldPattern& x) {
    y.e_theta += c * x.e_theta;
    y.e_phi += c * x.e_phi;
}

// Modified Gram-Schmidt with a second pass; leaves the set orthonormal
// under integrate_overlap to machine precision.
std::vector<FarFieldPattern> orthonormal_modes(int count, double frequency_hz,
                                               const SphericalGrid& grid) {
    std::vector<FarFieldPattern> modes;
    modes.reserve(count);
    for (int q = 0; q < count; ++q) {
        FarFieldPattern m = seed_mode(q, frequency_hz, grid);
        for (int pass = 0; pass < 2; ++pass)
            for (const FarFieldPattern& prev : modes)
                axpy_pattern(m, -integrate_overlap(m, prev), prev);
        const double norm = std::sqrt(m.self_overlap());
        if (norm < 1e-8)
            throw numeric_error("radiation mode " + std::to_string(q) +
                                " is numerically dependent");
        scale_pattern(m, 1.0 / norm);
        modes.push_back(std::move(m));
    }
    return modes;
}

} // namespace

void DipoleSpec::validate() const {
    if (std::abs(orientation.norm() - 1.0) > 1e-12)
        throw validation_error("dipole orientation must be a unit vector");
    if (efficiency < 0.0 || efficiency > 1.0)
        throw validation_error("dipole efficiency must lie in [0, 1]");
    if (!position_wavelengths.allFinite())
        throw validation_error("dipole position must be finite");
}

FarFieldPattern hertzian_dipole_pattern(const DipoleSpec& spec,
                                        double frequency_hz,
                                        const SphericalGrid& grid) {
    spec.validate();
    grid.validate();

    const double amp = std::sqrt(1.5 * spec.efficiency);
    const int nt = grid.n_theta();
    const int np = grid.n_phi();

    FarFieldPattern f;
    f.frequency_hz = frequency_hz;
    f.grid = grid;
    f.e_theta.resize(nt, np);
    f.e_phi.resize(nt, np);
    for (int i = 0; i < nt; ++i) {
        const double th = grid.theta_rad(i);
        const double st = std::sin(th);
        const double ct = std::cos(th);
        for (int j = 0; j < np; ++j) {
            const double ph = grid.phi_rad(j);
            const double sp = std::sin(ph);
            const double cp = std::cos(ph);
            const Eigen::Vector3d r_hat(st * cp, st * sp, ct);
            const Eigen::Vector3d theta_hat(ct * cp, ct * sp, -st);
            const Eigen::Vector3d phi_hat(-sp, cp, 0.0);
            const std::complex<double> phase = std::exp(
                kJ * (2.0 * std::numbers::pi *
                      r_hat.dot(spec.position_wavelengths)));
            f.e_theta(i, j) =
                -amp * spec.orientation.dot(theta_hat) * phase;
            f.e_phi(i, j) = -amp * spec.orientation.dot(phi_hat) * phase;
        }
    }
    return f;
}

double parallel_dipole_correlation_oracle(double separation_wavelengths) {
    if (separation_wavelengths < 0.0)
        throw validation_error("separation must be non-negative");

    // Dense midpoint rule; deliberately shares nothing with the pattern
    // module's quadrature.
    constexpr double step_deg = 0.25;
    const int n_theta = static_cast<int>(180.0 / step_deg);
    const int n_phi = static_cast<int>(360.0 / step_deg);
    const double d_theta = step_deg * kDegToRad;
    const double d_phi = step_deg * kDegToRad;
    const double k_sep = 2.0 * std::numbers::pi * separation_wavelengths;

    double self = 0.0;
    std::complex<double> cross = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        const double th = (i + 0.5) * d_theta;
        const double st = std::sin(th);
        const double gain = 1.5 * st * st; // both dipoles z-oriented
        double self_phi = 0.0;
        std::complex<double> cross_phi = 0.0;
        for (int j = 0; j < n_phi; ++j) {
            const double ph = (j + 0.5) * d_phi;
            self_phi += 1.0;
            cross_phi += std::exp(-kJ * (k_sep * st * std::cos(ph)));
        }
        self += gain * st * self_phi;
        cross += gain * st * cross_phi;
    }
    // The common measure factors cancel in the ratio.
    return std::norm(cross) / (self * self);
}

Network random_passive_network(int n_ports, double max_singular_value,
                               std::uint64_t seed, int n_freqs) {
    if (n_ports < 1)
        throw validation_error("port count must be positive");
    if (max_singular_value < 0.0 || max_singular_value > 1.0)
        throw validation_error("max singular value must lie in [0, 1]");
    if (n_freqs < 1)
        throw validation_error("frequency count must be positive");

    Network net;
    net.n_ports = n_ports;
    net.z0_ohm = 50.0;
    for (int fi = 0; fi < n_freqs; ++fi) {
        SampleRng rng(seed, static_cast<std::uint64_t>(fi));
        Eigen::MatrixXcd g = random_complex_matrix(n_ports, rng);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
            g, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const double top = svd.singularValues()(0);
        Eigen::MatrixXcd s;
        if (top <= 0.0 || max_singular_value == 0.0) {
            s = Eigen::MatrixXcd::Zero(n_ports, n_ports);
        } else {
            const Eigen::VectorXd scaled =
                svd.singularValues() * (max_singular_value / top);
            s = svd.matrixU() * scaled.asDiagonal() *
                svd.matrixV().adjoint();
        }
        net.frequencies_hz.push_back((fi + 1) * 1e9);
        net.s.push_back(std::move(s));
    }
    net.validate();
    return net;
}

PatternSet lossless_consistent_patterns(const Network& net,
                                        const SphericalGrid& grid) {
    net.validate();
    if (!net.passive())
        throw validation_error("lossless construction requires a passive "
                               "network");
    const int n = net.n_ports;

    PatternSet out;
    for (std::size_t fi = 0; fi < net.n_frequencies(); ++fi) {
        const double f = net.frequencies_hz[fi];
        const std::vector<FarFieldPattern> modes =
            orthonormal_modes(n, f, grid);

        // C = (I - S^H S)^{1/2}; column i gives port i's mode mixture, so
        // pattern overlaps reproduce I - S^H S exactly.
        Eigen::MatrixXcd d_full = Eigen::MatrixXcd::Identity(n, n) -
                                  net.s[fi].adjoint() * net.s[fi];
        d_full = 0.5 * (d_full + d_full.adjoint().eval());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d_full);
        if (es.info() != Eigen::Success)
            throw numeric_error("eigendecomposition failed in lossless "
                                "construction");
        const Eigen::MatrixXcd c = es.eigenvectors() *
                                   es.eigenvalues()
                                       .cwiseMax(0.0)
                                       .cwiseSqrt()
                                       .cast<std::complex<double>>()
                                       .asDiagonal() *
                                   es.eigenvectors().adjoint();

        std::vector<FarFieldPattern> per_port;
        per_port.reserve(n);
        for (int port = 0; port < n; ++port) {
            FarFieldPattern p;
            p.frequency_hz = f;
            p.grid = grid;
            p.e_theta = Eigen::MatrixXcd::Zero(grid.n_theta(), grid.n_phi());
            p.e_phi = Eigen::MatrixXcd::Zero(grid.n_theta(), grid.n_phi());
            // Conjugated coefficient: overlaps of the resulting patterns
            // reproduce C^H C = I - S^H S (not its conjugate).
            for (int q = 0; q < n; ++q)
                axpy_pattern(p, std::conj(c(q, port)), modes[q]);
            per_port.push_back(std::move(p));
        }
        out.emplace(f, std::move(per_port));
    }
    return out;
}

SynthSystem lossless_consistent_system(int n_ports,
                                       const ClusterDefinition& cluster,
                                       std::uint64_t seed,
                                       const SphericalGrid& grid,
                                       int n_freqs) {
    cluster.validate();
    if (cluster.all_ports != n_ports)
        throw validation_error("cluster port count does not match system");
    if (cluster.size() > n_ports)
        throw validation_error("cluster larger than the device");

    SynthSystem system;
    system.net = random_passive_network(n_ports, 0.9, seed, n_freqs);
    system.patterns = lossless_consistent_patterns(system.net, grid);
    return system;
}

std::vector<FarFieldPattern> cluster_patterns(const SynthSystem& system,
                                              const ClusterDefinition& cluster,
                                              double frequency_hz) {
    cluster.validate();
    const auto it = system.patterns.find(frequency_hz);
    if (it == system.patterns.end())
        throw validation_error("no patterns at frequency " +
                               std::to_string(frequency_hz) + " Hz");
    std::vector<FarFieldPattern> out;
    out.reserve(cluster.size());
    for (int p : cluster.active_ports) {
        if (p < 1 || p > static_cast<int>(it->second.size()))
            throw validation_error("cluster port " + std::to_string(p) +
                                   " has no pattern");
        out.push_back(it->second[p - 1]);
    }
    return out;
}

std::filesystem::path write_system_files(const SynthSystem& system,
                                         const std::filesystem::path& dir,
                                         const CapacityConfig& capacity) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw io_error("cannot create directory " + dir.string() + ": " +
                       ec.message());

    const int n = system.net.n_ports;
    const std::string snp = "system.s" + std::to_string(n) + "p";
    save_touchstone(system.net, SParamFormat::RI, dir / snp);

    // One CSV per (port, frequency).
    std::vector<std::vector<std::string>> port_files(n);
    int fi = 0;
    for (const auto& [freq, per_port] : system.patterns) {
        for (int p = 0; p < n; ++p) {
            const std::string name = "pattern_p" + std::to_string(p + 1) +
                                     "_f" + std::to_string(fi) + ".csv";
            save_pattern_file(per_port[p], dir / name);
            port_files[p].push_back(name);
        }
        ++fi;
    }

    // Two equal clusters when the port count is even, one cluster
    // otherwise.
    std::ofstream cfg(dir / "config.json");
    if (!cfg)
        throw io_error("cannot write config in " + dir.string());
    const int split = n % 2 == 0 ? n / 2 : n;
    auto emit_cluster = [&](const char* id, int first, int count,
                            bool last) {
        cfg << "    {\"id\": \"" << id << "\", \"ports\": [";
        for (int i = 0; i < count; ++i)
            cfg << (i ? ", " : "") << first + i;
        cfg << "], \"patterns\": [";
        for (int i = 0; i < count; ++i) {
            cfg << (i ? ", " : "") << "[";
            const auto& files = port_files[first + i - 1];
            for (std::size_t k = 0; k < files.size(); ++k)
                cfg << (k ? ", " : "") << '"' << files[k] << '"';
            cfg << "]";
        }
        cfg << "]}" << (last ? "" : ",") << "\n";
    };
    cfg << "{\n  \"touchstone\": \"" << snp << "\",\n  \"clusters\": [\n";
    emit_cluster("c1", 1, split, split == n);
    if (split != n)
        emit_cluster("c2", split + 1, n - split, true);
    cfg << "  ],\n  \"scope\": \"all-rows\",\n";
    // n_tx is omitted so the loader defaults it to the cluster count.
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "  \"capacity\": {\"snr_db\": %.17g, "
                  "\"n_samples\": %d, \"seed\": %llu}\n",
                  capacity.snr_db, capacity.n_samples,
                  static_cast<unsigned long long>(capacity.seed));
    cfg << buf << "}\n";
    cfg << std::flush;
    if (!cfg)
        throw io_error("write failed in " + dir.string());
    return dir / "config.json";
}

} // namespace cluskit
