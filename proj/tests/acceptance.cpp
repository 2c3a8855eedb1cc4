// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one pass/fail line per criterion, exit code = number
// of failed criteria.

#include "cluskit/cluster.hpp"
#include "cluskit/config.hpp"
#include "cluskit/error.hpp"
#include "cluskit/mimo.hpp"
#include "cluskit/pattern.hpp"
#include "cluskit/radiation_matrix.hpp"
#include "cluskit/reports.hpp"
#include "cluskit/synth.hpp"
#include "cluskit/touchstone.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace cluskit;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    int id;
    std::string name;
    std::function<void(std::string&)> run; // throws or appends detail
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0)
        .count();
}

void require(bool ok, const std::string& what) {
    if (!ok)
        throw std::runtime_error(what);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// ---- criterion 1: eigen-optimality ---------------------------------------

void criterion_eigen_optimality(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 gen(20240101);
    double worst_oracle_gap = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 1 + static_cast<int>(gen() % 8);
        RadiationMatrix d;
        d.frequency_hz = 1e9;
        d.d = oracles::random_psd(k, gen);
        const ClusterOperatingPoint pt = optimal_excitation(d);

        const double oracle = oracles::power_iteration_lambda_max(d.d);
        worst_oracle_gap =
            std::max(worst_oracle_gap, std::abs(pt.efficiency - oracle));
        require(std::abs(pt.efficiency - oracle) <= 1e-9,
                "eigen efficiency differs from power iteration by " +
                    fmt(std::abs(pt.efficiency - oracle)));

        for (int t = 0; t < 10000; ++t) {
            const Eigen::VectorXcd r = oracles::random_unit_vector(k, gen);
            const double eff = (r.adjoint() * d.d * r).real()(0);
            require(pt.efficiency >= eff - 1e-12,
                    "random excitation beat the eigenvector");
        }
    }
    const double dt = seconds_since(t0);
    require(dt < 10.0, "runtime " + fmt(dt) + " s exceeds 10 s");
    detail = "max |eigen - power-iteration| = " + fmt(worst_oracle_gap) +
             ", 100 matrices x 10^4 excitations in " + fmt(dt) + " s";
}

// ---- criterion 2: lossless equality of Eq-type constructions -------------

void criterion_lossless_equality(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const ClusterDefinition cluster{"c", {1, 2, 3, 4}, 8};
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const SynthSystem system =
            lossless_consistent_system(8, cluster, seed, {1.0, 1.0});
        const auto d_s = radiation_matrix_from_s(system.net, cluster, 0,
                                                 RowScope::AllRows);
        const auto d_ff = radiation_matrix_from_fields(
            cluster_patterns(system, cluster, 1e9));
        worst = std::max(worst,
                         (d_s.d - d_ff.d).cwiseAbs().maxCoeff());
    }
    const double dt = seconds_since(t0);
    require(worst < 1e-6, "max |D_s - D_ff| = " + fmt(worst));
    require(dt < 60.0, "runtime " + fmt(dt) + " s exceeds 60 s");
    detail = "10 seeds, 8 ports, 4-port cluster, 1-degree grid: max "
             "|D_s - D_ff| = " +
             fmt(worst) + " in " + fmt(dt) + " s";
}

// ---- criterion 3: quadrature ----------------------------------------------

FarFieldPattern isotropic_ref(double step) {
    FarFieldPattern f;
    f.frequency_hz = 1e9;
    f.grid = {step, step};
    f.e_theta = Eigen::MatrixXcd::Ones(f.grid.n_theta(), f.grid.n_phi());
    f.e_phi = Eigen::MatrixXcd::Zero(f.grid.n_theta(), f.grid.n_phi());
    return f;
}

void criterion_quadrature(std::string& detail) {
    double iso[3], dip[3];
    const double steps[3] = {4.0, 2.0, 1.0};
    for (int i = 0; i < 3; ++i) {
        iso[i] = std::abs(isotropic_ref(steps[i]).self_overlap() - 1.0);
        const auto d = hertzian_dipole_pattern(DipoleSpec{}, 1e9,
                                               {steps[i], steps[i]});
        dip[i] = std::abs(d.self_overlap() - 1.0);
    }
    require(iso[2] < 1e-6, "isotropic error " + fmt(iso[2]));
    require(dip[2] < 1e-6, "dipole error " + fmt(dip[2]));
    for (int i = 1; i < 3; ++i) {
        require(iso[i] <= iso[i - 1] / 2.0,
                "isotropic error did not halve: " + fmt(iso[i - 1]) +
                    " -> " + fmt(iso[i]));
        require(dip[i] <= dip[i - 1] / 2.0,
                "dipole error did not halve: " + fmt(dip[i - 1]) + " -> " +
                    fmt(dip[i]));
    }
    detail = "isotropic 4/2/1 deg: " + fmt(iso[0]) + "/" + fmt(iso[1]) +
             "/" + fmt(iso[2]) + "; dipole: " + fmt(dip[0]) + "/" +
             fmt(dip[1]) + "/" + fmt(dip[2]);
}

// ---- criterion 4: TARC identity -------------------------------------------

void criterion_tarc_identity(std::string& detail) {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const int n = 2 + static_cast<int>(seed % 7);
        const Network net = random_passive_network(n, 0.98, seed);
        ClusterDefinition cluster{"c", {}, n};
        for (int p = 1; p <= std::max(1, n / 2); ++p)
            cluster.active_ports.push_back(p);
        const auto d = radiation_matrix_from_s(net, cluster, 0,
                                               RowScope::ClusterOnly);
        const auto pt = optimal_excitation(d);
        const double min_tarc =
            tarc(net, cluster, pt.excitation, 0, RowScope::ClusterOnly);
        const double lambda_max = oracles::power_iteration_lambda_max(d.d);
        worst = std::max(
            worst, std::abs(min_tarc - std::sqrt(1.0 - lambda_max)));
    }
    require(worst < 1e-9, "max |min TARC - sqrt(1 - lambda_max)| = " +
                              fmt(worst));
    detail = "100 random passive networks: max deviation " + fmt(worst);
}

// ---- criterion 5: ECC ------------------------------------------------------

void criterion_ecc(std::string& detail) {
    const SphericalGrid grid{1.0, 1.0};
    DipoleSpec x;
    x.orientation = Eigen::Vector3d::UnitX();
    const std::vector<FarFieldPattern> ortho = {
        hertzian_dipole_pattern(DipoleSpec{}, 1e9, grid),
        hertzian_dipole_pattern(x, 1e9, grid)};
    const double rho_ortho =
        ecc(radiation_matrix_from_fields(ortho)).rho(0, 1);
    require(rho_ortho <= 1e-9, "orthogonal dipoles rho = " + fmt(rho_ortho));

    const std::vector<FarFieldPattern> twin = {ortho[0], ortho[0]};
    const double rho_twin = ecc(radiation_matrix_from_fields(twin)).rho(0, 1);
    require(std::abs(rho_twin - 1.0) <= 1e-9,
            "identical patterns rho = " + fmt(rho_twin));

    DipoleSpec moved;
    moved.position_wavelengths = Eigen::Vector3d(0.5, 0.0, 0.0);
    const std::vector<FarFieldPattern> pair = {
        ortho[0], hertzian_dipole_pattern(moved, 1e9, grid)};
    const double rho_module =
        ecc(radiation_matrix_from_fields(pair)).rho(0, 1);
    const double rho_oracle = parallel_dipole_correlation_oracle(0.5);
    require(std::abs(rho_module - rho_oracle) < 1e-3,
            "module " + fmt(rho_module) + " vs oracle " + fmt(rho_oracle));
    detail = "orthogonal " + fmt(rho_ortho) + ", identical " +
             fmt(std::abs(rho_twin - 1.0)) + ", 0.5-wavelength pair |" +
             fmt(rho_module) + " - " + fmt(rho_oracle) + "| = " +
             fmt(std::abs(rho_module - rho_oracle));
}

// ---- criterion 6: SISO closed form ----------------------------------------

void criterion_siso_closed_form(std::string& detail) {
    // log2(e) * e^(0.01) * E1(0.01), evaluated independently beforehand
    const double closed_form = 5.88404823368347;
    const auto t0 = std::chrono::steady_clock::now();
    CapacityConfig cfg;
    cfg.snr_db = 20.0;
    cfg.n_tx = 1;
    cfg.n_samples = 100000;
    cfg.seed = 2718281828;
    const CapacityResult res =
        ergodic_capacity(Eigen::MatrixXcd::Identity(1, 1), cfg);
    const double dt = seconds_since(t0);
    const double gap = std::abs(res.ergodic_capacity_bps_hz - closed_form);
    require(gap <= 3.0 * res.sample_std_error,
            "|" + fmt(res.ergodic_capacity_bps_hz) + " - " +
                fmt(closed_form) + "| = " + fmt(gap) + " > 3 SE = " +
                fmt(3.0 * res.sample_std_error));
    require(dt < 5.0, "runtime " + fmt(dt) + " s exceeds 5 s");
    detail = "mean " + fmt(res.ergodic_capacity_bps_hz) + " vs " +
             fmt(closed_form) + ", gap " + fmt(gap) + " <= 3 SE (" +
             fmt(3.0 * res.sample_std_error) + ") in " + fmt(dt) + " s";
}

// ---- criterion 7: ideal MIMO baselines ------------------------------------

void criterion_ideal_baselines(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    double prev = 0.0;
    double worst_rel = 0.0;
    for (int m : {1, 2, 4, 7, 8}) {
        CapacityConfig cfg;
        cfg.snr_db = 20.0;
        cfg.n_tx = m;
        cfg.n_samples = 10000;
        cfg.seed = 314159;
        const CapacityResult res =
            ergodic_capacity(Eigen::MatrixXcd::Identity(m, m), cfg);
        require(res.ergodic_capacity_bps_hz > prev,
                "capacity not increasing at M = " + std::to_string(m));
        prev = res.ergodic_capacity_bps_hz;

        const double oracle = oracles::mc_capacity_oracle(
            Eigen::MatrixXcd::Identity(m, m), m, 20.0, 100000, 987 + m);
        const double rel =
            std::abs(res.ergodic_capacity_bps_hz - oracle) / oracle;
        worst_rel = std::max(worst_rel, rel);
        require(rel < 0.01, "M = " + std::to_string(m) + ": impl " +
                                fmt(res.ergodic_capacity_bps_hz) +
                                " vs oracle " + fmt(oracle) + " (" +
                                fmt(100.0 * rel) + "%)");
    }
    const double dt = seconds_since(t0);
    require(dt < 60.0, "runtime " + fmt(dt) + " s exceeds 60 s");
    detail = "M = 1,2,4,7,8 strictly increasing; worst oracle deviation " +
             fmt(100.0 * worst_rel) + "% in " + fmt(dt) + " s";
}

// ---- criterion 8: energy bookkeeping ---------------------------------------

void criterion_energy_bookkeeping(std::string& detail) {
    double worst = 0.0;
    std::mt19937_64 gen(64);
    for (std::uint64_t seed = 100; seed < 103; ++seed) {
        const ClusterDefinition fed{"a", {1, 2, 3, 4}, 8};
        const SynthSystem system =
            lossless_consistent_system(8, fed, seed, {1.0, 1.0});
        const std::vector<ClusterDefinition> clusters = {
            fed, {"b", {5, 6, 7, 8}, 8}};
        const auto d_ff = radiation_matrix_from_fields(
            cluster_patterns(system, fed, 1e9));
        const auto a = ExcitationVector::make(
            oracles::random_unit_vector(4, gen), 1e9);
        const LossBreakdown loss =
            loss_decomposition(system.net, clusters, "a", a, &d_ff, 0);
        double sum = loss.mismatch + loss.radiated + loss.ohmic.value();
        for (const auto& [id, c] : loss.coupling_by_cluster)
            sum += c;
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    require(worst < 1e-6, "fraction sum deviates by " + fmt(worst));

    // hand case: S21 = 0.8 puts exactly 0.64 into the other cluster
    Network net;
    net.n_ports = 2;
    net.frequencies_hz = {1e9};
    net.s = {Eigen::MatrixXcd::Zero(2, 2)};
    net.s[0](1, 0) = 0.8;
    const std::vector<ClusterDefinition> clusters = {{"a", {1}, 2},
                                                     {"b", {2}, 2}};
    const auto unit = ExcitationVector::make(Eigen::VectorXcd::Ones(1), 1e9);
    const LossBreakdown hand =
        loss_decomposition(net, clusters, "a", unit, nullptr, 0);
    require(std::abs(hand.coupling_by_cluster.at("b") - 0.64) <= 1e-15,
            "S21 = 0.8 coupling = " + fmt(hand.coupling_by_cluster.at("b")));
    detail = "lossless fixtures: max |sum - 1| = " + fmt(worst) +
             "; hand case coupling 0.64 exact";
}

// ---- criterion 9: CLI determinism ------------------------------------------

void criterion_cli_determinism(std::string& detail) {
    const fs::path dir = fs::temp_directory_path() / "cluskit_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const ClusterDefinition all{"all", {1, 2, 3, 4}, 4};
    const SynthSystem system =
        lossless_consistent_system(4, all, 424242, {4.0, 4.0});
    const fs::path cfg = write_system_files(system, dir / "sys");

    auto run = [&](const std::string& out, int workers) {
        const std::string cmd =
            std::string(CLUSKIT_CLI_PATH) + " capacity --config " +
            cfg.string() + " --samples 10000 --seed 5 --ideal-mimo 1,2 " +
            "--workers " + std::to_string(workers) + " --output " +
            (dir / out).string();
        const int status = std::system(cmd.c_str());
        require(WIFEXITED(status) && WEXITSTATUS(status) == 0,
                "cmd_capacity run failed");
    };
    run("r1.csv", 1);
    run("r2.csv", 1);
    run("r3.csv", 1);
    run("w4.csv", 4);
    run("w7.csv", 7);

    auto slurp = [](const fs::path& p) {
        std::ifstream f(p);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    const std::string first = slurp(dir / "r1.csv");
    require(!first.empty(), "empty capacity output");
    for (const char* other : {"r2.csv", "r3.csv", "w4.csv", "w7.csv"})
        require(slurp(dir / other) == first,
                std::string("output differs: ") + other);
    fs::remove_all(dir);
    detail = "3 repeat runs and 1/4/7-worker runs bit-identical";
}

// ---- criterion 10: parser ---------------------------------------------------

void criterion_parser(std::string& detail) {
    double worst = 0.0;
    const Network net = random_passive_network(8, 0.9, 77, 3);
    for (SParamFormat f :
         {SParamFormat::RI, SParamFormat::MA, SParamFormat::DB}) {
        const Network back =
            parse_touchstone(write_touchstone(net, f), net.n_ports);
        for (std::size_t fi = 0; fi < net.n_frequencies(); ++fi) {
            worst = std::max(worst, (back.s[fi] - net.s[fi])
                                        .cwiseAbs()
                                        .maxCoeff());
            require((back.s[fi] - net.s[fi]).cwiseAbs().maxCoeff() <= 1e-12,
                    "round-trip error above 1e-12");
        }
    }

    const Network quirk = parse_touchstone(
        "# HZ S RI R 50\n1.0  0 0  0.5 0  0.25 0  0 0\n");
    require(quirk.s[0](1, 0) == std::complex<double>(0.5, 0.0) &&
                quirk.s[0](0, 1) == std::complex<double>(0.25, 0.0) &&
                quirk.s[0](0, 0) == std::complex<double>(0.0, 0.0) &&
                quirk.s[0](1, 1) == std::complex<double>(0.0, 0.0),
            "2-port column order mismatch");
    detail = "RI/MA/DB round-trip max error " + fmt(worst) +
             "; 2-port column-order fixture parses to S21 = 0.5, "
             "S12 = 0.25";
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "eigen-optimality vs random search and power iteration",
         criterion_eigen_optimality},
        {2, "lossless scattering/far-field radiation matrix equality",
         criterion_lossless_equality},
        {3, "spherical quadrature accuracy and convergence",
         criterion_quadrature},
        {4, "minimum TARC identity", criterion_tarc_identity},
        {5, "envelope correlation values and brute-force oracle",
         criterion_ecc},
        {6, "SISO ergodic capacity closed form", criterion_siso_closed_form},
        {7, "ideal MxM capacity baselines vs independent Monte Carlo",
         criterion_ideal_baselines},
        {8, "loss decomposition energy bookkeeping",
         criterion_energy_bookkeeping},
        {9, "cmd_capacity determinism across runs and workers",
         criterion_cli_determinism},
        {10, "Touchstone round-trip and column-order fixture",
         criterion_parser},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        std::string detail;
        try {
            c.run(detail);
            std::printf("[PASS] criterion %2d: %s (%s)\n", c.id,
                        c.name.c_str(), detail.c_str());
        } catch (const std::exception& e) {
            ++failures;
            std::printf("[FAIL] criterion %2d: %s -- %s\n", c.id,
                        c.name.c_str(), e.what());
        }
        std::fflush(stdout);
    }
    if (failures == 0)
        std::printf("all %zu acceptance criteria passed\n", criteria.size());
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures;
}
