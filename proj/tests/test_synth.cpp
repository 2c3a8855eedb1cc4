// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cluskit/config.hpp"
#include "cluskit/error.hpp"
#include "cluskit/mimo.hpp"
#include "cluskit/synth.hpp"

#include <cmath>
#include <filesystem>

using namespace cluskit;

TEST_CASE("dipole pattern closed form") {
    const auto dip = hertzian_dipole_pattern(DipoleSpec{}, 1e9, {1.0, 1.0});
    CHECK(std::abs(dip.self_overlap() - 1.0) < 1e-6);
    CHECK_NOTHROW(dip.validate());

    DipoleSpec dead;
    dead.efficiency = 0.0;
    const auto zero = hertzian_dipole_pattern(dead, 1e9, {10.0, 10.0});
    CHECK(zero.e_theta.cwiseAbs().maxCoeff() == 0.0);
    CHECK(zero.e_phi.cwiseAbs().maxCoeff() == 0.0);

    DipoleSpec x, y;
    x.orientation = Eigen::Vector3d::UnitX();
    y.orientation = Eigen::Vector3d::UnitY();
    const auto fx = hertzian_dipole_pattern(x, 1e9, {1.0, 1.0});
    const auto fy = hertzian_dipole_pattern(y, 1e9, {1.0, 1.0});
    CHECK(std::abs(integrate_overlap(fx, fy)) < 1e-9);

    DipoleSpec tilted;
    tilted.orientation = Eigen::Vector3d(1.0, 1.0, 0.0);
    CHECK_THROWS_AS(hertzian_dipole_pattern(tilted, 1e9, {10.0, 10.0}),
                    validation_error);
}

TEST_CASE("displaced dipole keeps its power") {
    DipoleSpec d;
    d.position_wavelengths = Eigen::Vector3d(0.5, 0.0, 0.0);
    const auto f = hertzian_dipole_pattern(d, 1e9, {1.0, 1.0});
    CHECK(std::abs(f.self_overlap() - 1.0) < 1e-6);
}

TEST_CASE("parallel dipole correlation oracle") {
    CHECK(parallel_dipole_correlation_oracle(0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(parallel_dipole_correlation_oracle(10.0) < 0.05);

    SUBCASE("matches the module path at half a wavelength") {
        const SphericalGrid grid{1.0, 1.0};
        DipoleSpec near, far;
        far.position_wavelengths = Eigen::Vector3d(0.5, 0.0, 0.0);
        const std::vector<FarFieldPattern> pair = {
            hertzian_dipole_pattern(near, 1e9, grid),
            hertzian_dipole_pattern(far, 1e9, grid)};
        const auto e = ecc(radiation_matrix_from_fields(pair));
        const double oracle = parallel_dipole_correlation_oracle(0.5);
        CHECK(std::abs(e.rho(0, 1) - oracle) < 1e-3);
    }
}

TEST_CASE("random passive network") {
    const Network zero = random_passive_network(3, 0.0, 1);
    CHECK(zero.s[0].cwiseAbs().maxCoeff() == 0.0);

    const Network a = random_passive_network(5, 1.0, 42, 3);
    CHECK(a.passive());
    CHECK_NOTHROW(a.validate());

    const Network b = random_passive_network(5, 1.0, 42, 3);
    for (std::size_t fi = 0; fi < a.n_frequencies(); ++fi)
        CHECK(a.s[fi] == b.s[fi]); // bit-identical per seed

    const Network c = random_passive_network(5, 1.0, 43, 3);
    CHECK(a.s[0] != c.s[0]);

    CHECK_THROWS_AS(random_passive_network(0, 0.5, 1), validation_error);
    CHECK_THROWS_AS(random_passive_network(2, 1.5, 1), validation_error);
}

TEST_CASE("lossless consistent system reconciles both radiation paths") {
    const ClusterDefinition cluster{"c", {1, 2, 3, 4}, 8};
    const SynthSystem system =
        lossless_consistent_system(8, cluster, 42, {2.0, 2.0});
    const auto d_s = radiation_matrix_from_s(system.net, cluster, 0,
                                             RowScope::AllRows);
    const auto d_ff =
        radiation_matrix_from_fields(cluster_patterns(system, cluster, 1e9));
    CHECK((d_s.d - d_ff.d).cwiseAbs().maxCoeff() < 1e-6);

    for (const auto& p : system.patterns.at(1e9))
        CHECK_NOTHROW(p.validate());
}

TEST_CASE("lossless construction degenerate networks") {
    SUBCASE("zero network radiates everything") {
        Network net;
        net.n_ports = 4;
        net.frequencies_hz = {1e9};
        net.s = {Eigen::MatrixXcd::Zero(4, 4)};
        const auto patterns = lossless_consistent_patterns(net, {4.0, 4.0});
        const auto d =
            radiation_matrix_from_fields(patterns.at(1e9));
        CHECK((d.d - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <
              1e-9);
    }
    SUBCASE("identity network radiates nothing") {
        Network net;
        net.n_ports = 3;
        net.frequencies_hz = {1e9};
        net.s = {Eigen::MatrixXcd::Identity(3, 3)};
        const auto patterns = lossless_consistent_patterns(net, {4.0, 4.0});
        for (const auto& p : patterns.at(1e9)) {
            CHECK(p.e_theta.cwiseAbs().maxCoeff() < 1e-9);
            CHECK(p.e_phi.cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("system files round-trip through the config loader") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "cluskit_synth_test";
    fs::remove_all(dir);

    const ClusterDefinition cluster{"c", {1, 2}, 4};
    const SynthSystem system =
        lossless_consistent_system(4, cluster, 5, {4.0, 4.0}, 2);
    const fs::path config_path = write_system_files(system, dir);
    CHECK(fs::exists(dir / "system.s4p"));
    CHECK(fs::exists(dir / "pattern_p1_f0.csv"));
    CHECK(fs::exists(dir / "pattern_p4_f1.csv"));

    const AnalysisSystem sys = load_system(load_analysis_config(config_path));
    CHECK(sys.net.n_ports == 4);
    CHECK(sys.clusters.size() == 2);
    CHECK(sys.has_patterns);
    CHECK(sys.capacity.n_tx == 2);
    CHECK(sys.weight_source == RadiationSource::FarField);

    // loaded patterns reproduce the generated ones
    const auto& loaded = sys.patterns.at("c1").at(1e9);
    const auto original = cluster_patterns(system, {"c1", {1, 2}, 4}, 1e9);
    for (int i = 0; i < 2; ++i) {
        CHECK((loaded[i].e_theta - original[i].e_theta)
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
    }
    fs::remove_all(dir);
}
