// SPDX-License-Identifier: Apache-2.0
//
// cluskit: feed-weight optimization and MIMO evaluation for antenna clusters

#ifndef CLUSKIT_SYNTH_HPP
#define CLUSKIT_SYNTH_HPP

#include "cluskit/cluster.hpp"
#include "cluskit/mimo.hpp"
#include "cluskit/pattern.hpp"
#include "cluskit/radiation_matrix.hpp"
#include "cluskit/touchstone.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>

namespace cluskit {

// Ideal infinitesimal dipole: unit orientation vector, total efficiency,
// and a displacement from the origin in wavelengths (adds the plane-wave
// phase factor).
struct DipoleSpec {
    Eigen::Vector3d orientation = Eigen::Vector3d::UnitZ();
    double efficiency = 1.0;
    Eigen::Vector3d position_wavelengths = Eigen::Vector3d::Zero();

    void validate() const;
};

// Closed-form far field scaled so the self-overlap equals the efficiency;
// a z-oriented unit-efficiency dipole gives e_theta = sqrt(1.5) sin(theta).
FarFieldPattern hertzian_dipole_pattern(const DipoleSpec& spec,
                                        double frequency_hz,
                                        const SphericalGrid& grid = {});

// ECC of two identical z-oriented dipoles displaced along x, by dense
// 0.25-degree midpoint quadrature. Fully independent of the pattern
// module's integration path; serves as a brute-force reference.
double parallel_dipole_correlation_oracle(double separation_wavelengths);

// Random network with singular values rescaled so the largest equals
// max_singular_value at each frequency. Frequencies at 1..n_freqs GHz.
// Deterministic per seed.
Network random_passive_network(int n_ports, double max_singular_value,
                               std::uint64_t seed, int n_freqs = 1);

// A random passive network together with per-port far-field patterns
// constructed on orthonormal radiation modes so that the power not
// reflected or coupled is exactly the pattern power: the field-based
// radiation matrix of any port subset equals the all-rows
// scattering-based one.
struct SynthSystem {
    Network net;
    PatternSet patterns; // one pattern per device port at each frequency
};

SynthSystem lossless_consistent_system(int n_ports,
                                       const ClusterDefinition& cluster,
                                       std::uint64_t seed,
                                       const SphericalGrid& grid = {},
                                       int n_freqs = 1);

// Same construction for a caller-supplied network (the zero network gives
// identity D_ff, the identity network gives zero patterns).
PatternSet lossless_consistent_patterns(const Network& net,
                                        const SphericalGrid& grid = {});

// The fed cluster's patterns at one frequency, in active-port order.
std::vector<FarFieldPattern> cluster_patterns(const SynthSystem& system,
                                              const ClusterDefinition& cluster,
                                              double frequency_hz);

// Emits the system as Touchstone + per-port pattern CSVs + an analysis
// config (two equal clusters when the port count is even) for end-to-end
// CLI runs. Returns the config path.
std::filesystem::path write_system_files(const SynthSystem& system,
                                         const std::filesystem::path& dir,
                                         const CapacityConfig& capacity = {});

} // namespace cluskit

#endif
