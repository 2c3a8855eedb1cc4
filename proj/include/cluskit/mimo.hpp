// SPDX-License-Identifier: Apache-2.0
//
// cluskit: feed-weight optimization and MIMO evaluation for antenna clusters

#ifndef CLUSKIT_MIMO_HPP
#define CLUSKIT_MIMO_HPP

#include "cluskit/cluster.hpp"
#include "cluskit/radiation_matrix.hpp"
#include "cluskit/touchstone.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

namespace cluskit {

// Where one unit of power fed into a cluster ends up. Fractions sum to 1
// (within 1e-6) when far-field data supplies the ohmic term.
struct LossBreakdown {
    double frequency_hz = 0.0;
    double mismatch = 0.0;
    std::map<std::string, double> coupling_by_cluster;
    std::optional<double> ohmic;
    double radiated = 0.0;
};

// Envelope correlation coefficients between cluster-level equivalent
// antennas: rho_ij = |D_ij|^2 / (D_ii D_jj).
struct EccMatrix {
    double frequency_hz = 0.0;
    Eigen::MatrixXd rho;
};

struct CapacityConfig {
    double snr_db = 20.0;
    int n_tx = 1;
    int n_samples = 10000;
    std::uint64_t seed = 1;
};

struct CapacityResult {
    double frequency_hz = 0.0;
    double ergodic_capacity_bps_hz = 0.0;
    double sample_std_error = 0.0;
};

// Splits one unit of input power on the fed cluster into mismatch
// (reflected at its own ports), coupling into each other cluster, and --
// when d_ff built from the fed cluster's full-device far fields is given --
// radiated vs ohmic. clusters must partition the device ports.
LossBreakdown loss_decomposition(const Network& net,
                                 std::span<const ClusterDefinition> clusters,
                                 const std::string& fed_cluster,
                                 const ExcitationVector& a,
                                 const RadiationMatrix* d_ff, int freq_index);

// Requires every diagonal entry above 1e-12 (an antenna with no radiated
// power has undefined correlation).
EccMatrix ecc(const RadiationMatrix& d);

// Rayleigh-fading ergodic capacity of H = r_rx^{1/2} H_w with i.i.d.
// CN(0,1) H_w (m x n_tx): mean over n_samples of
// log2 det(I + (snr/n_tx) H H^H). Deterministic for a fixed seed
// regardless of worker count (per-sample counter-keyed randomness).
CapacityResult ergodic_capacity(const Eigen::MatrixXcd& r_rx,
                                const CapacityConfig& cfg, int n_workers = 1);

// Receive correlation matrix for the capacity model: the cluster-level
// radiation matrix verbatim (diagonal = efficiencies, off-diagonal =
// complex pattern correlations).
Eigen::MatrixXcd build_receive_matrix(const RadiationMatrix& d_cluster_level);

} // namespace cluskit

#endif
