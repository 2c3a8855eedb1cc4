// SPDX-License-Identifier: Apache-2.0
//
// cluskit: feed-weight optimization and MIMO evaluation for antenna clusters

#ifndef CLUSKIT_RADIATION_MATRIX_HPP
#define CLUSKIT_RADIATION_MATRIX_HPP

#include "cluskit/pattern.hpp"
#include "cluskit/touchstone.hpp"

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

namespace cluskit {

enum class RadiationSource { Scattering, FarField };

// Row scope of the scattering-based construction. AllRows keeps every
// device port's row (power coupled into other antennas counts as lost);
// ClusterOnly keeps only the cluster's own rows and yields the matching
// efficiency.
enum class RowScope { ClusterOnly, AllRows };

// A named group of device ports driven coherently as one antenna.
// Port indices are 1-based.
struct ClusterDefinition {
    std::string id;
    std::vector<int> active_ports;
    int all_ports = 0;

    int size() const { return static_cast<int>(active_ports.size()); }
    void validate() const;
};

// Hermitian k x k matrix whose quadratic form with a unit excitation gives
// the cluster's efficiency.
struct RadiationMatrix {
    double frequency_hz = 0.0;
    Eigen::MatrixXcd d;
    RadiationSource source = RadiationSource::Scattering;
    // Set on scattering-derived matrices; ClusterOnly marks a
    // matching-efficiency-only matrix.
    RowScope scope = RowScope::AllRows;

    int size() const { return static_cast<int>(d.rows()); }

    // Hermitian to 1e-12, eigenvalues in [-1e-9, 1 + 1e-9].
    void validate() const;
};

// D = I_k - S_sub^H S_sub where S_sub keeps the active-port columns and,
// depending on scope, either all rows or only the active-port rows.
RadiationMatrix radiation_matrix_from_s(const Network& net,
                                        const ClusterDefinition& cluster,
                                        int freq_index,
                                        RowScope scope = RowScope::AllRows);

// D_ij = integrate_overlap(pattern_i, pattern_j), Hermitian-symmetrized.
RadiationMatrix
radiation_matrix_from_fields(std::span<const FarFieldPattern> patterns);

} // namespace cluskit

#endif
