// SPDX-License-Identifier: Apache-2.0
//
// cluskit: feed-weight optimization and MIMO evaluation for antenna clusters

#ifndef CLUSKIT_CLUSTER_HPP
#define CLUSKIT_CLUSTER_HPP

#include "cluskit/pattern.hpp"
#include "cluskit/radiation_matrix.hpp"
#include "cluskit/touchstone.hpp"

#include <Eigen/Dense>
#include <map>
#include <span>
#include <vector>

namespace cluskit {

// Complex feed weights for one cluster, unit 2-norm, with the phase fixed
// so the largest-magnitude entry is real and non-negative.
struct ExcitationVector {
    Eigen::VectorXcd a;
    double frequency_hz = 0.0;

    int size() const { return static_cast<int>(a.size()); }

    // Normalizes and applies the phase convention. Throws on zero or
    // non-finite input.
    static ExcitationVector make(Eigen::VectorXcd weights,
                                 double frequency_hz);
    void validate() const;
};

struct ClusterOperatingPoint {
    double frequency_hz = 0.0;
    ExcitationVector excitation;
    double efficiency = 0.0; // largest eigenvalue, clamped to [0, 1]
    double tarc = 0.0;       // sqrt(1 - efficiency of the source matrix)
};

// Efficiency-maximizing excitation: the unit eigenvector of the largest
// eigenvalue. Near-degenerate top eigenvalues (gap < 1e-10) are resolved
// deterministically by projecting the first feasible basis vector onto the
// top eigenspace.
ClusterOperatingPoint optimal_excitation(const RadiationMatrix& d);

// Rayleigh quotient a^H D a / a^H a.
double cluster_efficiency(const RadiationMatrix& d,
                          const ExcitationVector& a);

// sqrt(1 - efficiency) for the scattering-based radiation matrix at the
// given scope; with ClusterOnly scope this is the classical total active
// reflection coefficient.
double tarc(const Network& net, const ClusterDefinition& cluster,
            const ExcitationVector& a, int freq_index, RowScope scope);

// Pointwise sum a_i * pattern_i; the weighted cluster acts as a single
// antenna whose self-overlap is a^H D_ff a.
FarFieldPattern weighted_pattern(std::span<const FarFieldPattern> patterns,
                                 const ExcitationVector& a);

// Per-port patterns keyed by frequency (exact-match lookup).
using PatternSet = std::map<double, std::vector<FarFieldPattern>>;

// One independently optimal operating point per network frequency.
// With FarField source the excitation comes from the pattern overlap
// matrix (patterns required at every frequency); tarc is always evaluated
// on the scattering data at the requested scope under the chosen
// excitation.
std::vector<ClusterOperatingPoint>
frequency_sweep(const Network& net, const PatternSet* patterns_by_freq,
                const ClusterDefinition& cluster, RowScope scope,
                RadiationSource source = RadiationSource::Scattering);

} // namespace cluskit

#endif
