// SPDX-License-Identifier: Apache-2.0
//
// cluskit: feed-weight optimization and MIMO evaluation for antenna clusters

#include "cluskit/radiation_matrix.hpp"

#include "cluskit/error.hpp"

#include <set>
#include <string>

namespace cluskit {

void ClusterDefinition::validate() const {
    if (active_ports.empty())
        throw validation_error("cluster '" + id + "' has no active ports");
    if (all_ports <= 0)
        throw validation_error("cluster '" + id +
                               "' has a non-positive device port count");
    std::set<int> seen;
    for (int p : active_ports) {
        if (p < 1 || p > all_ports)
            throw validation_error("cluster '" + id + "' port " +
                                   std::to_string(p) + " outside [1, " +
                                   std::to_string(all_ports) + "]");
        if (!seen.insert(p).second)
            throw validation_error("cluster '" + id + "' repeats port " +
                                   std::to_string(p));
    }
}

void RadiationMatrix::validate() const {
    if (d.rows() != d.cols() || d.rows() == 0)
        throw validation_error("radiation matrix must be square and "
                               "non-empty");
    if (!d.allFinite())
        throw numeric_error("radiation matrix has non-finite entries");
    const double herm_gap = (d - d.adjoint()).cwiseAbs().maxCoeff();
    if (herm_gap > 1e-12)
        throw numeric_error("radiation matrix is not Hermitian (max "
                            "asymmetry " +
                            std::to_string(herm_gap) + ")");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d,
                                                       Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo < -1e-9)
        throw numeric_error("radiation matrix has eigenvalue " +
                            std::to_string(lo) + " below -1e-9");
    if (hi > 1.0 + 1e-9)
        throw numeric_error("radiation matrix has eigenvalue " +
                            std::to_string(hi) + " above 1");
}

RadiationMatrix radiation_matrix_from_s(const Network& net,
                                        const ClusterDefinition& cluster,
                                        int freq_index, RowScope scope) {
    cluster.validate();
    if (cluster.all_ports != net.n_ports)
        throw validation_error("cluster '" + cluster.id + "' defined for " +
                               std::to_string(cluster.all_ports) +
                               " ports but network has " +
                               std::to_string(net.n_ports));
    if (freq_index < 0 ||
        freq_index >= static_cast<int>(net.n_frequencies()))
        throw validation_error("frequency index " +
                               std::to_string(freq_index) + " out of range");

    const Eigen::MatrixXcd& s = net.s[freq_index];
    if (!s.allFinite())
        throw numeric_error("scattering matrix has non-finite entries");

    const int k = cluster.size();
    const int rows = scope == RowScope::AllRows ? net.n_ports : k;
    Eigen::MatrixXcd s_sub(rows, k);
    for (int c = 0; c < k; ++c) {
        const int col = cluster.active_ports[c] - 1;
        if (scope == RowScope::AllRows) {
            s_sub.col(c) = s.col(col);
        } else {
            for (int r = 0; r < k; ++r)
                s_sub(r, c) = s(cluster.active_ports[r] - 1, col);
        }
    }

    RadiationMatrix out;
    out.frequency_hz = net.frequencies_hz[freq_index];
    out.source = RadiationSource::Scattering;
    out.scope = scope;
    Eigen::MatrixXcd d =
        Eigen::MatrixXcd::Identity(k, k) - s_sub.adjoint() * s_sub;
    out.d = 0.5 * (d + d.adjoint().eval());
    return out;
}

RadiationMatrix
radiation_matrix_from_fields(std::span<const FarFieldPattern> patterns) {
    if (patterns.empty())
        throw validation_error("at least one pattern is required");
    const int k = static_cast<int>(patterns.size());
    for (int i = 1; i < k; ++i) {
        if (patterns[i].grid != patterns[0].grid)
            throw validation_error("patterns must share one grid");
        if (patterns[i].frequency_hz != patterns[0].frequency_hz)
            throw validation_error("patterns must share one frequency");
    }

    Eigen::MatrixXcd d(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            const std::complex<double> v =
                integrate_overlap(patterns[i], patterns[j]);
            d(i, j) = v;
            d(j, i) = std::conj(v);
        }
    }

    RadiationMatrix out;
    out.frequency_hz = patterns[0].frequency_hz;
    out.source = RadiationSource::FarField;
    // Quadrature asymmetry is zero by conjugate symmetry of the overlap,
    // but averaging keeps the diagonal exactly real.
    out.d = 0.5 * (d + d.adjoint().eval());
    return out;
}

} // namespace cluskit
