// SPDX-License-Identifier: Apache-2.0
//
// cluskit: feed-weight optimization and MIMO evaluation for antenna clusters

#include "cluskit/cluster.hpp"

#include "cluskit/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cluskit {

namespace {

constexpr double kDegenerateGap = 1e-10;

int largest_magnitude_index(const Eigen::VectorXcd& a) {
    int best = 0;
    double best_mag = std::abs(a(0));
    for (int i = 1; i < a.size(); ++i) {
        const double m = std::abs(a(i));
        if (m > best_mag) {
            best = i;
            best_mag = m;
        }
    }
    return best;
}

} // namespace

ExcitationVector ExcitationVector::make(Eigen::VectorXcd weights,
                                        double frequency_hz) {
    if (weights.size() == 0)
        throw validation_error("excitation vector is empty");
    if (!weights.allFinite())
        throw validation_error("excitation vector has non-finite entries");
    const double norm = weights.norm();
    if (norm <= 0.0)
        throw validation_error("excitation vector is zero");
    weights /= norm;

    const int pivot = largest_magnitude_index(weights);
    const std::complex<double> ref = weights(pivot);
    weights *= std::conj(ref) / std::abs(ref);
    // Pin the pivot's imaginary part so the convention holds bit-exactly.
    weights(pivot) = std::complex<double>(std::abs(weights(pivot)), 0.0);

    ExcitationVector out;
    out.a = std::move(weights);
    out.frequency_hz = frequency_hz;
    return out;
}

void ExcitationVector::validate() const {
    if (a.size() == 0)
        throw validation_error("excitation vector is empty");
    if (!a.allFinite())
        throw validation_error("excitation vector has non-finite entries");
    if (std::abs(a.norm() - 1.0) > 1e-12)
        throw validation_error("excitation vector is not unit norm");
    const int pivot = largest_magnitude_index(a);
    if (std::abs(a(pivot).imag()) > 1e-12 || a(pivot).real() < 0.0)
        throw validation_error("excitation phase convention violated");
}

ClusterOperatingPoint optimal_excitation(const RadiationMatrix& d) {
    if (d.d.rows() != d.d.cols() || d.d.rows() == 0)
        throw validation_error("radiation matrix must be square and "
                               "non-empty");
    const double herm_gap = (d.d - d.d.adjoint()).cwiseAbs().maxCoeff();
    if (herm_gap > 1e-12)
        throw numeric_error("radiation matrix is not Hermitian (max "
                            "asymmetry " +
                            std::to_string(herm_gap) + ")");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d.d);
    if (es.info() != Eigen::Success)
        throw numeric_error("eigendecomposition failed");
    const int k = static_cast<int>(d.d.rows());
    const Eigen::VectorXd& ev = es.eigenvalues(); // ascending
    const double lambda_max = ev(k - 1);

    int first = k - 1;
    while (first > 0 && lambda_max - ev(first - 1) < kDegenerateGap)
        --first;
    const int dim = k - first;

    Eigen::VectorXcd a;
    if (dim == 1) {
        a = es.eigenvectors().col(k - 1);
    } else {
        // Degenerate top eigenvalue: any eigenspace vector is optimal.
        // Project e_1, e_2, ... onto the eigenspace and keep the first
        // projection with usable norm; this maximizes |a_1|, then |a_2|,
        // and so on, and is reproducible.
        const auto basis = es.eigenvectors().rightCols(dim);
        for (int b = 0; b < k; ++b) {
            const Eigen::VectorXcd proj =
                basis * (basis.adjoint().col(b)).eval();
            if (proj.norm() > 1e-8) {
                a = proj;
                break;
            }
        }
        if (a.size() == 0)
            throw numeric_error("degenerate eigenspace projection failed");
    }

    ClusterOperatingPoint point;
    point.frequency_hz = d.frequency_hz;
    point.excitation = ExcitationVector::make(std::move(a), d.frequency_hz);
    point.efficiency = std::clamp(lambda_max, 0.0, 1.0);
    point.tarc = std::sqrt(std::clamp(1.0 - lambda_max, 0.0, 1.0));
    return point;
}

double cluster_efficiency(const RadiationMatrix& d,
                          const ExcitationVector& a) {
    if (a.size() != d.size())
        throw validation_error(
            "excitation size " + std::to_string(a.size()) +
            " does not match radiation matrix size " +
            std::to_string(d.size()));
    const double denom = a.a.squaredNorm();
    if (denom <= 0.0)
        throw validation_error("excitation vector is zero");
    const std::complex<double> num = a.a.adjoint() * d.d * a.a;
    return num.real() / denom;
}

double tarc(const Network& net, const ClusterDefinition& cluster,
            const ExcitationVector& a, int freq_index, RowScope scope) {
    const RadiationMatrix d =
        radiation_matrix_from_s(net, cluster, freq_index, scope);
    const double eff = cluster_efficiency(d, a);
    return std::sqrt(std::clamp(1.0 - eff, 0.0, 1.0));
}

FarFieldPattern weighted_pattern(std::span<const FarFieldPattern> patterns,
                                 const ExcitationVector& a) {
    if (patterns.empty())
        throw validation_error("no patterns to weight");
    if (static_cast<int>(patterns.size()) != a.size())
        throw validation_error("excitation size " + std::to_string(a.size()) +
                               " does not match pattern count " +
                               std::to_string(patterns.size()));
    for (std::size_t i = 1; i < patterns.size(); ++i) {
        if (patterns[i].grid != patterns[0].grid)
            throw validation_error("patterns must share one grid");
        if (patterns[i].frequency_hz != patterns[0].frequency_hz)
            throw validation_error("patterns must share one frequency");
    }

    FarFieldPattern out;
    out.frequency_hz = patterns[0].frequency_hz;
    out.grid = patterns[0].grid;
    out.e_theta = a.a(0) * patterns[0].e_theta;
    out.e_phi = a.a(0) * patterns[0].e_phi;
    for (std::size_t i = 1; i < patterns.size(); ++i) {
        out.e_theta += a.a(static_cast<int>(i)) * patterns[i].e_theta;
        out.e_phi += a.a(static_cast<int>(i)) * patterns[i].e_phi;
    }
    return out;
}

std::vector<ClusterOperatingPoint>
frequency_sweep(const Network& net, const PatternSet* patterns_by_freq,
                const ClusterDefinition& cluster, RowScope scope,
                RadiationSource source) {
    net.validate();
    cluster.validate();

    std::vector<ClusterOperatingPoint> points;
    points.reserve(net.n_frequencies());
    for (int fi = 0; fi < static_cast<int>(net.n_frequencies()); ++fi) {
        const double f = net.frequencies_hz[fi];
        RadiationMatrix d;
        if (source == RadiationSource::Scattering) {
            d = radiation_matrix_from_s(net, cluster, fi, scope);
        } else {
            if (patterns_by_freq == nullptr)
                throw validation_error("far-field sweep requires patterns");
            const auto it = patterns_by_freq->find(f);
            if (it == patterns_by_freq->end())
                throw validation_error("no pattern data at frequency " +
                                       std::to_string(f) + " Hz");
            if (static_cast<int>(it->second.size()) != cluster.size())
                throw validation_error(
                    "pattern count at frequency " + std::to_string(f) +
                    " Hz does not match cluster size");
            d = radiation_matrix_from_fields(it->second);
        }

        ClusterOperatingPoint point = optimal_excitation(d);
        // For scattering-sourced weights sqrt(1 - lambda_max) already is
        // the active reflection; far-field weights need it evaluated on
        // the scattering data under the chosen drive.
        if (source == RadiationSource::FarField)
            point.tarc = tarc(net, cluster, point.excitation, fi, scope);
        points.push_back(std::move(point));
    }
    return points;
}

} // namespace cluskit
