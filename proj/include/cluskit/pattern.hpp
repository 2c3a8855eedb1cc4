// SPDX-License-Identifier: Apache-2.0
//
// cluskit: feed-weight optimization and MIMO evaluation for antenna clusters

#ifndef CLUSKIT_PATTERN_HPP
#define CLUSKIT_PATTERN_HPP

#include <Eigen/Dense>
#include <complex>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace cluskit {

// Regular theta/phi grid: theta 0..180 deg inclusive, phi 0..<360 deg,
// both with uniform step.
struct SphericalGrid {
    double theta_step_deg = 1.0;
    double phi_step_deg = 1.0;

    int n_theta() const;
    int n_phi() const;
    double theta_deg(int i) const { return i * theta_step_deg; }
    double phi_deg(int j) const { return j * phi_step_deg; }
    double theta_rad(int i) const;
    double phi_rad(int j) const;

    // Throws validation_error unless the step divides 180 (theta) and
    // 360 (phi) to an integer node count.
    void validate() const;

    bool operator==(const SphericalGrid&) const = default;

    // Quadrature node weights in radians. Theta: trapezoid times sin(theta)
    // with Euler-Maclaurin endpoint correction (pole nodes get step^2/12, so
    // the rule integrates f*sin to O(step^4)). Phi: full-period trapezoid,
    // uniform weights. All weights positive, so pattern Gram matrices stay
    // positive semidefinite.
    Eigen::VectorXd theta_weights() const;
    double phi_weight() const;
};

// Complex vector far field sampled on a grid at a single frequency,
// normalized so the self-overlap equals the antenna's total efficiency.
// e_theta/e_phi are n_theta x n_phi.
struct FarFieldPattern {
    double frequency_hz = 0.0;
    SphericalGrid grid;
    Eigen::MatrixXcd e_theta;
    Eigen::MatrixXcd e_phi;

    double self_overlap() const;

    // Checks grid shape, finite entries, and self-overlap in [0, 1+1e-6].
    void validate() const;
};

// Chassis symmetry plane (long axis = x, short axis = y, normal = z).
enum class SymmetryPlane { XZ, YZ };

// (1/4pi) * integral over the sphere of (e_theta_i conj(e_theta_j)
// + e_phi_i conj(e_phi_j)) dOmega. Conjugate-symmetric in its arguments
// bit-exactly. Throws validation_error on grid or frequency mismatch.
std::complex<double> integrate_overlap(const FarFieldPattern& f_i,
                                       const FarFieldPattern& f_j);

// Reflects the pattern through the given chassis plane. Requires the phi
// step to divide 180 deg so mirrored nodes land on grid nodes. e_phi is
// negated (tangential phi-hat reverses handedness under reflection through
// a plane containing z-hat); power is preserved.
FarFieldPattern mirror_pattern(const FarFieldPattern& f, SymmetryPlane plane);

// Pattern CSV: header freq_hz,theta_deg,phi_deg,re_etheta,im_etheta,
// re_ephi,im_ephi; one row per node, theta-major. The parser accepts rows
// in any order but rejects duplicate or missing nodes.
FarFieldPattern parse_pattern_file(std::istream& in);
FarFieldPattern load_pattern_file(const std::filesystem::path& path);
void write_pattern_file(const FarFieldPattern& f, std::ostream& out);
void save_pattern_file(const FarFieldPattern& f,
                       const std::filesystem::path& path);

} // namespace cluskit

#endif
