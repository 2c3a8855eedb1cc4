// SPDX-License-Identifier: Apache-2.0
//
// cluskit: feed-weight optimization and MIMO evaluation for antenna clusters

#ifndef CLUSKIT_TOUCHSTONE_HPP
#define CLUSKIT_TOUCHSTONE_HPP

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cluskit {

enum class SParamFormat { RI, MA, DB };

// Frequency-indexed multiport scattering data with a real reference
// impedance. s[f] is n_ports x n_ports, entry (i, j) = wave observed at
// port i+1 when port j+1 is excited.
struct Network {
    std::vector<double> frequencies_hz;
    std::vector<Eigen::MatrixXcd> s;
    double z0_ohm = 50.0;
    int n_ports = 0;

    std::size_t n_frequencies() const { return frequencies_hz.size(); }

    // Throws validation_error on any broken invariant: frequencies not
    // strictly increasing or non-positive, matrix size mismatch,
    // non-finite entries.
    void validate() const;

    // True iff the largest singular value of s is <= 1 + 1e-9 at every
    // frequency.
    bool passive() const;
};

// Parses Touchstone v1.x S-parameter text. The port count is taken from
// n_ports_hint when given, otherwise inferred from the data layout.
// Throws parse_error (with line number) or validation_error.
Network parse_touchstone(std::istream& in,
                         std::optional<int> n_ports_hint = std::nullopt);
Network parse_touchstone(const std::string& text,
                         std::optional<int> n_ports_hint = std::nullopt);

// Reads a .sNp file; the extension digit serves as the port-count hint.
Network load_touchstone(const std::filesystem::path& path);

// Writes Touchstone v1.1 text (Hz option line, 2-port column-order quirk,
// rows wrapped at four pairs for >= 3 ports). parse(write(net)) reproduces
// net within 1e-12 per entry.
void write_touchstone(const Network& net, SParamFormat format,
                      std::ostream& out);
std::string write_touchstone(const Network& net, SParamFormat format);

void save_touchstone(const Network& net, SParamFormat format,
                     const std::filesystem::path& path);

} // namespace cluskit

#endif
