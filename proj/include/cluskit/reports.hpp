// SPDX-License-Identifier: Apache-2.0
//
// cluskit: feed-weight optimization and MIMO evaluation for antenna clusters

#ifndef CLUSKIT_REPORTS_HPP
#define CLUSKIT_REPORTS_HPP

#include "cluskit/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cluskit {

// Per-frequency weights, efficiency, and TARC for every cluster port
// (columns freq_hz,port,amplitude,phase_deg,efficiency,tarc).
void cmd_weights(const AnalysisSystem& sys, std::ostream& out);

// Per-cluster efficiency sweep (freq_hz,cluster,efficiency).
void cmd_efficiency(const AnalysisSystem& sys, std::ostream& out);

// Loss decomposition for one fed cluster under its optimal excitation;
// the ohmic column appears only when pattern data is available.
void cmd_losses(const AnalysisSystem& sys, const std::string& fed_cluster,
                std::ostream& out);

// Pairwise envelope correlation between weighted cluster patterns, with a
// flag column marking rho > 0.5.
void cmd_ecc(const AnalysisSystem& sys, std::ostream& out);

// Ergodic capacity of the cluster-level system plus ideal MxM baselines.
void cmd_capacity(const AnalysisSystem& sys,
                  const std::vector<int>& ideal_mimo, int n_workers,
                  std::ostream& out);

// All reports into a directory (weights.csv, efficiency.csv,
// losses_<id>.csv per cluster, ecc.csv, capacity.csv).
void cmd_report(const AnalysisSystem& sys,
                const std::vector<int>& ideal_mimo, int n_workers,
                const std::filesystem::path& dir);

// Full command-line entry point; returns the process exit code
// (0 ok, 1 I/O, 2 validation, 3 numeric).
int run_cli(int argc, const char* const* argv);

} // namespace cluskit

#endif
