// SPDX-License-Identifier: Apache-2.0
//
// cluskit: feed-weight optimization and MIMO evaluation for antenna clusters

#ifndef CLUSKIT_CONFIG_HPP
#define CLUSKIT_CONFIG_HPP

#include "cluskit/cluster.hpp"
#include "cluskit/mimo.hpp"
#include "cluskit/pattern.hpp"
#include "cluskit/radiation_matrix.hpp"
#include "cluskit/touchstone.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace cluskit {

// Where the feed weights come from: scattering data, far-field data, or
// far-field whenever pattern files are configured.
enum class WeightSource { Scattering, FarField, Auto };

// One cluster entry from the analysis config. A cluster either lists
// pattern files (one per network frequency for each port) or derives its
// patterns by mirroring another cluster's.
struct ClusterSpec {
    std::string id;
    std::vector<int> ports;
    std::vector<std::vector<std::filesystem::path>> pattern_files;
    std::string derive_from;
    std::vector<SymmetryPlane> mirror;
};

// Parsed analysis config (JSON, paths relative to the config file).
struct AnalysisConfig {
    std::filesystem::path touchstone_path;
    std::vector<ClusterSpec> clusters;
    CapacityConfig capacity;
    bool capacity_n_tx_given = false;
    RowScope scope = RowScope::AllRows;
    WeightSource source = WeightSource::Auto;
};

AnalysisConfig load_analysis_config(const std::filesystem::path& path);

// The fully loaded system: network plus per-cluster pattern sets with
// derived clusters materialized.
struct AnalysisSystem {
    Network net;
    std::vector<ClusterDefinition> clusters;
    // cluster id -> (frequency -> per-port patterns)
    std::map<std::string, PatternSet> patterns;
    bool has_patterns = false;
    RowScope scope = RowScope::AllRows;
    RadiationSource weight_source = RadiationSource::Scattering;
    CapacityConfig capacity;

    const ClusterDefinition& cluster(const std::string& id) const;
};

// Loads network and patterns, checks that the clusters partition the
// device ports and that derived-cluster references are acyclic, and
// resolves the weight source.
AnalysisSystem load_system(const AnalysisConfig& config);

} // namespace cluskit

#endif
