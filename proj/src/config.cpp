// SPDX-License-Identifier: Apache-2.0
//
// cluskit: feed-weight optimization and MIMO evaluation for antenna clusters

#include "cluskit/config.hpp"

#include "cluskit/error.hpp"

#include <json.hpp>

#include <fstream>
#include <set>

namespace cluskit {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

SymmetryPlane parse_plane(const std::string& s) {
    if (s == "XZ" || s == "xz")
        return SymmetryPlane::XZ;
    if (s == "YZ" || s == "yz")
        return SymmetryPlane::YZ;
    throw validation_error("unknown symmetry plane '" + s +
                           "' (expected XZ or YZ)");
}

RowScope parse_scope(const std::string& s) {
    if (s == "all-rows")
        return RowScope::AllRows;
    if (s == "cluster-only")
        return RowScope::ClusterOnly;
    throw validation_error("unknown scope '" + s +
                           "' (expected all-rows or cluster-only)");
}

WeightSource parse_source(const std::string& s) {
    if (s == "scattering")
        return WeightSource::Scattering;
    if (s == "farfield")
        return WeightSource::FarField;
    if (s == "auto")
        return WeightSource::Auto;
    throw validation_error("unknown weight source '" + s +
                           "' (expected scattering, farfield, or auto)");
}

// Pattern entries are either one file name or a list (one per frequency).
std::vector<fs::path> pattern_entry(const json& j, const fs::path& base) {
    std::vector<fs::path> files;
    if (j.is_string()) {
        files.push_back(base / j.get<std::string>());
    } else if (j.is_array()) {
        for (const json& e : j)
            files.push_back(base / e.get<std::string>());
    } else {
        throw validation_error("pattern entry must be a file name or a "
                               "list of file names");
    }
    return files;
}

} // namespace

AnalysisConfig load_analysis_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open config file: " + path.string());

    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw validation_error("config parse failed: " +
                               std::string(e.what()));
    }

    const fs::path base = path.parent_path();
    AnalysisConfig cfg;
    try {
        cfg.touchstone_path = base / root.at("touchstone").get<std::string>();
        if (root.contains("scope"))
            cfg.scope = parse_scope(root["scope"].get<std::string>());
        if (root.contains("source"))
            cfg.source = parse_source(root["source"].get<std::string>());

        // Pattern files resolve under <config dir>/<pattern_dir>.
        fs::path pattern_base = base;
        if (root.contains("pattern_dir"))
            pattern_base = base / root["pattern_dir"].get<std::string>();

        for (const json& jc : root.at("clusters")) {
            ClusterSpec spec;
            spec.id = jc.at("id").get<std::string>();
            for (const json& p : jc.at("ports"))
                spec.ports.push_back(p.get<int>());
            if (jc.contains("patterns"))
                for (const json& entry : jc["patterns"])
                    spec.pattern_files.push_back(
                        pattern_entry(entry, pattern_base));
            if (jc.contains("derive_from"))
                spec.derive_from = jc["derive_from"].get<std::string>();
            if (jc.contains("mirror"))
                for (const json& m : jc["mirror"])
                    spec.mirror.push_back(
                        parse_plane(m.get<std::string>()));
            cfg.clusters.push_back(std::move(spec));
        }

        if (root.contains("capacity")) {
            const json& jq = root["capacity"];
            if (jq.contains("snr_db"))
                cfg.capacity.snr_db = jq["snr_db"].get<double>();
            if (jq.contains("n_tx")) {
                cfg.capacity.n_tx = jq["n_tx"].get<int>();
                cfg.capacity_n_tx_given = true;
            }
            if (jq.contains("n_samples"))
                cfg.capacity.n_samples = jq["n_samples"].get<int>();
            if (jq.contains("seed"))
                cfg.capacity.seed = jq["seed"].get<std::uint64_t>();
        }
    } catch (const json::exception& e) {
        throw validation_error("config field error: " +
                               std::string(e.what()));
    }

    if (cfg.clusters.empty())
        throw validation_error("config defines no clusters");
    return cfg;
}

const ClusterDefinition& AnalysisSystem::cluster(const std::string& id) const {
    for (const ClusterDefinition& c : clusters)
        if (c.id == id)
            return c;
    throw validation_error("unknown cluster '" + id + "'");
}

AnalysisSystem load_system(const AnalysisConfig& config) {
    AnalysisSystem sys;
    sys.net = load_touchstone(config.touchstone_path);
    sys.scope = config.scope;
    sys.capacity = config.capacity;

    // Every device port in exactly one cluster.
    std::set<int> covered;
    for (const ClusterSpec& spec : config.clusters) {
        ClusterDefinition def;
        def.id = spec.id;
        def.active_ports = spec.ports;
        def.all_ports = sys.net.n_ports;
        def.validate();
        for (int p : spec.ports)
            if (!covered.insert(p).second)
                throw validation_error("port " + std::to_string(p) +
                                       " assigned to more than one cluster");
        sys.clusters.push_back(std::move(def));
    }
    if (static_cast<int>(covered.size()) != sys.net.n_ports)
        throw validation_error(
            "clusters cover " + std::to_string(covered.size()) +
            " ports but the network has " + std::to_string(sys.net.n_ports));

    if (!config.capacity_n_tx_given)
        sys.capacity.n_tx = static_cast<int>(sys.clusters.size());

    // Load measured patterns.
    std::map<std::string, const ClusterSpec*> by_id;
    for (const ClusterSpec& spec : config.clusters) {
        if (!by_id.emplace(spec.id, &spec).second)
            throw validation_error("duplicate cluster id '" + spec.id + "'");
    }
    const std::size_t n_freqs = sys.net.n_frequencies();
    for (const ClusterSpec& spec : config.clusters) {
        if (spec.pattern_files.empty())
            continue;
        if (!spec.derive_from.empty())
            throw validation_error("cluster '" + spec.id +
                                   "' both lists patterns and derives them");
        if (spec.pattern_files.size() != spec.ports.size())
            throw validation_error("cluster '" + spec.id + "' lists " +
                                   std::to_string(spec.pattern_files.size()) +
                                   " pattern entries for " +
                                   std::to_string(spec.ports.size()) +
                                   " ports");
        PatternSet set;
        for (std::size_t pi = 0; pi < spec.pattern_files.size(); ++pi) {
            const auto& files = spec.pattern_files[pi];
            if (files.size() != n_freqs)
                throw validation_error(
                    "cluster '" + spec.id + "' port entry " +
                    std::to_string(pi + 1) + " lists " +
                    std::to_string(files.size()) + " pattern files for " +
                    std::to_string(n_freqs) + " network frequencies");
            for (const fs::path& file : files) {
                FarFieldPattern p = load_pattern_file(file);
                auto& slot = set[p.frequency_hz];
                if (slot.empty())
                    slot.resize(spec.ports.size());
                slot[pi] = std::move(p);
            }
        }
        // Exact-match frequency lookup against the network grid.
        for (double f : sys.net.frequencies_hz)
            if (set.find(f) == set.end())
                throw validation_error(
                    "cluster '" + spec.id + "' has no pattern at " +
                    std::to_string(f) + " Hz");
        if (set.size() != n_freqs)
            throw validation_error("cluster '" + spec.id +
                                   "' has patterns at frequencies not in "
                                   "the network");
        sys.patterns.emplace(spec.id, std::move(set));
    }

    // Materialize derived clusters, following chains but rejecting cycles.
    bool progress = true;
    while (progress) {
        progress = false;
        for (const ClusterSpec& spec : config.clusters) {
            if (spec.derive_from.empty() || sys.patterns.count(spec.id))
                continue;
            if (!by_id.count(spec.derive_from))
                throw validation_error("cluster '" + spec.id +
                                       "' derives from unknown cluster '" +
                                       spec.derive_from + "'");
            const auto src = sys.patterns.find(spec.derive_from);
            if (src == sys.patterns.end())
                continue; // source not ready yet
            PatternSet derived;
            for (const auto& [freq, per_port] : src->second) {
                std::vector<FarFieldPattern> mirrored;
                mirrored.reserve(per_port.size());
                for (const FarFieldPattern& p : per_port) {
                    FarFieldPattern m = p;
                    for (SymmetryPlane plane : spec.mirror)
                        m = mirror_pattern(m, plane);
                    mirrored.push_back(std::move(m));
                }
                if (static_cast<int>(mirrored.size()) !=
                    static_cast<int>(spec.ports.size()))
                    throw validation_error(
                        "cluster '" + spec.id + "' derives from '" +
                        spec.derive_from + "' with a different port count");
                derived.emplace(freq, std::move(mirrored));
            }
            sys.patterns.emplace(spec.id, std::move(derived));
            progress = true;
        }
    }
    for (const ClusterSpec& spec : config.clusters) {
        if (!spec.derive_from.empty() && !sys.patterns.count(spec.id))
            throw validation_error(
                "cluster '" + spec.id +
                "' cannot be derived (cyclic or unpatterned source "
                "reference)");
    }

    sys.has_patterns =
        sys.patterns.size() == config.clusters.size() &&
        !config.clusters.empty();
    switch (config.source) {
    case WeightSource::Scattering:
        sys.weight_source = RadiationSource::Scattering;
        break;
    case WeightSource::FarField:
        if (!sys.has_patterns)
            throw validation_error("weight source 'farfield' requires "
                                   "pattern data for every cluster");
        sys.weight_source = RadiationSource::FarField;
        break;
    case WeightSource::Auto:
        sys.weight_source = sys.has_patterns ? RadiationSource::FarField
                                             : RadiationSource::Scattering;
        break;
    }
    return sys;
}

} // namespace cluskit
