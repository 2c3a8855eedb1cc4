// SPDX-License-Identifier: Apache-2.0
//
// cluskit: feed-weight optimization and MIMO evaluation for antenna clusters

#include "cluskit/reports.hpp"

#include "cluskit/error.hpp"
#include "cluskit/synth.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace cluskit {

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double phase_deg(std::complex<double> v) {
    if (v == std::complex<double>(0.0, 0.0))
        return 0.0;
    double deg = std::arg(v) * 180.0 / std::numbers::pi;
    if (deg <= -180.0)
        deg += 360.0;
    return deg;
}

const PatternSet* cluster_pattern_set(const AnalysisSystem& sys,
                                      const std::string& id) {
    const auto it = sys.patterns.find(id);
    return it == sys.patterns.end() ? nullptr : &it->second;
}

std::vector<ClusterOperatingPoint> sweep(const AnalysisSystem& sys,
                                         const ClusterDefinition& cluster) {
    return frequency_sweep(sys.net, cluster_pattern_set(sys, cluster.id),
                           cluster, sys.scope, sys.weight_source);
}

// The weighted (single-antenna-equivalent) pattern of every cluster at
// each frequency, under the per-frequency optimal excitations.
std::map<double, std::vector<FarFieldPattern>>
weighted_cluster_patterns(const AnalysisSystem& sys) {
    if (!sys.has_patterns)
        throw validation_error("this analysis requires pattern data for "
                               "every cluster");
    std::map<double, std::vector<FarFieldPattern>> out;
    for (const ClusterDefinition& cluster : sys.clusters) {
        const std::vector<ClusterOperatingPoint> points = sweep(sys, cluster);
        const PatternSet* set = cluster_pattern_set(sys, cluster.id);
        for (const ClusterOperatingPoint& pt : points) {
            const auto freq_patterns = set->find(pt.frequency_hz);
            if (freq_patterns == set->end())
                throw validation_error("no pattern data at frequency " +
                                       std::to_string(pt.frequency_hz));
            out[pt.frequency_hz].push_back(
                weighted_pattern(freq_patterns->second, pt.excitation));
        }
    }
    return out;
}

} // namespace

void cmd_weights(const AnalysisSystem& sys, std::ostream& out) {
    struct Row {
        int port;
        double amplitude, phase, efficiency, tarc;
    };
    std::map<double, std::vector<Row>> rows;
    for (const ClusterDefinition& cluster : sys.clusters) {
        for (const ClusterOperatingPoint& pt : sweep(sys, cluster)) {
            for (int i = 0; i < cluster.size(); ++i) {
                const std::complex<double> w = pt.excitation.a(i);
                rows[pt.frequency_hz].push_back({cluster.active_ports[i],
                                                 std::abs(w), phase_deg(w),
                                                 pt.efficiency, pt.tarc});
            }
        }
    }
    out << "freq_hz,port,amplitude,phase_deg,efficiency,tarc\n";
    for (auto& [freq, freq_rows] : rows) {
        std::sort(freq_rows.begin(), freq_rows.end(),
                  [](const Row& a, const Row& b) { return a.port < b.port; });
        for (const Row& r : freq_rows)
            out << num(freq) << ',' << r.port << ',' << num(r.amplitude)
                << ',' << num(r.phase) << ',' << num(r.efficiency) << ','
                << num(r.tarc) << '\n';
    }
}

void cmd_efficiency(const AnalysisSystem& sys, std::ostream& out) {
    std::vector<std::vector<ClusterOperatingPoint>> sweeps;
    for (const ClusterDefinition& cluster : sys.clusters)
        sweeps.push_back(sweep(sys, cluster));
    out << "freq_hz,cluster,efficiency\n";
    for (std::size_t fi = 0; fi < sys.net.n_frequencies(); ++fi)
        for (std::size_t ci = 0; ci < sys.clusters.size(); ++ci)
            out << num(sweeps[ci][fi].frequency_hz) << ','
                << sys.clusters[ci].id << ','
                << num(sweeps[ci][fi].efficiency) << '\n';
}

void cmd_losses(const AnalysisSystem& sys, const std::string& fed_cluster,
                std::ostream& out) {
    const ClusterDefinition& fed = sys.cluster(fed_cluster);
    const std::vector<ClusterOperatingPoint> points = sweep(sys, fed);
    const PatternSet* fed_patterns = cluster_pattern_set(sys, fed.id);

    out << "freq_hz,cluster,mismatch";
    for (const ClusterDefinition& c : sys.clusters)
        if (c.id != fed.id)
            out << ",coupling_" << c.id;
    if (fed_patterns != nullptr)
        out << ",ohmic";
    out << ",radiated\n";

    for (std::size_t fi = 0; fi < points.size(); ++fi) {
        RadiationMatrix d_ff;
        const RadiationMatrix* d_ff_ptr = nullptr;
        if (fed_patterns != nullptr) {
            d_ff = radiation_matrix_from_fields(
                fed_patterns->at(points[fi].frequency_hz));
            d_ff_ptr = &d_ff;
        }
        const LossBreakdown loss =
            loss_decomposition(sys.net, sys.clusters, fed.id,
                               points[fi].excitation, d_ff_ptr,
                               static_cast<int>(fi));
        out << num(loss.frequency_hz) << ',' << fed.id << ','
            << num(loss.mismatch);
        for (const ClusterDefinition& c : sys.clusters)
            if (c.id != fed.id)
                out << ',' << num(loss.coupling_by_cluster.at(c.id));
        if (fed_patterns != nullptr)
            out << ',' << num(loss.ohmic.value());
        out << ',' << num(loss.radiated) << '\n';
    }
}

void cmd_ecc(const AnalysisSystem& sys, std::ostream& out) {
    const auto weighted = weighted_cluster_patterns(sys);
    out << "freq_hz,cluster_i,cluster_j,rho,flag\n";
    for (const auto& [freq, patterns] : weighted) {
        const EccMatrix e = ecc(radiation_matrix_from_fields(patterns));
        for (std::size_t i = 0; i < sys.clusters.size(); ++i)
            for (std::size_t j = i + 1; j < sys.clusters.size(); ++j) {
                const double rho = e.rho(static_cast<int>(i),
                                         static_cast<int>(j));
                out << num(freq) << ',' << sys.clusters[i].id << ','
                    << sys.clusters[j].id << ',' << num(rho) << ','
                    << (rho > 0.5 ? 1 : 0) << '\n';
            }
    }
}

void cmd_capacity(const AnalysisSystem& sys,
                  const std::vector<int>& ideal_mimo, int n_workers,
                  std::ostream& out) {
    const auto weighted = weighted_cluster_patterns(sys);

    // Ideal baselines are frequency-independent.
    std::vector<double> ideal;
    for (int m : ideal_mimo) {
        if (m < 1)
            throw validation_error("ideal MIMO order must be positive");
        CapacityConfig cfg = sys.capacity;
        cfg.n_tx = m;
        ideal.push_back(ergodic_capacity(Eigen::MatrixXcd::Identity(m, m),
                                         cfg, n_workers)
                            .ergodic_capacity_bps_hz);
    }

    out << "freq_hz,capacity_bps_hz,std_error";
    for (int m : ideal_mimo)
        out << ",ideal_" << m;
    out << "\n";
    for (const auto& [freq, patterns] : weighted) {
        const Eigen::MatrixXcd r_rx =
            build_receive_matrix(radiation_matrix_from_fields(patterns));
        CapacityResult res = ergodic_capacity(r_rx, sys.capacity, n_workers);
        res.frequency_hz = freq;
        out << num(freq) << ',' << num(res.ergodic_capacity_bps_hz) << ','
            << num(res.sample_std_error);
        for (double c : ideal)
            out << ',' << num(c);
        out << '\n';
    }
}

void cmd_report(const AnalysisSystem& sys,
                const std::vector<int>& ideal_mimo, int n_workers,
                const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw io_error("cannot create report directory " + dir.string() +
                       ": " + ec.message());
    auto open = [&](const std::string& name) {
        std::ofstream f(dir / name);
        if (!f)
            throw io_error("cannot write " + (dir / name).string());
        return f;
    };

    auto weights = open("weights.csv");
    cmd_weights(sys, weights);
    auto efficiency = open("efficiency.csv");
    cmd_efficiency(sys, efficiency);
    for (const ClusterDefinition& c : sys.clusters) {
        auto losses = open("losses_" + c.id + ".csv");
        cmd_losses(sys, c.id, losses);
    }
    if (sys.has_patterns) {
        auto ecc_out = open("ecc.csv");
        cmd_ecc(sys, ecc_out);
        auto capacity = open("capacity.csv");
        cmd_capacity(sys, ideal_mimo, n_workers, capacity);
    }
}

namespace {

struct CliOptions {
    std::string config_path;
    std::string output;
    std::string scope;
    std::string source;
    std::string fed_cluster;
    double snr_db = std::numeric_limits<double>::quiet_NaN();
    int samples = 0;
    long long seed = -1;
    std::string ideal_mimo;
    int workers = 1;
};

std::vector<int> parse_ideal_list(const std::string& text) {
    std::vector<int> out;
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty())
            continue;
        try {
            out.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw validation_error("bad --ideal-mimo entry '" + tok + "'");
        }
    }
    return out;
}

AnalysisSystem load_with_overrides(const CliOptions& opt) {
    AnalysisConfig cfg = load_analysis_config(opt.config_path);
    if (!opt.scope.empty())
        cfg.scope = opt.scope == "cluster-only" ? RowScope::ClusterOnly
                                                : RowScope::AllRows;
    if (!opt.source.empty()) {
        if (opt.source == "scattering")
            cfg.source = WeightSource::Scattering;
        else if (opt.source == "farfield")
            cfg.source = WeightSource::FarField;
        else
            cfg.source = WeightSource::Auto;
    }
    if (!std::isnan(opt.snr_db))
        cfg.capacity.snr_db = opt.snr_db;
    if (opt.samples > 0)
        cfg.capacity.n_samples = opt.samples;
    if (opt.seed >= 0)
        cfg.capacity.seed = static_cast<std::uint64_t>(opt.seed);
    return load_system(cfg);
}

// --output wins; otherwise CLUSKIT_OUTPUT_DIR/<name>; otherwise stdout.
void emit(const CliOptions& opt, const std::string& default_name,
          const std::function<void(std::ostream&)>& writer) {
    fs::path target;
    if (!opt.output.empty()) {
        target = opt.output;
    } else if (const char* env = std::getenv("CLUSKIT_OUTPUT_DIR")) {
        target = fs::path(env) / default_name;
    } else {
        writer(std::cout);
        return;
    }
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    std::ofstream f(target);
    if (!f)
        throw io_error("cannot write output file " + target.string());
    writer(f);
    f << std::flush;
    if (!f)
        throw io_error("write failed: " + target.string());
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"antenna cluster feed-weight and MIMO analysis"};
    app.require_subcommand(1);

    CliOptions opt;
    auto add_common = [&](CLI::App* sub, bool needs_config = true) {
        sub->add_option("--config", opt.config_path, "analysis config file")
            ->required(needs_config);
        sub->add_option("--output", opt.output, "output file (default "
                                                "stdout)");
        sub->add_option("--scope", opt.scope, "row scope override")
            ->check(CLI::IsMember({"cluster-only", "all-rows"}));
        sub->add_option("--source", opt.source, "weight source override")
            ->check(CLI::IsMember({"scattering", "farfield", "auto"}));
    };
    auto add_capacity_opts = [&](CLI::App* sub) {
        sub->add_option("--snr-db", opt.snr_db, "SNR in dB");
        sub->add_option("--samples", opt.samples, "Monte Carlo samples");
        sub->add_option("--seed", opt.seed, "RNG seed");
        sub->add_option("--workers", opt.workers, "worker thread count");
    };

    CLI::App* weights = app.add_subcommand("weights", "optimal feed weights "
                                                      "per frequency");
    add_common(weights);
    CLI::App* efficiency =
        app.add_subcommand("efficiency", "cluster efficiency sweep");
    add_common(efficiency);
    CLI::App* losses = app.add_subcommand("losses", "loss decomposition for "
                                                    "a fed cluster");
    add_common(losses);
    losses->add_option("--fed-cluster", opt.fed_cluster,
                       "cluster that is fed (default: first)");
    CLI::App* ecc_cmd =
        app.add_subcommand("ecc", "envelope correlation coefficients");
    add_common(ecc_cmd);
    CLI::App* capacity =
        app.add_subcommand("capacity", "ergodic capacity per frequency");
    add_common(capacity);
    add_capacity_opts(capacity);
    capacity->add_option("--ideal-mimo", opt.ideal_mimo,
                         "comma-separated ideal MxM baseline orders");
    CLI::App* report = app.add_subcommand("report", "all reports into a "
                                                    "directory");
    add_common(report);
    add_capacity_opts(report);
    report->add_option("--ideal-mimo", opt.ideal_mimo,
                       "comma-separated ideal MxM baseline orders");

    // Synthetic fixture generator (Touchstone + pattern CSVs + config).
    std::string synth_out = "synth-system";
    int synth_ports = 8;
    int synth_freqs = 1;
    long long synth_seed = 42;
    double synth_step = 1.0;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic "
                                                  "test system");
    synth->add_option("--out", synth_out, "output directory");
    synth->add_option("--ports", synth_ports, "device port count")
        ->check(CLI::PositiveNumber);
    synth->add_option("--freqs", synth_freqs, "frequency point count")
        ->check(CLI::PositiveNumber);
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--grid-step", synth_step, "pattern grid step in "
                                                 "degrees");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (synth->parsed()) {
            ClusterDefinition all{"all", {}, synth_ports};
            for (int p = 1; p <= synth_ports; ++p)
                all.active_ports.push_back(p);
            const SynthSystem system = lossless_consistent_system(
                synth_ports, all, static_cast<std::uint64_t>(synth_seed),
                SphericalGrid{synth_step, synth_step}, synth_freqs);
            const fs::path cfg = write_system_files(system, synth_out);
            std::cout << cfg.string() << "\n";
            return 0;
        }

        const std::vector<int> ideal = parse_ideal_list(opt.ideal_mimo);
        if (weights->parsed()) {
            const AnalysisSystem sys = load_with_overrides(opt);
            emit(opt, "weights.csv",
                 [&](std::ostream& o) { cmd_weights(sys, o); });
        } else if (efficiency->parsed()) {
            const AnalysisSystem sys = load_with_overrides(opt);
            emit(opt, "efficiency.csv",
                 [&](std::ostream& o) { cmd_efficiency(sys, o); });
        } else if (losses->parsed()) {
            const AnalysisSystem sys = load_with_overrides(opt);
            const std::string fed =
                opt.fed_cluster.empty() ? sys.clusters.front().id
                                        : opt.fed_cluster;
            emit(opt, "losses_" + fed + ".csv",
                 [&](std::ostream& o) { cmd_losses(sys, fed, o); });
        } else if (ecc_cmd->parsed()) {
            const AnalysisSystem sys = load_with_overrides(opt);
            emit(opt, "ecc.csv", [&](std::ostream& o) { cmd_ecc(sys, o); });
        } else if (capacity->parsed()) {
            const AnalysisSystem sys = load_with_overrides(opt);
            emit(opt, "capacity.csv", [&](std::ostream& o) {
                cmd_capacity(sys, ideal, opt.workers, o);
            });
        } else if (report->parsed()) {
            const AnalysisSystem sys = load_with_overrides(opt);
            fs::path dir = ".";
            if (!opt.output.empty())
                dir = opt.output;
            else if (const char* env = std::getenv("CLUSKIT_OUTPUT_DIR"))
                dir = env;
            cmd_report(sys, ideal, opt.workers, dir);
        }
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

} // namespace cluskit
