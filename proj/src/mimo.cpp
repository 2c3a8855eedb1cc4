// SPDX-License-Identifier: Apache-2.0
//
// cluskit: feed-weight optimization and MIMO evaluation for antenna clusters

#include "cluskit/mimo.hpp"

#include "cluskit/error.hpp"
#include "cluskit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>
#include <vector>

namespace cluskit {

namespace {

// Negative fractions above this are quadrature noise and clamp to zero.
constexpr double kFractionNoise = 1e-6;

double clamp_fraction(double v, const char* what) {
    if (v < -kFractionNoise)
        throw numeric_error(std::string(what) + " fraction " +
                            std::to_string(v) + " below zero");
    if (v > 1.0 + 1e-9)
        throw numeric_error(std::string(what) + " fraction " +
                            std::to_string(v) + " above one");
    return std::max(v, 0.0);
}

Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& r) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r);
    if (es.info() != Eigen::Success)
        throw numeric_error("eigendecomposition of receive matrix failed");
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw numeric_error("receive matrix eigenvalue " +
                            std::to_string(es.eigenvalues().minCoeff()) +
                            " below -1e-9; not positive semidefinite");
    Eigen::VectorXd lambda = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * lambda.cwiseSqrt().asDiagonal() *
           es.eigenvectors().adjoint();
}

// Capacity of one channel draw, keyed by (seed, sample index).
double capacity_sample(const Eigen::MatrixXcd& r_sqrt, int m, int n_tx,
                       double snr_linear, std::uint64_t seed,
                       std::uint64_t index) {
    SampleRng rng(seed, index);
    Eigen::MatrixXcd h_w(m, n_tx);
    for (int c = 0; c < n_tx; ++c)
        for (int r = 0; r < m; ++r)
            h_w(r, c) = rng.complex_normal();
    const Eigen::MatrixXcd h = r_sqrt * h_w;
    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Identity(m, m) +
                            (snr_linear / n_tx) * (h * h.adjoint());
    const Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw numeric_error("Cholesky factorization failed in capacity "
                            "sample");
    double log2det = 0.0;
    for (int i = 0; i < m; ++i)
        log2det += 2.0 * std::log2(llt.matrixLLT()(i, i).real());
    return log2det;
}

} // namespace

LossBreakdown loss_decomposition(const Network& net,
                                 std::span<const ClusterDefinition> clusters,
                                 const std::string& fed_cluster,
                                 const ExcitationVector& a,
                                 const RadiationMatrix* d_ff,
                                 int freq_index) {
    if (freq_index < 0 ||
        freq_index >= static_cast<int>(net.n_frequencies()))
        throw validation_error("frequency index " +
                               std::to_string(freq_index) + " out of range");

    // The clusters must partition all device ports.
    std::set<int> covered;
    const ClusterDefinition* fed = nullptr;
    for (const ClusterDefinition& c : clusters) {
        c.validate();
        if (c.all_ports != net.n_ports)
            throw validation_error("cluster '" + c.id +
                                   "' port count does not match network");
        for (int p : c.active_ports)
            if (!covered.insert(p).second)
                throw validation_error("port " + std::to_string(p) +
                                       " assigned to more than one cluster");
        if (c.id == fed_cluster)
            fed = &c;
    }
    if (static_cast<int>(covered.size()) != net.n_ports)
        throw validation_error("clusters do not cover every device port");
    if (fed == nullptr)
        throw validation_error("fed cluster '" + fed_cluster +
                               "' not found");

    a.validate();
    if (a.size() != fed->size())
        throw validation_error("excitation size does not match fed cluster");

    Eigen::VectorXcd a_full = Eigen::VectorXcd::Zero(net.n_ports);
    for (int i = 0; i < fed->size(); ++i)
        a_full(fed->active_ports[i] - 1) = a.a(i);
    const Eigen::VectorXcd b = net.s[freq_index] * a_full;

    LossBreakdown out;
    out.frequency_hz = net.frequencies_hz[freq_index];

    double mismatch = 0.0;
    for (int p : fed->active_ports)
        mismatch += std::norm(b(p - 1));
    out.mismatch = clamp_fraction(mismatch, "mismatch");

    for (const ClusterDefinition& c : clusters) {
        if (c.id == fed->id)
            continue;
        double coupled = 0.0;
        for (int p : c.active_ports)
            coupled += std::norm(b(p - 1));
        out.coupling_by_cluster[c.id] = clamp_fraction(coupled, "coupling");
    }

    const double returned = b.squaredNorm();
    if (d_ff != nullptr) {
        if (d_ff->size() != fed->size())
            throw validation_error("far-field radiation matrix size does "
                                   "not match fed cluster");
        const double radiated = cluster_efficiency(*d_ff, a);
        out.radiated = clamp_fraction(radiated, "radiated");
        out.ohmic = clamp_fraction(1.0 - radiated - returned, "ohmic");
    } else {
        out.radiated = clamp_fraction(1.0 - returned, "radiated");
    }
    return out;
}

namespace {

// Pattern Gram matrices of correlated antennas can have eigenvalues above
// one (two identical patterns give [[1,1],[1,1]]), so only Hermitian
// symmetry and positive semidefiniteness are required here.
void check_hermitian_psd(const Eigen::MatrixXcd& d, const char* what) {
    if (d.rows() != d.cols() || d.rows() == 0)
        throw validation_error(std::string(what) +
                               " must be square and non-empty");
    if (!d.allFinite())
        throw numeric_error(std::string(what) + " has non-finite entries");
    if ((d - d.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw numeric_error(std::string(what) + " is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d,
                                                       Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw numeric_error(std::string(what) + " eigenvalue " +
                            std::to_string(es.eigenvalues().minCoeff()) +
                            " below -1e-9");
}

} // namespace

EccMatrix ecc(const RadiationMatrix& d) {
    check_hermitian_psd(d.d, "radiation matrix");
    const int m = d.size();
    EccMatrix out;
    out.frequency_hz = d.frequency_hz;
    out.rho = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        if (d.d(i, i).real() <= 1e-12)
            throw numeric_error(
                "undefined correlation: antenna " + std::to_string(i + 1) +
                " has efficiency below 1e-12");
        out.rho(i, i) = 1.0;
    }
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double rho = std::norm(d.d(i, j)) /
                               (d.d(i, i).real() * d.d(j, j).real());
            out.rho(i, j) = rho;
            out.rho(j, i) = rho;
        }
    }
    return out;
}

CapacityResult ergodic_capacity(const Eigen::MatrixXcd& r_rx,
                                const CapacityConfig& cfg, int n_workers) {
    if (r_rx.rows() != r_rx.cols() || r_rx.rows() == 0)
        throw validation_error("receive matrix must be square and "
                               "non-empty");
    if ((r_rx - r_rx.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
        throw numeric_error("receive matrix is not Hermitian");
    if (cfg.n_tx < 1)
        throw validation_error("n_tx must be positive");
    if (cfg.n_samples < 1)
        throw validation_error("n_samples must be positive");
    if (n_workers < 1)
        n_workers = 1;

    const int m = static_cast<int>(r_rx.rows());
    const Eigen::MatrixXcd r_sqrt = hermitian_sqrt(r_rx);
    const double snr_linear = std::pow(10.0, cfg.snr_db / 10.0);

    // Every sample value lands in its slot; the reduction below runs in
    // index order, so the result is independent of the thread layout.
    std::vector<double> samples(cfg.n_samples);
    auto worker = [&](int begin, int end) {
        for (int i = begin; i < end; ++i)
            samples[i] =
                capacity_sample(r_sqrt, m, cfg.n_tx, snr_linear, cfg.seed,
                                static_cast<std::uint64_t>(i));
    };
    if (n_workers == 1) {
        worker(0, cfg.n_samples);
    } else {
        std::vector<std::thread> threads;
        std::vector<std::exception_ptr> errors(n_workers);
        const int chunk = (cfg.n_samples + n_workers - 1) / n_workers;
        for (int w = 0; w < n_workers; ++w) {
            const int begin = w * chunk;
            const int end = std::min(cfg.n_samples, begin + chunk);
            if (begin < end)
                threads.emplace_back([&, w, begin, end] {
                    try {
                        worker(begin, end);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
        }
        for (std::thread& t : threads)
            t.join();
        for (const std::exception_ptr& e : errors)
            if (e)
                std::rethrow_exception(e);
    }

    double mean = 0.0;
    for (double v : samples)
        mean += v;
    mean /= cfg.n_samples;
    double var = 0.0;
    for (double v : samples)
        var += (v - mean) * (v - mean);

    CapacityResult out;
    out.ergodic_capacity_bps_hz = mean;
    out.sample_std_error =
        cfg.n_samples > 1
            ? std::sqrt(var / (cfg.n_samples - 1.0) / cfg.n_samples)
            : 0.0;
    return out;
}

Eigen::MatrixXcd build_receive_matrix(const RadiationMatrix& d) {
    check_hermitian_psd(d.d, "cluster-level radiation matrix");
    return d.d;
}

} // namespace cluskit
