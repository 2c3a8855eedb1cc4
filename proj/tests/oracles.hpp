// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference implementations, deliberately independent of the
// library's numerical paths.

#ifndef CLUSKIT_TESTS_ORACLES_HPP
#define CLUSKIT_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracles {

// Largest eigenvalue of a Hermitian PSD matrix by plain power iteration.
inline double power_iteration_lambda_max(const Eigen::MatrixXcd& d,
                                         int max_iter = 2000000,
                                         double tol = 1e-13) {
    const int k = static_cast<int>(d.rows());
    std::mt19937_64 gen(0xC0FFEE);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXcd v(k);
    for (int i = 0; i < k; ++i)
        v(i) = std::complex<double>(u(gen), u(gen));
    v.normalize();

    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        const Eigen::VectorXcd w = d * v;
        lambda = (v.adjoint() * w).real()(0);
        if ((w - lambda * v).norm() <= tol * std::max(1.0, lambda))
            break;
        const double n = w.norm();
        if (n == 0.0)
            return 0.0; // the zero matrix
        v = w / n;
    }
    return lambda;
}

// Full spectrum by power iteration with deflation, descending.
inline std::vector<double>
power_iteration_spectrum(Eigen::MatrixXcd d, int max_iter = 2000000,
                         double tol = 1e-13) {
    const int k = static_cast<int>(d.rows());
    std::vector<double> lambdas;
    for (int n = 0; n < k; ++n) {
        std::mt19937_64 gen(0xC0FFEE + n);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Eigen::VectorXcd v(k);
        for (int i = 0; i < k; ++i)
            v(i) = std::complex<double>(u(gen), u(gen));
        v.normalize();
        double lambda = 0.0;
        for (int it = 0; it < max_iter; ++it) {
            const Eigen::VectorXcd w = d * v;
            lambda = (v.adjoint() * w).real()(0);
            if ((w - lambda * v).norm() <= tol * std::max(1.0, lambda))
                break;
            const double norm = w.norm();
            if (norm == 0.0) {
                lambda = 0.0;
                break;
            }
            v = w / norm;
        }
        lambdas.push_back(lambda);
        d -= lambda * v * v.adjoint();
    }
    return lambdas;
}

// Random Hermitian PSD matrix with eigenvalues in [0, 1]. A minimum
// eigenvalue gap keeps plain power iteration fast.
inline Eigen::MatrixXcd random_psd(int k, std::mt19937_64& gen,
                                   double min_gap = 1e-3) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g(0.0, 1.0);

    Eigen::VectorXd ev(k);
    for (;;) {
        for (int i = 0; i < k; ++i)
            ev(i) = u(gen);
        std::sort(ev.data(), ev.data() + k);
        bool ok = true;
        for (int i = 1; i < k; ++i)
            if (ev(i) - ev(i - 1) < min_gap)
                ok = false;
        if (ok)
            break;
    }

    Eigen::MatrixXcd a(k, k);
    for (int c = 0; c < k; ++c)
        for (int r = 0; r < k; ++r)
            a(r, c) = std::complex<double>(g(gen), g(gen));
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    const Eigen::MatrixXcd q = qr.householderQ();
    return q * ev.asDiagonal() * q.adjoint();
}

inline Eigen::VectorXcd random_unit_vector(int k, std::mt19937_64& gen) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXcd v(k);
    for (int i = 0; i < k; ++i)
        v(i) = std::complex<double>(g(gen), g(gen));
    return v / v.norm();
}

// Independently coded ergodic-capacity Monte Carlo: mt19937_64 +
// std::normal_distribution instead of the library's counter RNG.
inline double mc_capacity_oracle(const Eigen::MatrixXcd& r_rx, int n_tx,
                                 double snr_db, int n_samples,
                                 std::uint64_t seed) {
    const int m = static_cast<int>(r_rx.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r_rx);
    const Eigen::MatrixXcd r_sqrt =
        es.eigenvectors() *
        es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
        es.eigenvectors().adjoint();

    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    const double snr = std::pow(10.0, snr_db / 10.0);

    double acc = 0.0;
    Eigen::MatrixXcd h_w(m, n_tx);
    for (int s = 0; s < n_samples; ++s) {
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < n_tx; ++c)
                h_w(r, c) = std::complex<double>(g(gen), g(gen));
        const Eigen::MatrixXcd h = r_sqrt * h_w;
        const Eigen::MatrixXcd gram =
            Eigen::MatrixXcd::Identity(m, m) + (snr / n_tx) * h * h.adjoint();
        acc += std::log2(gram.determinant().real());
    }
    return acc / n_samples;
}

} // namespace oracles

#endif
