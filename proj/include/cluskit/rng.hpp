// SPDX-License-Identifier: Apache-2.0
//
// cluskit: feed-weight optimization and MIMO evaluation for antenna clusters

#ifndef CLUSKIT_RNG_HPP
#define CLUSKIT_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace cluskit {

// Counter-keyed random stream: the state is derived from (seed, stream)
// only, so sample i of stream s is the same value no matter which thread
// draws it or in which order streams are consumed.
class SampleRng {
public:
    SampleRng(std::uint64_t seed, std::uint64_t stream)
        : state_(mix(mix(seed) ^ mix(stream ^ 0x6a09e667f3bcc909ULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform in (0, 1]; never returns 0 so log() below is safe.
    double uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal pair via Box-Muller.
    void normal_pair(double& a, double& b) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        a = r * std::cos(t);
        b = r * std::sin(t);
    }

    double normal() {
        double a, b;
        normal_pair(a, b);
        return a;
    }

    // Circularly-symmetric complex normal with E|z|^2 = 1.
    std::complex<double> complex_normal() {
        double a, b;
        normal_pair(a, b);
        return {a * std::numbers::sqrt2 / 2.0, b * std::numbers::sqrt2 / 2.0};
    }

private:
    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t state_;
};

} // namespace cluskit

#endif
