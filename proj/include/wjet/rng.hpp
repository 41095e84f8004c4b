#pragma once

#include "common.hpp"
#include <cmath>
#include <cstdint>
#include <random>

namespace wjet {

// Deterministic random source. mt19937_64 has a pinned algorithm, and the
// transformations below avoid std::*_distribution (whose output is
// implementation-defined), so streams are reproducible across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : gen_(seed ^ 0x9e3779b97f4a7c15ull) {}

    double uniform() {
        // 53 uniform bits in [0,1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(static_cast<double>(hi - lo + 1) * uniform());
    }

    double normal() {
        // Box-Muller; one value per call keeps the stream position simple.
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    Vec normal_vec(int d) {
        Vec v(d);
        for (int i = 0; i < d; ++i) v[i] = normal();
        return v;
    }

    Vec unit_vec(int d) {
        Vec v = normal_vec(d);
        double nrm = v.norm();
        while (nrm < 1e-12) {
            v = normal_vec(d);
            nrm = v.norm();
        }
        return v / nrm;
    }

    Mat normal_mat(int r, int c) {
        Mat a(r, c);
        for (int j = 0; j < c; ++j)
            for (int i = 0; i < r; ++i) a(i, j) = normal();
        return a;
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

} // namespace wjet
