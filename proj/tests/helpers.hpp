#pragma once

// Shared helpers for the test binaries. Oracle code in the test files is kept
// independent of the library code paths it checks: expected values come from
// brute force, closed forms, or hand computation, never from the routine
// under test.

#include <wjet/jet.hpp>
#include <wjet/rng.hpp>

namespace testutil {

using wjet::Rng;
using wjet::Vec;
using wjet::jets::Polynomial;

inline Polynomial random_poly(Rng& rng, int m, int n, const Vec& x, double scale = 1.0) {
    Polynomial p = wjet::jets::zero_poly(m, n, x);
    for (int i = 0; i < p.coeffs.size(); ++i) p.coeffs[i] = scale * rng.normal();
    return p;
}

inline Polynomial random_unit_poly(Rng& rng, int m, int n, const Vec& x) {
    Polynomial p = random_poly(rng, m, n, x);
    double nrm = p.coeffs.norm();
    while (nrm < 1e-9) {
        p = random_poly(rng, m, n, x);
        nrm = p.coeffs.norm();
    }
    p.coeffs /= nrm;
    return p;
}

// Random polynomial supported on one homogeneous layer.
inline Polynomial random_homogeneous_poly(Rng& rng, int m, int n, const Vec& x, int degree) {
    Polynomial p = wjet::jets::zero_poly(m, n, x);
    const auto& sp = p.space();
    for (int i = 0; i < sp.dim(); ++i)
        if (sp.order(i) == degree) p.coeffs[i] = rng.normal();
    return p;
}

inline Vec vec1(double a) {
    Vec v(1);
    v << a;
    return v;
}

inline Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

inline Vec vec3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}

} // namespace testutil
