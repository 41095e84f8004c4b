#pragma once

#include "multiindex.hpp"
#include <cmath>

namespace wjet::jets {

// Polynomial of degree <= m-1 on R^n, stored as coefficients of (z-x)^alpha in
// graded-lex order about its basepoint x. Immutable value type: every
// operation below returns a fresh object. The represented function never
// changes under rebasing (exact binomial identity), so the basepoint is a
// choice of chart, not data.
struct Polynomial {
    int m = 1;
    int n = 1;
    Vec basepoint;
    Vec coeffs;

    const JetSpace& space() const { return jetspace(m, n); }
};

inline Polynomial zero_poly(int m, int n, const Vec& x) {
    Polynomial p;
    p.m = m;
    p.n = n;
    p.basepoint = x;
    p.coeffs = Vec::Zero(jetspace(m, n).dim());
    return p;
}

inline Polynomial constant_poly(int m, int n, const Vec& x, double value) {
    Polynomial p = zero_poly(m, n, x);
    p.coeffs[0] = value;
    return p;
}

// The basis monomial m_{alpha,x}(z) = (z-x)^alpha.
inline Polynomial monomial(int m, int n, const Vec& x, const MultiIndex& alpha) {
    const JetSpace& sp = jetspace(m, n);
    int r = sp.rank_of(alpha);
    require(r >= 0, errc::invalid_input, "monomial: multi-index outside the jet space");
    Polynomial p = zero_poly(m, n, x);
    p.coeffs[r] = 1.0;
    return p;
}

inline double power(const Vec& h, const MultiIndex& a) {
    double r = 1.0;
    for (int i = 0; i < a.size(); ++i)
        for (int k = 0; k < a[i]; ++k) r *= h[i];
    return r;
}

inline double eval(const Polynomial& p, const Vec& z) {
    const JetSpace& sp = p.space();
    Vec h = z - p.basepoint;
    double s = 0.0;
    for (int i = 0; i < sp.dim(); ++i)
        if (p.coeffs[i] != 0.0) s += p.coeffs[i] * power(h, sp.index(i));
    return s;
}

// Exact change of basepoint: d_beta = sum_{alpha >= beta} c_alpha * C(alpha,beta) * (y-x)^(alpha-beta).
inline Polynomial rebase(const Polynomial& p, const Vec& y) {
    if ((y - p.basepoint).norm() == 0.0) return p;
    const JetSpace& sp = p.space();
    Vec h = y - p.basepoint;
    Polynomial q = zero_poly(p.m, p.n, y);
    std::vector<int> diff(p.n);
    for (int a = 0; a < sp.dim(); ++a) {
        double ca = p.coeffs[a];
        if (ca == 0.0) continue;
        const MultiIndex& al = sp.index(a);
        for (int b = 0; b < sp.dim(); ++b) {
            const MultiIndex& be = sp.index(b);
            bool le = true;
            for (int i = 0; i < p.n; ++i) {
                diff[i] = al[i] - be[i];
                if (diff[i] < 0) { le = false; break; }
            }
            if (!le) continue;
            q.coeffs[b] += ca * binomial(al, be) * power(h, MultiIndex(diff));
        }
    }
    return q;
}

// The translated function z -> p(z - h). Coefficients are untouched; only the
// basepoint moves, which is what makes translation exact.
inline Polynomial translate(const Polynomial& p, const Vec& h) {
    Polynomial q = p;
    q.basepoint = p.basepoint + h;
    return q;
}

// tau_{x,delta}(p)(z) = delta^{-m} p(x + delta (z-x)): homogeneous layer i is
// scaled by delta^(i-m), so |tau_{x,delta} p|_{x,1} = |p|_{x,delta}.
inline Polynomial dilate(const Polynomial& p, const Vec& x, double delta) {
    require(delta > 0.0, errc::invalid_input, "dilate: delta must be positive");
    Polynomial q = rebase(p, x);
    const JetSpace& sp = q.space();
    for (int i = 0; i < sp.dim(); ++i) q.coeffs[i] *= std::pow(delta, sp.order(i) - q.m);
    return q;
}

inline double scaled_norm(const Polynomial& p, const Vec& x, double delta) {
    require(delta > 0.0, errc::invalid_input, "scaled_norm: delta must be positive");
    Polynomial q = rebase(p, x);
    const JetSpace& sp = q.space();
    double s = 0.0;
    for (int i = 0; i < sp.dim(); ++i) {
        double t = q.coeffs[i] * std::pow(delta, sp.order(i) - q.m);
        s += t * t;
    }
    return std::sqrt(s);
}

inline double scaled_inner(const Polynomial& p, const Polynomial& q, const Vec& x, double delta) {
    Polynomial a = rebase(p, x), b = rebase(q, x);
    const JetSpace& sp = a.space();
    double s = 0.0;
    for (int i = 0; i < sp.dim(); ++i)
        s += a.coeffs[i] * b.coeffs[i] * std::pow(delta, 2.0 * (sp.order(i) - a.m));
    return s;
}

// Norm in the basepoint chart at scale 1 (monomials are orthonormal there).
inline double standard_norm(const Polynomial& p) { return p.coeffs.norm(); }

inline Polynomial add(const Polynomial& p, const Polynomial& q) {
    require(p.m == q.m && p.n == q.n, errc::invalid_input, "add: mismatched jet spaces");
    Polynomial b = rebase(q, p.basepoint);
    Polynomial r = p;
    r.coeffs += b.coeffs;
    return r;
}

inline Polynomial sub(const Polynomial& p, const Polynomial& q) {
    require(p.m == q.m && p.n == q.n, errc::invalid_input, "sub: mismatched jet spaces");
    Polynomial b = rebase(q, p.basepoint);
    Polynomial r = p;
    r.coeffs -= b.coeffs;
    return r;
}

inline Polynomial scale(const Polynomial& p, double a) {
    Polynomial r = p;
    r.coeffs *= a;
    return r;
}

// Jet product P (.) Q at x: multiply and drop every term of degree >= m.
// Makes P a commutative ring with unit 1 (the ring R_x).
inline Polynomial jet_multiply(const Polynomial& p, const Polynomial& q, const Vec& x) {
    require(p.m == q.m && p.n == q.n, errc::invalid_input, "jet_multiply: mismatched jet spaces");
    Polynomial a = rebase(p, x), b = rebase(q, x);
    const JetSpace& sp = a.space();
    Polynomial r = zero_poly(p.m, p.n, x);
    for (int i = 0; i < sp.dim(); ++i) {
        double ai = a.coeffs[i];
        if (ai == 0.0) continue;
        for (int j = 0; j < sp.dim(); ++j) {
            double bj = b.coeffs[j];
            if (bj == 0.0) continue;
            int k = sp.sum_rank(i, j);
            if (k >= 0) r.coeffs[k] += ai * bj;
        }
    }
    return r;
}

// Full product without truncation, landing in the jet space of degree bound
// (p.m - 1) + (q.m - 1); used for ring-morphism checks and exact composition.
inline Polynomial poly_multiply_full(const Polynomial& p, const Polynomial& q) {
    require(p.n == q.n, errc::invalid_input, "poly_multiply_full: dimension mismatch");
    int mr = p.m + q.m - 1;
    Polynomial a = p, b = rebase(q, p.basepoint);
    const JetSpace& spa = a.space();
    const JetSpace& spb = b.space();
    const JetSpace& spr = jetspace(mr, p.n);
    Polynomial r = zero_poly(mr, p.n, p.basepoint);
    std::vector<int> s(p.n);
    for (int i = 0; i < spa.dim(); ++i) {
        if (a.coeffs[i] == 0.0) continue;
        for (int j = 0; j < spb.dim(); ++j) {
            if (b.coeffs[j] == 0.0) continue;
            for (int t = 0; t < p.n; ++t) s[t] = spa.index(i)[t] + spb.index(j)[t];
            r.coeffs[spr.rank_of(s)] += a.coeffs[i] * b.coeffs[j];
        }
    }
    return r;
}

// (m_target-1)-jet of a polynomial of any degree: rebase to x and keep the
// coefficients that fit. For interpolants, see extension.hpp which produces
// jets directly. J_x is a ring morphism: J_x(FG) = J_x F (.) J_x G.
inline Polynomial taylor_jet(const Polynomial& f, const Vec& x, int m_target) {
    Polynomial g = rebase(f, x);
    const JetSpace& spf = g.space();
    Polynomial r = zero_poly(m_target, f.n, x);
    const JetSpace& spr = r.space();
    for (int i = 0; i < spf.dim(); ++i) {
        if (g.coeffs[i] == 0.0) continue;
        int rr = spr.rank_of(spf.index(i));
        if (rr >= 0) r.coeffs[rr] += g.coeffs[i];
    }
    return r;
}

// The polynomial d^beta p (degree bound drops, representation kept).
inline Polynomial derivative_poly(const Polynomial& p, const MultiIndex& beta) {
    const JetSpace& sp = p.space();
    Polynomial r = zero_poly(p.m, p.n, p.basepoint);
    std::vector<int> diff(p.n);
    for (int a = 0; a < sp.dim(); ++a) {
        if (p.coeffs[a] == 0.0) continue;
        const MultiIndex& al = sp.index(a);
        bool ok = true;
        for (int i = 0; i < p.n; ++i) {
            diff[i] = al[i] - beta[i];
            if (diff[i] < 0) { ok = false; break; }
        }
        if (!ok) continue;
        double w = 1.0;
        for (int i = 0; i < p.n; ++i) w *= factorial(al[i]) / factorial(diff[i]);
        r.coeffs[sp.rank_of(diff)] += p.coeffs[a] * w;
    }
    return r;
}

inline double derivative_at(const Polynomial& p, const MultiIndex& beta, const Vec& z) {
    return eval(derivative_poly(p, beta), z);
}

// Multiplicative inverse in the jet ring R_x; needs p(x) != 0. With
// p = c (1 - N), N nilpotent (zero constant term), the inverse is the finite
// geometric series c^{-1} (1 + N + ... + N^{m-1}).
inline Polynomial jet_reciprocal(const Polynomial& p, const Vec& x) {
    Polynomial a = rebase(p, x);
    double c = a.coeffs[0];
    require(std::abs(c) > 1e-300, errc::invalid_input, "jet_reciprocal: zero constant term");
    Polynomial nil = scale(a, -1.0 / c);
    nil.coeffs[0] = 0.0;  // nil = (c - p)/c, so p = c (1 - nil)
    Polynomial acc = constant_poly(p.m, p.n, x, 1.0);
    Polynomial pw = constant_poly(p.m, p.n, x, 1.0);
    for (int k = 1; k <= p.m - 1; ++k) {
        pw = jet_multiply(pw, nil, x);
        acc = add(acc, pw);
    }
    return scale(acc, 1.0 / c);
}

} // namespace wjet::jets
