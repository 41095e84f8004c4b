#pragma once

// Rescaling orbits: the one-parameter family tau_delta applied to
// ellipsoids and subspaces. Singular value curves, degeneracy windows,
// stable subspace extraction on a degenerate window, quantitative
// stabilization onto a coordinate subspace, and unimodality scans of the
// orbit angle.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "wjet/common.hpp"
#include "wjet/convexgeom.hpp"
#include "wjet/grassmann.hpp"
#include "wjet/linalg.hpp"

namespace wjet::dyn {

using convex::Ellipsoid;
using grass::DilationSystem;
using grass::Subspace;

// Strictly decreasing geometric grid from hi down to lo.
struct GeometricGrid {
    double hi = 1.0;
    double lo = 0.1;
    double ratio = 0.9;

    std::vector<double> points() const {
        require(hi > lo && lo > 0, errc::invalid_input, "grid: need hi > lo > 0");
        require(ratio > 0 && ratio < 1, errc::invalid_input, "grid: ratio must lie in (0,1)");
        std::vector<double> pts;
        for (double x = hi; x >= lo * (1.0 - 1e-12); x *= ratio) pts.push_back(x);
        if (pts.empty() || pts.back() > lo * (1.0 + 1e-12)) pts.push_back(lo);
        return pts;
    }
};

inline Ellipsoid orbit_ellipsoid(const Ellipsoid& e, const DilationSystem& sys, double delta) {
    require(delta > 0, errc::invalid_input, "orbit: delta must be positive");
    Mat t = sys.tau_diag(delta).asDiagonal();
    return convex::map_ellipsoid(t, e);
}

// Singular values of tau_delta * A where the seed ellipsoid is A applied to
// the unit ball: these are the principal axis lengths of the orbit
// ellipsoid, padded with zeros for a degenerate seed. Descending.
inline Vec orbit_singular_values(const Ellipsoid& e, const DilationSystem& sys, double delta) {
    require(delta > 0, errc::invalid_input, "orbit: delta must be positive");
    const int d = e.ambient_dim();
    require(d == sys.dim, errc::invalid_input, "orbit: dimension mismatch");
    Vec out = Vec::Zero(d);
    if (e.rank() == 0) return out;
    Eigen::SelfAdjointEigenSolver<Mat> es(e.form);
    Mat fsqrtinv = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                   es.eigenvectors().transpose();
    Mat a = sys.tau_diag(delta).asDiagonal() * (e.span.basis * fsqrtinv);
    Eigen::JacobiSVD<Mat> svd(a);
    for (int i = 0; i < svd.singularValues().size(); ++i) out(i) = svd.singularValues()(i);
    return out;
}

inline std::vector<std::pair<double, Vec>> orbit_sv_curve(const Ellipsoid& e, const DilationSystem& sys,
                                                          const GeometricGrid& grid) {
    std::vector<std::pair<double, Vec>> curve;
    for (double d : grid.points()) curve.emplace_back(d, orbit_singular_values(e, sys, d));
    return curve;
}

// Closure of {delta : sigma_p(delta) in [eps, 1/eps]} for each axis p.
// Each curve is continuous and non-increasing in delta with range (0, inf)
// for a full-rank seed, so the window is a single interval found by
// bracketing and bisection. The decay bound sigma(r) <= (l/r) sigma(l)
// forces ratio <= eps^{-2}.
struct DegeneracyInterval {
    int axis = 0;  // 0-based singular value index
    double lo = 0, hi = 0;
};

inline std::vector<DegeneracyInterval> degeneracy_intervals(const Ellipsoid& e,
                                                            const DilationSystem& sys, double eps) {
    require(eps > 0 && eps < 0.5, errc::invalid_input, "degeneracy_intervals: eps must lie in (0,1/2)");
    const int d = e.ambient_dim();
    std::vector<DegeneracyInterval> out;
    auto sv = [&](int p, double delta) { return orbit_singular_values(e, sys, delta)(p); };
    for (int p = 0; p < d; ++p) {
        if (sv(p, 1.0) <= 0) continue;  // degenerate seed: this axis never crosses
        // bracket the upper crossing sigma = eps and lower crossing sigma = 1/eps
        double lo_br = 1.0, hi_br = 1.0;
        int guard = 0;
        while (sv(p, lo_br) < 1.0 / eps && guard++ < 4000) lo_br *= 0.5;
        guard = 0;
        while (sv(p, hi_br) > eps && guard++ < 4000) hi_br *= 2.0;
        require(sv(p, lo_br) >= 1.0 / eps && sv(p, hi_br) <= eps, errc::invalid_input,
                "degeneracy_intervals: failed to bracket the singular value curve");
        auto bisect = [&](double target) {
            double a = lo_br, b = hi_br;  // sv(a) >= target >= sv(b)
            for (int it = 0; it < 200; ++it) {
                double mid = std::sqrt(a * b);
                if (sv(p, mid) >= target)
                    a = mid;
                else
                    b = mid;
                if (b / a < 1.0 + 1e-14) break;
            }
            return std::sqrt(a * b);
        };
        DegeneracyInterval ival;
        ival.axis = p;
        ival.lo = bisect(1.0 / eps);  // sigma large to the left
        ival.hi = bisect(eps);
        out.push_back(ival);
    }
    return out;
}

// Span of the long axes on a degenerate window: left singular directions
// with sigma_j > 1/eps at the left endpoint l(I). The window is treated in
// rebased coordinates, so the subspace that tracks the orbit at delta in I
// is the relative dilation tau_{delta/l(I)} H:
//   E_delta within tau_{delta/l(I)} H + eps B, and
//   tau_{delta/l(I)} H intersect (1/(2 eps)) B within E_delta.
// The degeneracy precondition is sampled across I and enforced.
inline Subspace extract_stable_subspace(const Ellipsoid& e, const DilationSystem& sys, double ilo,
                                        double ihi, double eps, int samples = 20) {
    require(eps > 0 && eps < 0.5, errc::invalid_input, "extract_stable_subspace: eps in (0,1/2)");
    require(ilo > 0 && ihi >= ilo, errc::invalid_input, "extract_stable_subspace: bad interval");
    for (int s = 0; s < samples; ++s) {
        double t = samples == 1 ? 0.0 : static_cast<double>(s) / (samples - 1);
        double delta = ilo * std::pow(ihi / ilo, t);
        require(convex::degeneracy_check(orbit_ellipsoid(e, sys, delta), eps), errc::invalid_input,
                "extract_stable_subspace: orbit not degenerate inside the interval");
    }
    const int d = e.ambient_dim();
    Eigen::SelfAdjointEigenSolver<Mat> es(e.form);
    Mat fsqrtinv = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                   es.eigenvectors().transpose();
    Mat a = sys.tau_diag(ilo).asDiagonal() * (e.span.basis * fsqrtinv);
    la::Svd svd = la::deterministic_svd(a);
    int keep = 0;
    while (keep < svd.sigma.size() && svd.sigma(keep) > 1.0 / eps) ++keep;
    return Subspace{d, Mat(svd.u.leftCols(keep))};
}

// --- stabilization ----------------------------------------------------------

namespace detail {

// |<omega_V, omega_S>| for a coordinate subspace S is the absolute k x k
// minor of the orthonormal basis at the rows S.
inline double coordinate_cos(const Mat& basis, const std::vector<int>& rows) {
    const int k = static_cast<int>(rows.size());
    Mat sub(k, k);
    for (int i = 0; i < k; ++i) sub.row(i) = basis.row(rows[static_cast<size_t>(i)]);
    return std::abs(sub.determinant());
}

inline bool next_combination(std::vector<int>& c, int d) {
    const int k = static_cast<int>(c.size());
    for (int i = k - 1; i >= 0; --i) {
        if (c[static_cast<size_t>(i)] < d - k + i) {
            ++c[static_cast<size_t>(i)];
            for (int j = i + 1; j < k; ++j) c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

inline std::int64_t comb_count(int d, int k) {
    std::int64_t c = 1;
    for (int i = 0; i < k; ++i) {
        c = c * (d - i) / (i + 1);
        if (c > 1000000) return c;
    }
    return c;
}

// Best coordinate subspace for an orthonormal basis: exhaustive when the
// number of index sets is moderate, otherwise greedy by row mass with
// improving swaps.
inline std::pair<std::vector<int>, double> best_coordinate_subspace(const Mat& basis) {
    const int d = static_cast<int>(basis.rows());
    const int k = static_cast<int>(basis.cols());
    if (comb_count(d, k) <= 20000) {
        std::vector<int> c(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) c[static_cast<size_t>(i)] = i;
        std::vector<int> best = c;
        double bestval = coordinate_cos(basis, c);
        while (next_combination(c, d)) {
            double v = coordinate_cos(basis, c);
            if (v > bestval) {
                bestval = v;
                best = c;
            }
        }
        return {best, bestval};
    }
    // greedy: top-k rows by mass, then improving single swaps
    std::vector<std::pair<double, int>> mass;
    for (int i = 0; i < d; ++i) mass.emplace_back(-basis.row(i).squaredNorm(), i);
    std::sort(mass.begin(), mass.end());
    std::vector<int> cur;
    for (int i = 0; i < k; ++i) cur.push_back(mass[static_cast<size_t>(i)].second);
    std::sort(cur.begin(), cur.end());
    double curval = coordinate_cos(basis, cur);
    for (int pass = 0; pass < 50; ++pass) {
        bool improved = false;
        for (int out = 0; out < k && !improved; ++out) {
            for (int in = 0; in < d && !improved; ++in) {
                if (std::find(cur.begin(), cur.end(), in) != cur.end()) continue;
                std::vector<int> cand = cur;
                cand[static_cast<size_t>(out)] = in;
                std::sort(cand.begin(), cand.end());
                double v = coordinate_cos(basis, cand);
                if (v > curval * (1.0 + 1e-12)) {
                    cur = cand;
                    curval = v;
                    improved = true;
                }
            }
        }
        if (!improved) break;
    }
    return {cur, curval};
}

}  // namespace detail

struct StabilizationResult {
    double delta = 0;
    std::vector<int> coords;  // coordinate index set S
    Subspace v;               // V_S
    double cos_angle = 0;
    int steps = 0;  // schedule index of the hit
};

// Scan the schedule delta_j = eps^{-2j} * l(I), eps = sqrt(eta/2^d), and
// return the first delta where some coordinate subspace S has
// cos angle(tau_delta H, V_S) >= 1 - eta. Existence within the schedule is
// the content of the stabilization proposition for simple systems, given
// the interval ratio precondition; a full scan failure is reported as a
// property violation.
inline StabilizationResult stabilize_orbit(const Subspace& h, const DilationSystem& sys, double eta,
                                           double ilo, double ihi) {
    require(sys.simple(), errc::invalid_input, "stabilize_orbit: system must be simple");
    require(eta > 0 && eta < 0.5, errc::invalid_input, "stabilize_orbit: eta must lie in (0,1/2)");
    require(h.ambient_dim == sys.dim, errc::invalid_input, "stabilize_orbit: dimension mismatch");
    const int d = sys.dim;
    const int k = h.dim();
    require(k >= 1, errc::invalid_input, "stabilize_orbit: zero-dimensional seed");
    const double need = std::pow(std::pow(2.0, d) / eta, d * k + 2);
    require(ihi / ilo >= need * (1.0 - 1e-9), errc::invalid_input,
            "stabilize_orbit: interval ratio below the stabilization precondition");

    const double eps = std::sqrt(eta / std::pow(2.0, d));
    const double step = 1.0 / (eps * eps);
    StabilizationResult res;
    int j = 0;
    for (double delta = ilo; delta <= ihi * (1.0 + 1e-12); delta *= step, ++j) {
        Subspace th = grass::dilate_subspace(sys, delta, h);
        auto [coords, val] = detail::best_coordinate_subspace(th.basis);
        if (val >= 1.0 - eta) {
            res.delta = delta;
            res.coords = coords;
            res.v = grass::Subspace{d, Mat::Zero(d, k)};
            for (int i = 0; i < k; ++i) res.v.basis(coords[static_cast<size_t>(i)], i) = 1.0;
            res.cos_angle = val;
            res.steps = j;
            return res;
        }
    }
    fail(errc::invalid_input,
         "stabilize_orbit: no schedule point reached the angle bound (property violation)");
}

// --- unimodality ------------------------------------------------------------

inline bool is_unimodal_sequence(const std::vector<double>& f, double tol = 1e-7) {
    const int n = static_cast<int>(f.size());
    if (n < 3) return true;
    std::vector<double> pref(static_cast<size_t>(n)), suf(static_cast<size_t>(n));
    pref[0] = f[0];
    for (int i = 1; i < n; ++i) pref[static_cast<size_t>(i)] = std::max(pref[static_cast<size_t>(i - 1)], f[static_cast<size_t>(i)]);
    suf[static_cast<size_t>(n - 1)] = f[static_cast<size_t>(n - 1)];
    for (int i = n - 2; i >= 0; --i) suf[static_cast<size_t>(i)] = std::max(suf[static_cast<size_t>(i + 1)], f[static_cast<size_t>(i)]);
    for (int b = 1; b + 1 < n; ++b) {
        if (pref[static_cast<size_t>(b - 1)] >= f[static_cast<size_t>(b)] + tol &&
            suf[static_cast<size_t>(b + 1)] >= f[static_cast<size_t>(b)] + tol)
            return false;
    }
    return true;
}

inline std::vector<std::pair<double, double>> orbit_angle_curve(const Subspace& h, const Subspace& v,
                                                                const DilationSystem& sys,
                                                                const GeometricGrid& grid) {
    require(h.dim() == v.dim() && h.dim() >= 1, errc::invalid_input,
            "orbit_angle_curve: equal positive dimensions required");
    std::vector<std::pair<double, double>> curve;
    for (double d : grid.points())
        curve.emplace_back(d, grass::angle_form_cos(grass::dilate_subspace(sys, d, h), v));
    return curve;
}

// True when cos angle(tau_delta H, V) has no valley deeper than tol on the
// grid. V must be dilation-invariant (layer-validated).
inline bool unimodality_scan(const Subspace& h, const Subspace& v, const DilationSystem& sys,
                             const GeometricGrid& grid, double tol = 1e-7) {
    grass::layer_dims(v, sys);  // throws on a layer-mixing basis
    std::vector<double> f;
    for (auto& [delta, c] : orbit_angle_curve(h, v, sys, grid)) {
        (void)delta;
        f.push_back(c);
    }
    return is_unimodal_sequence(f, tol);
}

}  // namespace wjet::dyn
