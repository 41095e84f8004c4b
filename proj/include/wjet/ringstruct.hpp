#pragma once

// Ring structure of the jet space at a basepoint: Whitney convexity
// estimation for symmetric convex bodies, the quasiideal defect of a
// subspace, admissible weight vectors, the coordinate renormalization
// T_zeta, and the pipeline that labels a body with a
// dilation-and-translation invariant subspace it is transverse to.
//
// Everything here works on coefficient vectors in the monomial basis at a
// fixed basepoint, so the basepoint itself never appears: bodies, subspaces
// and products are all expressed in that chart.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "wjet/convexgeom.hpp"
#include "wjet/dynamics.hpp"
#include "wjet/grassmann.hpp"
#include "wjet/jet.hpp"
#include "wjet/rng.hpp"

namespace wjet::ring {

using convex::Ellipsoid;
using convex::SymmetricBody;
using grass::Subspace;
using jets::JetSpace;
using jets::MultiIndex;

// Matrix of Q -> P (.) Q in the monomial basis; the jet product truncates
// every term of total degree >= m.
inline Mat multiplication_matrix(const JetSpace& space, const Vec& p) {
    const int d = space.dim();
    require(p.size() == d, errc::invalid_input, "multiplication_matrix: coefficient size mismatch");
    Mat mm = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        if (p[i] == 0.0) continue;
        for (int j = 0; j < d; ++j) {
            int k = space.sum_rank(i, j);
            if (k >= 0) mm(k, j) += p[i];
        }
    }
    return mm;
}

inline Vec jet_product_coeffs(const JetSpace& space, const Vec& a, const Vec& b) {
    const int d = space.dim();
    Vec r = Vec::Zero(d);
    for (int i = 0; i < d; ++i) {
        if (a[i] == 0.0) continue;
        for (int j = 0; j < d; ++j) {
            if (b[j] == 0.0) continue;
            int k = space.sum_rank(i, j);
            if (k >= 0) r[k] += a[i] * b[j];
        }
    }
    return r;
}

// Diagonal weights of |.|_{x,delta} on coefficients: delta^(order - m).
inline Vec scale_weights(const JetSpace& space, double delta) {
    require(delta > 0, errc::invalid_input, "scale_weights: delta must be positive");
    Vec w(space.dim());
    for (int i = 0; i < space.dim(); ++i) w[i] = std::pow(delta, space.order(i) - space.m());
    return w;
}

// --- Whitney convexity -------------------------------------------------------

struct WhitneyConvexityOptions {
    std::vector<double> delta_grid;  // defaults to a geometric grid in (0, 1]
    int samples = 400;               // direction pairs tried per scale
    int refine_rounds = 60;          // local perturbation ascent on the best pair
    std::uint64_t seed = 0;
    double clip_radius = convex::kInf;  // evaluate the body as Omega ∩ clip*B
};

namespace detail {

inline std::vector<double> default_wc_grid() {
    std::vector<double> g;
    for (double d = 1.0; d >= 1e-3 * (1 - 1e-12); d *= 0.5) g.push_back(d);
    return g;
}

// One sample of the convexity ratio at scale delta for directions (u, v):
// P = the boundary point of (Omega ∩ B_delta) along u, Q = the boundary
// point of B_delta along v, and the ratio is gauge_Omega(P (.) Q) / delta^m.
inline double wc_ratio(const JetSpace& space, const std::function<double(const Vec&)>& gauge,
                       double delta, const Vec& u, const Vec& v) {
    Vec w = scale_weights(space, delta);
    double cap_u = std::max(gauge(u), (w.cwiseProduct(u)).norm());
    if (!(cap_u > 0)) return 0.0;  // unbounded direction inside the ball: impossible
    Vec p = u / cap_u;
    double nv = (w.cwiseProduct(v)).norm();
    if (!(nv > 0)) return 0.0;
    Vec q = v / nv;
    Vec prod = jet_product_coeffs(space, p, q);
    double g = gauge(prod);
    return g / std::pow(delta, space.m());
}

}  // namespace detail

// Sampled lower bound for the Whitney convexity coefficient at the
// basepoint: the least A with (Omega ∩ B_delta) (.) B_delta ⊆ A delta^m
// Omega over the scale grid. Products of boundary pairs are tested and the
// best pair is refined by random perturbation ascent; the estimate grows
// toward the true coefficient with sampling effort and is infinite when a
// product escapes the span of Omega.
inline double whitney_convexity_coefficient(const JetSpace& space, const SymmetricBody& omega,
                                            const WhitneyConvexityOptions& opts = {}) {
    const int d = space.dim();
    require(convex::body_dim(omega) == d, errc::invalid_input,
            "whitney_convexity_coefficient: body dimension mismatch");
    Subspace span = convex::body_span(omega);
    if (span.dim() == 0) return 0.0;  // Omega = {0}: both sides are {0}

    auto gauge = [&](const Vec& x) {
        double g = convex::body_gauge(omega, x);
        if (opts.clip_radius < convex::kInf) g = std::max(g, x.norm() / opts.clip_radius);
        return g;
    };

    std::vector<double> grid = opts.delta_grid.empty() ? detail::default_wc_grid() : opts.delta_grid;
    Rng rng(opts.seed);
    double best = 0.0;
    Vec bu, bv;
    double bdelta = 1.0;
    for (double delta : grid) {
        for (int s = 0; s < opts.samples; ++s) {
            Vec u = span.basis * rng.unit_vec(span.dim());
            Vec v = rng.unit_vec(d);
            double r = detail::wc_ratio(space, gauge, delta, u, v);
            if (r > best) {
                best = r;
                bu = u;
                bv = v;
                bdelta = delta;
            }
        }
    }
    if (!(best > 0) || !std::isfinite(best)) return best;
    // local refinement around the best sample
    double sigma = 0.5;
    for (int round = 0; round < opts.refine_rounds; ++round) {
        bool improved = false;
        for (int t = 0; t < 8; ++t) {
            Vec u = (bu + sigma * rng.normal_vec(d)).eval();
            u = span.basis * (span.basis.transpose() * u);
            if (u.norm() < 1e-12) continue;
            u /= u.norm();
            Vec v = (bv + sigma * rng.normal_vec(d)).normalized();
            double r = detail::wc_ratio(space, gauge, bdelta, u, v);
            if (r > best) {
                best = r;
                bu = u;
                bv = v;
                improved = true;
            }
        }
        if (!improved) sigma *= 0.7;
        if (sigma < 1e-6) break;
    }
    return best;
}

// --- quasiideal defect -------------------------------------------------------

// max over unit P in H and unit Q of |proj_{H-perp}(P (.) Q)|: zero exactly
// when H is an ideal, and at most (m+1)! for any subspace. Computed by
// alternating singular vector ascent on the bilinear map from random
// starts; a lower bound, exact in small cases.
inline double quasiideal_epsilon(const JetSpace& space, const Subspace& h, int starts = 32,
                                 double tol = 1e-9, std::uint64_t seed = 0) {
    const int d = space.dim();
    require(h.ambient_dim == d, errc::invalid_input, "quasiideal_epsilon: dimension mismatch");
    const int k = h.dim();
    if (k == 0 || k == d) return 0.0;
    Subspace hp = grass::complement(h);
    const Mat& bh = h.basis;
    const Mat& np = hp.basis;

    double best = 0.0;
    Rng rng(seed);
    for (int s = 0; s < starts; ++s) {
        Vec a = s == 0 ? Vec(Vec::Unit(k, 0)) : rng.unit_vec(k);
        double val = 0.0;
        for (int it = 0; it < 200; ++it) {
            // optimal Q for fixed P = bh * a
            la::Svd s1 = la::deterministic_svd(np.transpose() * multiplication_matrix(space, bh * a));
            if (s1.sigma.size() == 0 || s1.sigma(0) <= 0) break;
            Vec b = s1.v.col(0);
            // optimal P for fixed Q
            la::Svd s2 = la::deterministic_svd(np.transpose() * multiplication_matrix(space, b) * bh);
            if (s2.sigma.size() == 0) break;
            double nv = s2.sigma(0);
            a = s2.v.col(0);
            if (std::abs(nv - val) <= tol * std::max(1.0, nv)) {
                val = nv;
                break;
            }
            val = nv;
        }
        best = std::max(best, val);
    }
    return best;
}

// --- admissible weight vectors ----------------------------------------------

// Lexicographically smallest p in {1..C(D,2)+1}^n giving distinct values
// <p, alpha> across the multiindex basis. Existence within that box is a
// pigeonhole count, so the scan terminates.
inline std::vector<int> admissible_vector(int m, int n) {
    const JetSpace& space = jets::jetspace(m, n);
    const int d = space.dim();
    const long long cap = static_cast<long long>(d) * (d - 1) / 2 + 1;
    const int kmax = static_cast<int>(cap);

    std::vector<long long> vals(static_cast<size_t>(d));
    auto admissible = [&](const std::vector<int>& p) {
        for (int i = 0; i < d; ++i) {
            const MultiIndex& al = space.index(i);
            long long s = 0;
            for (int t = 0; t < n; ++t) s += static_cast<long long>(p[static_cast<size_t>(t)]) * al[t];
            vals[static_cast<size_t>(i)] = s;
        }
        std::sort(vals.begin(), vals.end());
        return std::adjacent_find(vals.begin(), vals.end()) == vals.end();
    };

    std::vector<int> p(static_cast<size_t>(n), 1);
    while (true) {
        if (admissible(p)) return p;
        int i = n - 1;
        while (i >= 0 && p[static_cast<size_t>(i)] == kmax) {
            p[static_cast<size_t>(i)] = 1;
            --i;
        }
        require(i >= 0, errc::invalid_input, "admissible_vector: scan exhausted (impossible)");
        ++p[static_cast<size_t>(i)];
    }
}

// --- the renormalization T_zeta ----------------------------------------------

// T_zeta(P)(x) = P(zeta_1 x_1, ..., zeta_n x_n): each monomial is an
// eigenvector with eigenvalue zeta^alpha.
inline Vec renorm_eigenvalues(const JetSpace& space, const Vec& zeta) {
    require(zeta.size() == space.n(), errc::invalid_input, "renorm: zeta must have n entries");
    Vec w(space.dim());
    for (int i = 0; i < space.dim(); ++i) w[i] = jets::power(zeta, space.index(i));
    return w;
}

inline Vec apply_renorm(const JetSpace& space, const Vec& zeta, const Vec& coeffs) {
    return renorm_eigenvalues(space, zeta).cwiseProduct(coeffs);
}

inline Subspace renorm_subspace(const JetSpace& space, const Vec& zeta, const Subspace& h) {
    require(h.ambient_dim == space.dim(), errc::invalid_input, "renorm: dimension mismatch");
    if (h.dim() == 0) return h;
    Mat scaled = renorm_eigenvalues(space, zeta).asDiagonal() * h.basis;
    for (int j = 0; j < scaled.cols(); ++j) {
        double nrm = scaled.col(j).norm();
        if (nrm > 0) scaled.col(j) /= nrm;
    }
    Eigen::HouseholderQR<Mat> qr(scaled);
    Mat q = qr.householderQ() * Mat::Identity(scaled.rows(), scaled.cols());
    return Subspace{h.ambient_dim, std::move(q)};
}

// log of the entry bound (2^D / eps)^(3 D^4) for renormalization outputs;
// the bound itself overflows double for modest D, so tests compare in logs.
inline double renorm_log_entry_bound(int d, double eps) {
    return 3.0 * std::pow(static_cast<double>(d), 4) *
           (d * std::log(2.0) + std::log(1.0 / eps));
}

struct RenormResult {
    Vec zeta;                          // entries >= 1
    std::vector<MultiIndex> monomials; // the index set A
    double delta = 1.0;                // schedule point realizing zeta = delta^(-p)
    double cos_angle = 1.0;            // achieved cos theta_max(T_zeta H, V_A)
};

// Finds zeta >= 1 and a monomial set A with cos theta_max(T_zeta H, V_A)
// > 1 - eps. The subspace is pushed through the univariate embedding
// x^alpha -> t^(1 + <p, alpha>) (an isometry onto a simple dilation
// system), stabilized onto a coordinate subspace there, and pulled back;
// the embedding is the identity on coefficients, so only the exponent
// vector changes.
inline RenormResult renormalize_to_monomial(const JetSpace& space, const Subspace& h, double eps) {
    const int d = space.dim();
    require(h.ambient_dim == d, errc::invalid_input, "renormalize: dimension mismatch");
    require(eps > 0 && eps < 0.5, errc::invalid_input, "renormalize: eps must lie in (0, 1/2)");
    const int n = space.n();
    const int k = h.dim();

    RenormResult out;
    out.zeta = Vec::Ones(n);

    // fast path: H is already a span of monomials
    std::vector<int> support;
    for (int i = 0; i < d; ++i)
        if (h.basis.cols() > 0 && h.basis.row(i).cwiseAbs().maxCoeff() > 1e-9) support.push_back(i);
    if (static_cast<int>(support.size()) == k &&
        (k == 0 || grass::same_subspace(h, grass::monomial_span(space, support)))) {
        for (int r : support) out.monomials.push_back(space.index(r));
        return out;
    }

    std::vector<int> p = admissible_vector(space.m(), n);
    std::vector<int> psi(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        const MultiIndex& al = space.index(i);
        int s = 1;
        for (int t = 0; t < n; ++t) s += p[static_cast<size_t>(t)] * al[t];
        psi[static_cast<size_t>(i)] = s;
    }
    grass::DilationSystem sys = grass::make_dilation_system(psi);

    double delta0 = std::pow(eps / std::pow(2.0, d), d * k + 2);
    require(delta0 > 0 && std::isfinite(delta0), errc::cap_exceeded,
            "renormalize: stabilization schedule underflows for this jet dimension");
    dyn::StabilizationResult st = dyn::stabilize_orbit(h, sys, eps, delta0, 1.0);

    out.delta = st.delta;
    // the schedule can overshoot 1 by a rounding hair; zeta stays >= 1
    for (int t = 0; t < n; ++t)
        out.zeta[t] = std::max(1.0, std::pow(st.delta, -p[static_cast<size_t>(t)]));
    for (int c : st.coords) out.monomials.push_back(space.index(c));

    Subspace th = renorm_subspace(space, out.zeta, h);
    out.cos_angle = grass::cos_theta_max(th, grass::monomial_span(space, st.coords));
    require(out.cos_angle > 1.0 - eps - 1e-9, errc::invalid_input,
            "renormalize: angle postcondition failed");
    return out;
}

// --- the label pipeline -------------------------------------------------------

struct LabelOptions {
    double eps0 = 0.125;         // quasiideal budget before dividing by the measured coefficient
    double angle_eta = -1.0;     // renormalization tightness; < 0 means 1/(32 ((m+1)!)^2)
    int wc_samples = 200;        // sampling effort for the convexity coefficient
    int boundary_samples = 80;   // boundary points per span dimension for the John step
    double unbounded_clip = 1e6; // radius of the pre-clip ball when the body is unbounded
    std::uint64_t seed = 0;
};

struct LabelResult {
    grass::DTISubspace v;               // the label: V spanned by the complement monomials
    std::vector<MultiIndex> monomials;  // the monotonic set A
    double measured_r = convex::kInf;   // smallest R passing transversality at the working scale
    double scale = 1.0;                 // the working delta
    double wc_coefficient = 0.0;        // measured Whitney convexity coefficient
    double quasiideal_eps = 0.0;        // measured quasiideal defect of the stable subspace
    Vec zeta;                           // renormalization that aligned the stable subspace
    Ellipsoid inner;                    // inner ellipsoid of the (clipped) body, at scale 1
};

namespace detail {

// Boundary sample along one direction: u / gauge(u).
inline Vec boundary_ray(const std::function<double(const Vec&)>& gauge, const Vec& u) {
    double g = gauge(u);
    require(g > 1e-12 && std::isfinite(g), errc::invalid_input,
            "label: body boundary not reachable in a span direction");
    return u / g;
}

// Inscribed ellipsoid of a gauge-described body by iterative rounding.
// Uniform directions miss the tips of an anisotropic body (a ray lands
// near the long axis only with probability comparable to the inverse
// aspect ratio), so each round redraws directions in the metric of the
// current estimate and walks its axis directions explicitly; boundary
// points accumulate, keeping every iterate inscribed.
inline Ellipsoid inner_john(const Subspace& span, const std::function<double(const Vec&)>& gauge,
                            int per_round, Rng& rng, int max_rounds = 8) {
    const int d = span.ambient_dim;
    const int k = span.dim();
    std::vector<Vec> pts;
    for (int i = 0; i < k; ++i) {
        pts.push_back(boundary_ray(gauge, span.basis.col(i)));
        pts.push_back(boundary_ray(gauge, Vec(-span.basis.col(i))));
    }
    for (int i = 0; i < per_round; ++i)
        pts.push_back(boundary_ray(gauge, span.basis * rng.unit_vec(k)));

    auto assemble = [&]() {
        Mat m(d, static_cast<int>(pts.size()));
        for (size_t i = 0; i < pts.size(); ++i) m.col(static_cast<int>(i)) = pts[i];
        return convex::john_ellipsoid(m);
    };
    Ellipsoid e = assemble();
    for (int round = 0; round < max_rounds; ++round) {
        Vec ax = convex::axis_lengths(e);
        Mat dirs = convex::axis_directions(e);
        Mat shape = dirs * ax.asDiagonal();  // maps the sphere onto the estimate
        for (int i = 0; i < ax.size(); ++i) {
            pts.push_back(boundary_ray(gauge, dirs.col(i)));
            pts.push_back(boundary_ray(gauge, Vec(-dirs.col(i))));
        }
        for (int i = 0; i < per_round; ++i) {
            Vec u = shape * rng.unit_vec(static_cast<int>(ax.size()));
            if (u.norm() < 1e-14) continue;
            pts.push_back(boundary_ray(gauge, Vec(u.normalized())));
        }
        Ellipsoid next = assemble();
        Vec a0 = convex::axis_lengths(e), a1 = convex::axis_lengths(next);
        bool settled = a0.size() == a1.size();
        for (int i = 0; settled && i < a0.size(); ++i)
            settled = a1(i) <= a0(i) * 1.02 + 1e-12;
        e = next;
        if (settled) break;
    }
    return e;
}

}  // namespace detail

// Labels a symmetric convex body Omega (of jets at one basepoint) with a
// dilation-and-translation invariant subspace V it is transverse to:
//   clip when unbounded -> John ellipsoid -> find an eps-degenerate scale
//   -> stable subspace H -> quasiideal defect -> renormalize H onto a
//   monomial span -> monotonic index set A -> V = span of the complement.
// Returns the label with the smallest transversality constant that passes
// at the working scale, and the measured diagnostics along the way.
inline LabelResult dti_label(const JetSpace& space, const SymmetricBody& omega,
                             const LabelOptions& opts = {}) {
    const int d = space.dim();
    require(convex::body_dim(omega) == d, errc::invalid_input, "label: body dimension mismatch");
    grass::DilationSystem sys = grass::jet_dilation_system(space);
    Rng rng(opts.seed);

    LabelResult out;
    out.zeta = Vec::Ones(space.n());

    Subspace span = convex::body_span(omega);

    auto finish = [&](const std::vector<int>& a_ranks, double scale, const SymmetricBody& measured_body) {
        std::sort(out.monomials.begin(), out.monomials.end(),
                  [&](const MultiIndex& x, const MultiIndex& y) {
                      return space.rank_of(x) < space.rank_of(y);
                  });
        require(grass::is_monotonic(space, a_ranks), errc::invalid_input,
                "label: aligned monomial set is not monotonic; sampling too coarse or the body "
                "is far from Whitney convex");
        std::vector<int> comp = grass::complement_ranks(space, a_ranks);
        out.v.m = space.m();
        out.v.n = space.n();
        out.v.monomials.clear();
        for (int r : comp) out.v.monomials.push_back(space.index(r));
        out.scale = scale;
        Subspace vsub = out.v.subspace();
        convex::TransversalityOptions topts;
        topts.seed = opts.seed;
        convex::TransversalityCert cert = convex::is_transverse(measured_body, vsub, 1e9, topts);
        double need_slice = cert.slice_norm;
        // invert the covering check's safety margin so the same call passes
        // at exactly measured_r: sampled verdicts demand h >= 1/R + margin
        double usable =
            cert.exact ? cert.support_min : cert.support_min - topts.margin_tol;
        double need_support = usable > 0 ? 1.0 / usable : convex::kInf;
        out.measured_r = std::max({1.0, need_slice, need_support});
        return out;
    };

    // degenerate body {0}: every slice is {0} and the complement condition
    // is vacuous, so the full space is a transverse label at R = 1
    if (span.dim() == 0) {
        std::vector<int> a_ranks;  // A empty: V = everything
        return finish(a_ranks, 1.0, omega);
    }

    // detect recession directions and clip as Omega ∩ xi B; random gauges
    // miss them (a slab looks bounded from almost every direction), so read
    // the structure: a subspace body recedes along itself, a quadratic pair
    // along any common null direction of the two forms
    bool unbounded = false;
    if (omega.kind == SymmetricBody::Kind::subspace) {
        unbounded = omega.sub.dim() > 0;
    } else if (omega.kind == SymmetricBody::Kind::quadratic_pair) {
        Eigen::SelfAdjointEigenSolver<Mat> es(omega.qf1 + omega.qf2);
        double top = es.eigenvalues().cwiseAbs().maxCoeff();
        unbounded = es.eigenvalues()(0) <= std::max(top, 1.0) * 1e-12;
    }
    double clip = convex::kInf;
    if (unbounded) {
        auto pregauge = [&](const Vec& x) {
            return std::max(convex::body_gauge(omega, x), x.norm() / opts.unbounded_clip);
        };
        Ellipsoid ejohn =
            detail::inner_john(span, pregauge, opts.boundary_samples * span.dim(), rng);
        clip = 10.0 * convex::axis_lengths(ejohn)(0);
    }
    auto gauge = [&](const Vec& x) {
        double g = convex::body_gauge(omega, x);
        if (clip < convex::kInf) g = std::max(g, x.norm() / clip);
        return g;
    };

    // inner ellipsoid of the (clipped) body; an unclipped ellipsoid is its own
    Ellipsoid e = (omega.kind == SymmetricBody::Kind::ellipsoid && clip == convex::kInf)
                      ? omega.e1
                      : detail::inner_john(span, gauge, opts.boundary_samples * span.dim(), rng);
    out.inner = e;

    // measured convexity coefficient sets the degeneracy tolerance
    WhitneyConvexityOptions wopts;
    wopts.samples = opts.wc_samples;
    wopts.seed = opts.seed + 1;
    wopts.clip_radius = clip;
    out.wc_coefficient = whitney_convexity_coefficient(space, omega, wopts);
    double a_meas = std::min(std::max(1.0, out.wc_coefficient), 1e6);
    double eps = std::min(opts.eps0 / a_meas, 0.45);
    double delta0 = 0.5 * std::pow(eps, 2 * d);
    require(delta0 > 0, errc::cap_exceeded, "label: degeneracy scale underflows");

    // largest scale in [delta0, 1] clear of every moderate-axis window
    std::vector<dyn::DegeneracyInterval> windows = dyn::degeneracy_intervals(e, sys, eps);
    std::vector<double> candidates{1.0, delta0};
    for (const auto& w : windows) {
        candidates.push_back(std::min(1.0, w.lo / (1.0 + 1e-6)));
        candidates.push_back(std::min(1.0, w.hi * (1.0 + 1e-6)));
        for (const auto& w2 : windows) {
            double gap_mid = std::sqrt(w.hi * w2.lo);
            if (std::isfinite(gap_mid) && gap_mid > 0) candidates.push_back(gap_mid);
        }
    }
    double scale = -1.0;
    for (double c : candidates) {
        if (c < delta0 * (1 - 1e-12) || c > 1.0 + 1e-12) continue;
        if (!convex::degeneracy_check(dyn::orbit_ellipsoid(e, sys, c), eps)) continue;
        scale = std::max(scale, std::min(c, 1.0));
    }
    require(scale > 0, errc::invalid_input,
            "label: no degenerate scale in [delta0, 1]; body is far from Whitney convex");

    Subspace h = dyn::extract_stable_subspace(e, sys, scale, scale, eps, 1);
    out.quasiideal_eps = quasiideal_epsilon(space, h, 32, 1e-9, opts.seed + 2);

    double eta = opts.angle_eta;
    if (eta < 0) {
        double cb = 1.0;
        for (int i = 2; i <= space.m() + 1; ++i) cb *= i;
        eta = 1.0 / (32.0 * cb * cb);
    }
    RenormResult rn = renormalize_to_monomial(space, h, eta);
    out.monomials = rn.monomials;
    out.zeta = rn.zeta;

    std::vector<int> a_ranks;
    for (const auto& a : rn.monomials) a_ranks.push_back(space.rank_of(a));
    std::sort(a_ranks.begin(), a_ranks.end());

    SymmetricBody scaled_body = convex::body_ellipsoid(dyn::orbit_ellipsoid(e, sys, scale));
    return finish(a_ranks, scale, scaled_body);
}

}  // namespace wjet::ring
