#pragma once

// Symmetric convex bodies: ellipsoids (possibly degenerate, stored as a
// span plus a positive-definite form on it), hulls of symmetric point
// sets, subspaces, and intersections of two quadratic constraints.
// Provides the John (maximum-volume inscribed) ellipsoid, support
// functions, and the quantitative transversality test of a body against a
// subspace.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "wjet/common.hpp"
#include "wjet/grassmann.hpp"
#include "wjet/linalg.hpp"
#include "wjet/rng.hpp"

namespace wjet::convex {

using grass::Subspace;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// {S z : z' F z <= 1} where S is an orthonormal basis of the span and F is
// symmetric positive definite in span coordinates.
struct Ellipsoid {
    Subspace span;
    Mat form;

    int ambient_dim() const { return span.ambient_dim; }
    int rank() const { return span.dim(); }
};

inline Ellipsoid make_ellipsoid(const Subspace& span, const Mat& form) {
    require(form.rows() == span.dim() && form.cols() == span.dim(), errc::invalid_input,
            "ellipsoid: form size does not match span dimension");
    if (span.dim() > 0) {
        require((form - form.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + form.cwiseAbs().maxCoeff()),
                errc::invalid_input, "ellipsoid: form not symmetric");
    }
    Ellipsoid e{span, 0.5 * (form + form.transpose())};
    if (span.dim() > 0) {
        Eigen::SelfAdjointEigenSolver<Mat> es(e.form);
        require(es.eigenvalues().minCoeff() > 0, errc::invalid_input,
                "ellipsoid: form not positive definite on the span");
    }
    return e;
}

inline Ellipsoid ball_ellipsoid(int d, double r = 1.0) {
    require(r > 0, errc::invalid_input, "ball: radius must be positive");
    return Ellipsoid{grass::full_subspace(d), Mat::Identity(d, d) / (r * r)};
}

// Principal axis lengths 1/sqrt(eigenvalue), descending.
inline Vec axis_lengths(const Ellipsoid& e) {
    if (e.rank() == 0) return Vec(0);
    Eigen::SelfAdjointEigenSolver<Mat> es(e.form);
    Vec ax(es.eigenvalues().size());
    for (int i = 0; i < ax.size(); ++i) ax(i) = 1.0 / std::sqrt(es.eigenvalues()(i));
    return ax;
}

// Axis directions in ambient coordinates, matching axis_lengths order.
inline Mat axis_directions(const Ellipsoid& e) {
    if (e.rank() == 0) return Mat(e.ambient_dim(), 0);
    Eigen::SelfAdjointEigenSolver<Mat> es(e.form);
    return e.span.basis * es.eigenvectors();
}

inline Ellipsoid scale_ellipsoid(const Ellipsoid& e, double lambda) {
    require(lambda > 0, errc::invalid_input, "scale_ellipsoid: factor must be positive");
    return Ellipsoid{e.span, e.form / (lambda * lambda)};
}

// Membership gauge: min {t >= 0 : x in t*E}, +inf when x leaves the span.
inline double ellipsoid_gauge(const Ellipsoid& e, const Vec& x, double span_tol = 1e-9) {
    const double nx = x.norm();
    if (nx == 0) return 0.0;
    Vec z = e.span.dim() > 0 ? Vec(e.span.basis.transpose() * x) : Vec(Vec::Zero(0));
    Vec back = e.span.dim() > 0 ? Vec(e.span.basis * z) : Vec(Vec::Zero(x.size()));
    if ((x - back).norm() > span_tol * nx) return kInf;
    if (e.rank() == 0) return kInf;
    return std::sqrt(std::max(0.0, z.dot(e.form * z)));
}

inline double ellipsoid_support(const Ellipsoid& e, const Vec& u) {
    if (e.rank() == 0) return 0.0;
    Vec uu = e.span.basis.transpose() * u;
    return std::sqrt(std::max(0.0, uu.dot(la::solve_spd(e.form, Mat(uu)).col(0))));
}

// Image of an ellipsoid under an invertible linear map.
inline Ellipsoid map_ellipsoid(const Mat& a, const Ellipsoid& e) {
    if (e.rank() == 0) return Ellipsoid{grass::zero_subspace(static_cast<int>(a.rows())), Mat(0, 0)};
    Subspace span = grass::span_of(a * e.span.basis);
    Mat m = span.basis.transpose() * a * e.span.basis;  // invertible span-to-span change
    Mat minv = m.inverse();
    return make_ellipsoid(span, minv.transpose() * e.form * minv);
}

// --- symmetric bodies -------------------------------------------------------

struct SymmetricBody {
    enum class Kind { ellipsoid, subspace, hull, intersection, quadratic_pair };
    Kind kind = Kind::ellipsoid;
    Ellipsoid e1, e2;  // ellipsoid uses e1; intersection uses both
    Subspace sub;      // subspace kind
    Mat points;        // hull kind: columns, hull of +-columns
    Mat qf1, qf2;      // quadratic_pair: ambient PSD forms, body = {x'F1 x <= 1} ∩ {x'F2 x <= 1}
};

inline SymmetricBody body_ellipsoid(const Ellipsoid& e) {
    SymmetricBody b;
    b.kind = SymmetricBody::Kind::ellipsoid;
    b.e1 = e;
    return b;
}
inline SymmetricBody body_ball(int d, double r = 1.0) { return body_ellipsoid(ball_ellipsoid(d, r)); }
inline SymmetricBody body_subspace(const Subspace& v) {
    SymmetricBody b;
    b.kind = SymmetricBody::Kind::subspace;
    b.sub = v;
    return b;
}
inline SymmetricBody body_hull(const Mat& points) {
    require(points.rows() > 0 && points.cols() > 0, errc::invalid_input, "hull: no points");
    SymmetricBody b;
    b.kind = SymmetricBody::Kind::hull;
    b.points = points;
    return b;
}
inline SymmetricBody body_intersection(const Ellipsoid& a, const Ellipsoid& b2) {
    require(a.ambient_dim() == b2.ambient_dim(), errc::invalid_input,
            "intersection: ambient dimensions differ");
    SymmetricBody b;
    b.kind = SymmetricBody::Kind::intersection;
    b.e1 = a;
    b.e2 = b2;
    return b;
}

// Intersection of two quadratic constraints {x'F x <= 1} on the full
// ambient space; the forms may be merely positive semidefinite (slabs,
// cylinders), so the body can be unbounded in some directions.
inline SymmetricBody body_quadratic_pair(const Mat& f1, const Mat& f2) {
    require(f1.rows() == f1.cols() && f2.rows() == f2.cols() && f1.rows() == f2.rows(),
            errc::invalid_input, "quadratic_pair: forms must be square of equal size");
    SymmetricBody b;
    b.kind = SymmetricBody::Kind::quadratic_pair;
    b.qf1 = 0.5 * (f1 + f1.transpose());
    b.qf2 = 0.5 * (f2 + f2.transpose());
    return b;
}

inline int body_dim(const SymmetricBody& b) {
    switch (b.kind) {
        case SymmetricBody::Kind::ellipsoid: return b.e1.ambient_dim();
        case SymmetricBody::Kind::subspace: return b.sub.ambient_dim;
        case SymmetricBody::Kind::hull: return static_cast<int>(b.points.rows());
        case SymmetricBody::Kind::intersection: return b.e1.ambient_dim();
        case SymmetricBody::Kind::quadratic_pair: return static_cast<int>(b.qf1.rows());
    }
    return 0;
}

inline Subspace intersect_subspaces(const Subspace& v, const Subspace& w);

// Affine hull of the body through 0: the smallest subspace containing it.
// Every kind keeps an interior point of itself within this span.
inline Subspace body_span(const SymmetricBody& b) {
    switch (b.kind) {
        case SymmetricBody::Kind::ellipsoid: return b.e1.span;
        case SymmetricBody::Kind::subspace: return b.sub;
        case SymmetricBody::Kind::hull: return grass::span_of(b.points);
        case SymmetricBody::Kind::intersection: return intersect_subspaces(b.e1.span, b.e2.span);
        case SymmetricBody::Kind::quadratic_pair:
            return grass::full_subspace(static_cast<int>(b.qf1.rows()));
    }
    return grass::zero_subspace(body_dim(b));
}

inline Subspace intersect_subspaces(const Subspace& v, const Subspace& w) {
    require(v.ambient_dim == w.ambient_dim, errc::invalid_input,
            "intersect_subspaces: ambient dimensions differ");
    const int d = v.ambient_dim;
    if (v.dim() == d) return w;
    if (w.dim() == d) return v;
    if (v.dim() == 0 || w.dim() == 0) return grass::zero_subspace(d);
    Mat k(2 * d, d);
    k.topRows(d) = Mat::Identity(d, d) - grass::projector(v);
    k.bottomRows(d) = Mat::Identity(d, d) - grass::projector(w);
    return Subspace{d, la::null_space(k)};
}

// Quadratic form of the slice E on a subspace w of its span (pass the
// intersection with the span first when unsure); returns the form in the
// coordinates of w.basis.
inline Mat slice_form(const Ellipsoid& e, const Subspace& w) {
    Mat t = e.span.basis.transpose() * w.basis;
    return t.transpose() * e.form * t;
}

namespace detail {

// c(t) = u' (sum_i t_i G_i)^{-1} u for PSD forms G_i, evaluated through an
// eigendecomposition so that a singular blend is detected: a kernel
// component along u means the body is unbounded in that direction (+inf).
inline double blend_quadratic(const std::vector<Mat>& forms, const Vec& t_weights, const Vec& u) {
    Mat m = Mat::Zero(u.size(), u.size());
    for (size_t i = 0; i < forms.size(); ++i) m += t_weights(static_cast<int>(i)) * forms[i];
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    const double lmax = es.eigenvalues().size() ? es.eigenvalues().maxCoeff() : 0.0;
    double c = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()(i);
        const double p = std::pow(es.eigenvectors().col(i).dot(u), 2);
        if (lam <= 1e-14 * std::max(lmax, 1.0)) {
            if (p > 1e-20 * u.squaredNorm()) return kInf;
        } else {
            c += p / lam;
        }
    }
    return c;
}

inline double min_blend_1d(const std::function<double(double)>& f, double lo, double hi, int iters = 120) {
    double a = lo, b = hi;
    // golden-section on a convex function
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return std::min(f1, f2);
}

inline double support_blend(const std::vector<Mat>& forms, const Vec& u) {
    const int k = static_cast<int>(forms.size());
    if (u.norm() == 0) return 0.0;
    if (k == 1) return std::sqrt(std::max(0.0, u.dot(la::solve_spd(forms[0], Mat(u)).col(0))));
    const double eps = 1e-12;
    if (k == 2) {
        auto f = [&](double t) {
            Vec w(2);
            w << t, 1.0 - t;
            return blend_quadratic(forms, w, u);
        };
        double best = min_blend_1d(f, eps, 1.0 - eps);
        return std::sqrt(std::max(0.0, best));
    }
    // k == 3: nested golden-section over the simplex
    auto inner = [&](double a) {
        auto f = [&](double b) {
            Vec w(3);
            w << a, b * (1.0 - a), (1.0 - b) * (1.0 - a);
            return blend_quadratic(forms, w, u);
        };
        return min_blend_1d(f, eps, 1.0 - eps, 80);
    };
    double best = min_blend_1d(inner, eps, 1.0 - eps, 80);
    return std::sqrt(std::max(0.0, best));
}

// Collect the quadratic constraints of a body restricted to the common
// span. Returns false when the body is not made of quadratic constraints.
inline bool quadratic_constraints(const SymmetricBody& b, Subspace& span_out, std::vector<Mat>& forms_out) {
    if (b.kind == SymmetricBody::Kind::ellipsoid) {
        span_out = b.e1.span;
        forms_out = {b.e1.form};
        return true;
    }
    if (b.kind == SymmetricBody::Kind::intersection) {
        span_out = intersect_subspaces(b.e1.span, b.e2.span);
        if (span_out.dim() == 0) {
            forms_out.clear();
            return true;
        }
        forms_out = {slice_form(b.e1, span_out), slice_form(b.e2, span_out)};
        return true;
    }
    if (b.kind == SymmetricBody::Kind::quadratic_pair) {
        span_out = grass::full_subspace(static_cast<int>(b.qf1.rows()));
        forms_out = {b.qf1, b.qf2};
        return true;
    }
    return false;
}

}  // namespace detail

// Support function h(u) = max {<u,x> : x in body}. Unit u is expected but
// not enforced beyond nonzero; degenerate directions give the reduced
// value. Subspace bodies report +inf when u has a component along them.
inline double support(const SymmetricBody& b, const Vec& u) {
    switch (b.kind) {
        case SymmetricBody::Kind::ellipsoid:
            return ellipsoid_support(b.e1, u);
        case SymmetricBody::Kind::subspace: {
            if (b.sub.dim() == 0) return 0.0;
            double along = (b.sub.basis.transpose() * u).norm();
            return along > 1e-12 * std::max(1.0, u.norm()) ? kInf : 0.0;
        }
        case SymmetricBody::Kind::hull: {
            double h = 0.0;
            for (int j = 0; j < b.points.cols(); ++j) h = std::max(h, std::abs(b.points.col(j).dot(u)));
            return h;
        }
        case SymmetricBody::Kind::intersection:
        case SymmetricBody::Kind::quadratic_pair: {
            Subspace span;
            std::vector<Mat> forms;
            detail::quadratic_constraints(b, span, forms);
            if (span.dim() == 0) return 0.0;
            Vec uu = span.basis.transpose() * u;
            return detail::support_blend(forms, uu);
        }
    }
    return 0.0;
}

// Membership gauge of the body (min t >= 0 with x in t*body). Supported for
// every kind except finite hulls.
inline double body_gauge(const SymmetricBody& b, const Vec& x) {
    switch (b.kind) {
        case SymmetricBody::Kind::ellipsoid:
            return ellipsoid_gauge(b.e1, x);
        case SymmetricBody::Kind::subspace: {
            if (x.norm() == 0) return 0.0;
            Vec proj = b.sub.dim() > 0 ? Vec(b.sub.basis * (b.sub.basis.transpose() * x)) : Vec(Vec::Zero(x.size()));
            return (x - proj).norm() <= 1e-9 * x.norm() ? 0.0 : kInf;
        }
        case SymmetricBody::Kind::hull:
            fail(errc::invalid_input, "body_gauge: hull gauge not supported");
        case SymmetricBody::Kind::intersection:
            return std::max(ellipsoid_gauge(b.e1, x), ellipsoid_gauge(b.e2, x));
        case SymmetricBody::Kind::quadratic_pair: {
            double g1 = std::max(0.0, x.dot(b.qf1 * x));
            double g2 = std::max(0.0, x.dot(b.qf2 * x));
            return std::sqrt(std::max(g1, g2));
        }
    }
    return kInf;
}

// --- John ellipsoid ---------------------------------------------------------

// Maximum-volume inscribed ellipsoid of hull(+-points), restricted to the
// span of the points. Runs the Khachiyan barycentric ascent (with away
// steps) for the dual minimum-volume enclosing problem on the point set;
// the inscribed ellipsoid {x : x' M(w)^{-1} x <= 1} built from the weight
// matrix M(w) = sum_i w_i p_i p_i' is contained in the hull for every
// weight vector, and the termination criterion bounds the sandwich factor
// by sqrt(k) + slack.
inline Ellipsoid john_ellipsoid(const Mat& points, double rel_tol = 1e-8, int max_iter = 100000) {
    require(points.rows() > 0 && points.cols() > 0, errc::invalid_input, "john_ellipsoid: no points");
    Subspace span = grass::span_of(points);
    require(span.dim() >= 1, errc::invalid_input, "john_ellipsoid: all points are zero");
    const int k = span.dim();
    Mat z = span.basis.transpose() * points;  // k x N, sign of each column irrelevant
    const int N = static_cast<int>(z.cols());

    Vec w = Vec::Constant(N, 1.0 / N);
    Mat m = z * w.asDiagonal() * z.transpose();
    const double tol = rel_tol;
    for (int it = 0; it < max_iter; ++it) {
        if (it % 128 == 0) m = z * w.asDiagonal() * z.transpose();
        Mat minv_z = la::solve_spd(m, z);
        double kmax = -1.0, kmin = kInf;
        int imax = 0, imin = 0;
        for (int i = 0; i < N; ++i) {
            double kappa = z.col(i).dot(minv_z.col(i));
            if (kappa > kmax) {
                kmax = kappa;
                imax = i;
            }
            if (w(i) > 0 && kappa < kmin) {
                kmin = kappa;
                imin = i;
            }
        }
        const bool up_done = kmax <= k * (1.0 + tol);
        const bool down_done = kmin >= k * (1.0 - tol);
        if (up_done && down_done) break;
        if (kmax - k >= k - kmin) {
            double beta = (kmax - k) / (k * (kmax - 1.0));
            w *= (1.0 - beta);
            w(imax) += beta;
            m = (1.0 - beta) * m + beta * z.col(imax) * z.col(imax).transpose();
        } else {
            // away step: the line-search optimum is (k-kappa)/(k(kappa-1))
            // when kappa_min > 1; otherwise log det keeps growing and the
            // step is capped where the weight hits zero (drop step)
            double cap = w(imin) < 1.0 ? w(imin) / (1.0 - w(imin)) : kInf;
            double beta = kmin > 1.0 + 1e-12 ? (k - kmin) / (k * (kmin - 1.0)) : kInf;
            beta = std::max(0.0, std::min(beta, cap));
            w *= (1.0 + beta);
            w(imin) -= beta;
            m = (1.0 + beta) * m - beta * z.col(imin) * z.col(imin).transpose();
        }
    }
    m = z * w.asDiagonal() * z.transpose();
    Mat form = m.inverse();
    return make_ellipsoid(span, 0.5 * (form + form.transpose()));
}

// --- degeneracy -------------------------------------------------------------

// True iff every principal axis length lies outside [eps, 1/eps].
inline bool degeneracy_check(const Ellipsoid& e, double eps) {
    require(eps > 0 && eps < 0.5, errc::invalid_input, "degeneracy_check: eps must lie in (0, 1/2)");
    Vec ax = axis_lengths(e);
    for (int i = 0; i < ax.size(); ++i)
        if (ax(i) >= eps && ax(i) <= 1.0 / eps) return false;
    return true;
}

// --- transversality ---------------------------------------------------------

// Max norm over the slice body∩V (the quantity that must be <= R for
// condition (1) of R-transversality).
inline double slice_max_norm(const SymmetricBody& b, const Subspace& v) {
    if (v.dim() == 0) return 0.0;
    switch (b.kind) {
        case SymmetricBody::Kind::subspace: {
            Subspace meet = intersect_subspaces(b.sub, v);
            return meet.dim() > 0 ? kInf : 0.0;
        }
        case SymmetricBody::Kind::ellipsoid: {
            Subspace meet = intersect_subspaces(b.e1.span, v);
            if (meet.dim() == 0) return 0.0;
            Mat g = slice_form(b.e1, meet);
            Eigen::SelfAdjointEigenSolver<Mat> es(g);
            double lmin = es.eigenvalues().minCoeff();
            return lmin > 0 ? 1.0 / std::sqrt(lmin) : kInf;
        }
        case SymmetricBody::Kind::intersection:
        case SymmetricBody::Kind::quadratic_pair: {
            Subspace span;
            std::vector<Mat> forms;
            detail::quadratic_constraints(b, span, forms);
            Subspace meet = intersect_subspaces(span, v);
            if (meet.dim() == 0) return 0.0;
            Mat t1 = span.basis.transpose() * meet.basis;
            Mat g1 = t1.transpose() * forms[0] * t1;
            Mat g2 = t1.transpose() * forms[1] * t1;
            // max norm = 1/sqrt(max over the blend of the smallest
            // eigenvalue); exact for two forms by the S-procedure
            auto neg_lmin = [&](double t) {
                Mat g = t * g1 + (1.0 - t) * g2;
                Eigen::SelfAdjointEigenSolver<Mat> es(g);
                return -es.eigenvalues().minCoeff();
            };
            double best = -detail::min_blend_1d(neg_lmin, 0.0, 1.0);
            return best > 0 ? 1.0 / std::sqrt(best) : kInf;
        }
        case SymmetricBody::Kind::hull:
            fail(errc::invalid_input, "slice_max_norm: hull slices not supported");
    }
    return kInf;
}

struct TransversalityOptions {
    int dirs_per_dim = 64;
    int ascent_steps = 20;
    uint64_t seed = 0;
    double margin_tol = 1e-6;
};

struct TransversalityCert {
    bool transverse = false;
    bool cond_slice = false;    // body∩V inside R*B
    bool cond_support = false;  // projection of body∩B onto V-perp covers B/R
    double slice_norm = 0.0;    // measured max norm of body∩V
    double support_min = 0.0;   // measured min over unit u in V-perp of h_{body∩B}(u)
    bool exact = false;         // support minimum found by linear algebra, not sampling
};

// R-transversality of a symmetric body to a subspace in the standard
// coordinates (unit ball = Hilbert ball; rescale coordinates first for a
// scaled norm). Condition (1) is an eigenvalue computation. Condition (2)
// minimizes the support of body∩B over unit directions in V-perp: exactly
// for subspace bodies, otherwise by seeded direction sampling plus a few
// steps of projected descent; the sampled verdict is conservative by
// margin_tol.
inline TransversalityCert is_transverse(const SymmetricBody& b, const Subspace& v, double R,
                                        const TransversalityOptions& opts = {}) {
    require(R >= 1.0, errc::invalid_input, "is_transverse: R must be >= 1");
    const int d = body_dim(b);
    require(d == v.ambient_dim, errc::invalid_input, "is_transverse: dimension mismatch");
    TransversalityCert cert;

    cert.slice_norm = slice_max_norm(b, v);
    cert.cond_slice = cert.slice_norm <= R * (1.0 + 1e-9);

    Subspace vperp = grass::complement(v);
    const int q = vperp.dim();
    if (q == 0) {
        cert.cond_support = true;
        cert.support_min = kInf;
        cert.exact = true;
        cert.transverse = cert.cond_slice;
        return cert;
    }

    if (b.kind == SymmetricBody::Kind::subspace) {
        // h_{U∩B}(u) = |proj_U u|; the minimum over unit u in V-perp is the
        // smallest singular value of U' * Vperp.
        if (b.sub.dim() == 0) {
            cert.support_min = 0.0;
        } else {
            Mat g = b.sub.basis.transpose() * vperp.basis;
            if (g.rows() < g.cols()) {
                cert.support_min = 0.0;  // cannot cover V-perp
            }
            if (g.rows() >= g.cols()) {
                Eigen::JacobiSVD<Mat> svd(g);
                cert.support_min = svd.singularValues()(svd.singularValues().size() - 1);
            }
        }
        cert.exact = true;
        cert.cond_support = cert.support_min >= 1.0 / R - 1e-12;
        cert.transverse = cert.cond_slice && cert.cond_support;
        return cert;
    }

    // body∩B as a list of quadratic constraints on the common span
    Subspace span;
    std::vector<Mat> forms;
    bool ok = detail::quadratic_constraints(b, span, forms);
    require(ok, errc::invalid_input, "is_transverse: hull bodies not supported");
    std::vector<Mat> all = forms;
    if (span.dim() > 0) all.push_back(Mat::Identity(span.dim(), span.dim()));

    auto h_of = [&](const Vec& u_perp_coords) {
        Vec u = vperp.basis * u_perp_coords;
        if (span.dim() == 0) return 0.0;
        Vec uu = span.basis.transpose() * u;
        return detail::support_blend(all, uu);
    };

    Rng rng(opts.seed);
    const int ndir = opts.dirs_per_dim * q;
    double best = kInf;
    Vec best_u = Vec::Zero(q);
    for (int i = 0; i < ndir; ++i) {
        Vec u = rng.unit_vec(q);
        double h = h_of(u);
        if (h < best) {
            best = h;
            best_u = u;
        }
    }
    // projected descent from the best sampled direction
    Vec u = best_u;
    double fu = best;
    const double fd_step = 1e-5;
    for (int step = 0; step < opts.ascent_steps; ++step) {
        Vec g(q);
        for (int i = 0; i < q; ++i) {
            Vec up = u, um = u;
            up(i) += fd_step;
            um(i) -= fd_step;
            g(i) = (h_of(up / up.norm()) - h_of(um / um.norm())) / (2 * fd_step);
        }
        double eta = 0.25;
        bool moved = false;
        for (int tries = 0; tries < 8; ++tries) {
            Vec cand = u - eta * g;
            double cn = cand.norm();
            if (cn < 1e-12) break;
            cand /= cn;
            double fc = h_of(cand);
            if (fc < fu) {
                u = cand;
                fu = fc;
                moved = true;
                break;
            }
            eta *= 0.5;
        }
        if (!moved) break;
    }
    cert.support_min = std::min(best, fu);
    cert.cond_support = cert.support_min >= 1.0 / R + opts.margin_tol;
    cert.transverse = cert.cond_slice && cert.cond_support;
    return cert;
}

}  // namespace wjet::convex

namespace wjet::grass {

// Constructive corrector from the covering half of R-transversality: for
// each basis vector e_j pick w_j in R*(Omega∩B) with e_j - w_j in V, and
// set T x = sum <x,e_j> w_j. Then x - Tx in V for all x and |T| <= d*R.
// Each w_j is found by minimizing max(gauge_Omega, |.|) over the affine
// set {proj_{V-perp} w = proj_{V-perp} e_j}; the minimax of the two convex
// quadratics is located by bisection on the blend weight.
inline Mat subspace_corrector(const Subspace& v, const convex::Ellipsoid& omega, double R) {
    const int d = v.ambient_dim;
    require(omega.ambient_dim() == d, errc::invalid_input, "subspace_corrector: dimension mismatch");
    require(R >= 1.0, errc::invalid_input, "subspace_corrector: R must be >= 1");
    Subspace vperp = complement(v);
    Mat t_out = Mat::Zero(d, d);
    if (vperp.dim() == 0) return t_out;  // V full: T = 0
    const Mat& s = omega.span.basis;     // d x sdim
    const int sdim = omega.rank();
    const Mat& c = vperp.basis;  // d x q
    Mat a = c.transpose() * s;   // q x sdim

    Mat nullsp = la::null_space(a);  // sdim x p
    Mat apinv = la::pinv(a);

    for (int j = 0; j < d; ++j) {
        Vec target = c.transpose() * Vec::Unit(d, j);
        if (target.norm() <= 1e-13) continue;  // e_j in V, w_j = 0
        Vec z0 = apinv * target;
        require((a * z0 - target).norm() <= 1e-8 * std::max(1.0, target.norm()), errc::invalid_input,
                "subspace_corrector: no feasible direction inside the body span");
        const int p = static_cast<int>(nullsp.cols());
        auto q1 = [&](const Vec& y) {
            Vec z = z0 + nullsp * y;
            return z.dot(omega.form * z);
        };
        auto q2 = [&](const Vec& y) {
            Vec z = z0 + nullsp * y;
            return z.squaredNorm();
        };
        Vec ybest;
        if (p == 0) {
            ybest = Vec::Zero(0);
        } else {
            // argmin of q2 and of q1 over y
            Vec ya = -nullsp.transpose() * z0;
            Mat h1 = nullsp.transpose() * omega.form * nullsp;
            Vec yb = la::solve_spd(h1, Mat(-nullsp.transpose() * (omega.form * z0))).col(0);
            if (q1(ya) <= q2(ya) + 1e-14) {
                ybest = ya;
            } else if (q2(yb) <= q1(yb) + 1e-14) {
                ybest = yb;
            } else {
                double lo = 0.0, hi = 1.0;
                Vec y;
                for (int it = 0; it < 200; ++it) {
                    double t = 0.5 * (lo + hi);
                    Mat h = t * h1 + (1.0 - t) * Mat::Identity(p, p);
                    Vec rhs = -(t * (nullsp.transpose() * (omega.form * z0)) + (1.0 - t) * (nullsp.transpose() * z0));
                    y = la::solve_spd(h, Mat(rhs)).col(0);
                    if (q1(y) > q2(y))
                        lo = t;  // weight the gauge more
                    else
                        hi = t;
                }
                ybest = y;
            }
        }
        double val = std::sqrt(std::max(q1(ybest), q2(ybest)));
        require(val <= R * (1.0 + 1e-9) + 1e-9, errc::invalid_input,
                "subspace_corrector: no feasible point within R (transversality precondition fails)");
        Vec w = s * (z0 + nullsp * ybest);
        t_out.col(j) = w;
    }
    return t_out;
}

}  // namespace wjet::grass
