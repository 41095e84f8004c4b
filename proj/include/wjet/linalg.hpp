#pragma once

// Small deterministic wrappers around Eigen decompositions.
//
// Everything here is policy, not math: fixed sign conventions, fixed
// tolerances, fixed column orders, so that repeated runs (and tests that
// freeze expected values) see bit-identical results.

#include <algorithm>
#include <vector>

#include <Eigen/Dense>

#include "wjet/common.hpp"

namespace wjet::la {

struct Svd {
    Mat u;       // left singular vectors, thin
    Vec sigma;   // singular values, descending
    Mat v;       // right singular vectors, thin
};

// Thin SVD with a fixed sign convention: in each column of U the first
// entry of magnitude > 1e-12 is made positive (the matching V column flips
// with it). JacobiSVD is used throughout the library because its result
// does not depend on blocking or threading.
inline Svd deterministic_svd(const Mat& a) {
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Svd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
    for (int j = 0; j < out.u.cols(); ++j) {
        for (int i = 0; i < out.u.rows(); ++i) {
            const double x = out.u(i, j);
            if (std::abs(x) > 1e-12) {
                if (x < 0) {
                    out.u.col(j) = -out.u.col(j);
                    if (j < out.v.cols()) out.v.col(j) = -out.v.col(j);
                }
                break;
            }
        }
    }
    return out;
}

inline int rank_of(const Mat& a, double rel_tol = rank_rel_tol) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(a);
    const Vec& s = svd.singularValues();
    if (s.size() == 0 || s(0) <= 0) return 0;
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) >= rel_tol * s(0)) ++r;
    return r;
}

// Orthonormal basis of the null space {x : A x = 0}; needs the full V
// factor, which the thin SVD drops for wide matrices.
inline Mat null_space(const Mat& a, double rel_tol = rank_rel_tol) {
    if (a.cols() == 0) return Mat(0, 0);
    if (a.rows() == 0) return Mat::Identity(a.cols(), a.cols());
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
    const Vec& s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (smax > 0 && s(i) >= rel_tol * smax) ++r;
    return svd.matrixV().rightCols(a.cols() - r);
}

// Moore-Penrose pseudoinverse; singular values below rel_cutoff * sigma_max
// are treated as zero.
inline Mat pinv(const Mat& a, double rel_cutoff = 1e-10) {
    if (a.rows() == 0 || a.cols() == 0) return Mat::Zero(a.cols(), a.rows());
    Svd s = deterministic_svd(a);
    const double smax = s.sigma.size() ? s.sigma(0) : 0.0;
    Vec inv = Vec::Zero(s.sigma.size());
    for (int i = 0; i < s.sigma.size(); ++i)
        if (smax > 0 && s.sigma(i) > rel_cutoff * smax) inv(i) = 1.0 / s.sigma(i);
    return s.v * inv.asDiagonal() * s.u.transpose();
}

// Minimum-norm least-squares solution of A x = b.
inline Vec lstsq_min_norm(const Mat& a, const Vec& b, double rel_cutoff = 1e-10) {
    return pinv(a, rel_cutoff) * b;
}

// Orthonormalize the columns of A in order, dropping a column when its
// residual after projection falls below drop_tol times its original norm.
// Two Gram-Schmidt passes per column keep the result orthonormal to
// machine precision even for badly conditioned inputs.
inline Mat orthonormalize(const Mat& a, double drop_tol = ortho_tol) {
    std::vector<Vec> q;
    for (int j = 0; j < a.cols(); ++j) {
        Vec v = a.col(j);
        const double orig = v.norm();
        if (orig == 0.0) continue;
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& u : q) v -= u.dot(v) * u;
        const double res = v.norm();
        if (res <= drop_tol * orig) continue;
        q.push_back(v / res);
    }
    Mat out(a.rows(), static_cast<int>(q.size()));
    for (int j = 0; j < out.cols(); ++j) out.col(j) = q[static_cast<size_t>(j)];
    return out;
}

// Orthonormal basis of the orthogonal complement of the (orthonormal)
// columns of q inside R^d: run the same Gram-Schmidt over [q | I] and keep
// what the identity block contributes.
inline Mat orthonormal_complement(const Mat& q, int d) {
    Mat stacked(d, q.cols() + d);
    if (q.cols() > 0) stacked.leftCols(q.cols()) = q;
    stacked.rightCols(d) = Mat::Identity(d, d);
    Mat all = orthonormalize(stacked);
    return all.rightCols(all.cols() - q.cols());
}

inline Mat solve_spd(const Mat& a, const Mat& b) {
    return Eigen::LLT<Mat>(a).solve(b);
}

}  // namespace wjet::la
