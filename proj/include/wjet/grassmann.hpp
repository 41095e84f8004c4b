#pragma once

// Subspaces of a finite-dimensional real Hilbert space: principal angles,
// the determinant (volume) angle between equidimensional subspaces,
// graded dilation structures and their signatures, and monotonic monomial
// sets (the index sets whose spans are ideals in the jet ring).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "wjet/common.hpp"
#include "wjet/linalg.hpp"
#include "wjet/multiindex.hpp"

namespace wjet::grass {

using jets::JetSpace;
using jets::MultiIndex;

// A linear subspace of R^d stored as an orthonormal basis (d x k, k may be 0).
struct Subspace {
    int ambient_dim = 0;
    Mat basis;  // orthonormal columns

    int dim() const { return static_cast<int>(basis.cols()); }
};

inline bool is_orthonormal(const Mat& b, double tol = ortho_tol) {
    if (b.cols() == 0) return true;
    Mat g = b.transpose() * b;
    return (g - Mat::Identity(b.cols(), b.cols())).cwiseAbs().maxCoeff() <= tol;
}

// Build a subspace from an arbitrary spanning set of column vectors.
inline Subspace span_of(const Mat& cols) {
    require(cols.rows() > 0, errc::invalid_input, "span_of: ambient dimension must be positive");
    Subspace v;
    v.ambient_dim = static_cast<int>(cols.rows());
    v.basis = la::orthonormalize(cols);
    return v;
}

inline Subspace zero_subspace(int d) {
    require(d > 0, errc::invalid_input, "zero_subspace: d must be positive");
    return Subspace{d, Mat::Zero(d, 0)};
}

inline Subspace full_subspace(int d) {
    require(d > 0, errc::invalid_input, "full_subspace: d must be positive");
    return Subspace{d, Mat::Identity(d, d)};
}

inline Subspace complement(const Subspace& v) {
    return Subspace{v.ambient_dim, la::orthonormal_complement(v.basis, v.ambient_dim)};
}

inline Mat projector(const Subspace& v) {
    if (v.dim() == 0) return Mat::Zero(v.ambient_dim, v.ambient_dim);
    return v.basis * v.basis.transpose();
}

inline bool same_subspace(const Subspace& v, const Subspace& w, double tol = 1e-9) {
    if (v.ambient_dim != w.ambient_dim || v.dim() != w.dim()) return false;
    return (projector(v) - projector(w)).cwiseAbs().maxCoeff() <= tol;
}

// cos of the maximum principal angle: the smallest singular value of the
// matrix of pairwise inner products of orthonormal bases.
inline double cos_theta_max(const Subspace& v, const Subspace& w) {
    require(v.ambient_dim == w.ambient_dim, errc::invalid_input,
            "cos_theta_max: ambient dimensions differ");
    require(v.dim() == w.dim(), errc::invalid_input, "cos_theta_max: subspace dimensions differ");
    require(v.dim() >= 1, errc::invalid_input, "cos_theta_max: zero-dimensional input");
    Mat g = v.basis.transpose() * w.basis;
    Eigen::JacobiSVD<Mat> svd(g);
    double c = svd.singularValues()(svd.singularValues().size() - 1);
    return std::clamp(c, 0.0, 1.0);
}

inline double principal_angle_max(const Subspace& v, const Subspace& w) {
    return std::acos(cos_theta_max(v, w));
}

// cos of the angle between the representative k-forms of two k-dimensional
// subspaces. The exterior algebra is never materialized: the value equals
// |det| of the k x k Gram matrix of the two orthonormal bases, which is
// basis-independent because orthonormal bases differ by an orthogonal
// change with |det| = 1. Equals the product of all principal cosines.
inline double angle_form_cos(const Subspace& v, const Subspace& w) {
    require(v.ambient_dim == w.ambient_dim, errc::invalid_input,
            "angle_form_cos: ambient dimensions differ");
    require(v.dim() == w.dim(), errc::invalid_input, "angle_form_cos: subspace dimensions differ");
    if (v.dim() == 0) return 1.0;
    Mat g = v.basis.transpose() * w.basis;
    double d = std::abs(g.determinant());
    return std::clamp(d, 0.0, 1.0);
}

// --- graded dilation structure -------------------------------------------

// tau_delta acts diagonally on R^d, scaling coordinate j by delta^(-nu_j).
// The system is "simple" when all layer exponents are distinct.
struct DilationSystem {
    int dim = 0;
    std::vector<int> exponents;  // nu_j >= 1

    bool simple() const {
        std::set<int> s(exponents.begin(), exponents.end());
        return static_cast<int>(s.size()) == dim;
    }
    int total_signature() const {
        int t = 0;
        for (int nu : exponents) t += nu;
        return t;
    }
    Vec tau_diag(double delta) const {
        Vec d(dim);
        for (int j = 0; j < dim; ++j) d(j) = std::pow(delta, -exponents[j]);
        return d;
    }
    std::vector<int> distinct_layers() const {
        std::set<int> s(exponents.begin(), exponents.end());
        return std::vector<int>(s.begin(), s.end());
    }
    std::vector<int> layer_coords(int nu) const {
        std::vector<int> ix;
        for (int j = 0; j < dim; ++j)
            if (exponents[j] == nu) ix.push_back(j);
        return ix;
    }
};

inline DilationSystem make_dilation_system(std::vector<int> exponents) {
    DilationSystem s;
    s.dim = static_cast<int>(exponents.size());
    s.exponents = std::move(exponents);
    require(s.dim > 0, errc::invalid_input, "dilation system: empty exponent list");
    for (int nu : s.exponents)
        require(nu >= 1, errc::invalid_input, "dilation system: exponents must be >= 1");
    return s;
}

// The dilation structure on a jet space at its basepoint: the coefficient
// direction of (z-x)^alpha sits in the layer of exponent m - |alpha|, so
// the jet dilation from jet.hpp acts by delta^(-nu) on it.
inline DilationSystem jet_dilation_system(const JetSpace& space) {
    std::vector<int> ex(static_cast<size_t>(space.dim()));
    for (int i = 0; i < space.dim(); ++i) ex[static_cast<size_t>(i)] = space.m() - space.order(i);
    return make_dilation_system(std::move(ex));
}

// Image of a subspace under tau_delta (re-orthonormalized).
inline Subspace dilate_subspace(const DilationSystem& sys, double delta, const Subspace& v) {
    require(sys.dim == v.ambient_dim, errc::invalid_input, "dilate_subspace: dimension mismatch");
    require(delta > 0, errc::invalid_input, "dilate_subspace: delta must be positive");
    if (v.dim() == 0) return v;
    // tau_delta is invertible, so the dimension is preserved exactly; use a
    // non-dropping QR because extreme delta makes the columns nearly parallel
    // and a rank-revealing pass would discard one.
    Mat scaled = sys.tau_diag(delta).asDiagonal() * v.basis;
    // column scaling first to tame the dynamic range
    for (int j = 0; j < scaled.cols(); ++j) {
        double nrm = scaled.col(j).norm();
        if (nrm > 0) scaled.col(j) /= nrm;
    }
    Eigen::HouseholderQR<Mat> qr(scaled);
    Mat q = qr.householderQ() * Mat::Identity(scaled.rows(), scaled.cols());
    return Subspace{v.ambient_dim, std::move(q)};
}

// Per-layer intersection dimensions of a dilation-invariant subspace.
// V is dilation-invariant exactly when the ranks of its basis restricted
// to the layers add up to dim V; a layer-mixing basis fails that test.
inline std::vector<int> layer_dims(const Subspace& v, const DilationSystem& sys) {
    require(sys.dim == v.ambient_dim, errc::invalid_input, "layer_dims: dimension mismatch");
    std::vector<int> dims;
    int total = 0;
    for (int nu : sys.distinct_layers()) {
        auto coords = sys.layer_coords(nu);
        Mat block(static_cast<int>(coords.size()), v.dim());
        for (size_t r = 0; r < coords.size(); ++r) block.row(static_cast<int>(r)) = v.basis.row(coords[r]);
        int rk = la::rank_of(block);
        dims.push_back(rk);
        total += rk;
    }
    require(total == v.dim(), errc::invalid_input,
            "signature: subspace is not dilation-invariant (layer-mixing basis)");
    return dims;
}

// sgn(V) = sum over layers of nu * dim(V intersect X_nu).
inline int signature(const Subspace& v, const DilationSystem& sys) {
    auto layers = sys.distinct_layers();
    auto dims = layer_dims(v, sys);
    int s = 0;
    for (size_t i = 0; i < layers.size(); ++i) s += layers[i] * dims[i];
    return s;
}

// --- monomial index sets ---------------------------------------------------

// A is monotonic when alpha in A, beta in M, alpha+beta in M implies
// alpha+beta in A. Equivalently span{m_alpha : alpha in A} is an ideal of
// the jet ring, and the span of the complement is dilation-and-translation
// invariant.
inline bool is_monotonic(const JetSpace& space, const std::vector<int>& ranks) {
    std::vector<char> in(static_cast<size_t>(space.dim()), 0);
    for (int r : ranks) {
        require(r >= 0 && r < space.dim(), errc::invalid_input, "is_monotonic: rank out of range");
        in[static_cast<size_t>(r)] = 1;
    }
    for (int a = 0; a < space.dim(); ++a) {
        if (!in[static_cast<size_t>(a)]) continue;
        for (int b = 0; b < space.dim(); ++b) {
            int s = space.sum_rank(a, b);
            if (s >= 0 && !in[static_cast<size_t>(s)]) return false;
        }
    }
    return true;
}

inline bool is_monotonic(const JetSpace& space, const std::vector<MultiIndex>& idx) {
    std::vector<int> ranks;
    ranks.reserve(idx.size());
    for (const auto& a : idx) ranks.push_back(space.rank_of(a));
    return is_monotonic(space, ranks);
}

// Coordinate subspace of the jet space spanned by the given monomials.
inline Subspace monomial_span(const JetSpace& space, const std::vector<int>& ranks) {
    Mat b = Mat::Zero(space.dim(), static_cast<int>(ranks.size()));
    std::vector<int> sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), errc::invalid_input,
            "monomial_span: duplicate monomial");
    for (size_t j = 0; j < sorted.size(); ++j) {
        require(sorted[j] >= 0 && sorted[j] < space.dim(), errc::invalid_input,
                "monomial_span: rank out of range");
        b(sorted[j], static_cast<int>(j)) = 1.0;
    }
    return Subspace{space.dim(), b};
}

inline std::vector<int> complement_ranks(const JetSpace& space, const std::vector<int>& ranks) {
    std::vector<char> in(static_cast<size_t>(space.dim()), 0);
    for (int r : ranks) in[static_cast<size_t>(r)] = 1;
    std::vector<int> out;
    for (int i = 0; i < space.dim(); ++i)
        if (!in[static_cast<size_t>(i)]) out.push_back(i);
    return out;
}

// Monomial label for a dilation-and-translation invariant subspace:
// V = span{(z-x)^alpha : alpha in the list}. Valid when the complement
// index set is monotonic.
struct DTISubspace {
    int m = 0, n = 0;
    std::vector<MultiIndex> monomials;

    std::vector<int> ranks(const JetSpace& space) const {
        std::vector<int> r;
        r.reserve(monomials.size());
        for (const auto& a : monomials) r.push_back(space.rank_of(a));
        return r;
    }
    Subspace subspace() const {
        const JetSpace& space = jets::jetspace(m, n);
        return monomial_span(space, ranks(space));
    }
    bool valid() const {
        const JetSpace& space = jets::jetspace(m, n);
        return is_monotonic(space, complement_ranks(space, ranks(space)));
    }
};

}  // namespace wjet::grass
