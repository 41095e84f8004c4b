// Subspace geometry: principal angles, volume angle, dilation signatures,
// monotonic monomial sets, and the transversality corrector map.
//
// Oracles here avoid the code paths under test: the volume angle is
// cross-checked against the product of singular values, signatures against
// hand-built layered bases, and the corrector feasibility against a grid
// search.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "wjet/convexgeom.hpp"
#include "wjet/grassmann.hpp"
#include "wjet/jet.hpp"

using namespace wjet;
using namespace wjet::grass;

namespace {

Subspace random_subspace(Rng& rng, int d, int k) {
    Mat cols = rng.normal_mat(d, k);
    Subspace v = span_of(cols);
    REQUIRE(v.dim() == k);  // generic draws are full rank
    return v;
}

// product of all singular values of the basis Gram matrix; independent
// route to the volume angle
double angle_form_oracle(const Subspace& v, const Subspace& w) {
    if (v.dim() == 0) return 1.0;
    Eigen::JacobiSVD<Mat> svd(Mat(v.basis.transpose() * w.basis));
    double p = 1.0;
    for (int i = 0; i < svd.singularValues().size(); ++i) p *= svd.singularValues()(i);
    return p;
}

}  // namespace

TEST_CASE("maximum principal angle on lines and equal subspaces") {
    Rng rng(501);
    for (int trial = 0; trial < 30; ++trial) {
        int d = rng.uniform_int(2, 7);
        int k = rng.uniform_int(1, d);
        Subspace v = random_subspace(rng, d, k);
        // same subspace through a different spanning set
        Mat mix = rng.normal_mat(k, k);
        Subspace w = span_of(v.basis * mix);
        if (w.dim() != k) continue;
        REQUIRE(principal_angle_max(v, w) < 1e-7);
    }

    Mat e1(2, 1), e2(2, 1);
    e1 << 1, 0;
    e2 << 0, 1;
    CHECK(principal_angle_max(span_of(e1), span_of(e2)) == Catch::Approx(M_PI / 2).margin(1e-12));

    // rotated line against the x-axis: the 1x1 Gram entry is cos(phi)
    for (double phi : {0.0, 0.2, 0.7, 1.1, M_PI / 2}) {
        Mat w(2, 1);
        w << std::cos(phi), std::sin(phi);
        CHECK(principal_angle_max(span_of(e1), span_of(w)) == Catch::Approx(phi).margin(1e-9));
    }

    CHECK_THROWS_AS(principal_angle_max(zero_subspace(2), zero_subspace(2)), error);
    Rng r2(7);
    CHECK_THROWS_AS(principal_angle_max(random_subspace(r2, 3, 1), random_subspace(r2, 3, 2)), error);
}

TEST_CASE("volume angle: frozen value, basis independence, singular value oracle") {
    // V = span{e1,e2}, W = span{e1,(e2+e3)/sqrt 2}: Gram = [[1,0],[0,1/sqrt 2]]
    Mat bv(3, 2), bw(3, 2);
    bv << 1, 0, 0, 1, 0, 0;
    bw << 1, 0, 0, 1 / std::sqrt(2.0), 0, 1 / std::sqrt(2.0);
    Subspace v{3, bv}, w{3, bw};
    CHECK(angle_form_cos(v, w) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
    CHECK(angle_form_cos(v, v) == Catch::Approx(1.0).margin(1e-12));

    Rng rng(502);
    for (int trial = 0; trial < 100; ++trial) {
        int d = rng.uniform_int(2, 8);
        int k = rng.uniform_int(1, d);
        Subspace a = random_subspace(rng, d, k);
        Subspace b = random_subspace(rng, d, k);

        double c = angle_form_cos(a, b);
        CHECK(c == Catch::Approx(angle_form_oracle(a, b)).margin(1e-9));

        // invariance under re-spanning either argument
        Mat mix = rng.normal_mat(k, k);
        Subspace a2 = span_of(a.basis * mix);
        if (a2.dim() == k) CHECK(angle_form_cos(a2, b) == Catch::Approx(c).margin(1e-9));

        // sandwich between cos(theta_max)^k and cos(theta_max)
        double ct = cos_theta_max(a, b);
        CHECK(c <= ct + 1e-9);
        CHECK(c >= std::pow(ct, k) - 1e-9);
    }
}

TEST_CASE("angle symmetry and perpendicular duality") {
    Rng rng(503);
    for (int trial = 0; trial < 100; ++trial) {
        int d = rng.uniform_int(2, 8);
        int k = rng.uniform_int(1, d - 1);
        Subspace v = random_subspace(rng, d, k);
        Subspace w = random_subspace(rng, d, k);
        double c1 = cos_theta_max(v, w);
        CHECK(cos_theta_max(w, v) == Catch::Approx(c1).margin(1e-9));

        Subspace vp = complement(v);
        Subspace wp = complement(w);
        REQUIRE(vp.dim() == d - k);
        REQUIRE(is_orthonormal(vp.basis));
        CHECK((projector(v) + projector(vp) - Mat::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(cos_theta_max(vp, wp) == Catch::Approx(c1).margin(1e-9));
    }
}

TEST_CASE("signature of dilation-invariant subspaces") {
    DilationSystem sys = make_dilation_system({1, 2, 3});
    CHECK(signature(zero_subspace(3), sys) == 0);
    CHECK(signature(full_subspace(3), sys) == 6);
    CHECK(sys.simple());

    Mat b(3, 2);
    b << 1, 0, 0, 0, 0, 1;
    CHECK(signature(Subspace{3, b}, sys) == 4);

    // layer-mixing basis is rejected
    Mat mix(2, 1);
    mix << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    CHECK_THROWS_AS(signature(Subspace{2, mix}, make_dilation_system({1, 2})), error);

    // complement identity and the dilation eigenvalue of the volume form on
    // random layered subspaces
    Rng rng(504);
    for (int trial = 0; trial < 60; ++trial) {
        int d = rng.uniform_int(2, 7);
        std::vector<int> ex(static_cast<size_t>(d));
        for (auto& e : ex) e = rng.uniform_int(1, 4);
        DilationSystem s2 = make_dilation_system(ex);

        // build a dilation-invariant subspace: a random subspace inside each layer
        std::vector<Vec> cols;
        int expect_sgn = 0;
        for (int nu : s2.distinct_layers()) {
            auto coords = s2.layer_coords(nu);
            int ln = static_cast<int>(coords.size());
            int take = rng.uniform_int(0, ln);
            if (take == 0) continue;
            Mat local = la::orthonormalize(rng.normal_mat(ln, take));
            for (int j = 0; j < local.cols(); ++j) {
                Vec c = Vec::Zero(d);
                for (int r = 0; r < ln; ++r) c(coords[static_cast<size_t>(r)]) = local(r, j);
                cols.push_back(c);
            }
            expect_sgn += nu * static_cast<int>(local.cols());
        }
        if (cols.empty()) continue;
        Mat basis(d, static_cast<int>(cols.size()));
        for (size_t j = 0; j < cols.size(); ++j) basis.col(static_cast<int>(j)) = cols[j];
        Subspace v{d, basis};

        CHECK(signature(v, s2) == expect_sgn);
        Subspace vp = complement(v);
        if (vp.dim() > 0) CHECK(signature(vp, s2) == s2.total_signature() - expect_sgn);

        // volume scaling of tau_delta on V equals delta^{-sgn}
        for (double delta : {0.5, 1.3, 2.0}) {
            Mat tb = s2.tau_diag(delta).asDiagonal() * v.basis;
            double volscale = std::sqrt((tb.transpose() * tb).determinant());
            double expect = std::pow(delta, -expect_sgn);
            CHECK(volscale == Catch::Approx(expect).epsilon(1e-9));
        }
    }
}

TEST_CASE("jet dilation system matches the jet rescaling") {
    const auto& space = jets::jetspace(3, 2);
    DilationSystem sys = jet_dilation_system(space);
    REQUIRE(sys.dim == space.dim());
    // constant monomial sits in the deepest layer m, top-degree in layer 1
    CHECK(sys.exponents[0] == 3);
    CHECK(sys.exponents[static_cast<size_t>(space.dim() - 1)] == 1);

    Rng rng(505);
    Vec x = testutil::vec2(0.4, -0.2);
    for (int trial = 0; trial < 20; ++trial) {
        jets::Polynomial p = testutil::random_poly(rng, 3, 2, x);
        double delta = rng.uniform(0.2, 2.0);
        jets::Polynomial q = jets::dilate(p, x, delta);
        Vec direct = sys.tau_diag(delta).asDiagonal() * p.coeffs;
        CHECK((q.coeffs - direct).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("monotonic index sets and the ideal property") {
    const auto& s31 = jets::jetspace(3, 1);
    CHECK(is_monotonic(s31, std::vector<int>{0, 1, 2}));
    CHECK(is_monotonic(s31, std::vector<int>{}));
    CHECK(is_monotonic(s31, std::vector<int>{2}));
    CHECK_FALSE(is_monotonic(s31, std::vector<int>{1}));

    // independent oracle: A is monotonic iff the span of its monomials is
    // closed under jet multiplication by every basis monomial
    Rng rng(506);
    for (auto [m, n] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{4, 1}}) {
        const auto& space = jets::jetspace(m, n);
        Vec x = Vec::Zero(n);
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<int> a;
            for (int i = 0; i < space.dim(); ++i)
                if (rng.uniform() < 0.5) a.push_back(i);

            bool closed = true;
            for (int ai : a) {
                jets::Polynomial pa = jets::monomial(m, n, x, space.index(ai));
                for (int b = 0; b < space.dim() && closed; ++b) {
                    jets::Polynomial pb = jets::monomial(m, n, x, space.index(b));
                    jets::Polynomial prod = jets::jet_multiply(pa, pb, x);
                    for (int c = 0; c < space.dim(); ++c) {
                        if (std::abs(prod.coeffs(c)) > 1e-12 &&
                            std::find(a.begin(), a.end(), c) == a.end()) {
                            closed = false;
                            break;
                        }
                    }
                }
                if (!closed) break;
            }
            CHECK(is_monotonic(space, a) == closed);
        }
    }
}

TEST_CASE("monomial spans and DTI labels") {
    const auto& s22 = jets::jetspace(2, 2);
    Subspace v = monomial_span(s22, {0, 2});
    REQUIRE(v.dim() == 2);
    CHECK(v.basis(0, 0) == 1.0);
    CHECK(v.basis(2, 1) == 1.0);
    CHECK_THROWS_AS(monomial_span(s22, {0, 0}), error);

    // span{1} at (m,n) = (2,2): complement {x,y} is monotonic, so the label
    // is a valid translation-invariant subspace
    DTISubspace lab1{2, 2, {jets::MultiIndex{0, 0}}};
    CHECK(lab1.valid());
    // span{x,y}: complement {1} is not monotonic
    DTISubspace lab2{2, 2, {jets::MultiIndex{1, 0}, jets::MultiIndex{0, 1}}};
    CHECK_FALSE(lab2.valid());
}

TEST_CASE("subspace corrector: trivial cases and the half-flat ellipse") {
    // V full: zero map works
    Mat t0 = subspace_corrector(full_subspace(3), convex::ball_ellipsoid(3), 1.0);
    CHECK(t0.cwiseAbs().maxCoeff() < 1e-12);

    // Omega = unit ball, V = {0}: identity is the canonical answer
    Mat t1 = subspace_corrector(zero_subspace(2), convex::ball_ellipsoid(2), 1.0);
    CHECK((t1 - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-9);

    // V = x-axis, Omega = {x^2/4 + y^2 <= 1}: the corrector for e2 is (0,1).
    // Grid-search oracle: min over a of max(a^2/4 + 1, a^2 + 1) sits at a=0
    // with value 1, so the feasible point of least gauge is (0,1) itself.
    Mat form(2, 2);
    form << 0.25, 0, 0, 1;
    convex::Ellipsoid ell = convex::make_ellipsoid(full_subspace(2), form);
    Mat e1b(2, 1);
    e1b << 1, 0;
    Mat t2 = subspace_corrector(span_of(e1b), ell, 1.0);
    CHECK(t2.col(0).norm() < 1e-12);  // e1 lies in V
    CHECK(t2(0, 1) == Catch::Approx(0.0).margin(1e-7));
    CHECK(t2(1, 1) == Catch::Approx(1.0).margin(1e-7));
}

TEST_CASE("subspace corrector: membership and norm bound on random instances") {
    Rng rng(507);
    for (int trial = 0; trial < 40; ++trial) {
        int d = rng.uniform_int(2, 6);
        int k = rng.uniform_int(0, d - 1);
        Subspace v = k == 0 ? zero_subspace(d) : random_subspace(rng, d, k);

        // random well-conditioned ellipsoid
        Mat a = rng.normal_mat(d, d);
        Mat form = a * a.transpose() + 0.3 * Mat::Identity(d, d);
        convex::Ellipsoid omega = convex::make_ellipsoid(full_subspace(d), form);

        // R large enough that the covering condition is easy to satisfy
        double axmax = convex::axis_lengths(omega).maxCoeff();
        double r_big = 4.0 / std::min(1.0, convex::axis_lengths(omega).minCoeff());
        (void)axmax;
        Mat t = subspace_corrector(v, omega, r_big);

        CHECK(t.operatorNorm() <= d * r_big * (1 + 1e-8));
        Subspace vp = complement(v);
        for (int rep = 0; rep < 5; ++rep) {
            Vec x = rng.normal_vec(d);
            Vec resid = x - t * x;
            if (vp.dim() > 0)
                CHECK((vp.basis.transpose() * resid).norm() < 1e-7 * std::max(1.0, x.norm()));
        }
        for (int j = 0; j < d; ++j) {
            if (t.col(j).norm() == 0) continue;
            CHECK(convex::ellipsoid_gauge(omega, Vec(t.col(j))) <= r_big * (1 + 1e-6));
            CHECK(t.col(j).norm() <= r_big * (1 + 1e-6));
        }
    }

    // infeasible: flat body inside V cannot reach e2
    Mat e1b(2, 1);
    e1b << 1, 0;
    convex::Ellipsoid flat = convex::make_ellipsoid(span_of(e1b), Mat::Identity(1, 1));
    CHECK_THROWS_AS(subspace_corrector(span_of(e1b), flat, 5.0), error);
}
