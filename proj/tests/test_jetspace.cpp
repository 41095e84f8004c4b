#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include <wjet/jet.hpp>

using namespace wjet;
using namespace wjet::jets;
using testutil::random_homogeneous_poly;
using testutil::random_poly;
using testutil::vec1;
using testutil::vec2;

namespace {

// Oracle: count multi-indices with |alpha| <= m-1 by nested brute force,
// entirely independent of the enumeration code.
int brute_count(int m, int n) {
    std::vector<int> e(n, 0);
    int count = 0;
    while (true) {
        int total = 0;
        for (int v : e) total += v;
        if (total <= m - 1) ++count;
        int i = 0;
        for (; i < n; ++i) {
            if (e[i] < m - 1) {
                ++e[i];
                break;
            }
            e[i] = 0;
        }
        if (i == n) break;
    }
    return count;
}

// Oracle for 1D jet products: plain convolution of coefficient arrays about
// the same basepoint, truncated at degree m-1.
std::vector<double> conv1d_truncated(const std::vector<double>& a, const std::vector<double>& b,
                                     int m) {
    std::vector<double> out(m, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (i + j < static_cast<std::size_t>(m)) out[i + j] += a[i] * b[j];
    return out;
}

} // namespace

TEST_CASE("multiindex_set enumerates graded-lex with the right cardinality") {
    auto s22 = multiindex_set(2, 2);
    REQUIRE(s22.size() == 3);
    CHECK(s22[0].e == std::vector<int>{0, 0});
    CHECK(s22[1].e == std::vector<int>{1, 0});
    CHECK(s22[2].e == std::vector<int>{0, 1});

    auto s13 = multiindex_set(1, 3);
    REQUIRE(s13.size() == 1);
    CHECK(s13[0].e == std::vector<int>{0, 0, 0});

    CHECK(multiindex_set(3, 2).size() == static_cast<std::size_t>(brute_count(3, 2)));
    CHECK(multiindex_set(3, 2).size() == 6);
    for (int m = 1; m <= 5; ++m)
        for (int n = 1; n <= 3; ++n) {
            auto s = multiindex_set(m, n);
            CHECK(s.size() == static_cast<std::size_t>(brute_count(m, n)));
            CHECK(s.size() == static_cast<std::size_t>(jet_dim(m, n)));
            for (std::size_t i = 0; i + 1 < s.size(); ++i) CHECK(graded_lex_less(s[i], s[i + 1]));
        }
}

TEST_CASE("rank is a bijection onto 0..D-1") {
    const JetSpace& sp = jetspace(4, 3);
    for (int i = 0; i < sp.dim(); ++i) CHECK(sp.rank_of(sp.index(i)) == i);
}

TEST_CASE("dimension cap refuses oversized spaces") {
    CHECK_THROWS_AS(multiindex_set(100, 10), error);
    try {
        multiindex_set(100, 10);
    } catch (const error& e) {
        CHECK(e.code() == errc::cap_exceeded);
    }
}

TEST_CASE("jet_multiply: ring identity and the hand example") {
    Rng rng(7);
    Vec x0 = vec1(0.0);

    // P = 1 is the unit.
    Polynomial one = constant_poly(3, 2, vec2(0, 0), 1.0);
    Polynomial q = random_poly(rng, 3, 2, vec2(0, 0));
    Polynomial prod = jet_multiply(one, q, vec2(0, 0));
    CHECK((prod.coeffs - q.coeffs).norm() < 1e-14);

    // (1+t) (.) (1+t) = 1+2t at m=2: the t^2 term is dropped.
    Polynomial p = zero_poly(2, 1, x0);
    p.coeffs << 1.0, 1.0;
    Polynomial r = jet_multiply(p, p, x0);
    auto expect = conv1d_truncated({1.0, 1.0}, {1.0, 1.0}, 2);
    REQUIRE(expect.size() == 2);
    CHECK(r.coeffs[0] == Catch::Approx(expect[0]));
    CHECK(r.coeffs[1] == Catch::Approx(expect[1]));
    CHECK(r.coeffs[0] == Catch::Approx(1.0));
    CHECK(r.coeffs[1] == Catch::Approx(2.0));
}

TEST_CASE("jet_multiply matches 1D convolution oracle on random inputs") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        int m = 2 + rng.uniform_int(0, 3);
        Vec x0 = vec1(rng.normal());
        Polynomial p = random_poly(rng, m, 1, x0), q = random_poly(rng, m, 1, x0);
        std::vector<double> a(p.coeffs.data(), p.coeffs.data() + p.coeffs.size());
        std::vector<double> b(q.coeffs.data(), q.coeffs.data() + q.coeffs.size());
        auto expect = conv1d_truncated(a, b, m);
        Polynomial r = jet_multiply(p, q, x0);
        for (int i = 0; i < m; ++i) CHECK(r.coeffs[i] == Catch::Approx(expect[i]).margin(1e-12));
    }
}

TEST_CASE("jet_multiply is bilinear, commutative, associative") {
    Rng rng(3);
    Vec x = vec2(0.3, -0.7);
    for (int trial = 0; trial < 25; ++trial) {
        Polynomial p = random_poly(rng, 3, 2, x), q = random_poly(rng, 3, 2, x),
                   r = random_poly(rng, 3, 2, x);
        double a = rng.normal(), b = rng.normal();
        Polynomial lhs = jet_multiply(add(scale(p, a), scale(q, b)), r, x);
        Polynomial rhs = add(scale(jet_multiply(p, r, x), a), scale(jet_multiply(q, r, x), b));
        CHECK((lhs.coeffs - rhs.coeffs).norm() < 1e-10);

        CHECK((jet_multiply(p, q, x).coeffs - jet_multiply(q, p, x).coeffs).norm() < 1e-12);

        Polynomial as1 = jet_multiply(jet_multiply(p, q, x), r, x);
        Polynomial as2 = jet_multiply(p, jet_multiply(q, r, x), x);
        CHECK((as1.coeffs - as2.coeffs).norm() < 1e-9);
    }
}

TEST_CASE("Bombieri bounds with C_b = (m+1)!") {
    Rng rng(2026);
    const std::pair<int, int> cases[] = {{2, 1}, {2, 2}, {3, 1}, {3, 2}};
    for (auto [m, n] : cases) {
        double cb = factorial(m + 1);
        Vec x = Vec::Zero(n);
        for (int trial = 0; trial < 1000; ++trial) {
            Polynomial p = random_poly(rng, m, n, x), q = random_poly(rng, m, n, x);
            double bound = cb * standard_norm(p) * standard_norm(q);
            CHECK(standard_norm(jet_multiply(p, q, x)) <= bound + 1e-9);
        }
        // Lower bound for homogeneous inputs whose degrees sum below m.
        for (int trial = 0; trial < 200; ++trial) {
            int i = rng.uniform_int(0, m - 1);
            int j_max = m - 1 - i;
            int j = rng.uniform_int(0, j_max);
            Polynomial p = random_homogeneous_poly(rng, m, n, x, i);
            Polynomial q = random_homogeneous_poly(rng, m, n, x, j);
            if (standard_norm(p) < 1e-9 || standard_norm(q) < 1e-9) continue;
            double lower = standard_norm(p) * standard_norm(q) / cb;
            CHECK(standard_norm(jet_multiply(p, q, x)) >= lower - 1e-9);
        }
    }
}

TEST_CASE("scaled_norm closed forms") {
    Vec x0 = vec1(0.5);
    // P(z) = z - x: single coefficient in layer 1, weight delta^(1-2).
    Polynomial p = monomial(2, 1, x0, MultiIndex{1});
    for (double delta : {0.25, 1.0, 3.0})
        CHECK(scaled_norm(p, x0, delta) == Catch::Approx(1.0 / delta).epsilon(1e-12));

    // Monomials have unit norm at delta = 1.
    const JetSpace& sp = jetspace(3, 2);
    Vec x = vec2(-1.0, 2.0);
    for (int i = 0; i < sp.dim(); ++i)
        CHECK(scaled_norm(monomial(3, 2, x, sp.index(i)), x, 1.0) == Catch::Approx(1.0));
}

TEST_CASE("norm scaling inequalities") {
    Rng rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        int m = 2 + rng.uniform_int(0, 2), n = 1 + rng.uniform_int(0, 1);
        Vec x = rng.normal_vec(n);
        Polynomial p = random_poly(rng, m, n, x);
        double rho = std::exp(rng.uniform(-2.0, 1.0));
        double delta = rho * std::exp(rng.uniform(0.0, 2.0));  // delta >= rho
        double nd = scaled_norm(p, x, delta), nr = scaled_norm(p, x, rho);
        double lo = std::pow(rho / delta, m) * nr, hi = (rho / delta) * nr;
        CHECK(nd >= lo - 1e-10 * (1.0 + nr));
        CHECK(nd <= hi + 1e-10 * (1.0 + nr));
        CHECK(nd <= nr + 1e-12);  // monotone in delta
    }
}

TEST_CASE("dilation closed form and norm identity") {
    Vec x0 = vec1(0.0);
    Polynomial t = monomial(2, 1, x0, MultiIndex{1});
    Polynomial d = dilate(t, x0, 4.0);
    CHECK(d.coeffs[0] == Catch::Approx(0.0).margin(1e-15));
    CHECK(d.coeffs[1] == Catch::Approx(1.0 / 4.0));

    Rng rng(9);
    for (int trial = 0; trial < 300; ++trial) {
        int m = 2 + rng.uniform_int(0, 2), n = 1 + rng.uniform_int(0, 2);
        Vec x = rng.normal_vec(n);
        Polynomial p = random_poly(rng, m, n, x);
        double delta = std::exp(rng.uniform(-2.0, 2.0));

        // tau_{x,1} is the identity.
        CHECK((dilate(p, x, 1.0).coeffs - p.coeffs).norm() < 1e-14);

        // Oracle: |P|_{x,delta} computed directly from the coefficient formula
        // here, compared against the library norm of the dilated polynomial.
        const JetSpace& sp = p.space();
        double direct = 0.0;
        for (int i = 0; i < sp.dim(); ++i) {
            double trm = p.coeffs[i] * std::pow(delta, sp.order(i) - m);
            direct += trm * trm;
        }
        direct = std::sqrt(direct);
        CHECK(scaled_norm(dilate(p, x, delta), x, 1.0) == Catch::Approx(direct).margin(1e-12));
        CHECK(scaled_norm(p, x, delta) == Catch::Approx(direct).margin(1e-12));
    }
}

TEST_CASE("translate moves the function exactly") {
    Rng rng(13);
    Polynomial p = random_poly(rng, 3, 2, vec2(0.0, 0.0));
    Vec h = vec2(1.5, -2.0);
    Polynomial q = translate(p, h);
    for (int trial = 0; trial < 20; ++trial) {
        Vec z = rng.normal_vec(2);
        CHECK(eval(q, z) == Catch::Approx(eval(p, z - h)).margin(1e-12));
    }
}

TEST_CASE("rebase preserves the function and round-trips") {
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        int m = 2 + rng.uniform_int(0, 2), n = 1 + rng.uniform_int(0, 2);
        Vec x = rng.normal_vec(n), y = rng.normal_vec(n);
        Polynomial p = random_poly(rng, m, n, x);
        Polynomial q = rebase(p, y);
        Vec z = rng.normal_vec(n);
        CHECK(eval(q, z) == Catch::Approx(eval(p, z)).margin(1e-9));
        Polynomial back = rebase(q, x);
        CHECK((back.coeffs - p.coeffs).norm() < 1e-12 * (1.0 + p.coeffs.norm()));
    }
}

TEST_CASE("near-basepoint norm stability with the explicit constant") {
    // |P|_{y,delta}^2 <= (1 + C eta) |P|_{x,delta}^2 for |x-y| <= eta delta,
    // eta <= 1, with C = D^3 ((m-1)!)^2.
    Rng rng(19);
    for (int trial = 0; trial < 300; ++trial) {
        int m = 2 + rng.uniform_int(0, 2), n = 1 + rng.uniform_int(0, 1);
        double D = static_cast<double>(jet_dim(m, n));
        double C = D * D * D * factorial(m - 1) * factorial(m - 1);
        Vec x = rng.normal_vec(n);
        Polynomial p = random_poly(rng, m, n, x);
        double delta = std::exp(rng.uniform(-1.0, 1.0));
        double eta = rng.uniform(0.0, 1.0);
        Vec y = x + eta * delta * rng.unit_vec(n);
        double lhs = scaled_norm(p, y, delta), rhs = scaled_norm(p, x, delta);
        CHECK(lhs * lhs <= (1.0 + C * eta) * rhs * rhs + 1e-9);
    }
}

TEST_CASE("taylor_jet: truncation, closed form, ring morphism") {
    // Degree <= m-1 input comes back rebased, unchanged as a function.
    Rng rng(23);
    Polynomial p = random_poly(rng, 3, 2, vec2(0, 0));
    Polynomial j = taylor_jet(p, vec2(1.0, 1.0), 3);
    CHECK(eval(j, vec2(0.2, 0.4)) == Catch::Approx(eval(p, vec2(0.2, 0.4))).margin(1e-10));

    // F(t) = t^2 at x = 1, m = 2: jet is 1 + 2 (t-1). Expected coefficients
    // frozen from differentiating by hand: F(1) = 1, F'(1) = 2.
    Polynomial f = zero_poly(3, 1, vec1(0.0));
    f.coeffs << 0.0, 0.0, 1.0;  // t^2
    Polynomial jf = taylor_jet(f, vec1(1.0), 2);
    REQUIRE(jf.coeffs.size() == 2);
    CHECK(jf.coeffs[0] == Catch::Approx(1.0));
    CHECK(jf.coeffs[1] == Catch::Approx(2.0));

    // J_x(FG) = J_x F (.) J_x G on random pairs of full polynomials.
    for (int trial = 0; trial < 50; ++trial) {
        int m = 2 + rng.uniform_int(0, 1), n = 1 + rng.uniform_int(0, 1);
        Vec x = rng.normal_vec(n);
        Polynomial F = random_poly(rng, m, n, Vec::Zero(n));
        Polynomial G = random_poly(rng, m, n, Vec::Zero(n));
        Polynomial FG = poly_multiply_full(F, G);
        Polynomial lhs = taylor_jet(FG, x, m);
        Polynomial rhs = jet_multiply(taylor_jet(F, x, m), taylor_jet(G, x, m), x);
        CHECK((lhs.coeffs - rhs.coeffs).norm() < 1e-10 * (1.0 + lhs.coeffs.norm()));
    }
}

TEST_CASE("derivatives are exact on coefficients") {
    // d/dt of a0 + a1 t + a2 t^2 is a1 + 2 a2 t; frozen coefficients.
    Polynomial p = zero_poly(3, 1, vec1(0.0));
    p.coeffs << 5.0, -2.0, 7.0;
    Polynomial dp = derivative_poly(p, MultiIndex{1});
    CHECK(dp.coeffs[0] == Catch::Approx(-2.0));
    CHECK(dp.coeffs[1] == Catch::Approx(14.0));
    CHECK(dp.coeffs[2] == Catch::Approx(0.0).margin(1e-15));

    // derivative_at at the basepoint equals alpha! * coefficient.
    Rng rng(29);
    Polynomial q = random_poly(rng, 4, 2, vec2(0.5, 0.5));
    const JetSpace& sp = q.space();
    for (int i = 0; i < sp.dim(); ++i)
        CHECK(derivative_at(q, sp.index(i), q.basepoint) ==
              Catch::Approx(sp.fact(i) * q.coeffs[i]).margin(1e-12));
}

TEST_CASE("jet_reciprocal inverts in the ring") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        int m = 2 + rng.uniform_int(0, 2), n = 1 + rng.uniform_int(0, 1);
        Vec x = rng.normal_vec(n);
        Polynomial p = random_poly(rng, m, n, x);
        if (std::abs(p.coeffs[0]) < 0.1) p.coeffs[0] += 1.0;
        Polynomial inv = jet_reciprocal(p, x);
        Polynomial prod = jet_multiply(p, inv, x);
        Polynomial one = constant_poly(m, n, x, 1.0);
        CHECK((prod.coeffs - one.coeffs).norm() < 1e-9);
    }
}
