#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rotor/matrix.hpp"
#include "rotor/polynomial.hpp"
#include "rotor/spectral.hpp"
#include "test_support.hpp"

using namespace rotor;

namespace {

RatMatrix make2(Rat a, Rat b, Rat c, Rat d) {
    RatMatrix m(2);
    m.at(0, 0) = a;
    m.at(0, 1) = b;
    m.at(1, 0) = c;
    m.at(1, 1) = d;
    return m;
}

} // namespace

TEST_CASE("characteristic polynomial") {
    RatMatrix m = make2(Rat(1, 3), Rat(2, 3), Rat(1, 3), Rat(1));
    auto cp = m.charpoly(); // t^2 - 4/3 t + 1/9
    REQUIRE(cp.size() == 3);
    CHECK(cp[2] == Rat(1));
    CHECK(cp[1] == Rat(-4, 3));
    CHECK(cp[0] == Rat(1, 9));

    RatMatrix id = RatMatrix::identity(3);
    auto cpi = id.charpoly(); // (t-1)^3
    CHECK(cpi[3] == Rat(1));
    CHECK(cpi[2] == Rat(-3));
    CHECK(cpi[1] == Rat(3));
    CHECK(cpi[0] == Rat(-1));
}

TEST_CASE("sturm chains and deflation") {
    // (t-1)(t-2)(t-3) = t^3 - 6t^2 + 11t - 6
    IPoly f(std::vector<int128>{-6, 11, -6, 1});
    SturmChain chain(f);
    CHECK(chain.count_roots(Rat(0), Rat(4)) == 3);
    CHECK(chain.count_roots(Rat(3, 2), Rat(4)) == 2);
    CHECK(chain.count_roots(Rat(7, 2), Rat(4)) == 0);

    CHECK(f.sign_at(1, 1) == 0);
    IPoly g = f.deflate_at_one(); // (t-2)(t-3) = t^2 - 5t + 6
    CHECK(g.coeff(0) == 6);
    CHECK(g.coeff(1) == -5);
    CHECK(g.coeff(2) == 1);

    // repeated roots: (t-1)^2 (t+2), distinct-root counting
    IPoly h(std::vector<int128>{2, -3, 0, 1});
    SturmChain hc(h);
    CHECK(hc.count_roots(Rat(0), Rat(2)) == 1);
    CHECK(hc.count_roots(Rat(-3), Rat(2)) == 2);
}

TEST_CASE("M-matrix minors test") {
    RatMatrix m = make2(Rat(1), Rat(0), Rat(1), Rat(1)); // rho = 1
    CHECK_FALSE(rho_less_than(m, Rat(1)));
    CHECK(rho_less_than(m, Rat(101, 100)));

    RatMatrix half = make2(Rat(1, 2), Rat(0), Rat(0), Rat(1, 4)); // rho = 1/2
    CHECK(rho_less_than(half, Rat(1)));
    CHECK_FALSE(rho_less_than(half, Rat(1, 2)));
    CHECK(rho_less_than(half, Rat(51, 100)));
}

TEST_CASE("certified spectral radius: exact cases") {
    // rho = (2 + sqrt 3)/3, strictly above 1
    auto c = certify_spectral_radius(make2(Rat(1, 3), Rat(2, 3), Rat(1, 3), Rat(1)), Rat(1, 1'000'000'000));
    CHECK(c.greater_than_one);
    CHECK_FALSE(c.exactly_one);
    const double rho = (2.0 + std::sqrt(3.0)) / 3.0;
    CHECK(c.lo.to_double() <= rho);
    CHECK(c.hi.to_double() >= rho);
    CHECK(c.hi.to_double() - c.lo.to_double() <= 1e-9);

    // the critical families sit exactly at 1
    RatMatrix one(1);
    one.at(0, 0) = Rat(1);
    auto c1 = certify_spectral_radius(one, Rat(1, 1000));
    CHECK(c1.exactly_one);
    CHECK(c1.lo == Rat(1));
    CHECK(c1.hi == Rat(1));
    CHECK_FALSE(c1.greater_than_one);

    auto c2 = certify_spectral_radius(make2(Rat(1), Rat(0), Rat(1), Rat(1)), Rat(1, 1000));
    CHECK(c2.exactly_one);

    // reducible with an eigenvalue at 1 and the Perron root above it
    RatMatrix diag(2);
    diag.at(0, 0) = Rat(2);
    diag.at(1, 1) = Rat(1);
    auto c3 = certify_spectral_radius(diag, Rat(1, 1000));
    CHECK(c3.greater_than_one);
    CHECK(c3.multiplicity_at_one == 1);

    // permutation matrix: eigenvalues +1 and -1
    auto c4 = certify_spectral_radius(make2(Rat(0), Rat(1), Rat(1), Rat(0)), Rat(1, 1000));
    CHECK(c4.exactly_one);

    // nilpotent: rho = 0 exactly
    auto c5 = certify_spectral_radius(make2(Rat(0), Rat(1), Rat(0), Rat(0)), Rat(1, 1000));
    CHECK_FALSE(c5.greater_than_one);
    CHECK(c5.lo == Rat(0));
    CHECK(c5.hi == Rat(0));

    RatMatrix neg(1);
    neg.at(0, 0) = Rat(-1);
    CHECK_THROWS_AS(certify_spectral_radius(neg, Rat(1, 10)), std::domain_error);
    CHECK_THROWS_AS(certify_spectral_radius(one, Rat(0)), std::invalid_argument);
}

TEST_CASE("closed form and power iteration agree with the enclosure") {
    testsupport::Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        RatMatrix m = make2(Rat(rng.range(0, 6), rng.range(1, 4)), Rat(rng.range(0, 6), rng.range(1, 4)),
                            Rat(rng.range(0, 6), rng.range(1, 4)), Rat(rng.range(0, 6), rng.range(1, 4)));
        auto cert = certify_spectral_radius(m, Rat(1, 100'000'000));
        auto quad = closed_form_rho(m);
        REQUIRE(quad.has_value());
        // exact containment: lo <= base + sqrt(disc) <= hi
        CHECK(quad->compare(cert.lo) >= 0);
        CHECK(quad->compare(cert.hi) <= 0);
        const double est = power_iteration_estimate(m);
        CHECK(est >= cert.lo.to_double() - 0.05);
        CHECK(est <= cert.hi.to_double() + 0.05);
    }
}

TEST_CASE("parametric family formula") {
    // M = ((p3, 2 p2), (p1, 2 p2 + p3)) has Perron root p2 + p3 + sqrt(p2 (2 p1 + p2))
    testsupport::Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        auto w = testsupport::random_weights(rng, 3);
        RatMatrix m = make2(w[2], Rat(2) * w[1], w[0], Rat(2) * w[1] + w[2]);
        auto quad = closed_form_rho(m);
        REQUIRE(quad.has_value());
        CHECK(quad->base == w[1] + w[2]);
        CHECK(quad->disc == w[1] * (Rat(2) * w[0] + w[1]));
        auto cert = certify_spectral_radius(m, Rat(1, 1'000'000'000));
        CHECK(quad->compare(cert.lo) >= 0);
        CHECK(quad->compare(cert.hi) <= 0);
    }
}
