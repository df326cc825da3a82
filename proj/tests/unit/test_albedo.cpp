#include "ebm/albedo.hpp"
#include "ebm/errors.hpp"
#include "ebm/insolation.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ebm;

TEST_SUITE("albedo")
{
TEST_CASE("pointwise values")
{
    const AlbedoSpec bud = BudykoAlbedo{0.32, 0.62};
    const AlbedoSpec jor = JormungandAlbedo{0.32, 0.36, 0.8, 0.35};
    CHECK(pointwise_albedo(bud, 0.5, 0.8) == 0.32);
    CHECK(pointwise_albedo(bud, 0.9, 0.8) == 0.62);
    CHECK(pointwise_albedo(bud, 0.5, 0.5) == doctest::Approx(0.47));
    CHECK(pointwise_albedo(jor, 0.3, 0.1) == 0.36);
    CHECK(pointwise_albedo(jor, 0.05, 0.1) == 0.32);
    CHECK(pointwise_albedo(jor, 0.5, 0.1) == 0.8);
    // above rho the bare-ice band disappears
    CHECK(pointwise_albedo(jor, 0.5, 0.6) == 0.32);
    CHECK(pointwise_albedo(jor, 0.7, 0.6) == 0.8);
}

TEST_CASE("validation")
{
    CHECK_THROWS_AS(validate(AlbedoSpec{BudykoAlbedo{0.7, 0.6}}), ConfigError);
    CHECK_THROWS_AS(validate(AlbedoSpec{JormungandAlbedo{0.32, 0.9, 0.8, 0.35}}), ConfigError);
    CHECK_THROWS_AS(validate(AlbedoSpec{JormungandAlbedo{0.32, 0.36, 0.8, 1.2}}), ConfigError);
    CHECK_NOTHROW(validate(AlbedoSpec{JormungandAlbedo{}}));
    CHECK(!switching_latitude(BudykoAlbedo{}));
    CHECK(*switching_latitude(JormungandAlbedo{}) == 0.35);
}

TEST_CASE("Budyko moments at the ends")
{
    const auto m = budyko_moments(BudykoAlbedo{0.32, 0.62}, s_quadratic(), 3);
    CHECK(m.above[0](0.0) == doctest::Approx(0.62).epsilon(1e-14));
    CHECK(m.above[0](1.0) == doctest::Approx(0.32).epsilon(1e-14));
    // degree 2n + 3 with the quadratic insolation
    for (int n = 0; n <= 3; ++n)
        CHECK(m.above[n].degree() == 2 * n + 3);
}

TEST_CASE("Budyko mean albedo decreases with the ice line")
{
    const auto m = budyko_moments(BudykoAlbedo{0.32, 0.62}, s_quadratic(), 1);
    const Polynomial d = m.above[0].derivative();
    for (double eta = 0.0; eta <= 1.0; eta += 0.01)
    {
        CHECK(d(eta) < 0.0);
        CHECK(d(eta) == doctest::Approx(-(0.62 - 0.32) * s_quadratic()(eta)).epsilon(1e-12));
    }
}

TEST_CASE("moments against quadrature")
{
    const std::vector<double> s{1.0, -0.477};
    const AlbedoSpec bud = BudykoAlbedo{0.32, 0.62};
    const AlbedoSpec jor = JormungandAlbedo{0.32, 0.36, 0.8, 0.35};
    const auto mb = albedo_moments(bud, s_quadratic(), 5);
    const auto mj = albedo_moments(jor, s_quadratic(), 5);
    CHECK(mb.above[1](0.5) == doctest::Approx(oracle::albedo_moment(bud, s, 1, 0.5)).epsilon(1e-12));
    CHECK(std::abs(mj.active(0, 0.0)(0.0) - oracle::albedo_moment(jor, s, 0, 0.0)) < 1e-10);
    CHECK(std::abs(mj.active(1, 0.2)(0.2) - oracle::albedo_moment(jor, s, 1, 0.2)) < 1e-10);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::uniform_int_distribution<int> Nn(0, 5);
    for (int k = 0; k < 20; ++k)
    {
        const double eta = U(rng);
        const int n = Nn(rng);
        CAPTURE(eta);
        CAPTURE(n);
        CHECK(std::abs(mb.active(n, eta)(eta) - oracle::albedo_moment(bud, s, n, eta)) < 1e-10);
        CHECK(std::abs(mj.active(n, eta)(eta) - oracle::albedo_moment(jor, s, n, eta)) < 1e-10);
    }
}

TEST_CASE("Jormungand branches agree at rho")
{
    for (const SpectralSeries& s : {s_quadratic(), s_coefficients(23.5, 5)})
    {
        const auto m = jormungand_moments(JormungandAlbedo{}, s, 5);
        for (int n = 0; n <= 5; ++n)
            CHECK(std::abs(m.below[n](0.35) - m.above[n](0.35)) <= 1e-12);
    }
}

TEST_CASE("bare ice equal to snow reduces to Budyko")
{
    const auto j = jormungand_moments(JormungandAlbedo{0.32, 0.62, 0.62, 0.35}, s_quadratic(), 3);
    const auto b = budyko_moments(BudykoAlbedo{0.32, 0.62}, s_quadratic(), 3);
    for (int n = 0; n <= 3; ++n)
        for (double eta : {0.1, 0.3, 0.6, 0.9})
            CHECK(j.active(n, eta)(eta) == doctest::Approx(b.active(n, eta)(eta)).epsilon(1e-12));
}
}
