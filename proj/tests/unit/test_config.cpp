#include "ebm/config.hpp"
#include "ebm/errors.hpp"
#include "ebm/insolation.hpp"

#include <doctest.h>

#include <string>

using namespace ebm;

TEST_SUITE("config")
{
TEST_CASE("defaults")
{
    const auto c = parse_config("{}");
    CHECK(c.params.variant() == Variant::DiffusiveBudyko);
    CHECK(c.s_mode == RunConfig::SMode::Quadratic);
    CHECK(c.params.s == s_quadratic());
}

TEST_CASE("full Jormungand relaxation file")
{
    const auto c = parse_config(R"({
        "Q": 321, "A": 167, "C": 3.09, "Tc": 0, "N": 2, "transport": "relax",
        "albedo": {"kind": "jormungand", "alpha1": 0.32, "alphai": 0.36, "alpha2": 0.8, "rho": 0.35},
        "description": "x"})");
    CHECK(c.params.variant() == Variant::RelaxJormungand);
    CHECK(c.params.N == 2);
    CHECK(std::get<JormungandAlbedo>(c.params.albedo).rho == 0.35);
}

TEST_CASE("insolation modes")
{
    const auto computed = parse_config(R"({"N": 3, "s_mode": "computed", "beta": 23.5})");
    CHECK(computed.params.s.max_mode() == 3);
    CHECK(computed.params.s[2] == doctest::Approx(-0.0444).epsilon(0.01));
    const auto expl = parse_config(R"({"s_coeffs": [1.0, -0.5]})");
    CHECK(expl.s_mode == RunConfig::SMode::Explicit);
    CHECK(expl.params.s[1] == -0.5);
}

TEST_CASE("rejections")
{
    const char* bad[] = {
        "{bad",
        "[1, 2]",
        R"({"Q": "hot"})",
        R"({"unknown": 1})",
        R"({"N": 1.5})",
        R"({"N": 0})",
        R"({"transport": "advective"})",
        R"({"albedo": {"kind": "jormungand", "alpha1": 0.32, "alphai": 0.36, "alpha2": 0.8}})",
        R"({"albedo": {"kind": "budyko", "rho": 0.3}})",
        R"({"albedo": {"kind": "grey"}})",
        R"({"s_mode": "explicit"})",
        R"({"s_mode": "quadratic", "s_coeffs": [1]})",
        R"({"beta": 100})",
        R"({"D": -1})",
    };
    for (const char* text : bad)
    {
        CAPTURE(text);
        CHECK_THROWS_AS(parse_config(text), ConfigError);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/ebm.json"), ConfigError);
}

TEST_CASE("bundled files load")
{
    for (const char* name : {"budyko_d035", "budyko_d0394", "budyko_d045", "jormungand_diff",
                             "jormungand_sweep_A", "relax_budyko_c309", "relax_jormungand"})
    {
        CAPTURE(name);
        CHECK_NOTHROW(load_config(std::string(EBM_CONFIG_DIR) + "/" + name + ".json"));
    }
}
}
