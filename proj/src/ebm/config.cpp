#include "ebm/config.hpp"

#include "ebm/errors.hpp"
#include "ebm/insolation.hpp"
#include "ebm/legendre.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace ebm {
namespace {

using nlohmann::json;

double number(const json& j, const char* key, double fallback)
{
    if (!j.contains(key))
        return fallback;
    const auto& v = j.at(key);
    if (!v.is_number())
        throw ConfigError(std::string("config: '") + key + "' must be a number");
    return v.get<double>();
}

std::string text(const json& j, const char* key, const std::string& fallback)
{
    if (!j.contains(key))
        return fallback;
    const auto& v = j.at(key);
    if (!v.is_string())
        throw ConfigError(std::string("config: '") + key + "' must be a string");
    return v.get<std::string>();
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const char* where)
{
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            throw ConfigError(std::string("config: unknown key '") + item.key() + "' in " + where);
}

AlbedoSpec parse_albedo(const json& j)
{
    if (!j.is_object())
        throw ConfigError("config: 'albedo' must be an object");
    const std::string kind = text(j, "kind", "budyko");
    if (kind == "budyko")
    {
        reject_unknown(j, {"kind", "alpha1", "alpha2"}, "albedo (budyko)");
        BudykoAlbedo a;
        a.alpha1 = number(j, "alpha1", a.alpha1);
        a.alpha2 = number(j, "alpha2", a.alpha2);
        return a;
    }
    if (kind == "jormungand")
    {
        reject_unknown(j, {"kind", "alpha1", "alphai", "alpha2", "rho"}, "albedo (jormungand)");
        if (!j.contains("rho"))
            throw ConfigError("config: jormungand albedo needs 'rho'");
        JormungandAlbedo a;
        a.alpha1 = number(j, "alpha1", a.alpha1);
        a.alphai = number(j, "alphai", a.alphai);
        a.alpha2 = number(j, "alpha2", a.alpha2);
        a.rho = number(j, "rho", a.rho);
        return a;
    }
    throw ConfigError("config: albedo kind must be 'budyko' or 'jormungand'");
}

}  // namespace

RunConfig parse_config(const std::string& text_in)
{
    json j;
    try
    {
        j = json::parse(text_in);
    }
    catch (const json::parse_error& e)
    {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config: top level must be an object");
    reject_unknown(j,
                   {"Q", "A", "B", "C", "D", "R", "Tc", "eps", "N", "beta", "transport", "albedo",
                    "s_mode", "s_coeffs", "description"},
                   "top level");

    RunConfig cfg;
    auto& p = cfg.params;
    p.Q = number(j, "Q", p.Q);
    p.A = number(j, "A", p.A);
    p.B = number(j, "B", p.B);
    p.C = number(j, "C", p.C);
    p.D = number(j, "D", p.D);
    p.R = number(j, "R", p.R);
    p.Tc = number(j, "Tc", p.Tc);
    p.eps = number(j, "eps", p.eps);
    if (j.contains("N"))
    {
        if (!j.at("N").is_number_integer())
            throw ConfigError("config: 'N' must be an integer");
        p.N = j.at("N").get<int>();
    }
    cfg.beta_deg = number(j, "beta", cfg.beta_deg);
    if (!(cfg.beta_deg >= 0.0 && cfg.beta_deg < 90.0))
        throw ConfigError("config: 'beta' must lie in [0, 90)");

    const std::string transport = text(j, "transport", "diffusive");
    if (transport == "diffusive")
        p.transport = Transport::Diffusive;
    else if (transport == "relax")
        p.transport = Transport::RelaxToMean;
    else
        throw ConfigError("config: transport must be 'diffusive' or 'relax'");

    if (j.contains("albedo"))
        p.albedo = parse_albedo(j.at("albedo"));

    const std::string s_mode = text(j, "s_mode", j.contains("s_coeffs") ? "explicit" : "quadratic");
    if (s_mode == "quadratic")
    {
        cfg.s_mode = RunConfig::SMode::Quadratic;
        p.s = s_quadratic();
    }
    else if (s_mode == "computed")
    {
        cfg.s_mode = RunConfig::SMode::Computed;
        if (p.N < 0 || p.N > kMaxEvenMode)
            throw ConfigError("config: 'N' out of range");
        p.s = s_coefficients(cfg.beta_deg, p.N);
    }
    else if (s_mode == "explicit")
    {
        cfg.s_mode = RunConfig::SMode::Explicit;
        if (!j.contains("s_coeffs") || !j.at("s_coeffs").is_array())
            throw ConfigError("config: s_mode 'explicit' needs an 's_coeffs' array");
        std::vector<double> c;
        for (const auto& v : j.at("s_coeffs"))
        {
            if (!v.is_number())
                throw ConfigError("config: 's_coeffs' entries must be numbers");
            c.push_back(v.get<double>());
        }
        if (c.empty() || static_cast<int>(c.size()) - 1 > kMaxEvenMode)
            throw ConfigError("config: 's_coeffs' must hold 1 to 13 values");
        p.s = SpectralSeries(std::move(c));
    }
    else
    {
        throw ConfigError("config: s_mode must be 'quadratic', 'computed' or 'explicit'");
    }
    if (s_mode != "explicit" && j.contains("s_coeffs"))
        throw ConfigError("config: 's_coeffs' requires s_mode 'explicit'");

    p.validate();
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace ebm
