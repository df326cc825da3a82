// ebm: command-line front end for the spectral energy balance model.

#include "ebm/config.hpp"
#include "ebm/dynamics.hpp"
#include "ebm/errors.hpp"
#include "ebm/insolation.hpp"
#include "ebm/legendre.hpp"
#include "ebm/reduced.hpp"
#include "ebm/sweep.hpp"
#include "oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

using nlohmann::ordered_json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

std::string num(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

ordered_json poly_json(const ebm::Polynomial& p)
{
    ordered_json a = ordered_json::array();
    for (double c : p.coeffs())
        a.push_back(c);
    return a;
}

// Buffers everything so nothing is written when a command fails midway.
class Output
{
  public:
    explicit Output(std::string path) : path_(std::move(path)) {}
    std::ostringstream& stream() { return buf_; }
    void commit()
    {
        if (path_.empty() || path_ == "-")
        {
            std::cout << buf_.str();
            std::cout.flush();
            return;
        }
        std::ofstream f(path_, std::ios::binary);
        if (!f)
            throw ebm::ConfigError("cannot write '" + path_ + "'");
        f << buf_.str();
    }

  private:
    std::string path_;
    std::ostringstream buf_;
};

void write_equilibria(const ebm::Model& model, std::ostream& os)
{
    ordered_json arr = ordered_json::array();
    for (const auto& e : ebm::find_equilibria(model))
    {
        ordered_json j;
        j["eta"] = e.eta;
        j["stability"] = std::string(ebm::to_string(e.stability));
        j["T0"] = e.global_mean;
        j["slope"] = e.slope;
        j["coeffs"] = e.temp_coeffs;
        arr.push_back(std::move(j));
    }
    ordered_json doc;
    doc["variant"] = std::string(ebm::to_string(model.variant()));
    doc["N"] = model.params().N;
    auto names = model.layout().names();
    names.pop_back();
    doc["coeff_names"] = names;
    doc["equilibria"] = std::move(arr);
    os << doc.dump(2) << '\n';
}

void write_reduced(const ebm::Model& model, std::ostream& os)
{
    const ebm::ReducedPoly h = ebm::build_h(model);
    ordered_json doc;
    doc["variant"] = std::string(ebm::to_string(h.variant));
    doc["N"] = h.N;
    if (h.rho)
    {
        doc["rho"] = *h.rho;
        doc["h_minus"] = poly_json(h.below);
        doc["h_plus"] = poly_json(h.above);
        doc["degree"] = {h.below.degree(), h.above.degree()};
    }
    else
    {
        doc["h"] = poly_json(h.above);
        doc["degree"] = h.above.degree();
    }
    os << doc.dump(2) << '\n';
}

void write_simulation(const ebm::Model& model, double eta0, const ebm::IntegratorOpts& opts,
                      bool reduced, std::ostream& os)
{
    if (reduced)
    {
        const auto tr = ebm::integrate_reduced(ebm::build_h(model), model.params().eps, eta0, opts);
        os << "t,eta,event\n";
        for (std::size_t i = 0; i < tr.t.size(); ++i)
            os << num(tr.t[i]) << ',' << num(tr.eta[i]) << ',' << ebm::to_string(tr.marks[i]) << '\n';
        return;
    }
    const auto tr = ebm::integrate(model, model.slow_manifold_state(eta0), opts);
    auto names = model.layout().names();
    names.pop_back();
    os << "t,eta";
    for (const auto& n : names)
        os << ',' << n;
    os << ",Tbar,T_iceline,event\n";
    for (std::size_t i = 0; i < tr.t.size(); ++i)
    {
        const auto& x = tr.states[i].values;
        os << num(tr.t[i]) << ',' << num(x.back());
        for (std::size_t k = 0; k + 1 < x.size(); ++k)
            os << ',' << num(x[k]);
        os << ',' << num(model.global_mean(x)) << ',' << num(model.iceline_temperature(x)) << ','
           << ebm::to_string(tr.marks[i]) << '\n';
    }
}

ordered_json sweep_summary(const ebm::SweepResult& r)
{
    ordered_json doc;
    doc["param"] = std::string(ebm::to_string(r.param));
    ordered_json ts = ordered_json::array();
    for (const auto& t : r.transitions)
        ts.push_back({{"param", t.param}, {"lo", t.lo}, {"hi", t.hi},
                      {"kind", std::string(ebm::to_string(t.kind))}, {"eta", t.eta}, {"gap", t.gap}});
    doc["transitions"] = std::move(ts);
    ordered_json bs = ordered_json::array();
    for (const auto& b : r.branches)
        bs.push_back({{"id", b.id},
                      {"stability", std::string(ebm::to_string(b.stability))},
                      {"start", std::string(ebm::to_string(b.start))},
                      {"start_param", b.start_param},
                      {"end", std::string(ebm::to_string(b.end))},
                      {"end_param", b.end_param},
                      {"points", b.points.size()}});
    doc["branches"] = std::move(bs);
    ordered_json ws = ordered_json::array();
    for (const auto& [lo, hi] : ebm::bistability_window(r))
        ws.push_back({lo, hi});
    doc["bistability"] = std::move(ws);
    return doc;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectral energy balance model: equilibria, trajectories and bifurcation sweeps"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;

    auto* ins = app.add_subcommand("insolation-coeffs", "Legendre coefficients of the annual insolation");
    double beta = ebm::kDefaultObliquityDeg;
    int max_mode = 1;
    ins->add_option("--beta", beta, "obliquity in degrees")->capture_default_str();
    ins->add_option("--max-mode", max_mode, "highest mode index n (coefficient s_2n)")->capture_default_str();
    ins->add_option("-o,--output", out_path, "output file (default stdout)");

    auto* red = app.add_subcommand("reduced-poly", "Monomial coefficients of h (or h-, h+)");
    red->add_option("--config", config_path, "model JSON")->required();
    red->add_option("-o,--output", out_path, "output file (default stdout)");

    auto* eq = app.add_subcommand("equilibria", "Ice-line equilibria and their stability");
    eq->add_option("--config", config_path, "model JSON")->required();
    eq->add_option("-o,--output", out_path, "output file (default stdout)");

    auto* sim = app.add_subcommand("simulate", "Integrate from the critical manifold at eta0");
    double eta0 = 0.5, t_end = 1000.0, tol_eq = 0.0, rtol = 1e-9, atol = 1e-9;
    bool reduced = false;
    std::string method = "auto";
    sim->add_option("--config", config_path, "model JSON")->required();
    sim->add_option("--eta0", eta0, "initial ice line")->required()->check(CLI::Range(0.0, 1.0));
    sim->add_option("--t-end", t_end, "time horizon")->required()->check(CLI::NonNegativeNumber);
    sim->add_option("--tol-eq", tol_eq, "stop when the max-norm of the field falls below this (0 = off)");
    sim->add_option("--rtol", rtol)->capture_default_str();
    sim->add_option("--atol", atol)->capture_default_str();
    sim->add_option("--method", method, "auto | dp | exp")->check(CLI::IsMember({"auto", "dp", "exp"}));
    std::size_t max_steps = ebm::IntegratorOpts{}.max_steps;
    sim->add_option("--max-steps", max_steps, "step budget before giving up")->capture_default_str();
    sim->add_flag("--reduced", reduced, "integrate eta' = eps h(eta) only");
    sim->add_option("-o,--output", out_path, "output file (default stdout)");

    auto* sw = app.add_subcommand("sweep", "Equilibria over a parameter grid with fold refinement");
    std::string param = "A", summary_path;
    double smin = 140.0, smax = 200.0, fold_tol = 0.05;
    int steps = 601;
    unsigned threads = 0;
    sw->add_option("--config", config_path, "model JSON")->required();
    sw->add_option("--param", param, "A, D, C or Q")->capture_default_str();
    sw->add_option("--min", smin)->capture_default_str();
    sw->add_option("--max", smax)->capture_default_str();
    sw->add_option("--steps", steps)->capture_default_str();
    sw->add_option("--fold-tol", fold_tol)->capture_default_str();
    sw->add_option("--threads", threads, "worker threads (0 = all cores)");
    sw->add_option("-o,--output", out_path, "CSV file (default stdout)");
    sw->add_option("--summary", summary_path, "transition/branch JSON (default <output>.json, or stderr)");

    auto* val = app.add_subcommand("validate", "Run the oracle-equivalence suite");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try
    {
        Output out(out_path);
        auto& os = out.stream();
        if (*ins)
        {
            if (max_mode < 0 || max_mode > ebm::kMaxEvenMode)
                throw ebm::ConfigError("--max-mode must lie in [0, 12]");
            if (!(beta >= 0.0 && beta < 90.0))
                throw ebm::ConfigError("--beta must lie in [0, 90)");
            const auto s = ebm::s_coefficients(beta, max_mode);
            ordered_json doc;
            doc["beta"] = beta;
            ordered_json js;
            for (int n = 0; n <= max_mode; ++n)
                js[std::to_string(2 * n)] = s[n];
            doc["s"] = std::move(js);
            os << doc.dump(2) << '\n';
        }
        else if (*red)
        {
            write_reduced(ebm::Model(ebm::load_config(config_path).params), os);
        }
        else if (*eq)
        {
            write_equilibria(ebm::Model(ebm::load_config(config_path).params), os);
        }
        else if (*sim)
        {
            const ebm::Model model(ebm::load_config(config_path).params);
            ebm::IntegratorOpts o;
            o.t_end = t_end;
            o.tol_eq = tol_eq;
            o.rtol = rtol;
            o.atol = atol;
            o.max_steps = max_steps;
            o.method = method == "dp"    ? ebm::Method::DormandPrince
                       : method == "exp" ? ebm::Method::ExponentialDormandPrince
                                         : ebm::Method::Auto;
            try
            {
                o.validate();
            }
            catch (const std::invalid_argument& e)
            {
                throw ebm::ConfigError(e.what());
            }
            write_simulation(model, eta0, o, reduced, os);
        }
        else if (*sw)
        {
            ebm::SweepSpec spec;
            spec.base = ebm::load_config(config_path).params;
            spec.param = ebm::sweep_param_from_string(param);
            spec.min = smin;
            spec.max = smax;
            spec.count = steps;
            spec.fold_tol = fold_tol;
            spec.threads = threads;
            const auto r = ebm::run_sweep(spec);
            os << "param,eta,stability,T0,branch_id\n";
            for (std::size_t i = 0; i < r.grid.size(); ++i)
                for (std::size_t k = 0; k < r.equilibria[i].size(); ++k)
                {
                    const auto& e = r.equilibria[i][k];
                    os << num(r.grid[i]) << ',' << num(e.eta) << ',' << ebm::to_string(e.stability)
                       << ',' << num(e.global_mean) << ',' << r.branch_of[i][k] << '\n';
                }
            const std::string summary = sweep_summary(r).dump(2) + "\n";
            const std::string target = !summary_path.empty() ? summary_path
                                       : (!out_path.empty() && out_path != "-") ? out_path + ".json"
                                                                                 : std::string();
            out.commit();
            if (target.empty())
                std::cerr << summary;
            else
            {
                std::ofstream f(target, std::ios::binary);
                if (!f)
                    throw ebm::ConfigError("cannot write '" + target + "'");
                f << summary;
            }
            return 0;
        }
        else if (*val)
        {
            bool all = true;
            for (const auto& c : ebm::oracle::run_suite())
            {
                all = all && c.pass;
                os << (c.pass ? "PASS " : "FAIL ") << c.name << "  err=" << num(c.error)
                   << " tol=" << num(c.tol);
                if (!c.detail.empty())
                    os << "  (" << c.detail << ')';
                os << '\n';
            }
            out.commit();
            return all ? 0 : kExitNumeric;
        }
        out.commit();
        return 0;
    }
    catch (const ebm::ConfigError& e)
    {
        std::cerr << "ebm: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const ebm::NumericalError& e)
    {
        std::cerr << "ebm: numerical failure: " << e.what() << '\n';
        return kExitNumeric;
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "ebm: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const std::exception& e)
    {
        std::cerr << "ebm: " << e.what() << '\n';
        return kExitNumeric;
    }
}
