#pragma once

#include "ebm/albedo.hpp"
#include "ebm/polynomial.hpp"
#include "ebm/spectral_series.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ebm {

enum class Transport
{
    Diffusive,
    RelaxToMean,
};

enum class Variant
{
    DiffusiveBudyko,
    DiffusiveJormungand,
    RelaxBudyko,
    RelaxJormungand,
};

std::string_view to_string(Variant v);

//! Which side of the switching latitude a quantity is evaluated on.
enum class Branch
{
    Below,  //!< eta < rho
    Above,  //!< eta >= rho (the only branch without a switching latitude)
};

struct ModelParams
{
    double Q = 343.0;   //!< mean insolation (W/m^2)
    double A = 202.0;   //!< OLR offset (W/m^2)
    double B = 1.9;     //!< OLR slope (W/(m^2 C))
    double C = 3.09;    //!< relaxation-to-mean transport coefficient
    double D = 0.35;    //!< diffusion coefficient
    double R = 1.0;     //!< heat capacity; sets the fast time unit
    double Tc = -10.0;  //!< critical temperature at the ice line (C)
    double eps = 1e-2;  //!< ice-line rate
    int N = 1;          //!< highest temperature mode index
    Transport transport = Transport::Diffusive;
    AlbedoSpec albedo = BudykoAlbedo{};
    SpectralSeries s{std::vector<double>{1.0, -0.477}};

    Variant variant() const;
    void validate() const;

    //! Modern-climate Budyko set (Q=343, A=202, B=1.9, 0.32/0.62, Tc=-10).
    static ModelParams budyko();
    //! Neoproterozoic Jormungand set (Q=321, A=167, D=0.25, rho=0.35, Tc=0).
    static ModelParams jormungand();
};

/*!
 * Index map of the flat state vector for one variant.
 *
 *  - diffusive:        (T_0 .. T_2N, eta)
 *  - relax Budyko:     (u, v, T_2 .. T_2N, V_2 .. V_2N, eta)
 *  - relax Jormungand: (w, z1, z2, T_2 .. T_2N, V_2 .. V_2N, W_2 .. W_2N, eta)
 */
class StateLayout
{
  public:
    StateLayout(Variant v, int N);

    std::size_t size() const { return size_; }
    std::size_t eta() const { return size_ - 1; }
    int modes() const { return N_; }
    Variant variant() const { return variant_; }

    //! Diffusive: n in 0..N. Relaxation: n in 1..N.
    std::size_t T(int n) const;
    std::size_t V(int n) const;
    std::size_t W(int n) const;
    std::size_t u() const { return 0; }
    std::size_t v() const { return 1; }
    std::size_t w() const { return 0; }
    std::size_t z1() const { return 1; }
    std::size_t z2() const { return 2; }

    //! Column names, e.g. "T0,T2,eta" or "u,v,T2,V2,eta".
    std::vector<std::string> names() const;

  private:
    Variant variant_;
    int N_;
    std::size_t first_mode_ = 0;
    std::size_t size_ = 0;
};

struct ModelState
{
    std::vector<double> values;

    double eta() const { return values.back(); }
    double& eta() { return values.back(); }
};

/*!
 * Finite-dimensional spectral model assembled from ModelParams.
 *
 * Construction precomputes the albedo moments and the forcing polynomials;
 * afterwards every method is const and safe to call concurrently.
 */
class Model
{
  public:
    explicit Model(ModelParams params);

    const ModelParams& params() const { return params_; }
    Variant variant() const { return variant_; }
    const StateLayout& layout() const { return layout_; }
    const AlbedoMoments& moments() const { return moments_; }
    std::optional<double> rho() const { return rho_; }
    Branch branch_at(double eta) const;

    //! Diffusive forcing f_{2n}(eta): the fast-subsystem rest point.
    const Polynomial& forcing(int n, Branch b) const;
    //! Diffusive decay rate (B + 2n(2n+1) D) / R.
    double decay_rate(int n) const;

    //! Time derivative of the state; the branch follows eta.
    void rhs(std::span<const double> x, std::span<double> dx) const;
    //! Same with the branch forced (both sides are defined everywhere).
    void rhs(std::span<const double> x, std::span<double> dx, Branch b) const;

    void rhs_diffusive(std::span<const double> x, std::span<double> dx, Branch b) const;
    void rhs_relax_budyko(std::span<const double> x, std::span<double> dx) const;
    void rhs_relax_jormungand(std::span<const double> x, std::span<double> dx, Branch b) const;

    //! Global mean temperature: T_0 (diffusive) or the piecewise closed form.
    double global_mean(std::span<const double> x) const;
    double global_mean(std::span<const double> x, Branch b) const;

    //! Temperature at the ice line that drives eta.
    double iceline_temperature(std::span<const double> x) const;
    double iceline_temperature(std::span<const double> x, Branch b) const;

    //! Piecewise temperature profile T(y) implied by the state.
    double temperature_profile(std::span<const double> x, double y) const;
    //! Latitudes where temperature_profile jumps for this state.
    std::vector<double> profile_breakpoints(std::span<const double> x) const;

    /*!
     * Point on the critical manifold over eta: every fast variable at its
     * rest value for fixed eta.
     */
    ModelState slow_manifold_state(double eta) const;
    ModelState slow_manifold_state(double eta, Branch b) const;

    //! Diffusive Jormungand: d f_0^+/d eta - d f_0^-/d eta at eta = rho.
    double jacobian_gap_at_sigma() const;
    //! Analytic Jacobian (row major) of the diffusive field on one branch.
    std::vector<double> diffusive_jacobian(std::span<const double> x, Branch b) const;

  private:
    double relax_tbar_offset(std::span<const double> x, Branch b) const;

    ModelParams params_;
    Variant variant_;
    StateLayout layout_;
    AlbedoMoments moments_;
    std::optional<double> rho_;
    std::vector<double> rates_;
    std::array<std::vector<Polynomial>, 2> forcing_;
};

}  // namespace ebm
