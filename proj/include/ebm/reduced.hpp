#pragma once

#include "ebm/model.hpp"
#include "ebm/polynomial.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace ebm {

/*!
 * Reduced slow equation eta' = eps h(eta).
 *
 * Smooth variants keep the same polynomial in `below` and `above`. With a
 * switching latitude, `below` is h^- on [0, rho) and `above` is h^+ on
 * [rho, 1].
 */
struct ReducedPoly
{
    Variant variant = Variant::DiffusiveBudyko;
    int N = 1;
    Polynomial below;
    Polynomial above;
    std::optional<double> rho;

    const Polynomial& branch(Branch b) const { return b == Branch::Below ? below : above; }
    Branch branch_at(double eta) const
    {
        return (rho && eta < *rho) ? Branch::Below : Branch::Above;
    }
    double operator()(double eta) const { return branch(branch_at(eta))(eta); }
    double slope(double eta) const { return branch(branch_at(eta)).derivative()(eta); }
    //! Only relax Jormungand jumps at rho.
    bool discontinuous() const { return variant == Variant::RelaxJormungand; }
};

ReducedPoly build_h(const Model& model);
ReducedPoly build_h(const ModelParams& params);

enum class Stability
{
    Stable,
    Unstable,
    SlidingAtRho,
    BoundarySnowball,
    BoundaryIceFree,
    Degenerate,
};

std::string_view to_string(Stability s);

struct Equilibrium
{
    double eta = 0.0;
    Stability stability = Stability::Degenerate;
    double slope = 0.0;                //!< h'(eta) on the active branch (0 for non-roots)
    std::vector<double> temp_coeffs;   //!< fast variables on the critical manifold
    double global_mean = 0.0;          //!< T-bar at the equilibrium

    bool interior_stable() const
    {
        return stability == Stability::Stable || stability == Stability::SlidingAtRho;
    }
};

struct RootOptions
{
    int grid = 10000;                 //!< scan cells on [0, 1]
    double h_tol = 1e-12;             //!< polish target for |h|
    double degenerate_slope = 1e-8;   //!< |h'| below this is reported Degenerate
    bool boundaries = true;           //!< report snowball / ice-free attractors
};

/*!
 * Value convexification at rho: [min(h^-, h^+), max(h^-, h^+)].
 * Sliding (attracting) when h^-(rho) > 0 > h^+(rho).
 */
struct FilippovValue
{
    double h_minus = 0.0;
    double h_plus = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool sliding = false;
    bool repelling = false;

    bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
};

FilippovValue filippov_set(const ReducedPoly& h);

/*!
 * Roots of h in [0, 1] (per branch segment), sorted by eta, plus sliding or
 * boundary entries. Temperatures are left empty; see the Model overload.
 */
std::vector<Equilibrium> find_equilibria(const ReducedPoly& h, const RootOptions& opts = {});

//! Same, with temperatures and global mean taken from the critical manifold.
std::vector<Equilibrium> find_equilibria(const Model& model, const RootOptions& opts = {});

//! Diffusive critical manifold (f_0(eta), ..., f_2N(eta)).
std::vector<double> slow_manifold_temps(const Model& model, double eta);
std::vector<double> slow_manifold_temps(const ModelParams& params, double eta);

/*!
 * Diffusion coefficient D in (1e-3, 10) with h(eta_target; D) = 0 for the
 * diffusive Budyko model. Throws NoSolution without a sign change and
 * DegenerateRoot when h(eta_target) does not depend on D.
 */
double solve_D_for_target(const ModelParams& params, double eta_target);

}  // namespace ebm
