#pragma once

#include "ebm/model.hpp"
#include "ebm/reduced.hpp"

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

namespace ebm {

enum class Method
{
    DormandPrince,  //!< embedded explicit RK 5(4)
    //! Dormand-Prince on (T - f(eta), eta) with the linear decay of the
    //! diffusive modes integrated exactly (Lawson integrating factor).
    ExponentialDormandPrince,
    Auto,  //!< exponential for diffusive variants, plain otherwise
};

struct IntegratorOpts
{
    Method method = Method::Auto;
    double atol = 1e-9;
    double rtol = 1e-9;
    double t_end = 1000.0;
    double max_step = std::numeric_limits<double>::infinity();
    double min_step = 1e-12;
    double event_tol = 1e-10;
    //! Stop once ||rhs||_inf < tol_eq; 0 disables the check.
    double tol_eq = 0.0;
    std::size_t max_steps = 5'000'000;

    void validate() const;
};

enum class EventKind
{
    None,
    CrossSigma,
    SlidingOnset,
    SlidingExit,
    BoundarySnowball,
    BoundaryIceFree,
    BoundaryRelease,
    Equilibrium,
};

std::string_view to_string(EventKind k);

struct Event
{
    double t = 0.0;
    EventKind kind = EventKind::None;
    double eta = 0.0;
    std::size_t sample = 0;  //!< index into Trajectory::t
};

struct Trajectory
{
    std::vector<double> t;
    std::vector<ModelState> states;
    std::vector<EventKind> marks;  //!< event recorded at each sample (None if plain step)
    std::vector<Event> events;
    std::size_t steps = 0;
    std::size_t rejected = 0;

    const ModelState& back() const { return states.back(); }
    bool has(EventKind k) const;
};

//! Integrates the full system from state0 until t_end or equilibrium.
Trajectory integrate(const Model& model, const ModelState& state0, const IntegratorOpts& opts);

struct ReducedTrajectory
{
    std::vector<double> t;
    std::vector<double> eta;
    std::vector<EventKind> marks;
    std::vector<Event> events;

    bool has(EventKind k) const;
};

/*!
 * eta' = eps h(eta). At rho a discontinuous h follows the value-Filippov rule:
 * pinned when h^-(rho) > 0 > h^+(rho), otherwise crossing per the common sign.
 */
ReducedTrajectory integrate_reduced(const ReducedPoly& h, double eps, double eta0,
                                    const IntegratorOpts& opts);

struct FenichelRow
{
    double eps = 0.0;
    double eta = 0.0;        //!< ice line at the slow time tau
    double deviation = 0.0;  //!< max_n |T_2n - f_2n(eta)|
};

struct FenichelReport
{
    double tau = 0.0;
    std::vector<FenichelRow> rows;
    std::vector<double> ratios;  //!< deviation[i] / deviation[i+1]
    double slope = 0.0;          //!< least-squares slope of log deviation vs log eps
};

/*!
 * Distance from the critical manifold at the fixed slow time tau = eps t,
 * starting from eta_star - offset with every mode displaced by `kick`.
 * tau <= 0 selects 1 / |h'(eta_star)|, one e-folding of the reduced flow.
 */
FenichelReport fenichel_check(const ModelParams& params, double eta_star,
                              const std::vector<double>& eps_list, double tau = 0.0,
                              double offset = 0.1, double kick = 1.0,
                              const IntegratorOpts& opts = {});

}  // namespace ebm
