#pragma once

#include "ebm/model.hpp"
#include "ebm/reduced.hpp"

#include <string_view>
#include <utility>
#include <vector>

namespace ebm {

enum class SweepParam
{
    A,
    D,
    C,
    Q,
};

std::string_view to_string(SweepParam p);
SweepParam sweep_param_from_string(std::string_view s);
void set_param(ModelParams& params, SweepParam which, double value);

struct SweepSpec
{
    ModelParams base;
    SweepParam param = SweepParam::A;
    double min = 140.0;
    double max = 200.0;
    int count = 601;
    double fold_tol = 0.05;      //!< parameter resolution of transition refinement
    double match_radius = 0.05;  //!< max eta jump along a branch between grid points
    //! Folds keep bisecting past fold_tol until the colliding pair is this close in eta.
    double fold_gap_tol = 0.02;
    unsigned threads = 0;        //!< 0 = hardware concurrency
    RootOptions roots;

    void validate() const;
    std::vector<double> grid() const;
};

enum class EndKind
{
    DomainEdge,
    Fold,
    BoundaryCollision,
    Transition,
};

std::string_view to_string(EndKind k);

struct BranchPoint
{
    double param = 0.0;
    double eta = 0.0;
    Stability stability = Stability::Stable;
    double T0 = 0.0;
};

struct BifurcationBranch
{
    int id = 0;
    Stability stability = Stability::Stable;
    std::vector<BranchPoint> points;
    EndKind start = EndKind::DomainEdge;
    EndKind end = EndKind::DomainEdge;
    double start_param = 0.0;  //!< refined where the branch is born
    double end_param = 0.0;    //!< refined where the branch dies
};

//! A change of the interior equilibrium pattern located between two grid values.
struct TransitionPoint
{
    double param = 0.0;  //!< refined location
    double lo = 0.0;     //!< bracket with different patterns at each end
    double hi = 0.0;
    EndKind kind = EndKind::Transition;
    double eta = 0.0;    //!< where the equilibria appear or vanish
    double gap = 0.0;    //!< eta distance of the colliding pair at the refined bracket (folds)
};

struct SweepResult
{
    SweepParam param = SweepParam::A;
    std::vector<double> grid;
    std::vector<std::vector<Equilibrium>> equilibria;  //!< per grid value, sorted by eta
    std::vector<std::vector<int>> branch_of;           //!< branch id per equilibrium, -1 if none
    std::vector<BifurcationBranch> branches;
    std::vector<TransitionPoint> transitions;
};

SweepResult run_sweep(const SweepSpec& spec);

/*!
 * Parameter intervals with at least two coexisting stable interior states
 * (stable roots or a sliding state at rho). Endpoints use the refined
 * transition locations.
 */
std::vector<std::pair<double, double>> bistability_window(const SweepResult& result);

}  // namespace ebm
