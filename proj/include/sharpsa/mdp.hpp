#pragma once

#include <vector>

#include "sharpsa/problem.hpp"
#include "sharpsa/vec.hpp"

namespace sharpsa {

/// Tabular discounted MDP with mean costs. Transitions may be substochastic
/// within the state space; the per-(s,a) deficit is the probability of
/// terminating (recorded in `terminal` so rows account for all mass).
struct MdpModel {
    std::string name;
    int n_states = 0;
    int n_actions = 0;
    std::vector<Mat> P;  // one S x S matrix per action, row s -> distribution over s'
    Mat terminal;        // S x A termination probability
    Mat cost;            // S x A mean costs
    double beta = 1.0;   // discount
    Vec xi;              // source weights, positive
    Mat pi;              // S x A sampling distribution for cost draws

    int sa_index(int s, int a) const { return s * n_actions + a; }
    int sa_count() const { return n_states * n_actions; }

    /// Row mass check: P rows plus terminal mass must each sum to 1.
    double worst_row_sum_error() const;
};

/// Cyclic three-state, two-action model: the chosen direction is reached with
/// probability 2/3, otherwise the next state is uniform over all three states,
/// so the desired state receives 2/3 + 1/9 = 7/9. Costs c(s_i, a) ~ N(i, 1),
/// beta = 0.2, xi = 1/3, pi = 1/6.
MdpModel make_mdp_3state();

/// Infinite-deck Blackjack with 290 states: hard totals 4..22 (22 collects
/// busts) and usable-ace totals 12..21, crossed with dealer showing card
/// 1..10. Stick resolves through an exact dealer rollout (dealer stands on
/// any 17); beta = 1, pi uniform 1/580.
MdpModel make_blackjack();

/// Optimal state values by value iteration (sup-norm tolerance).
Vec mdp_value_iteration(const MdpModel& m, double tol = 1e-12);

std::vector<int> mdp_greedy_policy(const MdpModel& m, const Vec& v);

/// Occupancy measure x(s,a) of a deterministic policy, flattened by sa_index.
Vec mdp_policy_occupancy(const MdpModel& m, const std::vector<int>& policy);

/// Occupancy measure of the uniformly random policy.
Vec mdp_uniform_occupancy(const MdpModel& m);

/// Constraint matrix of the occupancy-measure dual: row s' has coefficient
/// 1[s = s'] - beta P(s'|s,a) on variable x(s,a); right-hand side xi.
Mat mdp_dual_constraints(const MdpModel& m);

struct MdpDualOptions {
    double cost_sigma = 1.0;    // sampled cost noise N(mean, sigma^2)
    double proj_tol = 1e-10;
    int proj_max_sweeps = 10000;
};

/// The dual linear program as a stochastic optimization problem: linear
/// objective c_bar' x over {x >= 0 : A x = xi}, with importance-sampled
/// gradient estimates. The optimum is the greedy-policy occupancy computed
/// from value iteration at construction.
Problem make_mdp_dual(const MdpModel& m, const MdpDualOptions& opts = {});

}  // namespace sharpsa
