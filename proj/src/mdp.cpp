#include "sharpsa/mdp.hpp"

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

#include "sharpsa/errors.hpp"

namespace sharpsa {

double MdpModel::worst_row_sum_error() const {
    double worst = 0.0;
    for (int a = 0; a < n_actions; ++a) {
        for (int s = 0; s < n_states; ++s) {
            double mass = P[static_cast<std::size_t>(a)].row(s).sum() + terminal(s, a);
            worst = std::max(worst, std::abs(mass - 1.0));
        }
    }
    return worst;
}

MdpModel make_mdp_3state() {
    MdpModel m;
    m.name = "mdp3";
    m.n_states = 3;
    m.n_actions = 2;
    m.beta = 0.2;
    m.P.assign(2, Mat::Zero(3, 3));
    m.terminal = Mat::Zero(3, 2);
    m.cost = Mat::Zero(3, 2);
    m.xi = Vec::Constant(3, 1.0 / 3.0);
    m.pi = Mat::Constant(3, 2, 1.0 / 6.0);
    for (int s = 0; s < 3; ++s) {
        // action 0: anticlockwise, action 1: clockwise
        std::array<int, 2> desired = {(s + 2) % 3, (s + 1) % 3};
        for (int a = 0; a < 2; ++a) {
            for (int s2 = 0; s2 < 3; ++s2) m.P[static_cast<std::size_t>(a)](s, s2) = 1.0 / 9.0;
            m.P[static_cast<std::size_t>(a)](s, desired[static_cast<std::size_t>(a)]) += 2.0 / 3.0;
            m.cost(s, a) = static_cast<double>(s + 1);
        }
    }
    return m;
}

namespace {

// Blackjack state encoding: hard totals 4..22 (22 collects busts) then
// usable-ace totals 12..21, each crossed with dealer card 1..10.
constexpr int kHardMin = 4, kHardMax = 22;
constexpr int kSoftMin = 12, kSoftMax = 21;
constexpr int kDealerCards = 10;
constexpr int kHardStates = (kHardMax - kHardMin + 1) * kDealerCards;  // 190

int bj_state(bool usable, int total, int dealer) {
    if (!usable) return (total - kHardMin) * kDealerCards + (dealer - 1);
    return kHardStates + (total - kSoftMin) * kDealerCards + (dealer - 1);
}

// Card value distribution for an infinite deck: ranks A..9 at 1/13 each,
// ten-valued cards at 4/13.
struct CardDist {
    std::array<std::pair<int, double>, 10> cards;
    CardDist() {
        for (int v = 1; v <= 9; ++v) cards[static_cast<std::size_t>(v - 1)] = {v, 1.0 / 13.0};
        cards[9] = {10, 4.0 / 13.0};
    }
};

std::pair<bool, int> hit_outcome(bool usable, int total, int card) {
    bool ace = usable;
    int t = total;
    if (card == 1 && t + 11 <= 21) {
        t += 11;
        ace = true;
    } else {
        t += card;
    }
    if (t > 21 && ace) {
        t -= 10;
        ace = false;
    }
    if (t > 21) return {false, kHardMax};  // bust, collected in the hard-22 state
    return {ace, t};
}

// Distribution of the dealer's final total from the showing card:
// probabilities for 17, 18, 19, 20, 21 and bust. Dealer stands on any 17.
std::array<double, 6> dealer_distribution(int showing) {
    static const CardDist deck;
    std::map<std::pair<int, bool>, std::array<double, 6>> memo;
    std::function<std::array<double, 6>(int, bool)> go = [&](int total, bool ace) {
        if (total >= 17) {
            std::array<double, 6> out{};
            if (total > 21) {
                out[5] = 1.0;
            } else {
                out[static_cast<std::size_t>(total - 17)] = 1.0;
            }
            return out;
        }
        auto key = std::make_pair(total, ace);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        std::array<double, 6> out{};
        for (const auto& [card, prob] : deck.cards) {
            bool a2 = ace;
            int t2 = total;
            if (card == 1 && t2 + 11 <= 21) {
                t2 += 11;
                a2 = true;
            } else {
                t2 += card;
            }
            if (t2 > 21 && a2) {
                t2 -= 10;
                a2 = false;
            }
            auto sub = go(t2, a2);
            for (std::size_t i = 0; i < 6; ++i) out[i] += prob * sub[i];
        }
        memo[key] = out;
        return out;
    };
    if (showing == 1) return go(11, true);
    return go(showing, false);
}

double stick_reward(int player_total, int dealer_showing) {
    auto dist = dealer_distribution(dealer_showing);
    double r = dist[5];  // dealer bust
    for (int f = 17; f <= 21; ++f) {
        double p = dist[static_cast<std::size_t>(f - 17)];
        if (player_total > f) {
            r += p;
        } else if (player_total < f) {
            r -= p;
        }
    }
    return r;
}

}  // namespace

MdpModel make_blackjack() {
    static const CardDist deck;
    MdpModel m;
    m.name = "blackjack";
    m.n_states = 290;
    m.n_actions = 2;  // 0: stick, 1: hit
    m.beta = 1.0;
    m.P.assign(2, Mat::Zero(290, 290));
    m.terminal = Mat::Zero(290, 2);
    m.cost = Mat::Zero(290, 2);
    m.xi = Vec::Constant(290, 1.0 / 290.0);
    m.pi = Mat::Constant(290, 2, 1.0 / 580.0);

    auto fill_state = [&](bool usable, int total, int dealer) {
        int s = bj_state(usable, total, dealer);
        if (!usable && total == kHardMax) {
            // Busted: both actions end the game as a loss.
            for (int a = 0; a < 2; ++a) {
                m.terminal(s, a) = 1.0;
                m.cost(s, a) = 1.0;
            }
            return;
        }
        // Stick: terminal with the dealer-rollout reward.
        m.terminal(s, 0) = 1.0;
        m.cost(s, 0) = -stick_reward(total, dealer);
        // Hit: card outcomes stay in the state space (busts land on hard 22).
        for (const auto& [card, prob] : deck.cards) {
            auto [u2, t2] = hit_outcome(usable, total, card);
            m.P[1](s, bj_state(u2, t2, dealer)) += prob;
        }
        m.cost(s, 1) = 0.0;
    };

    for (int dealer = 1; dealer <= kDealerCards; ++dealer) {
        for (int total = kHardMin; total <= kHardMax; ++total) fill_state(false, total, dealer);
        for (int total = kSoftMin; total <= kSoftMax; ++total) fill_state(true, total, dealer);
    }
    return m;
}

Vec mdp_value_iteration(const MdpModel& m, double tol) {
    Vec v = Vec::Zero(m.n_states);
    for (int it = 0; it < 1000000; ++it) {
        Vec next(m.n_states);
        for (int s = 0; s < m.n_states; ++s) {
            double best = std::numeric_limits<double>::infinity();
            for (int a = 0; a < m.n_actions; ++a) {
                double q = m.cost(s, a) + m.beta * m.P[static_cast<std::size_t>(a)].row(s).dot(v);
                best = std::min(best, q);
            }
            next[s] = best;
        }
        double change = (next - v).lpNorm<Eigen::Infinity>();
        v = std::move(next);
        if (change < tol) return v;
    }
    throw std::runtime_error("value iteration did not converge");
}

std::vector<int> mdp_greedy_policy(const MdpModel& m, const Vec& v) {
    std::vector<int> policy(static_cast<std::size_t>(m.n_states), 0);
    for (int s = 0; s < m.n_states; ++s) {
        double best = std::numeric_limits<double>::infinity();
        for (int a = 0; a < m.n_actions; ++a) {
            double q = m.cost(s, a) + m.beta * m.P[static_cast<std::size_t>(a)].row(s).dot(v);
            if (q < best - 1e-14) {
                best = q;
                policy[static_cast<std::size_t>(s)] = a;
            }
        }
    }
    return policy;
}

namespace {

Vec occupancy_from_policy_matrix(const MdpModel& m, const Mat& mu) {
    // rho = xi + beta P_mu' rho, then x(s,a) = rho(s) mu(s,a).
    Mat P_mu = Mat::Zero(m.n_states, m.n_states);
    for (int a = 0; a < m.n_actions; ++a) {
        P_mu += mu.col(a).asDiagonal() * m.P[static_cast<std::size_t>(a)];
    }
    Mat lhs = Mat::Identity(m.n_states, m.n_states) - m.beta * P_mu.transpose();
    Vec rho = lhs.partialPivLu().solve(m.xi);
    Vec x(m.sa_count());
    for (int s = 0; s < m.n_states; ++s) {
        for (int a = 0; a < m.n_actions; ++a) x[m.sa_index(s, a)] = rho[s] * mu(s, a);
    }
    return x;
}

}  // namespace

Vec mdp_policy_occupancy(const MdpModel& m, const std::vector<int>& policy) {
    Mat mu = Mat::Zero(m.n_states, m.n_actions);
    for (int s = 0; s < m.n_states; ++s) mu(s, policy[static_cast<std::size_t>(s)]) = 1.0;
    return occupancy_from_policy_matrix(m, mu);
}

Vec mdp_uniform_occupancy(const MdpModel& m) {
    Mat mu = Mat::Constant(m.n_states, m.n_actions, 1.0 / m.n_actions);
    return occupancy_from_policy_matrix(m, mu);
}

Mat mdp_dual_constraints(const MdpModel& m) {
    Mat A = Mat::Zero(m.n_states, m.sa_count());
    for (int s = 0; s < m.n_states; ++s) {
        for (int a = 0; a < m.n_actions; ++a) {
            int col = m.sa_index(s, a);
            A(s, col) += 1.0;
            for (int s2 = 0; s2 < m.n_states; ++s2) {
                double p = m.P[static_cast<std::size_t>(a)](s, s2);
                if (p != 0.0) A(s2, col) -= m.beta * p;
            }
        }
    }
    return A;
}

Problem make_mdp_dual(const MdpModel& m, const MdpDualOptions& opts) {
    if (m.worst_row_sum_error() > 1e-12) throw std::invalid_argument("mdp: transition rows do not sum to 1");
    if (std::abs(m.pi.sum() - 1.0) > 1e-9) throw std::invalid_argument("mdp: pi must sum to 1");
    if (m.xi.minCoeff() <= 0.0) throw std::invalid_argument("mdp: xi must be positive");

    const int n = m.sa_count();
    Mat A = mdp_dual_constraints(m);

    Vec c_bar(n);
    Mat pi = m.pi;
    for (int s = 0; s < m.n_states; ++s) {
        for (int a = 0; a < m.n_actions; ++a) c_bar[m.sa_index(s, a)] = m.cost(s, a);
    }

    Vec x0 = mdp_uniform_occupancy(m);
    double residual = (A * x0 - m.xi).lpNorm<Eigen::Infinity>();
    if (residual > 1e-8 || x0.minCoeff() < -1e-12) {
        throw InfeasibleDual(m.name + ": uniform-policy occupancy violates the dual constraints (residual " +
                             std::to_string(residual) + ")");
    }

    Vec v_star = mdp_value_iteration(m);
    Vec x_star = mdp_policy_occupancy(m, mdp_greedy_policy(m, v_star));
    double opt_value = c_bar.dot(x_star);
    double primal_value = m.xi.dot(v_star);
    if (std::abs(opt_value - primal_value) > 1e-6 * (1.0 + std::abs(primal_value))) {
        throw std::runtime_error(m.name + ": dual/primal optimum mismatch");
    }

    Intersection inter;
    inter.pieces.emplace_back(AffineEqPiece(A, m.xi));
    inter.pieces.emplace_back(OrthantPiece(n));
    inter.tol = opts.proj_tol;
    inter.max_sweeps = opts.proj_max_sweeps;
    // Sampling region for condition checks; coordinates of any feasible
    // occupancy are bounded by the total discounted mass.
    double mass_bound = 2.0 * x0.sum() + 1.0;
    BoundingBox box{Vec::Zero(n), Vec::Constant(n, mass_bound)};
    auto feasible = std::make_shared<IntersectionSet>(std::move(inter), std::vector<Vec>{}, box);

    Problem p;
    p.name = m.name.empty() ? "mdp-dual" : m.name;
    p.dim = n;
    p.objective = [c_bar](const Vec& x) { return c_bar.dot(x); };
    p.grad = [c_bar](const Vec&) { return c_bar; };
    double sigma = opts.cost_sigma;
    p.sample_grad = [c_bar, pi, n, sigma](const Vec&, RngStream& rng) {
        Vec g = Vec::Zero(n);
        double u = rng.uniform();
        double acc = 0.0;
        int idx = n - 1;
        const int n_actions = static_cast<int>(pi.cols());
        for (int i = 0; i < n; ++i) {
            acc += pi(i / n_actions, i % n_actions);
            if (u < acc) {
                idx = i;
                break;
            }
        }
        double c_hat = rng.normal(c_bar[idx], sigma);
        g[idx] = c_hat / pi(idx / n_actions, idx % n_actions);
        return g;
    };
    p.feasible = feasible;
    p.optimum = OptimumInfo::point(x_star);
    p.opt_value = opt_value;
    p.initial = x0;
    return p;
}

}  // namespace sharpsa
