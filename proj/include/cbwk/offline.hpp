#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace cbwk {

// Slack for floating-point budget comparisons: a pull that is affordable in
// exact arithmetic must not be lost to representation error.
inline constexpr double kBudgetSlack = 1e-9;

// Integer pull counts chosen by an offline solver, with the objective value
// and spend they induce under the value/cost vectors the solver was given.
struct Allocation {
  std::vector<int> counts;
  double total_value = 0.0;
  double total_cost = 0.0;
};

// Solution of the fractional relaxation: real-valued pull counts.
struct FractionalSolution {
  std::vector<double> zeta;
  double opt_value = 0.0;
};

// Resource-consumption matrix of the single-pull reduction: d = n+1 resources
// (one virtual per-arm resource capping an arm at one pull per round, plus the
// money row), one column per arm, every resource budget rescaled to
// b_prime = min(B, T). Column i has exactly two nonzero entries:
// at(i,i) = B'/T and at(n,i) = c_i * B'/B. All entries lie in [0,1].
struct CostMatrix {
  int n = 0;
  double b_prime = 0.0;
  std::vector<double> entries;  // row-major, (n+1) x n

  int d() const { return n + 1; }
  double at(int row, int col) const {
    return entries[static_cast<std::size_t>(row) * n + col];
  }
  std::vector<double> column(int col) const;
};

// Arm indices sorted by value/cost ratio, non-increasing; ties broken by
// ascending index. Costs must be positive.
std::vector<int> bangperbuck_order(std::span<const double> values,
                                   std::span<const double> costs);

// Greedy allocation: walk arms in bang-per-buck order and give each one as
// many pulls as the remaining budget affords, capped at `horizon` per arm.
Allocation cbwk_greedy(std::span<const double> values,
                       std::span<const double> costs, double budget,
                       int horizon);

// The better of the greedy allocation and the best single-arm allocation;
// a 2-approximation of the exact integral optimum.
Allocation cbwk_greedy_2approx(std::span<const double> values,
                               std::span<const double> costs, double budget,
                               int horizon);

// Exact optimum of the fractional relaxation (box constraints 0 <= z_i <= T
// plus one budget row), solved exactly by capped fractional knapsack. At most
// one arm receives a fractional count strictly between 0 and its cap.
FractionalSolution lp_opt_fractional(std::span<const double> values,
                                     std::span<const double> costs,
                                     double budget, int horizon);

// Exact integral optimum via bounded-knapsack DP over the scaled budget.
// Requires scale * costs[i] integral within 1e-9 for every arm; ties are
// broken toward the lexicographically smallest count vector. Oracle-grade:
// O(n * horizon * scale * budget) time, intended for small sizes.
Allocation dp_exact(std::span<const double> values,
                    std::span<const double> costs, double budget, int horizon,
                    int scale);

// Builds the reduction matrix described on CostMatrix. Requires budget > 0.
CostMatrix build_cost_matrix(std::span<const double> costs, double budget,
                             int horizon);

// Dual multipliers assembled from the greedy primal solution: the money row
// is priced at the marginal bang-per-buck ratio and the per-arm cap rows
// absorb the surplus of arms better than the marginal one. The witness is
// dual-feasible and its value equals the primal optimum (strong duality).
struct DualWitness {
  std::vector<double> eta;  // d = n+1 multipliers for the rescaled dual
  double value = 0.0;       // b_prime * sum(eta)
};
DualWitness lp_dual_witness(std::span<const double> values,
                            std::span<const double> costs, double budget,
                            int horizon);

// Key-value text form of an allocation (counts, total_value, total_cost).
void write_allocation(const Allocation& alloc, std::ostream& out);

}  // namespace cbwk
