#include "cbwk/offline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "format.hpp"

namespace cbwk {

namespace {

void check_arm_vectors(std::span<const double> values,
                       std::span<const double> costs, const char* where) {
  if (values.size() != costs.size())
    throw std::invalid_argument(std::string(where) +
                                ": values and costs differ in length");
  if (values.empty())
    throw std::invalid_argument(std::string(where) + ": no arms");
  for (double c : costs)
    if (!(c > 0.0))
      throw std::invalid_argument(std::string(where) +
                                  ": costs must be positive");
}

double dot_counts(const std::vector<int>& counts,
                  std::span<const double> weights) {
  double s = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) s += counts[i] * weights[i];
  return s;
}

}  // namespace

std::vector<double> CostMatrix::column(int col) const {
  std::vector<double> out(d(), 0.0);
  for (int row = 0; row < d(); ++row) out[row] = at(row, col);
  return out;
}

std::vector<int> bangperbuck_order(std::span<const double> values,
                                   std::span<const double> costs) {
  check_arm_vectors(values, costs, "bangperbuck_order");
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return values[a] / costs[a] > values[b] / costs[b];
  });
  return order;
}

Allocation cbwk_greedy(std::span<const double> values,
                       std::span<const double> costs, double budget,
                       int horizon) {
  check_arm_vectors(values, costs, "cbwk_greedy");
  const int cap = std::max(horizon, 0);
  Allocation out;
  out.counts.assign(values.size(), 0);
  double remaining = budget;
  for (int idx : bangperbuck_order(values, costs)) {
    double afford = std::floor((remaining + kBudgetSlack) / costs[idx]);
    long long take = std::min<long long>(cap, std::max(0.0, afford));
    out.counts[idx] = static_cast<int>(take);
    remaining -= costs[idx] * take;
  }
  out.total_value = dot_counts(out.counts, values);
  out.total_cost = dot_counts(out.counts, costs);
  return out;
}

Allocation cbwk_greedy_2approx(std::span<const double> values,
                               std::span<const double> costs, double budget,
                               int horizon) {
  Allocation best = cbwk_greedy(values, costs, budget, horizon);
  const int cap = std::max(horizon, 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    double afford = std::floor((budget + kBudgetSlack) / costs[i]);
    long long take = std::min<long long>(cap, std::max(0.0, afford));
    double value = static_cast<double>(take) * values[i];
    if (value > best.total_value) {
      best.counts.assign(values.size(), 0);
      best.counts[i] = static_cast<int>(take);
      best.total_value = value;
      best.total_cost = static_cast<double>(take) * costs[i];
    }
  }
  return best;
}

FractionalSolution lp_opt_fractional(std::span<const double> values,
                                     std::span<const double> costs,
                                     double budget, int horizon) {
  check_arm_vectors(values, costs, "lp_opt_fractional");
  const double cap = std::max(horizon, 0);
  FractionalSolution out;
  out.zeta.assign(values.size(), 0.0);
  double remaining = budget;
  for (int idx : bangperbuck_order(values, costs)) {
    if (remaining <= 0.0) break;
    double z = std::min(cap, std::max(0.0, remaining / costs[idx]));
    out.zeta[idx] = z;
    out.opt_value += z * values[idx];
    remaining -= z * costs[idx];
  }
  return out;
}

Allocation dp_exact(std::span<const double> values,
                    std::span<const double> costs, double budget, int horizon,
                    int scale) {
  check_arm_vectors(values, costs, "dp_exact");
  if (scale < 1) throw std::invalid_argument("dp_exact: scale must be >= 1");
  if (!(budget >= 0.0))
    throw std::invalid_argument("dp_exact: budget must be >= 0");
  const int n = static_cast<int>(values.size());
  const long long cap = std::max(horizon, 0);

  std::vector<long long> w(n);
  long long spend_ceiling = 0;
  for (int i = 0; i < n; ++i) {
    double scaled = static_cast<double>(scale) * costs[i];
    w[i] = std::llround(scaled);
    if (std::abs(scaled - static_cast<double>(w[i])) > 1e-9)
      throw std::invalid_argument(
          "dp_exact: scale * cost of arm " + std::to_string(i + 1) +
          " is not integral (got " + detail::real17(scaled) + ")");
    spend_ceiling += w[i] * cap;
  }
  long long W = static_cast<long long>(
      std::floor(budget * static_cast<double>(scale) + kBudgetSlack));
  W = std::clamp<long long>(W, 0, spend_ceiling);
  if ((W + 1) * static_cast<long long>(n + 1) > 50'000'000)
    throw std::invalid_argument(
        "dp_exact: scaled problem too large; this solver is oracle-grade");

  // dp[i][b]: best value attainable with arms i..n-1 under scaled budget b.
  std::vector<std::vector<double>> dp(
      n + 1, std::vector<double>(static_cast<std::size_t>(W) + 1, 0.0));
  for (int i = n - 1; i >= 0; --i) {
    for (long long b = 0; b <= W; ++b) {
      double best = dp[i + 1][b];
      long long kmax = std::min<long long>(cap, b / w[i]);
      for (long long k = 1; k <= kmax; ++k) {
        double cand = values[i] * static_cast<double>(k) + dp[i + 1][b - k * w[i]];
        if (cand > best) best = cand;
      }
      dp[i][b] = best;
    }
  }

  // Reconstruct taking the smallest optimal count at each arm in index order,
  // which yields the lexicographically smallest optimal count vector. The
  // candidates are recomputed with the exact expressions used to fill the
  // table, so the equality test is exact.
  Allocation out;
  out.counts.assign(n, 0);
  long long b = W;
  for (int i = 0; i < n; ++i) {
    long long kmax = std::min<long long>(cap, b / w[i]);
    for (long long k = 0; k <= kmax; ++k) {
      double cand = values[i] * static_cast<double>(k) + dp[i + 1][b - k * w[i]];
      if (cand == dp[i][b]) {
        out.counts[i] = static_cast<int>(k);
        b -= k * w[i];
        break;
      }
    }
  }
  out.total_value = dot_counts(out.counts, values);
  out.total_cost = dot_counts(out.counts, costs);
  return out;
}

CostMatrix build_cost_matrix(std::span<const double> costs, double budget,
                             int horizon) {
  if (costs.empty()) throw std::invalid_argument("build_cost_matrix: no arms");
  if (!(budget > 0.0))
    throw std::invalid_argument("build_cost_matrix: budget must be positive");
  if (horizon < 1)
    throw std::invalid_argument("build_cost_matrix: horizon must be >= 1");
  for (double c : costs)
    if (!(c > 0.0 && c <= 1.0))
      throw std::invalid_argument(
          "build_cost_matrix: costs must lie in (0,1]");
  const int n = static_cast<int>(costs.size());
  CostMatrix m;
  m.n = n;
  m.b_prime = std::min(budget, static_cast<double>(horizon));
  m.entries.assign(static_cast<std::size_t>(n + 1) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    m.entries[static_cast<std::size_t>(i) * n + i] =
        m.b_prime / static_cast<double>(horizon);
    m.entries[static_cast<std::size_t>(n) * n + i] =
        costs[i] * m.b_prime / budget;
  }
  return m;
}

DualWitness lp_dual_witness(std::span<const double> values,
                            std::span<const double> costs, double budget,
                            int horizon) {
  check_arm_vectors(values, costs, "lp_dual_witness");
  const int n = static_cast<int>(values.size());
  DualWitness out;
  out.eta.assign(n + 1, 0.0);
  if (!(budget > 0.0) || horizon < 1) return out;  // OPT = 0, all-zero dual

  // Marginal bang-per-buck ratio: the ratio of the first arm, in greedy
  // order, that the budget stops from reaching its full per-arm cap. Zero
  // when the budget is slack enough to cap every arm.
  const double cap = static_cast<double>(horizon);
  double remaining = budget;
  double lambda = 0.0;
  for (int idx : bangperbuck_order(values, costs)) {
    double z = std::min(cap, std::max(0.0, remaining / costs[idx]));
    if (z < cap - 1e-12) {
      lambda = values[idx] / costs[idx];
      break;
    }
    remaining -= z * costs[idx];
  }

  const double b_prime = std::min(budget, cap);
  out.eta[n] = lambda * budget / b_prime;
  double sum = out.eta[n];
  for (int i = 0; i < n; ++i) {
    double surplus = std::max(0.0, values[i] - lambda * costs[i]);
    out.eta[i] = surplus * cap / b_prime;
    sum += out.eta[i];
  }
  out.value = b_prime * sum;
  return out;
}

void write_allocation(const Allocation& alloc, std::ostream& out) {
  out << "counts =";
  for (int c : alloc.counts) out << ' ' << c;
  out << "\n";
  out << "total_value = " << detail::real17(alloc.total_value) << "\n";
  out << "total_cost = " << detail::real17(alloc.total_cost) << "\n";
}

}  // namespace cbwk
