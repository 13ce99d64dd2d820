#include "cbwk/instance.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cbwk/error.hpp"
#include "cbwk/rng.hpp"
#include "format.hpp"

namespace cbwk {

std::optional<std::string> validate_instance(const BanditInstance& inst) {
  if (inst.horizon < 1) return "horizon must be at least 1";
  if (!std::isfinite(inst.budget)) return "budget must be finite";
  if (!(inst.budget >= 0.0)) return "budget must be non-negative";
  if (inst.mu.empty()) return "instance needs at least one arm";
  if (inst.mu.size() != inst.cost.size())
    return "length mismatch: " + std::to_string(inst.mu.size()) +
           " means vs " + std::to_string(inst.cost.size()) + " costs";
  for (std::size_t i = 0; i < inst.mu.size(); ++i)
    if (!(inst.mu[i] >= 0.0 && inst.mu[i] <= 1.0))
      return "mean of arm " + std::to_string(i + 1) + " outside [0,1]";
  for (std::size_t i = 0; i < inst.cost.size(); ++i)
    if (!(inst.cost[i] > 0.0 && inst.cost[i] <= 1.0))
      return "cost of arm " + std::to_string(i + 1) + " outside (0,1]";
  return std::nullopt;
}

BanditInstance gen_iid_uniform(int n, int horizon, double budget,
                               std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_iid_uniform: n must be >= 1");
  if (horizon < 1)
    throw std::invalid_argument("gen_iid_uniform: horizon must be >= 1");
  if (!(budget >= 0.0))
    throw std::invalid_argument("gen_iid_uniform: budget must be >= 0");
  Rng rng(seed);
  BanditInstance inst;
  inst.budget = budget;
  inst.horizon = horizon;
  inst.mu.resize(n);
  inst.cost.resize(n);
  for (int i = 0; i < n; ++i) inst.mu[i] = rng.uniform01();
  for (int i = 0; i < n; ++i)
    inst.cost[i] = std::max(kMinCost, rng.uniform01());
  return inst;
}

BanditInstance gen_tiered(int horizon, double budget, std::uint64_t seed) {
  if (horizon < 1)
    throw std::invalid_argument("gen_tiered: horizon must be >= 1");
  if (!(budget >= 0.0))
    throw std::invalid_argument("gen_tiered: budget must be >= 0");
  static constexpr double lo[4] = {0.9, 0.6, 0.2, 0.0};
  static constexpr double hi[4] = {1.0, 0.8, 0.4, 0.1};
  Rng rng(seed);
  BanditInstance inst;
  inst.budget = budget;
  inst.horizon = horizon;
  inst.mu.resize(4);
  inst.cost.resize(4);
  for (int i = 0; i < 4; ++i) inst.mu[i] = rng.uniform(lo[i], hi[i]);
  for (int i = 0; i < 4; ++i)
    inst.cost[i] = std::max(kMinCost, rng.uniform(lo[i], hi[i]));
  return inst;
}

void write_instance(const BanditInstance& inst, std::ostream& out) {
  out << "n = " << inst.arms() << "\n";
  out << "T = " << inst.horizon << "\n";
  out << "B = " << detail::real17(inst.budget) << "\n";
  out << "mu =";
  for (double m : inst.mu) out << ' ' << detail::real17(m);
  out << "\n";
  out << "cost =";
  for (double c : inst.cost) out << ' ' << detail::real17(c);
  out << "\n";
}

BanditInstance read_instance(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::string_view t = detail::trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("instance line " + std::to_string(lineno) +
                       ": expected 'key = value'");
    std::string key(detail::trim(t.substr(0, eq)));
    std::string value(detail::trim(t.substr(eq + 1)));
    if (key != "n" && key != "T" && key != "B" && key != "mu" && key != "cost")
      throw ParseError("instance: unknown key '" + key + "'");
    if (!kv.emplace(key, value).second)
      throw ParseError("instance: duplicate key '" + key + "'");
  }
  for (const char* req : {"n", "T", "B", "mu", "cost"})
    if (!kv.count(req))
      throw ParseError(std::string("instance: missing key '") + req + "'");

  BanditInstance inst;
  long long n = detail::parse_int(kv["n"], "instance n");
  inst.horizon = static_cast<int>(detail::parse_int(kv["T"], "instance T"));
  inst.budget = detail::parse_real(kv["B"], "instance B");
  for (const std::string& tok : detail::split_list(kv["mu"]))
    inst.mu.push_back(detail::parse_real(tok, "instance mu"));
  for (const std::string& tok : detail::split_list(kv["cost"]))
    inst.cost.push_back(detail::parse_real(tok, "instance cost"));
  if (static_cast<long long>(inst.mu.size()) != n)
    throw ParseError("instance: n = " + std::to_string(n) + " but " +
                     std::to_string(inst.mu.size()) + " means given");
  if (static_cast<long long>(inst.cost.size()) != n)
    throw ParseError("instance: n = " + std::to_string(n) + " but " +
                     std::to_string(inst.cost.size()) + " costs given");
  if (auto err = validate_instance(inst))
    throw std::invalid_argument("instance: " + *err);
  return inst;
}

void write_instance_file(const BanditInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_instance(inst, out);
  if (!out) throw IoError("failed while writing: " + path);
}

BanditInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  return read_instance(in);
}

}  // namespace cbwk
