#include "rit/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rit/error.hpp"

namespace rit {

namespace {

constexpr std::size_t kMaxDepth = 1'000'000;

bool open_unit(double x) { return x > 0.0 && x < 1.0; }

}  // namespace

void PlanInputs::validate() const {
  if (p < 1) throw ConfigError("p must be at least 1");
  if (!(theta1 > 0.0 && theta1 <= 1.0)) throw ConfigError("theta1 must lie in (0, 1]");
  if (!open_unit(nu)) throw ConfigError("nu must lie in (0, 1)");
  if (!open_unit(eta)) throw ConfigError("eta must lie in (0, 1)");
  if (!open_unit(q)) throw ConfigError("q must lie in (0, 1)");
}

double branching_pgf(const Branching& branching, double theta1, double q) {
  const double log_base = std::log1p(-theta1 * (1.0 - q));
  const double lower = std::exp(static_cast<double>(branching.b) * log_base);
  return (1.0 - branching.alpha) * lower + branching.alpha * lower * std::exp(log_base);
}

Branching solve_branching(double theta1, double q) {
  if (!(theta1 > 0.0 && theta1 <= 1.0)) throw ConfigError("theta1 must lie in (0, 1]");
  if (!open_unit(q)) throw ConfigError("q must lie in (0, 1)");

  // base = 1 - theta1 (1 - q) lies in [q, 1), so b >= 1.
  const double log_base = std::log1p(-theta1 * (1.0 - q));
  const double log_q = std::log(q);
  const double b_real = std::floor(log_q / log_base);
  if (!(b_real < 0x1.0p63)) throw ConfigError("theta1 too small: branch count overflows 64 bits");
  auto b = static_cast<std::uint64_t>(std::max(1.0, b_real));
  auto power = [&](std::uint64_t e) { return std::exp(static_cast<double>(e) * log_base); };
  // Repair floating-point rounding at the boundary.
  while (b > 1 && power(b) < q) --b;
  while (power(b + 1) >= q) ++b;

  // G is linear in alpha: (1-alpha) x + alpha x*base = q.
  const double lower = power(b);
  const double upper = lower * std::exp(log_base);
  double alpha = (lower - q) / (lower - upper);
  alpha = std::clamp(alpha, 0.0, std::nextafter(1.0, 0.0));
  return {b, alpha};
}

std::size_t choose_depth(std::size_t p, double q, double nu) {
  if (p < 1) throw ConfigError("p must be at least 1");
  if (!open_unit(q) || !open_unit(nu)) throw ConfigError("q and nu must lie in (0, 1)");
  const double pd = static_cast<double>(p);
  const double raw = std::ceil(std::log(pd / q) / std::log(1.0 / nu)) - 1.0;
  if (!(raw <= static_cast<double>(kMaxDepth)))
    throw ConfigError("required depth exceeds 10^6 (nu too close to 1)");
  auto depth = static_cast<std::size_t>(std::max(1.0, raw));
  auto tail = [&](std::size_t d) { return pd * std::pow(nu, static_cast<double>(d) + 1.0); };
  while (tail(depth) > q) ++depth;
  while (depth > 1 && tail(depth - 1) <= q) --depth;
  return depth;
}

std::size_t choose_trees(double eta, double q, double theta1) {
  if (!open_unit(eta) || !open_unit(q)) throw ConfigError("eta and q must lie in (0, 1)");
  if (!(theta1 > 0.0 && theta1 <= 1.0)) throw ConfigError("theta1 must lie in (0, 1]");
  const double m = std::ceil(-std::log(eta) / ((1.0 - q) * theta1));
  return std::max<std::size_t>(1, static_cast<std::size_t>(m));
}

double complexity_bound(std::size_t p, std::span<const double> delta, double theta1, double nu,
                        double eta, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]");
  if (!open_unit(nu) || !open_unit(eta)) throw ConfigError("nu and eta must lie in (0, 1)");
  const double pd = static_cast<double>(p);
  const double log_p = std::log(pd);
  double bracket = pd;
  for (double d : delta) {
    if (!(d >= 0.0 && d < 1.0)) throw ConfigError("sparsities must lie in [0, 1)");
    const double ratio = (1.0 + epsilon) * d / theta1;
    if (ratio > 1.0) bracket += std::pow(pd, std::log(ratio) / std::log(1.0 / nu));
  }
  return std::log(1.0 / eta) * log_p * log_p / epsilon * bracket;
}

Plan make_plan(const PlanInputs& in, std::span<const double> delta) {
  in.validate();
  Plan plan;
  plan.branching = solve_branching(in.theta1, in.q);
  plan.depth = choose_depth(in.p, in.q, in.nu);
  plan.trees = choose_trees(in.eta, in.q, in.theta1);
  plan.bound = complexity_bound(in.p, delta, in.theta1, in.nu, in.eta, std::min(1.0, in.epsilon()));
  return plan;
}

}  // namespace rit
