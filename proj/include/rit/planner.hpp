#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace rit {

/// Assumptions about the target interaction that drive parameter choice.
struct PlanInputs {
  std::size_t p = 0;
  double theta1 = 0.5;  ///< class-1 prevalence of the target pattern
  double nu = 0.5;      ///< max conditional prevalence of any other variable given the pattern
  double eta = 0.1;     ///< allowed failure probability
  double q = 0.5;       ///< branching-process fixed point; epsilon = (1-q)/(2q)

  void validate() const;
  double epsilon() const { return (1.0 - q) / (2.0 * q); }
};

struct Branching {
  std::uint64_t b = 1;
  double alpha = 0.0;
};

/// Child-count distribution whose offspring generating function
///   G(q) = (1-alpha)(1-theta1(1-q))^b + alpha(1-theta1(1-q))^(b+1)
/// has q as a fixed point. b is the largest integer with (1-theta1(1-q))^b >= q.
Branching solve_branching(double theta1, double q);

/// G evaluated at q for a given branching distribution.
double branching_pgf(const Branching& branching, double theta1, double q);

/// Smallest depth D >= 1 with p * nu^(D+1) <= q.
std::size_t choose_depth(std::size_t p, double q, double nu);

/// ceil(-log(eta) / ((1-q) theta1)), at least 1.
std::size_t choose_trees(double eta, double q, double theta1);

/// Order-of-magnitude work bound (natural logs):
///   log(1/eta) log(p)^2 / epsilon * [p + sum_{k:(1+eps)delta_k > theta1} p^(log((1+eps)delta_k/theta1)/log(1/nu))]
/// Reporting only.
double complexity_bound(std::size_t p, std::span<const double> delta, double theta1, double nu,
                        double eta, double epsilon);

struct Plan {
  Branching branching;
  std::size_t depth = 1;
  std::size_t trees = 1;
  double bound = 0.0;
};

Plan make_plan(const PlanInputs& in, std::span<const double> delta);

}  // namespace rit
