#ifndef NERVE_SOLVER_HPP
#define NERVE_SOLVER_HPP

#include "nerve/curvature.hpp"

namespace nerve {

struct EinsteinSolution {
  Metric x;           // volume one
  double lambda = 0;  // Einstein constant, sc / dim m
  double sc = 0;
  double residual = 0;  // max_i |r_i - lambda|
  double gradNormSq = 0;
  int coindex = -1;
  int coindexAug = -1;
  int isometryClass = 0;  // solutions related by structure-preserving summand permutations
};

struct FlowOptions {
  double tMax = 200.0;
  double gradTol = 1e-14;
  double initialStep = 1e-2;
  double minStep = 1e-10;
  double collapseTol = 1e-12;
  bool storeTrajectory = false;
};

struct FlowResult {
  enum Status { Converged, ReachedTMax, StepFloor, BlowUp } status = ReachedTMax;
  Metric final;
  double t = 0;
  double sc = 0;
  double gradNormSq = 0;
  int collapsedSummand = -1;
  std::vector<std::pair<double, Metric>> trajectory;
};

// Volume-normalized Ricci flow dx_i/dt = -2 x_i (r_i - sc/n), adaptive RK4
// in log coordinates; sc is nondecreasing along accepted steps.
FlowResult ricci_flow(const HomogeneousSpace& space, const Metric& x0, const FlowOptions& opts = {});

struct NewtonResult {
  enum Status { Ok, NoConvergence, SingularJacobian } status = NoConvergence;
  EinsteinSolution sol;
  double conditionEstimate = 0;
};

// Solve r_i(x) = lambda with the volume-one constraint, Newton in log
// coordinates with the analytic Jacobian.
NewtonResult newton_refine(const HomogeneousSpace& space, const Metric& x0);

struct SearchOptions {
  std::uint64_t seed = 1;
  double residualTol = 1e-9;
  double dedupeTol = 1e-6;
  double tMax = 200.0;
  std::vector<double> ladder = {0.5, 1.0, 2.0, 4.0};
  const SubalgebraPoset* poset = nullptr;  // canonical directions source
};

// Multistart flow-then-Newton (plus direct Newton) over a deterministic
// low-discrepancy direction grid and the canonical directions; deduplicated
// list of volume-one solutions, deterministic given the seed.
std::vector<EinsteinSolution> find_einstein(const HomogeneousSpace& space, const SearchOptions& opts = {});

// Hessian signature of sc at a critical point by central differences in the
// L2 metric; returns (coindex, augmented coindex).
std::pair<int, int> coindex(const HomogeneousSpace& space, const EinsteinSolution& sol);

}  // namespace nerve

#endif
