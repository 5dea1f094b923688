#include "nerve/solver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nerve {

namespace {

Eigen::VectorXd weighted_dims(const HomogeneousSpace& sp) {
  Eigen::VectorXd d(sp.ell());
  for (int i = 0; i < sp.ell(); ++i) d[i] = sp.summands[i].d;
  return d;
}

// d(log x_i)/dt = -2 (r_i - sc/n)
Eigen::VectorXd flow_rhs(const HomogeneousSpace& sp, const Eigen::VectorXd& u) {
  Metric m{u.array().exp()};
  auto rep = ricci_eigenvalues(sp, m);
  double mean = rep.sc / sp.dimM();
  return -2.0 * (rep.r.array() - mean).matrix();
}

void renormalize(const HomogeneousSpace& sp, Eigen::VectorXd& u) {
  Eigen::VectorXd d = weighted_dims(sp);
  u.array() -= d.dot(u) / sp.dimM();
}

Eigen::VectorXd rk4_step(const HomogeneousSpace& sp, const Eigen::VectorXd& u, double h) {
  Eigen::VectorXd k1 = flow_rhs(sp, u);
  Eigen::VectorXd k2 = flow_rhs(sp, u + 0.5 * h * k1);
  Eigen::VectorXd k3 = flow_rhs(sp, u + 0.5 * h * k2);
  Eigen::VectorXd k4 = flow_rhs(sp, u + h * k3);
  return u + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
}

// analytic Jacobian of r_i with respect to u_j = log x_j
Eigen::MatrixXd ricci_jacobian(const HomogeneousSpace& sp, const Eigen::VectorXd& u) {
  const int l = sp.ell();
  Eigen::VectorXd x = u.array().exp();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(l, l);
  for (int i = 0; i < l; ++i) {
    const auto& s = sp.summands[i];
    J(i, i) += -0.5 * s.b / x[i];
    for (int j = 0; j < l; ++j)
      for (int k = 0; k < l; ++k) {
        double t = sp.T(i, j, k);
        if (t == 0) continue;
        double term1 = -t * x[j] / (x[i] * x[k]) / (2.0 * s.d);  // e^{u_j-u_i-u_k}
        J(i, j) += term1;
        J(i, i) -= term1;
        J(i, k) -= term1;
        double term2 = t * x[i] / (x[j] * x[k]) / (4.0 * s.d);  // e^{u_i-u_j-u_k}
        J(i, i) += term2;
        J(i, j) -= term2;
        J(i, k) -= term2;
      }
  }
  return J;
}

EinsteinSolution make_solution(const HomogeneousSpace& sp, const Metric& m) {
  EinsteinSolution sol;
  sol.x = volume_normalized(sp, m);
  auto rep = ricci_eigenvalues(sp, sol.x);
  sol.sc = rep.sc;
  sol.lambda = rep.sc / sp.dimM();
  sol.gradNormSq = rep.gradNormSq;
  sol.residual = 0;
  for (int i = 0; i < sp.ell(); ++i) sol.residual = std::max(sol.residual, std::abs(rep.r[i] - sol.lambda));
  return sol;
}

// summand permutations preserving (d, b, c) and the triple tensor
std::vector<std::vector<int>> structure_symmetries(const HomogeneousSpace& sp) {
  const int l = sp.ell();
  std::vector<int> perm(l);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  auto compatible = [&](const std::vector<int>& p) {
    for (int i = 0; i < l; ++i) {
      const auto &a = sp.summands[i], &b = sp.summands[p[i]];
      if (a.d != b.d || std::abs(a.b - b.b) > 1e-8 || std::abs(a.c - b.c) > 1e-8) return false;
    }
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j)
        for (int k = 0; k < l; ++k)
          if (std::abs(sp.T(i, j, k) - sp.T(p[i], p[j], p[k])) > 1e-7) return false;
    return true;
  };
  if (l > 8) return {perm};  // identity only; factorial blowup guard
  do {
    if (compatible(perm)) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace

FlowResult ricci_flow(const HomogeneousSpace& space, const Metric& x0, const FlowOptions& opts) {
  FlowResult res;
  for (int i = 0; i < space.ell(); ++i)
    if (!(x0.x[i] > 0)) fail(Errc::NonPositiveMetric, "flow start must be positive");
  Eigen::VectorXd u = x0.x.array().log();
  renormalize(space, u);
  double t = 0, h = opts.initialStep;
  auto record = [&](double tt) {
    if (opts.storeTrajectory) res.trajectory.emplace_back(tt, Metric{u.array().exp()});
  };
  record(0);
  double scPrev = scalar_curvature(space, Metric{u.array().exp()});
  while (t < opts.tMax) {
    auto rep = ricci_eigenvalues(space, Metric{u.array().exp()});
    if (rep.gradNormSq < opts.gradTol) {
      res.status = FlowResult::Converged;
      break;
    }
    // step doubling error control
    Eigen::VectorXd full, half;
    bool finite = true;
    try {
      full = rk4_step(space, u, h);
      half = rk4_step(space, rk4_step(space, u, h / 2), h / 2);
      finite = full.allFinite() && half.allFinite();
    } catch (const Error&) {
      finite = false;
    }
    double err = finite ? (full - half).norm() : 1.0;
    if ((!finite || err > 1e-8) && h > opts.minStep) {
      h = std::max(opts.minStep, h * 0.5);
      continue;
    }
    if (!finite) {
      res.status = FlowResult::StepFloor;
      break;
    }
    u = half;
    renormalize(space, u);
    t += h;
    if (err < 1e-11) h = std::min(1.0, h * 2.0);
    Eigen::VectorXd x = u.array().exp();
    if (u.minCoeff() < -200.0) {
      int iMin;
      u.minCoeff(&iMin);
      res.status = FlowResult::BlowUp;
      res.collapsedSummand = iMin;
      res.final = Metric{x};
      res.t = t;
      return res;
    }
    for (int i = 0; i < space.ell(); ++i)
      if (x[i] < opts.collapseTol) {
        res.status = FlowResult::BlowUp;
        res.collapsedSummand = i;
        res.final = Metric{x};
        res.t = t;
        return res;
      }
    double scNow = scalar_curvature(space, Metric{x});
    if (scNow < scPrev - 1e-7 * std::max(1.0, std::abs(scPrev))) {
      // integrator tolerance violated; shrink
      if (h <= opts.minStep * 2) {
        res.status = FlowResult::StepFloor;
        break;
      }
      h *= 0.25;
      continue;
    }
    scPrev = scNow;
    record(t);
    if (h <= opts.minStep) {
      res.status = FlowResult::StepFloor;
      break;
    }
  }
  res.final = Metric{u.array().exp()};
  auto rep = ricci_eigenvalues(space, res.final);
  res.sc = rep.sc;
  res.gradNormSq = rep.gradNormSq;
  res.t = t;
  if (res.status == FlowResult::ReachedTMax && rep.gradNormSq < opts.gradTol)
    res.status = FlowResult::Converged;
  if (res.status == FlowResult::StepFloor) {
    // explicit log-coordinate steps cannot cross a finite-time collapse;
    // classify a floor stall on a shrinking direction as the collapse it is
    int iMin;
    double xMin = res.final.x.minCoeff(&iMin);
    if (xMin < 1e-6 && flow_rhs(space, u)[iMin] < 0) {
      res.status = FlowResult::BlowUp;
      res.collapsedSummand = iMin;
    }
  }
  return res;
}

NewtonResult newton_refine(const HomogeneousSpace& space, const Metric& x0) {
  NewtonResult out;
  const int l = space.ell();
  for (int i = 0; i < l; ++i)
    if (!(x0.x[i] > 0)) fail(Errc::NonPositiveMetric, "newton start must be positive");
  Eigen::VectorXd d = weighted_dims(space);
  // unknowns (u, lambda); F = (r(e^u) - lambda, d.u)
  Eigen::VectorXd u = x0.x.array().log();
  double lambda;
  {
    auto rep = ricci_eigenvalues(space, x0);
    lambda = rep.sc / space.dimM();
  }
  for (int iter = 0; iter < 50; ++iter) {
    if (!u.allFinite() || u.cwiseAbs().maxCoeff() > 200) break;
    Metric m{u.array().exp()};
    auto rep = ricci_eigenvalues(space, m);
    Eigen::VectorXd F(l + 1);
    F.head(l) = rep.r.array() - lambda;
    F[l] = d.dot(u);
    if (F.head(l).cwiseAbs().maxCoeff() < 1e-12 && std::abs(F[l]) < 1e-12) {
      out.status = NewtonResult::Ok;
      out.sol = make_solution(space, m);
      return out;
    }
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(l + 1, l + 1);
    J.topLeftCorner(l, l) = ricci_jacobian(space, u);
    J.col(l).head(l).setConstant(-1.0);
    J.row(l).head(l) = d.transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    if (!lu.isInvertible()) {
      out.status = NewtonResult::SingularJacobian;
      out.conditionEstimate = std::numeric_limits<double>::infinity();
      return out;
    }
    double cond = lu.maxPivot() == 0 ? std::numeric_limits<double>::infinity()
                                     : std::abs(lu.maxPivot()) /
                                           std::abs(lu.matrixLU().diagonal().cwiseAbs().minCoeff());
    out.conditionEstimate = cond;
    if (cond > 1e14) {
      out.status = NewtonResult::SingularJacobian;
      return out;
    }
    Eigen::VectorXd step = lu.solve(F);
    double cap = step.head(l).cwiseAbs().maxCoeff();
    if (cap > 2.0) step *= 2.0 / cap;  // damped far from the root
    u -= step.head(l);
    lambda -= step[l];
    if (!u.allFinite() || u.cwiseAbs().maxCoeff() > 60) break;  // diverging
  }
  out.status = NewtonResult::NoConvergence;
  return out;
}

std::vector<EinsteinSolution> find_einstein(const HomogeneousSpace& space, const SearchOptions& opts) {
  const int l = space.ell();
  std::vector<EinsteinSolution> found;
  Eigen::VectorXd dw = weighted_dims(space);
  // independent re-verification: the squared gradient norm recomputed from
  // central differences of sc along an L2-orthonormal trace-free basis
  auto fd_grad_norm_sq = [&](const Metric& m) {
    std::vector<Eigen::VectorXd> basis;
    for (int i = 1; i < l; ++i) {
      Eigen::VectorXd w = Eigen::VectorXd::Unit(l, i);
      w.array() -= dw.dot(w) / space.dimM();
      for (const auto& u : basis) w -= (dw.array() * u.array() * w.array()).sum() * u;
      double n = std::sqrt((dw.array() * w.array() * w.array()).sum());
      if (n > 1e-10) basis.push_back(w / n);
    }
    const double h = 1e-5;
    Eigen::VectorXd u0 = m.x.array().log();
    double total = 0;
    for (const auto& w : basis) {
      double fp = scalar_curvature(space, Metric{(u0 + h * w).array().exp()});
      double fm = scalar_curvature(space, Metric{(u0 - h * w).array().exp()});
      double g = (fp - fm) / (2 * h);
      total += g * g;
    }
    return total;
  };
  auto accept = [&](const EinsteinSolution& sol) {
    if (sol.residual > opts.residualTol) return;
    if (l > 1 && fd_grad_norm_sq(sol.x) > 1e-8) return;  // second-path check
    for (const auto& other : found)
      if ((other.x.x - sol.x.x).cwiseAbs().maxCoeff() < opts.dedupeTol) return;
    found.push_back(sol);
  };

  if (l == 1) {
    // isotropy irreducible: Q is the solution (Schur)
    EinsteinSolution sol = make_solution(space, Metric{Eigen::VectorXd::Ones(1)});
    sol.residual = 0;
    found.push_back(sol);
    return found;
  }
  {
    // flat torus: every metric is Ricci-flat, report Q with lambda = 0
    double tmax = 0;
    for (double t : space.tripleTensor) tmax = std::max(tmax, t);
    if (space.bGH() < 1e-12 && tmax < 1e-12) {
      EinsteinSolution sol = make_solution(space, Metric{Eigen::VectorXd::Ones(l)});
      found.push_back(sol);
      return found;
    }
  }

  // starts: basepoint, low-discrepancy sphere grid, canonical directions
  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::VectorXd::Zero(l));  // u = 0, metric Q
  Eigen::VectorXd d = weighted_dims(space);
  auto push_direction = [&](Eigen::VectorXd v) {
    v.array() -= d.dot(v) / space.dimM();
    double norm = std::sqrt((d.array() * v.array() * v.array()).sum());
    if (norm < 1e-12) return;
    v /= norm;
    for (double t : opts.ladder) starts.push_back(t * v);
  };
  const int nDirs = 2 * l * l;
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79};
  for (int k = 0; k < nDirs; ++k) {
    Eigen::VectorXd v(l);
    for (int i = 0; i < l; ++i) {
      // Box-Muller over Halton points, deterministic; seed offsets the index
      double u1 = halton(opts.seed + 1 + k * l + i, primes[(2 * i) % 22]);
      double u2 = halton(opts.seed + 1 + k * l + i, primes[(2 * i + 1) % 22]);
      u1 = std::min(std::max(u1, 1e-12), 1.0 - 1e-12);
      v[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    push_direction(v);
  }
  if (opts.poset) {
    for (const auto& node : opts.poset->nodes) {
      TangentVector v = canonical_direction(space, node.indexSet);
      push_direction(v.v);
      push_direction(-v.v);
    }
  }

  std::vector<std::vector<EinsteinSolution>> perStart(starts.size());
  parallel_for(starts.size(), [&](std::size_t si) {
    try {
      Metric m0{starts[si].array().exp()};
      // direct Newton (catches saddles the ascent flow escapes)
      auto nr = newton_refine(space, m0);
      if (nr.status == NewtonResult::Ok) perStart[si].push_back(nr.sol);
      // flow, then Newton
      FlowOptions fo;
      fo.tMax = opts.tMax;
      auto fr = ricci_flow(space, m0, fo);
      if (fr.status == FlowResult::Converged || fr.gradNormSq < 1e-8) {
        auto nr2 = newton_refine(space, fr.final);
        if (nr2.status == NewtonResult::Ok) perStart[si].push_back(nr2.sol);
      }
    } catch (const Error&) {
      // a start that leaves the numeric range contributes nothing
    }
  });
  for (const auto& batch : perStart)
    for (const auto& sol : batch) accept(sol);

  std::sort(found.begin(), found.end(), [](const EinsteinSolution& a, const EinsteinSolution& b) {
    for (int i = 0; i < a.x.x.size(); ++i) {
      if (std::abs(a.x.x[i] - b.x.x[i]) > 1e-9) return a.x.x[i] < b.x.x[i];
    }
    return false;
  });

  // isometry classes under structure-preserving summand permutations
  auto symmetries = structure_symmetries(space);
  std::vector<int> classOf(found.size(), -1);
  int nextClass = 0;
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (classOf[i] >= 0) continue;
    classOf[i] = nextClass;
    for (std::size_t j = i + 1; j < found.size(); ++j) {
      if (classOf[j] >= 0) continue;
      for (const auto& p : symmetries) {
        bool same = true;
        for (int k = 0; k < l && same; ++k)
          if (std::abs(found[i].x.x[p[k]] - found[j].x.x[k]) > opts.dedupeTol) same = false;
        if (same) {
          classOf[j] = nextClass;
          break;
        }
      }
    }
    ++nextClass;
  }
  for (std::size_t i = 0; i < found.size(); ++i) found[i].isometryClass = classOf[i];
  return found;
}

std::pair<int, int> coindex(const HomogeneousSpace& space, const EinsteinSolution& sol) {
  const int l = space.ell();
  if (l == 1) return {0, 0};
  Eigen::VectorXd d = weighted_dims(space);
  // L2-orthonormal basis of the trace-free subspace
  std::vector<Eigen::VectorXd> basis;
  for (int i = 1; i < l; ++i) {
    Eigen::VectorXd w = Eigen::VectorXd::Unit(l, i);
    w.array() -= d.dot(w) / space.dimM();
    for (const auto& u : basis) w -= (d.array() * u.array() * w.array()).sum() * u;
    double n = std::sqrt((d.array() * w.array() * w.array()).sum());
    if (n > 1e-10) basis.push_back(w / n);
  }
  const int k = int(basis.size());
  Eigen::VectorXd u0 = sol.x.x.array().log();
  auto scAt = [&](const Eigen::VectorXd& u) { return scalar_curvature(space, Metric{u.array().exp()}); };
  const double h = 1e-5;
  double sc0 = scAt(u0);
  Eigen::MatrixXd H(k, k);
  for (int a = 0; a < k; ++a) {
    H(a, a) = (scAt(u0 + h * basis[a]) + scAt(u0 - h * basis[a]) - 2 * sc0) / (h * h);
    for (int b = a + 1; b < k; ++b) {
      double v = (scAt(u0 + h * (basis[a] + basis[b])) + scAt(u0 - h * (basis[a] + basis[b])) -
                  scAt(u0 + h * (basis[a] - basis[b])) - scAt(u0 - h * (basis[a] - basis[b]))) /
                 (4 * h * h);
      H(a, b) = H(b, a) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  double maxAbs = 0;
  for (int i = 0; i < k; ++i) maxAbs = std::max(maxAbs, std::abs(es.eigenvalues()[i]));
  double tau = maxAbs > 0 ? 1e-5 * maxAbs : 1e-12;
  int m = 0, mAug = 0;
  for (int i = 0; i < k; ++i) {
    if (es.eigenvalues()[i] > tau) ++m;
    if (es.eigenvalues()[i] > -tau) ++mAug;
  }
  return {m, mAug};
}

}  // namespace nerve
