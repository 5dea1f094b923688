#ifndef NERVE_CURVATURE_HPP
#define NERVE_CURVATURE_HPP

#include "nerve/flags.hpp"

namespace nerve {

// A diagonal invariant metric: g|_{m_i} = x_i Q|_{m_i}, x_i > 0.
struct Metric {
  Eigen::VectorXd x;
};

double metric_volume(const HomogeneousSpace& space, const Metric& m);
Metric volume_normalized(const HomogeneousSpace& space, Metric m);

// sc(x) = 1/2 sum d_i b_i / x_i - 1/4 sum [ijk] x_i/(x_j x_k)
double scalar_curvature(const HomogeneousSpace& space, const Metric& m);

struct CurvatureReport {
  double sc = 0;
  Eigen::VectorXd r;       // Ricci eigenvalues per summand
  double gradNormSq = 0;   // sum d_i (r_i - sc/n)^2 = tr Ric_0^2
};
CurvatureReport ricci_eigenvalues(const HomogeneousSpace& space, const Metric& m);

// gamma_v(t): x_i = exp(t v_i); volume one for trace-free v.
Metric geodesic_metric(const HomogeneousSpace& space, const TangentVector& v, double t);

// Two-eigenvalue unit direction shrinking m_k: v_1 < 0 < v_2.
TangentVector canonical_direction(const HomogeneousSpace& space, const std::vector<int>& I);

// a_k = sum_{j in I} d_j c_j + 1/4 [III]; zero exactly for toral k.
double toral_invariant(const HomogeneousSpace& space, const std::vector<int>& I);

// n_{G/H}: minimum of a_k over non-toral poset nodes (0 if none).
double uniform_nontoral_bound(const HomogeneousSpace& space, const SubalgebraPoset& poset);

// c_{G/H} < 0: the largest smallest-eigenvalue over the unit sphere, attained
// by the two-eigenvalue distribution with the largest negative block.
double cGH(const HomogeneousSpace& space);

struct CanonicalAsymptotics {
  TangentVector v;
  double a1 = 0, a2 = 0, t122 = 0;  // split coefficients and [I1 I2 I2]
  std::vector<double> t;
  std::vector<double> sc;
};
CanonicalAsymptotics canonical_asymptotics(const HomogeneousSpace& space, const std::vector<int>& I,
                                           const std::vector<double>& tGrid);

// Two-summand existence discriminant, Wang-Ziller form; requires ell = 2,
// [112] = 0 and k = h + m_1 non-toral.
double two_summand_discriminant(const HomogeneousSpace& space);

}  // namespace nerve

#endif
