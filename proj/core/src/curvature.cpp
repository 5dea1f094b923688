#include "nerve/curvature.hpp"

#include <cmath>
#include <map>

namespace nerve {

double metric_volume(const HomogeneousSpace& space, const Metric& m) {
  double logv = 0;
  for (int i = 0; i < space.ell(); ++i) logv += space.summands[i].d * std::log(m.x[i]);
  return std::exp(logv);
}

Metric volume_normalized(const HomogeneousSpace& space, Metric m) {
  double logv = 0;
  for (int i = 0; i < space.ell(); ++i) logv += space.summands[i].d * std::log(m.x[i]);
  m.x *= std::exp(-logv / space.dimM());
  return m;
}

double scalar_curvature(const HomogeneousSpace& space, const Metric& m) {
  const int l = space.ell();
  if (m.x.size() != l) fail(Errc::DimensionMismatch, "metric length != summand count");
  for (int i = 0; i < l; ++i)
    if (!(m.x[i] > 0)) fail(Errc::NonPositiveMetric, "metric coefficients must be positive");
  double sc = 0;
  for (int i = 0; i < l; ++i) sc += 0.5 * space.summands[i].d * space.summands[i].b / m.x[i];
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j)
      for (int k = 0; k < l; ++k) {
        double t = space.T(i, j, k);
        if (t != 0) sc -= 0.25 * t * m.x[i] / (m.x[j] * m.x[k]);
      }
  return sc;
}

CurvatureReport ricci_eigenvalues(const HomogeneousSpace& space, const Metric& m) {
  const int l = space.ell();
  if (!space.multiplicityFree) {
    // equivalent trivial lines (an m_0 split, e.g. a torus) keep the diagonal
    // formulas valid; any other multiplicity does not
    std::map<std::string, int> tags;
    for (const auto& s : space.summands)
      if (++tags[s.isotypeTag] > 1 && s.isotypeTag != "trivial")
        fail(Errc::MultiplicityNotFree, "Ricci eigenvalues need pairwise inequivalent summands");
  }
  for (int i = 0; i < l; ++i)
    if (!(m.x[i] > 0)) fail(Errc::NonPositiveMetric, "metric coefficients must be positive");
  CurvatureReport rep;
  rep.r.resize(l);
  for (int i = 0; i < l; ++i) {
    const auto& s = space.summands[i];
    double v = 0.5 * s.b / m.x[i];
    for (int j = 0; j < l; ++j)
      for (int k = 0; k < l; ++k) {
        double t = space.T(i, j, k);
        if (t == 0) continue;
        v -= t * m.x[j] / (m.x[i] * m.x[k]) / (2.0 * s.d);
        v += t * m.x[i] / (m.x[j] * m.x[k]) / (4.0 * s.d);
      }
    rep.r[i] = v;
  }
  rep.sc = 0;
  for (int i = 0; i < l; ++i) rep.sc += space.summands[i].d * rep.r[i];
  const double mean = rep.sc / space.dimM();
  rep.gradNormSq = 0;
  for (int i = 0; i < l; ++i) {
    double dev = rep.r[i] - mean;
    rep.gradNormSq += space.summands[i].d * dev * dev;
  }
  return rep;
}

Metric geodesic_metric(const HomogeneousSpace&, const TangentVector& v, double t) {
  Metric m;
  m.x = (t * v.v).array().exp();
  return m;
}

TangentVector canonical_direction(const HomogeneousSpace& space, const std::vector<int>& I) {
  const int n = space.dimM();
  int d1 = space.dimOf(I);
  int d2 = n - d1;
  if (d1 <= 0 || d2 <= 0) fail(Errc::InvalidFlag, "canonical direction needs 0 < dim m_k < dim m");
  double v1 = -std::sqrt(double(d2) / (double(d1) * n));
  double v2 = std::sqrt(double(d1) / (double(d2) * n));
  TangentVector v;
  v.v = Eigen::VectorXd::Constant(space.ell(), v2);
  for (int i : I) v.v[i] = v1;
  return v;
}

double toral_invariant(const HomogeneousSpace& space, const std::vector<int>& I) {
  double a = 0;
  for (int i : I) a += space.summands[i].d * space.summands[i].c;
  a += 0.25 * space.TSum(I, I, I);
  return a;
}

double uniform_nontoral_bound(const HomogeneousSpace& space, const SubalgebraPoset& poset) {
  double best = 0;
  bool any = false;
  for (const auto& node : poset.nodes) {
    if (node.toral) continue;
    double a = toral_invariant(space, node.indexSet);
    if (!any || a < best) best = a;
    any = true;
  }
  return any ? best : 0.0;
}

double cGH(const HomogeneousSpace& space) {
  const int n = space.dimM();
  int dmin = space.summands[0].d;
  for (const auto& s : space.summands) dmin = std::min(dmin, s.d);
  if (dmin >= n) fail(Errc::DimensionMismatch, "cGH needs at least two summands");
  // optimum over two-eigenvalue distributions: negative part on n - dmin dims
  return -std::sqrt(double(dmin) / (double(n - dmin) * n));
}

CanonicalAsymptotics canonical_asymptotics(const HomogeneousSpace& space, const std::vector<int>& I,
                                           const std::vector<double>& tGrid) {
  CanonicalAsymptotics out;
  out.v = canonical_direction(space, I);
  auto J = space.complementSet(I);
  double dc1 = 0, dc2 = 0;
  for (int i : I) dc1 += space.summands[i].d * space.summands[i].c;
  for (int j : J) dc2 += space.summands[j].d * space.summands[j].c;
  out.t122 = space.TSum(I, J, J);
  out.a1 = dc1 + 0.25 * space.TSum(I, I, I);
  out.a2 = dc2 + 0.25 * space.TSum(J, J, J) + out.t122;
  out.t = tGrid;
  for (double t : tGrid) out.sc.push_back(scalar_curvature(space, geodesic_metric(space, out.v, t)));
  return out;
}

double two_summand_discriminant(const HomogeneousSpace& space) {
  if (space.ell() != 2) fail(Errc::NotTwoSummand, "discriminant needs exactly two summands");
  double t111 = space.T(0, 0, 0), t222 = space.T(1, 1, 1);
  double t112 = space.T(0, 0, 1), t122 = space.T(0, 1, 1);
  if (t112 > kEpsStruct)
    fail(Errc::WrongStructure, "[112] != 0: h is maximal and existence holds unconditionally");
  if (toral_invariant(space, {0}) < kEpsStruct)
    fail(Errc::WrongStructure, "k = h + m_1 is toral; existence holds unconditionally");
  double d1 = space.summands[0].d, d2 = space.summands[1].d;
  double b1 = space.summands[0].b, b2 = space.summands[1].b;
  double term = b2 - t222 / (2.0 * d2);
  return term * term - 4.0 * (b1 - t111 / (2.0 * d1) - t122 / d1) * t122 * (0.5 / d1 + 1.0 / d2);
}

}  // namespace nerve
