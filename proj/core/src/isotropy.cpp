#include "nerve/isotropy.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace nerve {

namespace {

constexpr double kPieceTol = 1e-8;

std::string quantized(double v) {
  if (std::abs(v) < 1e-9) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::string(buf);
}

// Orthonormalize the given coefficient columns against `against` and among
// themselves (modified Gram-Schmidt in input order, near-zero drops).
Eigen::MatrixXd orthonormal_complement(const Eigen::MatrixXd& vectors, const Eigen::MatrixXd& against) {
  std::vector<Eigen::VectorXd> out;
  for (int j = 0; j < vectors.cols(); ++j) {
    Eigen::VectorXd v = vectors.col(j);
    for (int k = 0; k < against.cols(); ++k) v -= against.col(k).dot(v) * against.col(k);
    for (const auto& u : out) v -= u.dot(v) * u;
    // second pass for numerical cleanliness
    for (int k = 0; k < against.cols(); ++k) v -= against.col(k).dot(v) * against.col(k);
    for (const auto& u : out) v -= u.dot(v) * u;
    double n = v.norm();
    if (n > kPieceTol) out.push_back(v / n);
  }
  Eigen::MatrixXd M(vectors.rows(), out.size());
  for (std::size_t j = 0; j < out.size(); ++j) M.col(j) = out[j];
  return M;
}

// Eigen-cluster split of a symmetric operator restricted to the subspace
// spanned by cols. Returns (sub-basis, eigenvalue) pairs, eigenvalues
// ascending; clusters merged when closer than tol * scale.
std::vector<std::pair<Eigen::MatrixXd, double>> split_by_symmetric(const Eigen::MatrixXd& cols,
                                                                   const Eigen::MatrixXd& op) {
  const int d = int(cols.cols());
  Eigen::MatrixXd R = cols.transpose() * op * cols;
  R = 0.5 * (R + R.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R);
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  double scale = std::max(1.0, std::abs(vals[0]) + std::abs(vals[d - 1]));
  double tol = 1e-7 * scale;
  std::vector<std::pair<Eigen::MatrixXd, double>> out;
  int lo = 0;
  for (int i = 1; i <= d; ++i) {
    if (i == d || vals[i] - vals[i - 1] > tol) {
      Eigen::MatrixXd sub = cols * vecs.middleCols(lo, i - lo);
      double mean = vals.segment(lo, i - lo).mean();
      out.emplace_back(std::move(sub), mean);
      lo = i;
    }
  }
  return out;
}

struct Piece {
  Eigen::MatrixXd cols;            // orthonormal coefficient columns
  std::vector<double> casimirs;    // per-group values
  std::vector<double> weights;     // signed central weights, canonical
  bool hasAnchor = false;
  Eigen::MatrixXd anchorJ;         // skew unit complex structure on cols coords
  int sectorMinIndex = 0;          // deterministic ordering handle
};

struct BuildContext {
  const LieAlgebraRep* g;
  Eigen::MatrixXd hCols;
  std::vector<Eigen::MatrixXd> casimirGroups;  // coefficient columns per group
  std::vector<Eigen::VectorXd> centralGens;    // coefficient vectors (not normalized)
  std::vector<Eigen::MatrixXd> extraSplitAds;  // ambient ads, splitting only
  std::vector<std::vector<int>> sectors;       // g-basis index groups
};

// ad of an ambient matrix (possibly outside g, e.g. u(1) centers acting on su(n)).
Eigen::MatrixXd ad_operator_matrix(const LieAlgebraRep& g, const Eigen::MatrixXd& T) {
  Eigen::MatrixXd A(g.dim, g.dim);
  for (int b = 0; b < g.dim; ++b) {
    Eigen::MatrixXd Z = T * g.basis[b] - g.basis[b] * T;
    for (int a = 0; a < g.dim; ++a) A(a, b) = g.q(Z, g.basis[a]);
  }
  return A;
}

void refine_by_skew(std::vector<Piece>& pieces, const Eigen::MatrixXd& skewOp, bool contributesTag) {
  std::vector<Piece> next;
  for (auto& p : pieces) {
    const int d = int(p.cols.cols());
    Eigen::MatrixXd M = p.cols.transpose() * skewOp * p.cols;
    M = 0.5 * (M - M.transpose());
    if (!p.hasAnchor) {
      // split by -M^2, then anchor the complex structure on each rotating part
      auto subs = split_by_symmetric(p.cols, skewOp * skewOp * -1.0);
      for (auto& [cols, lam] : subs) {
        Piece q;
        q.cols = cols;
        q.casimirs = p.casimirs;
        q.weights = p.weights;
        q.sectorMinIndex = p.sectorMinIndex;
        double w = lam > 0 ? std::sqrt(std::max(0.0, lam)) : 0.0;
        if (w > 1e-6) {
          Eigen::MatrixXd Msub = q.cols.transpose() * skewOp * q.cols;
          Msub = 0.5 * (Msub - Msub.transpose());
          q.anchorJ = Msub / w;
          q.hasAnchor = true;
          if (contributesTag) q.weights.push_back(w);
        } else {
          if (contributesTag) q.weights.push_back(0.0);
        }
        next.push_back(std::move(q));
      }
    } else {
      // signed split: anchorJ^T * M is symmetric with eigenvalue w per weight
      Eigen::MatrixXd S = p.anchorJ.transpose() * M;
      S = 0.5 * (S + S.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
      const auto& vals = es.eigenvalues();
      const auto& vecs = es.eigenvectors();
      double scale = std::max(1.0, std::abs(vals[0]) + std::abs(vals[d - 1]));
      int lo = 0;
      for (int i = 1; i <= d; ++i) {
        if (i == d || vals[i] - vals[i - 1] > 1e-7 * scale) {
          Piece q;
          q.cols = p.cols * vecs.middleCols(lo, i - lo);
          q.casimirs = p.casimirs;
          q.weights = p.weights;
          q.sectorMinIndex = p.sectorMinIndex;
          q.anchorJ = q.cols.transpose() * (p.cols * p.anchorJ * p.cols.transpose()) * q.cols;
          q.anchorJ = 0.5 * (q.anchorJ - q.anchorJ.transpose());
          q.hasAnchor = true;
          if (contributesTag) q.weights.push_back(vals.segment(lo, i - lo).mean());
          next.push_back(std::move(q));
          lo = i;
        }
      }
    }
  }
  pieces = std::move(next);
}

void canonicalize_weights(Piece& p) {
  for (double w : p.weights) {
    if (std::abs(w) > 1e-6) {
      if (w < 0)
        for (auto& x : p.weights) x = -x;
      return;
    }
  }
  for (auto& x : p.weights)
    if (std::abs(x) <= 1e-6) x = 0.0;
}

HomogeneousSpace assemble(BuildContext& ctx, int maxSummands, const std::string& label) {
  const LieAlgebraRep& g = *ctx.g;
  const int dim = g.dim;
  const int dh = int(ctx.hCols.cols());

  // h must close under the bracket
  for (int a = 0; a < dh; ++a)
    for (int b = a + 1; b < dh; ++b) {
      Eigen::VectorXd z = bracket(g, ctx.hCols.col(a), ctx.hCols.col(b));
      Eigen::VectorXd res = z - ctx.hCols * (ctx.hCols.transpose() * z);
      if (res.norm() > kEpsStruct) fail(Errc::NotASubalgebra, "h does not close under the bracket");
    }
  if (dh >= dim) fail(Errc::DegenerateSpace, "m is empty (h = g)");

  // effectivity: no nonzero ideal of g inside h
  if (dh > 0) {
    Eigen::MatrixXd V = ctx.hCols;
    for (int iter = 0; iter < dim && V.cols() > 0; ++iter) {
      // V' = { v in V : ad(e_a) v in V for all a }
      Eigen::MatrixXd Pperp = Eigen::MatrixXd::Identity(dim, dim) - V * V.transpose();
      Eigen::MatrixXd stack(dim * dim, V.cols());
      for (int a = 0; a < dim; ++a) {
        Eigen::MatrixXd blk = Pperp * g.ad(Eigen::VectorXd::Unit(dim, a)) * V;
        stack.middleRows(a * dim, dim) = blk;
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack, Eigen::ComputeFullV);
      int nullDim = 0;
      for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] < 1e-8) ++nullDim;
      nullDim += int(V.cols()) - int(svd.singularValues().size());
      if (nullDim == V.cols()) break;  // stabilized
      if (nullDim == 0) {
        V.resize(dim, 0);
        break;
      }
      V = V * svd.matrixV().rightCols(nullDim);
      V = orthonormal_complement(V, Eigen::MatrixXd(dim, 0));
    }
    if (V.cols() > 0) fail(Errc::NotEffective, "h contains a nonzero ideal of g");
  }

  // sector m-subspaces
  std::vector<Piece> pieces;
  for (const auto& sector : ctx.sectors) {
    Eigen::MatrixXd cand(dim, sector.size());
    for (std::size_t j = 0; j < sector.size(); ++j) cand.col(j) = Eigen::VectorXd::Unit(dim, sector[j]);
    Eigen::MatrixXd cols = orthonormal_complement(cand, ctx.hCols);
    if (cols.cols() == 0) continue;
    Piece p;
    p.cols = cols;
    p.sectorMinIndex = *std::min_element(sector.begin(), sector.end());
    pieces.push_back(std::move(p));
  }

  // refine by per-group Casimirs (symmetric, Ad(H)-equivariant)
  for (const auto& grp : ctx.casimirGroups) {
    Eigen::MatrixXd cas = Eigen::MatrixXd::Zero(dim, dim);
    for (int j = 0; j < grp.cols(); ++j) {
      Eigen::MatrixXd A = g.ad(grp.col(j));
      cas -= A * A;
    }
    std::vector<Piece> next;
    for (auto& p : pieces) {
      for (auto& [cols, lam] : split_by_symmetric(p.cols, cas)) {
        Piece q;
        q.cols = cols;
        q.casimirs = p.casimirs;
        q.casimirs.push_back(lam);
        q.weights = p.weights;
        q.sectorMinIndex = p.sectorMinIndex;
        next.push_back(std::move(q));
      }
    }
    pieces = std::move(next);
  }

  // refine by central torus ads (signed weights)
  for (const auto& z : ctx.centralGens) refine_by_skew(pieces, g.ad(z), true);
  // extra splitting by ambient torus ads; valid only when the H-action is
  // abelian (callers only populate these in that case)
  for (const auto& A : ctx.extraSplitAds) refine_by_skew(pieces, A, false);

  for (auto& p : pieces) canonicalize_weights(p);

  // total Casimir of the H-action (for c_i) and Killing gram (for b_i)
  Eigen::MatrixXd casTotal = Eigen::MatrixXd::Zero(dim, dim);
  for (int j = 0; j < dh; ++j) {
    Eigen::MatrixXd A = g.ad(ctx.hCols.col(j));
    casTotal -= A * A;
  }
  Eigen::MatrixXd K = killing_gram(g);

  // split pieces with trivial H-action and zero tagging weights into basis
  // lines (m_0 convention; an adjoined torus may act on c = 0 pieces)
  {
    std::vector<Piece> next;
    for (auto& p : pieces) {
      Eigen::MatrixXd C = p.cols.transpose() * casTotal * p.cols;
      bool zeroWeights = true;
      for (double w : p.weights) zeroWeights &= std::abs(w) < 1e-6;
      if (zeroWeights && C.norm() < 1e-7 && p.cols.cols() > 1) {
        for (int j = 0; j < p.cols.cols(); ++j) {
          Piece q;
          q.cols = p.cols.col(j);
          q.casimirs.assign(ctx.casimirGroups.size(), 0.0);
          q.weights.assign(p.weights.size(), 0.0);
          q.sectorMinIndex = p.sectorMinIndex;
          next.push_back(std::move(q));
        }
      } else {
        next.push_back(std::move(p));
      }
    }
    pieces = std::move(next);
  }

  if (int(pieces.size()) > maxSummands)
    fail(Errc::TooManySummands, "decomposition has " + std::to_string(pieces.size()) + " summands (cap " +
                                    std::to_string(maxSummands) + ")");

  // summand data
  struct Raw {
    Piece p;
    double b, c;
    std::string tag;
    bool trivial;
  };
  std::vector<Raw> raws;
  for (auto& p : pieces) {
    Raw r;
    Eigen::MatrixXd Kp = p.cols.transpose() * K * p.cols;
    Eigen::MatrixXd Cp = p.cols.transpose() * casTotal * p.cols;
    const int d = int(p.cols.cols());
    r.b = Kp.trace() / d;
    r.c = Cp.trace() / d;
    if ((Kp - r.b * Eigen::MatrixXd::Identity(d, d)).norm() > 1e-6 * std::max(1.0, std::abs(r.b)))
      fail(Errc::NotASubalgebra, "Killing form not scalar on a summand (decomposition failure)");
    if ((Cp - r.c * Eigen::MatrixXd::Identity(d, d)).norm() > 1e-6 * std::max(1.0, std::abs(r.c)))
      fail(Errc::NotASubalgebra, "Casimir not scalar on a summand (decomposition failure)");
    if (r.c < 1e-7) r.c = std::abs(r.c);
    r.trivial = r.c < 1e-7;
    for (double w : p.weights) r.trivial &= std::abs(w) < 1e-6;
    // Ad(H)-invariance
    for (int j = 0; j < dh; ++j) {
      Eigen::MatrixXd img = g.ad(ctx.hCols.col(j)) * p.cols;
      Eigen::MatrixXd res = img - p.cols * (p.cols.transpose() * img);
      if (res.norm() > kEpsStruct * 10 * std::max(1.0, img.norm()))
        fail(Errc::NotASubalgebra, "summand is not Ad(H)-invariant (decomposition failure)");
    }
    std::ostringstream tag;
    if (r.trivial) {
      tag << "trivial";
    } else {
      tag << "w[";
      for (std::size_t i = 0; i < p.weights.size(); ++i) tag << (i ? "," : "") << quantized(p.weights[i]);
      tag << "];c[";
      for (std::size_t i = 0; i < p.casimirs.size(); ++i) tag << (i ? "," : "") << quantized(p.casimirs[i]);
      tag << "];d" << d;
    }
    r.tag = tag.str();
    r.p = std::move(p);
    raws.push_back(std::move(r));
  }
  std::stable_sort(raws.begin(), raws.end(), [](const Raw& a, const Raw& b) {
    if (std::abs(a.c - b.c) > 1e-7) return a.c < b.c;
    if (a.p.cols.cols() != b.p.cols.cols()) return a.p.cols.cols() < b.p.cols.cols();
    return a.p.sectorMinIndex < b.p.sectorMinIndex;
  });

  HomogeneousSpace sp;
  sp.g = g;
  sp.hBasis = ctx.hCols;
  sp.label = label;
  int dm = dim - dh;
  sp.mBasis.resize(dim, dm);
  int col = 0;
  for (std::size_t i = 0; i < raws.size(); ++i) {
    Summand s;
    s.index = int(i);
    s.d = int(raws[i].p.cols.cols());
    s.b = raws[i].b;
    s.c = raws[i].c;
    s.isotypeTag = raws[i].tag;
    for (int j = 0; j < raws[i].p.cols.cols(); ++j) {
      sp.mBasis.col(col) = raws[i].p.cols.col(j);
      s.basisColumns.push_back(col);
      ++col;
    }
    if (raws[i].trivial) sp.m0Index.push_back(int(i));
    sp.summands.push_back(std::move(s));
  }
  if (col != dm) fail(Errc::DimensionMismatch, "summand dimensions do not fill m");

  // multiplicity freeness: all isotype tags pairwise distinct
  std::set<std::string> tags;
  sp.multiplicityFree = true;
  for (const auto& s : sp.summands)
    if (!tags.insert(s.isotypeTag).second) sp.multiplicityFree = false;

  // tagging torus = central gens (normalized columns)
  sp.taggingTorus.resize(dim, ctx.centralGens.size());
  for (std::size_t j = 0; j < ctx.centralGens.size(); ++j)
    sp.taggingTorus.col(j) = ctx.centralGens[j].normalized();

  // triple tensor [ijk]
  const int l = sp.ell();
  sp.tripleTensor.assign(std::size_t(l) * l * l, 0.0);
  std::vector<Eigen::MatrixXd> adCols(dm);
  for (int a = 0; a < dm; ++a) adCols[a] = g.ad(sp.mBasis.col(a));
  std::vector<int> sumOf(dm);
  for (int i = 0; i < l; ++i)
    for (int cidx : sp.summands[i].basisColumns) sumOf[cidx] = i;
  for (int a = 0; a < dm; ++a) {
    for (int b = 0; b < dm; ++b) {
      Eigen::VectorXd z = adCols[a] * sp.mBasis.col(b);
      Eigen::VectorXd proj = sp.mBasis.transpose() * z;
      for (int c = 0; c < dm; ++c) {
        double v = proj[c];
        if (std::abs(v) > 1e-13)
          sp.tripleTensor[(std::size_t(sumOf[a]) * l + sumOf[b]) * l + sumOf[c]] += v * v;
      }
    }
  }
  // clean tiny noise, enforce exact symmetry by averaging
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j)
      for (int k = 0; k < l; ++k) {
        auto& v = sp.tripleTensor[(std::size_t(i) * l + j) * l + k];
        if (v < 1e-18) v = 0.0;
      }
  return sp;
}

// ---- descriptor-specific construction -------------------------------------

struct Groups {
  // group id per (factor, defining coordinate); -2 = per-factor Cartan pool
  std::vector<std::vector<int>> coord;
  int nGroups = 0;
  bool globalCartanPool = false;
};

struct HSpec {
  Eigen::MatrixXd hCols;
  std::vector<Eigen::MatrixXd> casimirGroups;
  std::vector<Eigen::VectorXd> centralGens;
  bool abelian = true;
};

int defining_coords(Family f, int n) {
  switch (f) {
    case Family::SpecialUnitary:
    case Family::Unitary:
    case Family::Symplectic: return n;
    case Family::SpecialOrthogonal: return n;
  }
  return n;
}

// budget consumed by a block inside an ambient factor
int block_span(Family ambient, const BlockSpec& b) {
  if (ambient == Family::SpecialOrthogonal) {
    if (b.family == Family::SpecialOrthogonal) return b.rank;
    if (b.family == Family::Unitary) return 2 * b.rank;
    fail(Errc::ConfigError, "so-ambient admits so and u blocks only");
  }
  if (ambient == Family::Symplectic) {
    if (b.family == Family::Symplectic || b.family == Family::Unitary) return b.rank;
    fail(Errc::ConfigError, "sp-ambient admits sp and u blocks only");
  }
  if (ambient == Family::SpecialUnitary || ambient == Family::Unitary) {
    if (b.family == Family::Unitary || b.family == Family::SpecialUnitary) return b.rank;
    fail(Errc::ConfigError, "su/u-ambient admits u blocks only");
  }
  fail(Errc::ConfigError, "unsupported ambient family");
}

struct PlacedBlock {
  BlockSpec spec;
  int factor;
  int offset;  // defining coordinate offset within the factor
};

std::vector<PlacedBlock> place_blocks(const LieAlgebraRep& g, const std::vector<BlockSpec>& blocks) {
  std::vector<PlacedBlock> placed;
  std::size_t f = 0;
  int used = 0;
  for (const auto& b : blocks) {
    if (b.rank < 1) fail(Errc::ConfigError, "block rank must be >= 1");
    while (true) {
      if (f >= g.factors.size()) fail(Errc::ConfigError, "blocks exceed ambient coordinate budget");
      int span = block_span(g.factors[f].family, b);
      int budget = defining_coords(g.factors[f].family, g.factors[f].n);
      if (used + span <= budget) {
        placed.push_back({b, int(f), used});
        used += span;
        break;
      }
      ++f;
      used = 0;
    }
  }
  return placed;
}

// so-ambient u(k) block basis at offset o: realified stacked convention,
// columns (o..o+k-1 | o+k..o+2k-1).
void u_in_so_block(const LieAlgebraRep& g, int factor, int o, int k, std::vector<Eigen::MatrixXd>& out) {
  const int off = g.factorOffset[factor];
  const int N = g.matrixSize;
  auto E = [&](int p, int q) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
    M(off + p, off + q) = 1;
    M(off + q, off + p) = -1;
    return M;
  };
  for (int p = 0; p < k; ++p)
    for (int q = p + 1; q < k; ++q) out.push_back(E(o + p, o + q) + E(o + k + p, o + k + q));  // antisym X
  for (int p = 0; p < k; ++p)
    for (int q = p; q < k; ++q) {
      // symmetric Y: [[0,-Y],[Y,0]]
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
      M(off + o + k + p, off + o + q) = 1;
      M(off + o + q, off + o + k + p) = -1;
      if (p != q) {
        M(off + o + k + q, off + o + p) = 1;
        M(off + o + p, off + o + k + q) = -1;
      }
      out.push_back(M);
    }
}

HSpec build_h(const LieAlgebraRep& g, const SpaceConfig& cfg, Groups& groups) {
  HSpec hs;
  const int dim = g.dim;
  std::vector<Eigen::VectorXd> hvecs;

  // coordinate groups default: torus-type grouping
  groups.coord.resize(g.factors.size());
  for (std::size_t f = 0; f < g.factors.size(); ++f)
    groups.coord[f].assign(g.matrixSize, -1);  // indexed by defining coordinate, sized generously

  auto torus_groups = [&] {
    int gid = 0;
    for (std::size_t f = 0; f < g.factors.size(); ++f) {
      auto [fam, n] = g.factors[f];
      if (fam == Family::SpecialOrthogonal) {
        for (int c = 0; c < n; ++c) groups.coord[f][c] = gid + c / 2;
        gid += (n + 1) / 2;
      } else {
        for (int c = 0; c < n; ++c) groups.coord[f][c] = gid + c;
        gid += n;
      }
    }
    groups.nGroups = gid;
  };

  switch (cfg.kind) {
    case SubgroupKind::Trivial: {
      torus_groups();
      break;
    }
    case SubgroupKind::MaximalTorus: {
      torus_groups();
      for (const auto& tc : g.torusCoords) {
        Family fam = g.factors[tc.factor].family;
        if (fam == Family::SpecialUnitary) continue;  // handled as differences below
        hvecs.push_back(g.coeffs(tc.gen).normalized());
        hs.centralGens.push_back(g.coeffs(tc.gen));
      }
      // su factors: traceless differences T_c - T_{c+1}
      for (std::size_t f = 0; f < g.factors.size(); ++f) {
        if (g.factors[f].family != Family::SpecialUnitary) continue;
        std::vector<const Eigen::MatrixXd*> gens;
        for (const auto& tc : g.torusCoords)
          if (tc.factor == int(f)) gens.push_back(&tc.gen);
        for (std::size_t c = 0; c + 1 < gens.size(); ++c) {
          Eigen::VectorXd v = g.coeffs(*gens[c] - *gens[c + 1]);
          hvecs.push_back(v);
          hs.centralGens.push_back(v);
        }
      }
      break;
    }
    case SubgroupKind::TorusSlope: {
      torus_groups();
      groups.globalCartanPool = true;
      std::size_t nc = g.torusCoords.size();
      if (cfg.slope.size() != nc)
        fail(Errc::ConfigError, "slope length " + std::to_string(cfg.slope.size()) + " != torus coordinate count " +
                                    std::to_string(nc));
      bool nonzero = false;
      for (long s : cfg.slope) nonzero |= (s != 0);
      if (!nonzero) fail(Errc::ConfigError, "slope vector must be nonzero");
      for (std::size_t f = 0; f < g.factors.size(); ++f) {
        if (g.factors[f].family != Family::SpecialUnitary) continue;
        long sum = 0;
        for (std::size_t c = 0; c < nc; ++c)
          if (g.torusCoords[c].factor == int(f)) sum += cfg.slope[c];
        if (sum != 0) fail(Errc::ConfigError, "su-factor slope entries must sum to zero");
      }
      Eigen::MatrixXd X = Eigen::MatrixXd::Zero(g.matrixSize, g.matrixSize);
      for (std::size_t c = 0; c < nc; ++c) X += double(cfg.slope[c]) * g.torusCoords[c].gen;
      Eigen::VectorXd v = g.coeffs(X);
      hvecs.push_back(v);
      hs.centralGens.push_back(v);
      break;
    }
    case SubgroupKind::BlockProduct: {
      auto placed = place_blocks(g, cfg.blocks);
      // coordinate groups: blocks, then unused singletons
      int gid = 0;
      std::vector<std::vector<int>> blockGroup(g.factors.size());
      for (std::size_t f = 0; f < g.factors.size(); ++f)
        blockGroup[f].assign(defining_coords(g.factors[f].family, g.factors[f].n), -1);
      for (const auto& pb : placed) {
        int span = block_span(g.factors[pb.factor].family, pb.spec);
        for (int c = 0; c < span; ++c) blockGroup[pb.factor][pb.offset + c] = gid;
        ++gid;
      }
      for (std::size_t f = 0; f < g.factors.size(); ++f)
        for (auto& v : blockGroup[f])
          if (v < 0) v = gid++;
      groups.coord = blockGroup;
      groups.nGroups = gid;

      // per-block generators
      struct CenterCand {
        int factor;
        Eigen::VectorXd vec;  // integer-spectrum central gen (coefficients)
        int traceUnits;       // defining trace in units of i (0 for so)
      };
      std::vector<CenterCand> centers;
      for (const auto& pb : placed) {
        Family amb = g.factors[pb.factor].family;
        std::vector<Eigen::VectorXd> ss;  // semisimple-part generators
        const int off = g.factorOffset[pb.factor];
        const int N = g.matrixSize;
        const int k = pb.spec.rank;
        auto inBlock = [&](int p) { return p >= pb.offset && p < pb.offset + block_span(amb, pb.spec); };
        auto inRank = [&](int p) { return p >= pb.offset && p < pb.offset + k; };
        if (amb == Family::SpecialOrthogonal && pb.spec.family == Family::SpecialOrthogonal) {
          if (k < 2) continue;  // so(1) is trivial
          if (k == 2) {
            Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
            M(off + pb.offset, off + pb.offset + 1) = 1;
            M(off + pb.offset + 1, off + pb.offset) = -1;
            centers.push_back({pb.factor, g.coeffs(M), 0});
            continue;
          }
          for (int a = 0; a < dim; ++a) {
            auto [f_, p, q] = g.support[a];
            if (f_ == pb.factor && inBlock(p) && inBlock(q)) ss.push_back(Eigen::VectorXd::Unit(dim, a));
          }
        } else if (amb == Family::SpecialOrthogonal && pb.spec.family == Family::Unitary) {
          std::vector<Eigen::MatrixXd> blockMats;
          u_in_so_block(g, pb.factor, pb.offset, k, blockMats);
          // center: the stacked complex structure J (B = Id)
          Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, N);
          for (int c = 0; c < k; ++c) {
            J(off + pb.offset + k + c, off + pb.offset + c) = 1;
            J(off + pb.offset + c, off + pb.offset + k + c) = -1;
          }
          Eigen::VectorXd jc = g.coeffs(J);
          centers.push_back({pb.factor, jc, 0});
          Eigen::VectorXd jn = jc.normalized();
          for (auto& M : blockMats) {
            Eigen::VectorXd v = g.coeffs(M);
            Eigen::VectorXd w = v - jn.dot(v) * jn;  // su(k) part
            if (w.norm() > kPieceTol) ss.push_back(w);
          }
        } else if (amb == Family::Symplectic && pb.spec.family == Family::Symplectic) {
          for (int a = 0; a < dim; ++a) {
            auto [f_, p, q] = g.support[a];
            if (f_ == pb.factor && p != -1 && inRank(p) && inRank(q))
              ss.push_back(Eigen::VectorXd::Unit(dim, a));
          }
          for (const auto& tc : g.torusCoords)
            if (tc.factor == pb.factor && inRank(tc.coord)) ss.push_back(g.coeffs(tc.gen));
        } else if (amb == Family::Symplectic && pb.spec.family == Family::Unitary) {
          // u(k) in sp(k): the complex-linear (A-type) elements of the block
          for (int a = 0; a < dim; ++a) {
            auto [f_, p, q] = g.support[a];
            if (f_ == pb.factor && p != -1 && g.kind[a] == 0 && inRank(p) && inRank(q))
              ss.push_back(Eigen::VectorXd::Unit(dim, a));
          }
          std::vector<const Eigen::MatrixXd*> gens;
          for (const auto& tc : g.torusCoords)
            if (tc.factor == pb.factor && inRank(tc.coord)) gens.push_back(&tc.gen);
          for (std::size_t c = 0; c + 1 < gens.size(); ++c) ss.push_back(g.coeffs(*gens[c] - *gens[c + 1]));
          Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(N, N);
          for (auto* t : gens) Z += *t;
          centers.push_back({pb.factor, g.coeffs(Z), k});
        } else {  // su/u ambient, u block
          for (int a = 0; a < dim; ++a) {
            auto [f_, p, q] = g.support[a];
            if (f_ == pb.factor && p != -1 && inRank(p) && inRank(q))
              ss.push_back(Eigen::VectorXd::Unit(dim, a));
          }
          std::vector<const Eigen::MatrixXd*> gens;
          for (const auto& tc : g.torusCoords)
            if (tc.factor == pb.factor && inRank(tc.coord)) gens.push_back(&tc.gen);
          for (std::size_t c = 0; c + 1 < gens.size(); ++c) ss.push_back(g.coeffs(*gens[c] - *gens[c + 1]));
          Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(N, N);
          for (auto* t : gens) Z += *t;
          centers.push_back({pb.factor, g.coeffs(Z), k});
        }
        if (!ss.empty()) {
          Eigen::MatrixXd S(dim, ss.size());
          for (std::size_t j = 0; j < ss.size(); ++j) S.col(j) = ss[j];
          Eigen::MatrixXd on = orthonormal_complement(S, Eigen::MatrixXd(dim, 0));
          if (on.cols() >= 1) {
            hs.casimirGroups.push_back(on);
            hs.abelian = false;
          }
          for (int j = 0; j < on.cols(); ++j) hvecs.push_back(on.col(j));
        }
      }
      // centers: su-ambient needs trace balancing, others go in directly
      std::vector<const CenterCand*> pending;
      for (std::size_t f = 0; f < g.factors.size(); ++f) {
        std::vector<const CenterCand*> fc;
        for (const auto& c : centers)
          if (c.factor == int(f)) fc.push_back(&c);
        if (g.factors[f].family == Family::SpecialUnitary) {
          for (std::size_t i = 0; i + 1 < fc.size(); ++i) {
            Eigen::VectorXd v = double(fc[i + 1]->traceUnits) * fc[i]->vec - double(fc[i]->traceUnits) * fc[i + 1]->vec;
            hs.centralGens.push_back(v);
            hvecs.push_back(v);
          }
        } else {
          for (auto* c : fc) {
            hs.centralGens.push_back(c->vec);
            hvecs.push_back(c->vec);
          }
        }
      }
      break;
    }
  }

  Eigen::MatrixXd cand(dim, hvecs.size());
  for (std::size_t j = 0; j < hvecs.size(); ++j) cand.col(j) = hvecs[j];
  hs.hCols = orthonormal_complement(cand, Eigen::MatrixXd(dim, 0));
  return hs;
}

std::vector<std::vector<int>> make_sectors(const LieAlgebraRep& g, const Groups& groups) {
  std::map<std::pair<long, long>, std::vector<int>> bySector;
  const long cartanBase = 1000000;
  for (int a = 0; a < g.dim; ++a) {
    auto [f, p, q] = g.support[a];
    long key1, key2;
    if (p == -1) {
      key1 = key2 = cartanBase + (groups.globalCartanPool ? 0 : f);
    } else {
      long g1 = groups.coord[f][p], g2 = groups.coord[f][q];
      bool soPairDiag = g1 == g2 && g.factors[f].family == Family::SpecialOrthogonal;
      if (soPairDiag && groups.globalCartanPool) {
        // so-pair diagonal under a slope torus joins the global pool
        key1 = key2 = cartanBase;
      } else {
        key1 = std::min(g1, g2);
        key2 = std::max(g1, g2);
      }
    }
    bySector[{key1, key2}].push_back(a);
  }
  std::vector<std::vector<int>> out;
  for (auto& [k, v] : bySector) out.push_back(std::move(v));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

std::string config_label(const SpaceConfig& cfg) {
  std::ostringstream os;
  for (std::size_t f = 0; f < cfg.ambient.size(); ++f)
    os << (f ? "x" : "") << family_name(cfg.ambient[f].family) << "(" << cfg.ambient[f].n << ")";
  os << "/";
  switch (cfg.kind) {
    case SubgroupKind::MaximalTorus: os << "T"; break;
    case SubgroupKind::Trivial: os << "e"; break;
    case SubgroupKind::TorusSlope: {
      os << "S1[";
      for (std::size_t i = 0; i < cfg.slope.size(); ++i) os << (i ? "," : "") << cfg.slope[i];
      os << "]";
      break;
    }
    case SubgroupKind::BlockProduct: {
      bool suAmbient = cfg.ambient.size() == 1 && cfg.ambient[0].family == Family::SpecialUnitary;
      if (suAmbient) os << "S(";
      for (std::size_t i = 0; i < cfg.blocks.size(); ++i)
        os << (i ? "x" : "") << family_name(cfg.blocks[i].family) << "(" << cfg.blocks[i].rank << ")";
      if (suAmbient) os << ")";
      break;
    }
  }
  return os.str();
}

}  // namespace

double HomogeneousSpace::TSum(const std::vector<int>& I, const std::vector<int>& J, const std::vector<int>& K) const {
  double s = 0;
  for (int i : I)
    for (int j : J)
      for (int k : K) s += T(i, j, k);
  return s;
}

double HomogeneousSpace::bGH() const {
  double s = 0;
  for (const auto& sm : summands) s += sm.d * sm.b;
  return s;
}

std::vector<int> HomogeneousSpace::complementSet(const std::vector<int>& I) const {
  std::vector<bool> in(ell(), false);
  for (int i : I) in[i] = true;
  std::vector<int> out;
  for (int i = 0; i < ell(); ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

int HomogeneousSpace::dimOf(const std::vector<int>& I) const {
  int d = 0;
  for (int i : I) d += summands[i].d;
  return d;
}

HomogeneousSpace build_space(const SpaceConfig& cfg) {
  LieAlgebraRep g = build_algebra(cfg.ambient, cfg.qScale);
  Groups groups;
  HSpec hs = build_h(g, cfg, groups);
  BuildContext ctx;
  ctx.g = &g;
  ctx.hCols = hs.hCols;
  ctx.casimirGroups = hs.casimirGroups;
  ctx.centralGens = hs.centralGens;
  ctx.sectors = make_sectors(g, groups);
  if (hs.abelian) {
    // ambient torus ads split equivalent weight spaces inside one sector;
    // only valid when Ad(H) factors through a torus
    for (const auto& tc : g.torusCoords) ctx.extraSplitAds.push_back(ad_operator_matrix(g, tc.gen));
  }
  HomogeneousSpace sp = assemble(ctx, cfg.maxSummands, config_label(cfg));
  return sp;
}

HomogeneousSpace build_space_from(const LieAlgebraRep& g, const Eigen::MatrixXd& hCols,
                                  const Eigen::MatrixXd& taggingTorus, int maxSummands,
                                  const std::string& label) {
  BuildContext ctx;
  ctx.g = &g;
  ctx.hCols = hCols;
  for (int j = 0; j < taggingTorus.cols(); ++j) ctx.centralGens.push_back(taggingTorus.col(j));
  // h structure unknown here: one Casimir group for the orthogonal complement
  // of the tagging torus inside h (the semisimple part in all our uses)
  Eigen::MatrixXd tagOrtho =
      orthonormal_complement(taggingTorus, Eigen::MatrixXd(g.dim, 0));
  Eigen::MatrixXd ssPart = orthonormal_complement(hCols, tagOrtho);
  if (ssPart.cols() > 0) ctx.casimirGroups.push_back(ssPart);
  ctx.sectors.push_back({});
  ctx.sectors.back().resize(g.dim);
  std::iota(ctx.sectors.back().begin(), ctx.sectors.back().end(), 0);
  return assemble(ctx, maxSummands, label);
}

const std::vector<double>& structure_tensor(const HomogeneousSpace& space) { return space.tripleTensor; }

SummandConstants summand_constants(const HomogeneousSpace& space) {
  SummandConstants sc;
  for (const auto& s : space.summands) {
    sc.d.push_back(s.d);
    sc.b.push_back(s.b);
    sc.c.push_back(s.c);
  }
  return sc;
}

double casimir_identity_residual(const HomogeneousSpace& space, int i) {
  const auto& s = space.summands[i];
  double tsum = 0;
  const int l = space.ell();
  for (int j = 0; j < l; ++j)
    for (int k = 0; k < l; ++k) tsum += space.T(i, j, k);
  double lhs = s.d * s.b - 0.5 * tsum;
  double rhs = 2.0 * s.d * s.c + 0.5 * tsum;
  return std::abs(lhs - rhs);
}

}  // namespace nerve
