#include "nerve/lattice.hpp"

#include <algorithm>
#include <map>

namespace nerve {

namespace {

// [IIk] != 0 obstruction sets: req[i][j] = mask of summands k with [ijk] > tol
std::vector<std::vector<std::uint32_t>> requirement_masks(const HomogeneousSpace& sp) {
  const int l = sp.ell();
  std::vector<std::vector<std::uint32_t>> req(l, std::vector<std::uint32_t>(l, 0));
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j)
      for (int k = 0; k < l; ++k)
        if (sp.T(i, j, k) > kEpsStruct) req[i][j] |= (1u << k);
  return req;
}

double toral_a(const HomogeneousSpace& sp, std::uint32_t mask) {
  double a = 0;
  std::vector<int> I;
  for (int i = 0; i < sp.ell(); ++i)
    if (mask >> i & 1) I.push_back(i);
  for (int i : I) a += sp.summands[i].d * sp.summands[i].c;
  a += 0.25 * sp.TSum(I, I, I);
  return a;
}

}  // namespace

int SubalgebraPoset::nodeByMask(std::uint32_t mask) const {
  for (const auto& n : nodes)
    if (n.mask == mask) return n.id;
  return -1;
}

bool is_closed_mask(const HomogeneousSpace& space, std::uint32_t mask) {
  const int l = space.ell();
  for (int i = 0; i < l; ++i) {
    if (!(mask >> i & 1)) continue;
    for (int j = i; j < l; ++j) {
      if (!(mask >> j & 1)) continue;
      for (int k = 0; k < l; ++k)
        if (!(mask >> k & 1) && space.T(i, j, k) > kEpsStruct) return false;
    }
  }
  return true;
}

std::uint32_t closure_mask(const HomogeneousSpace& space, std::uint32_t start) {
  const int l = space.ell();
  std::uint32_t mask = start;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int i = 0; i < l && !grew; ++i) {
      if (!(mask >> i & 1)) continue;
      for (int j = i; j < l && !grew; ++j) {
        if (!(mask >> j & 1)) continue;
        for (int k = 0; k < l; ++k)
          if (!(mask >> k & 1) && space.T(i, j, k) > kEpsStruct) {
            mask |= (1u << k);
            grew = true;
            break;
          }
      }
    }
  }
  return mask;
}

SubalgebraPoset enumerate_intermediate(const HomogeneousSpace& space) {
  const int l = space.ell();
  if (!space.multiplicityFree) {
    std::string pairs;
    std::map<std::string, std::vector<int>> byTag;
    for (const auto& s : space.summands) byTag[s.isotypeTag].push_back(s.index);
    for (const auto& [tag, idx] : byTag) {
      if (idx.size() < 2) continue;
      pairs += " {";
      for (std::size_t i = 0; i < idx.size(); ++i) pairs += (i ? "," : "") + std::to_string(idx[i]);
      pairs += "}";
    }
    fail(Errc::MultiplicityNotFree,
         "equivalent summands" + pairs + "; only summand-adapted subalgebras are enumerable");
  }
  if (l > 22) fail(Errc::TooManySummands, std::to_string(l) + " summands exceeds the enumeration cap 22");

  auto req = requirement_masks(space);

  SubalgebraPoset poset;
  poset.ell = l;
  const std::uint32_t full = l == 32 ? ~0u : ((1u << l) - 1);

  // DFS over index subsets in increasing order; prune when a bracket
  // requirement points below the next admissible index.
  std::vector<std::uint32_t> closed;
  std::vector<int> chosen;
  std::function<void(int, std::uint32_t, std::uint32_t)> dfs = [&](int next, std::uint32_t mask,
                                                                   std::uint32_t deficit) {
    if (deficit == 0 && mask != 0 && mask != full) closed.push_back(mask);
    for (int i = next; i < l; ++i) {
      std::uint32_t nmask = mask | (1u << i);
      std::uint32_t ndef = deficit;
      for (int j = 0; j < l; ++j)
        if (nmask >> j & 1) ndef |= req[i][j];
      ndef &= ~nmask;
      // requirements strictly below i+1 can never be satisfied
      std::uint32_t lowBits = (1u << (i + 1)) - 1;
      if (ndef & lowBits) continue;
      dfs(i + 1, nmask, ndef);
    }
  };
  dfs(0, 0, 0);
  std::sort(closed.begin(), closed.end());

  for (std::uint32_t mask : closed) {
    Subalgebra node;
    node.id = int(poset.nodes.size());
    node.mask = mask;
    node.dim = space.dimH();
    for (int i = 0; i < l; ++i)
      if (mask >> i & 1) {
        node.indexSet.push_back(i);
        node.dim += space.summands[i].d;
      }
    node.toral = toral_a(space, mask) < kEpsStruct;
    poset.nodes.push_back(std::move(node));
  }
  for (auto& n : poset.nodes) {
    n.minimal = true;
    for (const auto& m : poset.nodes)
      if (m.id != n.id && poset.leq(m.id, n.id)) {
        n.minimal = false;
        break;
      }
  }
  return poset;
}

int generate(const HomogeneousSpace& space, const SubalgebraPoset& poset, int k1, int k2) {
  if (k1 < 0 || k2 < 0 || k1 >= int(poset.nodes.size()) || k2 >= int(poset.nodes.size()))
    fail(Errc::FlagNotInPoset, "generate: node id out of range");
  std::uint32_t cl = closure_mask(space, poset.nodes[k1].mask | poset.nodes[k2].mask);
  const std::uint32_t full = poset.ell == 32 ? ~0u : ((1u << poset.ell) - 1);
  if (cl == full) return -1;
  int id = poset.nodeByMask(cl);
  if (id < 0) fail(Errc::FlagNotInPoset, "closure is not a poset node (internal)");
  return id;
}

TorusAdjunction adjoin_maximal_torus(const HomogeneousSpace& space) {
  TorusAdjunction out;
  if (space.m0Index.empty()) {
    out.quotient = space;
    out.refined = space;
    out.adjoinedDim = 0;
    return out;
  }
  const auto& g = space.g;
  // m_0 columns in summand order
  std::vector<int> m0cols;
  for (int i : space.m0Index)
    for (int c : space.summands[i].basisColumns) m0cols.push_back(c);

  // lexicographically first maximal abelian span of m_0 basis vectors
  std::vector<Eigen::VectorXd> cartan;
  for (int c : m0cols) {
    Eigen::VectorXd v = space.mBasis.col(c);
    bool commutes = true;
    for (const auto& u : cartan)
      if (bracket(g, v, u).norm() > kEpsStruct) {
        commutes = false;
        break;
      }
    if (commutes) cartan.push_back(v);
  }
  // numerical completion: extend by centralizer directions inside m_0
  Eigen::MatrixXd M0(g.dim, m0cols.size());
  for (std::size_t j = 0; j < m0cols.size(); ++j) M0.col(j) = space.mBasis.col(m0cols[j]);
  for (int guard = 0; guard < int(m0cols.size()); ++guard) {
    Eigen::MatrixXd sel(g.dim, cartan.size());
    for (std::size_t j = 0; j < cartan.size(); ++j) sel.col(j) = cartan[j];
    // x in span(M0), x perp sel, [x, sel] = 0
    Eigen::MatrixXd constraints(g.dim * cartan.size() + cartan.size(), M0.cols());
    for (std::size_t s = 0; s < cartan.size(); ++s) {
      constraints.middleRows(s * g.dim, g.dim) = g.ad(cartan[s]) * M0;
      constraints.row(g.dim * cartan.size() + s) = cartan[s].transpose() * M0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraints, Eigen::ComputeFullV);
    int nullDim = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] < 1e-8) ++nullDim;
    nullDim += int(M0.cols()) - int(svd.singularValues().size());
    if (nullDim == 0) break;
    cartan.push_back((M0 * svd.matrixV().rightCols(1)).normalized());
  }

  Eigen::MatrixXd aCols(g.dim, cartan.size());
  for (std::size_t j = 0; j < cartan.size(); ++j) aCols.col(j) = cartan[j];
  out.adjoinedDim = int(cartan.size());

  if (space.dimH() + int(cartan.size()) >= g.dim) {
    // h + a = g: a flat torus; keep the input as the only usable presentation
    out.quotientIsFullGroup = true;
    out.quotient = space;
    out.refined = space;
    return out;
  }

  Eigen::MatrixXd tagTorus(g.dim, space.taggingTorus.cols() + aCols.cols());
  tagTorus.leftCols(space.taggingTorus.cols()) = space.taggingTorus;
  tagTorus.rightCols(aCols.cols()) = aCols;

  Eigen::MatrixXd hPlusA(g.dim, space.hBasis.cols() + aCols.cols());
  hPlusA.leftCols(space.hBasis.cols()) = space.hBasis;
  hPlusA.rightCols(aCols.cols()) = aCols;

  out.quotient =
      build_space_from(g, hPlusA, tagTorus, 22, space.label + " +torus(quotient)");
  out.refined = build_space_from(g, space.hBasis, tagTorus, 22, space.label + " +torus(refined)");
  if (!out.quotient.m0Index.empty())
    fail(Errc::DegenerateSpace, "torus adjunction left a nonzero m_0 (internal)");
  return out;
}

}  // namespace nerve
