#include "nerve/flags.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace nerve {

namespace {

// -1 stands for g throughout; g is above every node.
bool node_lt(const PosetView& p, int a, int b) {
  if (a == b) return false;
  if (b == -1) return true;
  if (a == -1) return false;
  return p.leq(a, b);
}

bool node_leq(const PosetView& p, int a, int b) { return a == b || node_lt(p, a, b); }

int flag_max(const Flag& f) { return f.improper ? -1 : f.nodes.back(); }

bool contains(const Flag& f, int node) {
  if (node == -1) return f.improper;
  return std::find(f.nodes.begin(), f.nodes.end(), node) != f.nodes.end();
}

std::vector<int> flag_elements(const Flag& f) {
  std::vector<int> e = f.nodes;
  if (f.improper) e.push_back(-1);
  return e;
}

Flag from_elements(const PosetView& p, std::vector<int> elems) {
  Flag f;
  f.improper = false;
  for (int x : elems) {
    if (x == -1)
      f.improper = true;
    else
      f.nodes.push_back(x);
  }
  std::sort(f.nodes.begin(), f.nodes.end(), [&](int a, int b) { return node_lt(p, a, b); });
  return f;
}

}  // namespace

Flag make_flag(const PosetView& poset, std::vector<int> nodes, bool improper) {
  Flag f;
  f.nodes = std::move(nodes);
  f.improper = improper;
  if (f.nodes.empty() && !f.improper) fail(Errc::InvalidFlag, "empty flag");
  for (int x : f.nodes)
    if (x < 0 || x >= poset.size()) fail(Errc::FlagNotInPoset, "node id out of range");
  for (std::size_t i = 0; i + 1 < f.nodes.size(); ++i)
    if (!node_lt(poset, f.nodes[i], f.nodes[i + 1]))
      fail(Errc::InvalidFlag, "flag members must form a strictly increasing chain");
  return f;
}

bool flag_leq(const PosetView& poset, const Flag& phi, const Flag& psi) {
  if (phi == psi) return true;
  int mphi = flag_max(phi), mpsi = flag_max(psi);
  if (!node_leq(poset, mphi, mpsi)) return false;
  for (int k : flag_elements(psi)) {
    if (contains(phi, k)) continue;
    if (!node_lt(poset, mphi, k)) return false;
  }
  return true;
}

bool flag_leq_oracle(const PosetView& poset, const Flag& phi, const Flag& psi) {
  if (phi == psi) return true;
  auto key = [](const Flag& f) {
    std::vector<int> k = f.nodes;
    k.push_back(f.improper ? -1 : -2);
    return k;
  };
  std::set<std::vector<int>> seen;
  std::queue<Flag> frontier;
  frontier.push(phi);
  seen.insert(key(phi));
  while (!frontier.empty()) {
    Flag cur = frontier.front();
    frontier.pop();
    if (cur == psi) return true;
    std::vector<Flag> moves;
    // (i) append a strictly larger maximum
    int mx = flag_max(cur);
    if (mx != -1) {
      for (int cand = 0; cand < poset.size(); ++cand)
        if (node_lt(poset, mx, cand)) {
          Flag nf = cur;
          nf.nodes.push_back(cand);
          moves.push_back(std::move(nf));
        }
      Flag nf = cur;
      nf.improper = true;  // append g
      moves.push_back(std::move(nf));
    }
    // (ii) drop a non-maximal element
    auto elems = flag_elements(cur);
    if (elems.size() >= 2) {
      for (std::size_t i = 0; i + 1 < elems.size(); ++i) {
        std::vector<int> rest;
        for (std::size_t j = 0; j < elems.size(); ++j)
          if (j != i) rest.push_back(elems[j]);
        moves.push_back(from_elements(poset, rest));
      }
    }
    for (auto& nf : moves) {
      auto k = key(nf);
      if (seen.insert(k).second) frontier.push(std::move(nf));
    }
  }
  return false;
}

Flag flag_product(const PosetView& poset, const Flag& phi, const Flag& psi) {
  auto ephi = flag_elements(phi), epsi = flag_elements(psi);
  int mphi = flag_max(phi), mpsi = flag_max(psi);

  std::vector<int> common;
  for (int x : ephi)
    if (contains(psi, x)) common.push_back(x);

  // case (1): some element of phi lies strictly above max(psi)
  auto tail_from = [&](const std::vector<int>& elems, int over) {
    std::vector<int> tail;
    for (int x : elems)
      if (node_lt(poset, over, x)) tail.push_back(x);
    return tail;  // already in chain order
  };
  std::vector<int> tail1 = tail_from(ephi, mpsi);
  if (!tail1.empty()) {
    std::vector<int> elems = common;
    for (int x : tail1)
      if (!contains(from_elements(poset, elems), x)) elems.push_back(x);
    return from_elements(poset, elems);
  }
  std::vector<int> tail2 = tail_from(epsi, mphi);
  if (!tail2.empty()) {
    std::vector<int> elems = common;
    for (int x : tail2)
      if (!contains(from_elements(poset, elems), x)) elems.push_back(x);
    return from_elements(poset, elems);
  }
  // case (3): adjoin the generated subalgebra
  int star;
  if (mphi == -1 || mpsi == -1)
    star = -1;
  else
    star = poset.join(mphi, mpsi);
  std::vector<int> elems = common;
  if (std::find(elems.begin(), elems.end(), star) == elems.end()) elems.push_back(star);
  return from_elements(poset, elems);
}

double endo_trace(const HomogeneousSpace& space, const SymEndo& A) {
  double t = 0;
  for (int i = 0; i < space.ell(); ++i) t += space.summands[i].d * A.a[i];
  return t;
}

double endo_norm_sq(const HomogeneousSpace& space, const SymEndo& A) {
  double t = 0;
  for (int i = 0; i < space.ell(); ++i) t += space.summands[i].d * A.a[i] * A.a[i];
  return t;
}

SymEndo canonical_endo(const HomogeneousSpace& space, const std::vector<int>& I) {
  int dimK = space.dimH() + space.dimOf(I);
  int codim = space.g.dim - dimK;
  if (codim <= 0) fail(Errc::InvalidFlag, "canonical endomorphism needs a proper subalgebra");
  SymEndo A;
  A.a = Eigen::VectorXd::Constant(space.ell(), 1.0 / codim);
  for (int i : I) A.a[i] = 0.0;
  return A;
}

SymEndo graev_map(const HomogeneousSpace& space, const TangentVector& v) {
  const int n = space.dimM();
  if (std::abs(endo_norm_sq(space, SymEndo{v.v}) - 1.0) > kEpsOrtho * 100)
    fail(Errc::NotUnitVector, "graev_map needs a unit tangent vector");
  if (std::abs(endo_trace(space, SymEndo{v.v})) > kEpsOrtho * 100)
    fail(Errc::NotUnitVector, "graev_map needs a trace-free direction");
  double lambda = v.v.minCoeff();
  if (!(lambda < 0)) fail(Errc::NotUnitVector, "unit trace-free vector must have a negative eigenvalue");
  SymEndo A;
  A.a = (Eigen::VectorXd::Ones(space.ell()) - v.v / lambda) / double(n);
  return A;
}

TangentVector graev_inverse(const HomogeneousSpace& space, const SymEndo& A) {
  const int n = space.dimM();
  if (A.a.minCoeff() < -kEpsOrtho * 100) fail(Errc::NotInSphereB, "endomorphism is not psd");
  if (std::abs(endo_trace(space, A) - 1.0) > kEpsOrtho * 100)
    fail(Errc::NotInSphereB, "endomorphism must have trace one");
  if (A.a.minCoeff() > kEpsOrtho * 100) fail(Errc::NotInSphereB, "endomorphism needs a nontrivial kernel on m");
  double denom = endo_norm_sq(space, A) - 1.0 / n;
  if (denom <= 0) fail(Errc::NotInSphereB, "endomorphism coincides with Id/n");
  TangentVector v;
  v.v = (A.a - Eigen::VectorXd::Constant(space.ell(), 1.0 / n)) / std::sqrt(denom);
  return v;
}

bool disk_membership(const HomogeneousSpace& space, const SymEndo& A, const std::vector<int>& I) {
  if (A.a.minCoeff() < -kEpsOrtho) return false;
  for (int i : I)
    if (std::abs(A.a[i]) > kEpsStruct) return false;  // k not in the kernel
  if (std::abs(endo_trace(space, A) - 1.0) > kEpsStruct) return false;
  // [A|_m, ad(m_k)|_m] = 0
  const int dm = space.dimM();
  Eigen::VectorXd diag(dm);
  for (int i = 0; i < space.ell(); ++i)
    for (int c : space.summands[i].basisColumns) diag[c] = A.a[i];
  Eigen::MatrixXd D = diag.asDiagonal();
  for (int i : I) {
    for (int c : space.summands[i].basisColumns) {
      Eigen::MatrixXd adY = space.mBasis.transpose() * space.g.ad(space.mBasis.col(c)) * space.mBasis;
      Eigen::MatrixXd comm = D * adY - adY * D;
      if (comm.norm() > kEpsStruct * std::max(1.0, adY.norm())) return false;
    }
  }
  return true;
}

ButterflyDecomposition butterfly_decompose(const HomogeneousSpace& space, const SubalgebraPoset& poset,
                                           const SymEndo& A, const Flag& phi) {
  ButterflyDecomposition out;
  if (phi.nodes.empty()) fail(Errc::InvalidFlag, "butterfly needs at least one proper subalgebra");
  const int r = phi.length();
  // vertices: first r-1 flag members; disk at k_r (absent when improper)
  const int nv = r - 1;
  const bool hasDisk = !phi.improper;

  if (A.a.minCoeff() < -kEpsOrtho) return out;
  if (std::abs(endo_trace(space, A) - 1.0) > kEpsStruct) return out;

  if (nv == 0) {
    // B[(k)] = D(k)
    if (!disk_membership(space, A, poset.nodes[phi.nodes[0]].indexSet)) return out;
    out.kind = ButterflyDecomposition::InDisk;
    out.kappa = 1.0;
    out.vertexWeights = Eigen::VectorXd::Zero(0);
    out.diskPart = A;
    return out;
  }

  // slice values: u_i = value of A on k_i minus k_{i-1}; membership forces
  // u_1 = 0 and constancy across each slice
  std::vector<double> u(r, 0.0);
  std::uint32_t prev = 0;
  std::vector<std::uint32_t> masks;
  for (int i = 0; i < int(phi.nodes.size()); ++i) masks.push_back(poset.nodes[phi.nodes[i]].mask);
  if (phi.improper) masks.push_back((poset.ell == 32) ? ~0u : ((1u << poset.ell) - 1));
  for (int i = 0; i < r; ++i) {
    std::uint32_t slice = masks[i] & ~prev;
    prev = masks[i];
    bool first = true;
    double val = 0;
    for (int s = 0; s < space.ell(); ++s) {
      if (!(slice >> s & 1)) continue;
      if (first) {
        val = A.a[s];
        first = false;
      } else if (std::abs(A.a[s] - val) > kEpsStruct) {
        return out;  // not constant on a slice
      }
    }
    u[i] = val;
  }
  if (std::abs(u[0]) > kEpsStruct) return out;  // A must vanish on k_1

  // (1-kappa) lambda_j c_j = u_{j+1} - u_j with c_j the A^{k_j} eigenvalue
  Eigen::VectorXd lam(nv);
  double oneMinusKappa = 0;
  for (int j = 0; j < nv; ++j) {
    double cj = 1.0 / (space.g.dim - poset.nodes[phi.nodes[j]].dim);
    double w = (u[j + 1] - u[j]) / cj;
    if (w < -kEpsStruct) return out;
    lam[j] = std::max(0.0, w);
    oneMinusKappa += lam[j];
  }
  if (oneMinusKappa > 1.0 + kEpsStruct) return out;
  double kappa = std::min(1.0, std::max(0.0, 1.0 - oneMinusKappa));

  // reconstruct and validate
  Eigen::VectorXd rest = A.a;
  for (int j = 0; j < nv; ++j) {
    SymEndo Aj = canonical_endo(space, poset.nodes[phi.nodes[j]].indexSet);
    rest -= lam[j] * Aj.a;
  }
  if (kappa < kEpsStruct) {
    if (rest.cwiseAbs().maxCoeff() > kEpsStruct) return out;
    if (oneMinusKappa > 0) lam /= oneMinusKappa;
    out.kind = ButterflyDecomposition::Decomposed;
    out.kappa = 0.0;
    out.vertexWeights = lam;
    out.diskPart.a = Eigen::VectorXd::Zero(space.ell());
    return out;
  }
  if (!hasDisk) return out;  // improper flag: no disk part allowed
  SymEndo Ap;
  Ap.a = rest / kappa;
  if (!disk_membership(space, Ap, poset.nodes[phi.nodes.back()].indexSet)) return out;
  out.kind = kappa > 1.0 - kEpsStruct ? ButterflyDecomposition::InDisk : ButterflyDecomposition::Decomposed;
  out.kappa = kappa;
  if (oneMinusKappa > kEpsStruct)
    lam /= oneMinusKappa;
  else
    lam.setZero();
  out.vertexWeights = lam;
  out.diskPart = Ap;
  return out;
}

}  // namespace nerve
