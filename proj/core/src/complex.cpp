#include "nerve/complex.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

namespace nerve {

SimplicialComplex canonicalized(SimplicialComplex c) {
  for (auto& f : c.facets) {
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
  }
  std::sort(c.facets.begin(), c.facets.end());
  c.facets.erase(std::unique(c.facets.begin(), c.facets.end()), c.facets.end());
  // drop contained facets
  std::vector<std::vector<int>> keep;
  for (const auto& f : c.facets) {
    bool contained = false;
    for (const auto& g : c.facets) {
      if (&f == &g || f.size() >= g.size()) continue;
      if (std::includes(g.begin(), g.end(), f.begin(), f.end())) {
        contained = true;
        break;
      }
    }
    if (!contained) keep.push_back(f);
  }
  c.facets = std::move(keep);
  int maxV = -1;
  for (const auto& f : c.facets)
    for (int v : f) maxV = std::max(maxV, v);
  c.vertexCount = maxV + 1;
  return c;
}

SimplicialComplex flag_complex(const PosetView& poset) {
  SimplicialComplex c;
  const int n = poset.size();
  c.vertexCount = n;
  if (n == 0) {
    c.vertexCount = 0;
    return c;
  }
  // covering relation, then maximal chains = cover paths minimal -> maximal
  std::vector<std::vector<int>> covers(n);
  std::vector<bool> isMin(n, true), isMax(n, true);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b || !poset.leq(a, b) || poset.leq(b, a)) continue;
      isMin[b] = false;
      isMax[a] = false;
      bool cover = true;
      for (int w = 0; w < n && cover; ++w) {
        if (w == a || w == b) continue;
        if (poset.leq(a, w) && !poset.leq(w, a) && poset.leq(w, b) && !poset.leq(b, w)) cover = false;
      }
      if (cover) covers[a].push_back(b);
    }
  std::vector<int> chain;
  std::function<void(int)> dfs = [&](int v) {
    chain.push_back(v);
    if (covers[v].empty()) {
      c.facets.push_back(chain);
    } else {
      for (int w : covers[v]) dfs(w);
    }
    chain.pop_back();
  };
  for (int v = 0; v < n; ++v)
    if (isMin[v]) dfs(v);
  return canonicalized(std::move(c));
}

SimplicialComplex flag_complex(const SubalgebraPoset& poset) {
  struct PlainView final : PosetView {
    const SubalgebraPoset* p;
    int size() const override { return int(p->nodes.size()); }
    bool leq(int a, int b) const override { return p->leq(a, b); }
    int join(int, int) const override { return -1; }
  } view;
  view.p = &poset;
  return flag_complex(view);
}

SimplicialComplex combine(CombineOp op, const SimplicialComplex& x, const SimplicialComplex* y) {
  SimplicialComplex other;
  switch (op) {
    case CombineOp::Join:
      if (!y) fail(Errc::ConfigError, "join needs a second complex");
      other = *y;
      break;
    case CombineOp::Cone:
      other.vertexCount = 1;
      other.facets = {{0}};
      break;
    case CombineOp::Suspension:
      other.vertexCount = 2;
      other.facets = {{0}, {1}};
      break;
  }
  if (x.empty()) return canonicalized(other);
  if (other.empty()) return canonicalized(x);
  SimplicialComplex out;
  out.vertexCount = x.vertexCount + other.vertexCount;
  for (const auto& f : x.facets)
    for (const auto& g : other.facets) {
      std::vector<int> u = f;
      for (int v : g) u.push_back(v + x.vertexCount);
      out.facets.push_back(std::move(u));
    }
  return canonicalized(std::move(out));
}

namespace {

// all faces by dimension (0-based); faces sorted lexicographically per dim
std::vector<std::vector<std::vector<int>>> enumerate_faces(const SimplicialComplex& c, long maxFaces) {
  std::set<std::vector<int>> seen;
  long count = 0;
  for (const auto& f : c.facets) {
    const int k = int(f.size());
    for (unsigned sub = 1; sub < (1u << k); ++sub) {
      std::vector<int> face;
      for (int b = 0; b < k; ++b)
        if (sub >> b & 1) face.push_back(f[b]);
      if (seen.insert(std::move(face)).second) {
        if (++count > maxFaces) fail(Errc::ComplexTooLarge, "face count exceeds the configured cap");
      }
    }
  }
  std::vector<std::vector<std::vector<int>>> byDim;
  for (const auto& f : seen) {
    int d = int(f.size()) - 1;
    if (int(byDim.size()) <= d) byDim.resize(d + 1);
    byDim[d].push_back(f);
  }
  for (auto& v : byDim) std::sort(v.begin(), v.end());
  return byDim;
}

}  // namespace

HomologyProfile homology(const SimplicialComplex& c, long maxFaces) {
  HomologyProfile out;
  if (c.empty()) {
    out.emptyComplex = true;
    return out;
  }
  auto faces = enumerate_faces(c, maxFaces);
  const int dim = int(faces.size()) - 1;
  for (const auto& v : faces) out.faceCounts.push_back(long(v.size()));

  std::vector<std::map<std::vector<int>, int>> index(dim + 1);
  for (int d = 0; d <= dim; ++d)
    for (std::size_t i = 0; i < faces[d].size(); ++i) index[d][faces[d][i]] = int(i);

  // boundary matrices; degree 0 boundary is the augmentation into C_{-1}=Z
  std::vector<SmithResult> snf(dim + 2);
  {
    std::vector<std::vector<BigInt>> aug(1, std::vector<BigInt>(faces[0].size(), BigInt(1)));
    snf[0] = smith_normal_form(std::move(aug));
  }
  for (int d = 1; d <= dim; ++d) {
    std::vector<std::vector<BigInt>> m(faces[d - 1].size(), std::vector<BigInt>(faces[d].size(), 0));
    for (std::size_t j = 0; j < faces[d].size(); ++j) {
      const auto& f = faces[d][j];
      int sign = 1;
      for (std::size_t drop = 0; drop < f.size(); ++drop) {
        std::vector<int> sub;
        for (std::size_t t = 0; t < f.size(); ++t)
          if (t != drop) sub.push_back(f[t]);
        m[index[d - 1][sub]][j] = sign;
        sign = -sign;
      }
    }
    snf[d] = smith_normal_form(std::move(m));
  }

  out.betti.assign(dim + 1, 0);
  for (int q = 0; q <= dim; ++q) {
    long zq = long(faces[q].size()) - snf[q].rank;  // cycles
    long bq = q + 1 <= dim ? snf[q + 1].rank : 0;   // boundaries
    out.betti[q] = zq - bq;
    std::vector<BigInt> tor;
    if (q + 1 <= dim)
      for (const auto& f : snf[q + 1].invariantFactors)
        if (f > 1) tor.push_back(f);
    if (!tor.empty()) out.torsion.emplace_back(q, std::move(tor));
  }
  return out;
}

const char* certificate_name(Certificate::Kind k) {
  switch (k) {
    case Certificate::Contractible: return "Contractible";
    case Certificate::NonContractible: return "NonContractible";
    case Certificate::Inconclusive: return "Inconclusive";
    case Certificate::NotComputed: return "NotComputed";
  }
  return "?";
}

Certificate contractibility_certificate(const SimplicialComplex& c, const HomologyProfile& h,
                                        const PosetView* poset) {
  Certificate cert;
  if (c.empty()) {
    cert.kind = Certificate::NonContractible;
    cert.degree = -1;
    cert.note = "empty complex, reduced H_{-1} nonzero by convention";
    return cert;
  }
  // cone witness: a poset element comparable to all others
  if (poset) {
    for (int v = 0; v < poset->size(); ++v) {
      bool coneV = true;
      for (int w = 0; w < poset->size() && coneV; ++w)
        if (w != v && !poset->leq(v, w) && !poset->leq(w, v)) coneV = false;
      if (coneV) {
        cert.kind = Certificate::Contractible;
        cert.witness = v;
        cert.note = "poset element comparable to all others";
        return cert;
      }
    }
  }
  // cone on a vertex: some vertex in every facet
  for (int v = 0; v < c.vertexCount; ++v) {
    bool inAll = true;
    for (const auto& f : c.facets)
      if (!std::binary_search(f.begin(), f.end(), v)) {
        inAll = false;
        break;
      }
    if (inAll) {
      cert.kind = Certificate::Contractible;
      cert.witness = v;
      cert.note = "cone vertex";
      return cert;
    }
  }
  for (int q = 0; q < int(h.betti.size()); ++q) {
    bool tor = false;
    for (const auto& [deg, f] : h.torsion) tor |= (deg == q);
    if (h.betti[q] != 0 || tor) {
      cert.kind = Certificate::NonContractible;
      cert.degree = q;
      cert.note = "nonvanishing reduced homology";
      return cert;
    }
  }
  cert.kind = Certificate::Inconclusive;
  cert.note = "acyclic but no cone witness";
  return cert;
}

void write_facets(std::ostream& os, const SimplicialComplex& c) {
  for (const auto& f : c.facets) {
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? " " : "") << f[i];
    os << "\n";
  }
}

}  // namespace nerve
