#include "nerve/liealg.hpp"

#include <cmath>
#include <cstdlib>
#include <mutex>

namespace nerve {

double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  std::uint64_t i = index;
  while (i > 0) {
    f /= base;
    r += f * double(i % base);
    i /= base;
  }
  return r;
}

int worker_threads() {
  if (const char* env = std::getenv("NERVE_EINSTEIN_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : int(hc);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  int nt = worker_threads();
  if (nt <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::UnsupportedFamily: return "UnsupportedFamily";
    case Errc::RankOutOfRange: return "RankOutOfRange";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotASubalgebra: return "NotASubalgebra";
    case Errc::NotEffective: return "NotEffective";
    case Errc::DegenerateSpace: return "DegenerateSpace";
    case Errc::MultiplicityNotFree: return "MultiplicityNotFree";
    case Errc::TooManySummands: return "TooManySummands";
    case Errc::FlagNotInPoset: return "FlagNotInPoset";
    case Errc::InvalidFlag: return "InvalidFlag";
    case Errc::NotUnitVector: return "NotUnitVector";
    case Errc::NotInSphereB: return "NotInSphereB";
    case Errc::NonPositiveMetric: return "NonPositiveMetric";
    case Errc::NotTwoSummand: return "NotTwoSummand";
    case Errc::WrongStructure: return "WrongStructure";
    case Errc::ComplexTooLarge: return "ComplexTooLarge";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Error";
}

const char* family_name(Family f) {
  switch (f) {
    case Family::SpecialUnitary: return "su";
    case Family::SpecialOrthogonal: return "so";
    case Family::Symplectic: return "sp";
    case Family::Unitary: return "u";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "su" || name == "special-unitary") return Family::SpecialUnitary;
  if (name == "so" || name == "special-orthogonal") return Family::SpecialOrthogonal;
  if (name == "sp" || name == "symplectic") return Family::Symplectic;
  if (name == "u" || name == "unitary") return Family::Unitary;
  fail(Errc::UnsupportedFamily, "unknown family '" + name + "'");
}

int family_dim(Family f, int n) {
  switch (f) {
    case Family::SpecialUnitary: return n * n - 1;
    case Family::SpecialOrthogonal: return n * (n - 1) / 2;
    case Family::Symplectic: return n * (2 * n + 1);
    case Family::Unitary: return n * n;
  }
  return 0;
}

Eigen::MatrixXd realify(const Eigen::MatrixXcd& Z) {
  const int m = int(Z.rows());
  Eigen::MatrixXd R(2 * m, 2 * m);
  R.topLeftCorner(m, m) = Z.real();
  R.topRightCorner(m, m) = -Z.imag();
  R.bottomLeftCorner(m, m) = Z.imag();
  R.bottomRightCorner(m, m) = Z.real();
  return R;
}

namespace {

struct FactorBasis {
  std::vector<Eigen::MatrixXd> mats;         // realified, Q-orthonormal
  std::vector<std::array<int, 2>> support;   // (p,q) in defining coords, (-1,-1) = Cartan
  std::vector<int> kinds;                    // 1 = sp symmetric B-part
  std::vector<std::pair<int, Eigen::MatrixXd>> torusCoords;  // (coord, generator)
  int realSize = 0;
};

// trace factor between tr_R on the realified matrix and the defining trace
double realify_trace_factor(Family f) {
  return f == Family::SpecialOrthogonal ? 1.0 : 2.0;
}

// su(n)/u(n): anti-hermitian matrices, defining trace over C^n.
FactorBasis unitary_basis(int n, double qScale, bool special) {
  FactorBasis fb;
  fb.realSize = 2 * n;
  const double s = 1.0 / std::sqrt(2.0 * qScale);
  // Q(A_pq, A_pq) = Q(S_pq, S_pq) = 2*qScale before scaling.
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
      A(p, q) = 1;
      A(q, p) = -1;
      fb.mats.push_back(realify(A) * s);
      fb.support.push_back({p, q});
      Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n, n);
      S(p, q) = std::complex<double>(0, 1);
      S(q, p) = std::complex<double>(0, 1);
      fb.mats.push_back(realify(S) * s);
      fb.support.push_back({p, q});
    }
  }
  if (special) {
    // traceless diagonals t_j = i*(e_11+...+e_jj - j e_{j+1,j+1}), Q-norm
    // sqrt(qScale * j(j+1)).
    for (int j = 1; j < n; ++j) {
      Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(n, n);
      for (int c = 0; c < j; ++c) D(c, c) = std::complex<double>(0, 1);
      D(j, j) = std::complex<double>(0, -double(j));
      fb.mats.push_back(realify(D) / std::sqrt(qScale * j * (j + 1)));
      fb.support.push_back({-1, -1});
    }
  } else {
    for (int c = 0; c < n; ++c) {
      Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(n, n);
      D(c, c) = std::complex<double>(0, 1);
      fb.mats.push_back(realify(D) / std::sqrt(qScale));
      fb.support.push_back({-1, -1});
    }
  }
  for (int c = 0; c < n; ++c) {
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(n, n);
    D(c, c) = std::complex<double>(0, 1);
    fb.torusCoords.emplace_back(c, realify(D));
  }
  fb.kinds.assign(fb.mats.size(), 0);
  return fb;
}

// so(n): real antisymmetric, E_pq = e_p e_q^T - e_q e_p^T, Q-norm sqrt(2*qScale).
FactorBasis orthogonal_basis(int n, double qScale) {
  FactorBasis fb;
  fb.realSize = n;
  const double s = 1.0 / std::sqrt(2.0 * qScale);
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, n);
      E(p, q) = 1;
      E(q, p) = -1;
      fb.mats.push_back(E * s);
      fb.support.push_back({p, q});
    }
  }
  for (int c = 0; 2 * c + 1 < n; ++c) {
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, n);
    E(2 * c, 2 * c + 1) = 1;
    E(2 * c + 1, 2 * c) = -1;
    fb.torusCoords.emplace_back(c, E);
  }
  fb.kinds.assign(fb.mats.size(), 0);
  return fb;
}

// sp(n) in u(2n): X = [[A, B], [-conj(B), conj(A)]], A anti-hermitian,
// B symmetric complex. Defining trace over C^{2n}.
FactorBasis symplectic_basis(int n, double qScale) {
  FactorBasis fb;
  fb.realSize = 4 * n;
  auto embed = [n](const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
    Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    X.topLeftCorner(n, n) = A;
    X.topRightCorner(n, n) = B;
    X.bottomLeftCorner(n, n) = -B.conjugate();
    X.bottomRightCorner(n, n) = A.conjugate();
    return X;
  };
  const Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(n, n);
  // u(n) part: Q(X,X) = 2*qScale*(-tr_C A^2 over C^n doubled) => norm 4*qScale for the
  // standard pair elements, 2*qScale for i*e_cc.
  const double sOff = 1.0 / std::sqrt(4.0 * qScale);
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      Eigen::MatrixXcd A = Z;
      A(p, q) = 1;
      A(q, p) = -1;
      fb.mats.push_back(realify(embed(A, Z)) * sOff);
      fb.support.push_back({p, q});
      A = Z;
      A(p, q) = std::complex<double>(0, 1);
      A(q, p) = std::complex<double>(0, 1);
      fb.mats.push_back(realify(embed(A, Z)) * sOff);
      fb.support.push_back({p, q});
    }
  }
  for (int c = 0; c < n; ++c) {
    Eigen::MatrixXcd A = Z;
    A(c, c) = std::complex<double>(0, 1);
    fb.mats.push_back(realify(embed(A, Z)) / std::sqrt(2.0 * qScale));
    fb.support.push_back({-1, -1});
    fb.torusCoords.emplace_back(c, realify(embed(A, Z)));
  }
  fb.kinds.assign(fb.mats.size(), 0);
  // symmetric B part: for p<q norm 4*qScale, p=q norm 2*qScale.
  for (int p = 0; p < n; ++p) {
    for (int q = p; q < n; ++q) {
      for (int which = 0; which < 2; ++which) {
        Eigen::MatrixXcd B = Z;
        std::complex<double> v = which == 0 ? std::complex<double>(1, 0) : std::complex<double>(0, 1);
        B(p, q) = v;
        B(q, p) = v;
        double nrm = p == q ? std::sqrt(2.0 * qScale) : std::sqrt(4.0 * qScale);
        fb.mats.push_back(realify(embed(Z, B)) / nrm);
        fb.support.push_back({p, q});
        fb.kinds.push_back(1);
      }
    }
  }
  return fb;
}

void check_rank(Family f, int n) {
  int lo = 1;
  switch (f) {
    case Family::SpecialUnitary: lo = 2; break;
    case Family::SpecialOrthogonal: lo = 3; break;
    case Family::Symplectic: lo = 1; break;
    case Family::Unitary: lo = 1; break;
  }
  if (n < lo)
    fail(Errc::RankOutOfRange,
         std::string(family_name(f)) + "(" + std::to_string(n) + "), minimum rank parameter is " + std::to_string(lo));
  if (n > 32) fail(Errc::RankOutOfRange, "rank parameter above supported range");
}

}  // namespace

double LieAlgebraRep::q(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) const {
  // per-factor defining trace; factors are block diagonal so the realified
  // trace splits.
  double total = 0;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    int off = factorOffset[f];
    int sz = f + 1 < factors.size() ? factorOffset[f + 1] - off : matrixSize - off;
    double tr = (X.block(off, off, sz, sz) * Y.block(off, off, sz, sz)).trace();
    total += -qScale * tr / realify_trace_factor(factors[f].family);
  }
  return total;
}

Eigen::VectorXd LieAlgebraRep::coeffs(const Eigen::MatrixXd& X) const {
  Eigen::VectorXd v(dim);
  for (int a = 0; a < dim; ++a) v[a] = q(X, basis[a]);
  return v;
}

Eigen::MatrixXd LieAlgebraRep::matrix(const Eigen::VectorXd& v) const {
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(matrixSize, matrixSize);
  for (int a = 0; a < dim; ++a)
    if (v[a] != 0.0) X += v[a] * basis[a];
  return X;
}

Eigen::MatrixXd LieAlgebraRep::ad(const Eigen::VectorXd& v) const {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
  for (int a = 0; a < dim; ++a) {
    if (v[a] == 0.0) continue;
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c) A(c, b) += v[a] * C(a, b, c);
  }
  return A;
}

LieAlgebraRep build_algebra(Family family, int n, double qScale) {
  return build_algebra(std::vector<FactorSpec>{{family, n}}, qScale);
}

LieAlgebraRep build_algebra(const std::vector<FactorSpec>& factors, double qScale) {
  if (factors.empty()) fail(Errc::ConfigError, "empty ambient factor list");
  if (!(qScale > 0)) fail(Errc::ConfigError, "qScale must be positive");
  LieAlgebraRep alg;
  alg.factors = factors;
  alg.qScale = qScale;

  std::vector<FactorBasis> fbs;
  for (const auto& [f, n] : factors) {
    check_rank(f, n);
    switch (f) {
      case Family::SpecialUnitary: fbs.push_back(unitary_basis(n, qScale, true)); break;
      case Family::Unitary: fbs.push_back(unitary_basis(n, qScale, false)); break;
      case Family::SpecialOrthogonal: fbs.push_back(orthogonal_basis(n, qScale)); break;
      case Family::Symplectic: fbs.push_back(symplectic_basis(n, qScale)); break;
    }
  }
  int size = 0;
  for (auto& fb : fbs) {
    alg.factorOffset.push_back(size);
    size += fb.realSize;
  }
  alg.matrixSize = size;
  for (std::size_t f = 0; f < fbs.size(); ++f) {
    int off = alg.factorOffset[f];
    for (std::size_t j = 0; j < fbs[f].mats.size(); ++j) {
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(size, size);
      M.block(off, off, fbs[f].realSize, fbs[f].realSize) = fbs[f].mats[j];
      alg.basis.push_back(std::move(M));
      alg.support.push_back({int(f), fbs[f].support[j][0], fbs[f].support[j][1]});
      alg.kind.push_back(fbs[f].kinds[j]);
    }
    for (auto& [coord, gen] : fbs[f].torusCoords) {
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(size, size);
      M.block(off, off, fbs[f].realSize, fbs[f].realSize) = gen;
      alg.torusCoords.push_back({int(f), coord, std::move(M)});
    }
  }
  alg.dim = int(alg.basis.size());

  int expected = 0;
  for (const auto& [f, n] : factors) expected += family_dim(f, n);
  if (alg.dim != expected) fail(Errc::DimensionMismatch, "basis count does not match classical dimension");

  // bracket tensor C[a][b][c] = Q([e_a,e_b], e_c)
  alg.bracketTensor.assign(std::size_t(alg.dim) * alg.dim * alg.dim, 0.0);
  std::vector<Eigen::MatrixXd> brackets(std::size_t(alg.dim) * alg.dim);
  for (int a = 0; a < alg.dim; ++a) {
    for (int b = a + 1; b < alg.dim; ++b) {
      Eigen::MatrixXd Z = alg.basis[a] * alg.basis[b] - alg.basis[b] * alg.basis[a];
      for (int c = 0; c < alg.dim; ++c) {
        double v = alg.q(Z, alg.basis[c]);
        if (std::abs(v) < 1e-14) v = 0.0;
        alg.bracketTensor[(std::size_t(a) * alg.dim + b) * alg.dim + c] = v;
        alg.bracketTensor[(std::size_t(b) * alg.dim + a) * alg.dim + c] = -v;
      }
    }
  }
  return alg;
}

Eigen::VectorXd bracket(const LieAlgebraRep& alg, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != alg.dim || y.size() != alg.dim)
    fail(Errc::DimensionMismatch, "coefficient vector length does not match algebra dimension");
  Eigen::VectorXd z = Eigen::VectorXd::Zero(alg.dim);
  for (int a = 0; a < alg.dim; ++a) {
    if (x[a] == 0.0) continue;
    for (int b = 0; b < alg.dim; ++b) {
      if (y[b] == 0.0) continue;
      for (int c = 0; c < alg.dim; ++c) z[c] += x[a] * y[b] * alg.C(a, b, c);
    }
  }
  return z;
}

Eigen::MatrixXd killing_gram(const LieAlgebraRep& alg) {
  const int d = alg.dim;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(d, d);
  // -tr(ad e_a ad e_b) = -sum_{x,c} C[a][x][c] C[b][c][x]
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) {
      double s = 0;
      for (int x = 0; x < d; ++x)
        for (int c = 0; c < d; ++c) s += alg.C(a, x, c) * alg.C(b, c, x);
      K(a, b) = K(b, a) = -s;
    }
  }
  return K;
}

}  // namespace nerve
