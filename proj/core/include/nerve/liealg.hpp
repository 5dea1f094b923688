#ifndef NERVE_LIEALG_HPP
#define NERVE_LIEALG_HPP

#include <Eigen/Dense>
#include <array>
#include <utility>
#include <vector>

#include "nerve/errors.hpp"
#include "nerve/util.hpp"

namespace nerve {

enum class Family { SpecialUnitary, SpecialOrthogonal, Symplectic, Unitary };

const char* family_name(Family f);
Family family_from_name(const std::string& name);

// Classical dimension of the compact real form.
int family_dim(Family f, int n);

struct FactorSpec {
  Family family;
  int n;
};

// A compact classical matrix Lie algebra (possibly a product of classical
// factors) with a fixed Ad-invariant inner product
//   Q(X,Y) = -qScale * tr(XY)
// taken in the defining representation of each factor (complex trace for
// su/u, trace over C^{2n} for sp, real trace for so). Complex and
// quaternionic matrices are realified once at construction; everything
// downstream is real double arithmetic.
//
// The basis is Q-orthonormal by construction (standard bases scaled, no
// Gram-Schmidt), which keeps the bracket tensor sparse and reproducible.
struct LieAlgebraRep {
  std::vector<FactorSpec> factors;
  int dim = 0;
  int matrixSize = 0;  // realified ambient size (block diagonal over factors)
  double qScale = 0.5;

  std::vector<Eigen::MatrixXd> basis;  // realified, Q-orthonormal
  // C[a][b][c] with [e_a,e_b] = sum_c C[a][b][c] e_c, stored dense.
  std::vector<double> bracketTensor;

  // Bookkeeping used by the isotropy layer.
  //
  // support[a] = (factor, p, q): defining-representation coordinate support
  // of basis element a; p = q = -1 marks Cartan-sector elements of su/u/sp
  // factors. For so factors every element is an E_pq rotation plane.
  std::vector<std::array<int, 3>> support;
  // kind[a]: 0 = complex-linear part (everything for su/u/so), 1 = the
  // symmetric B-part of an sp factor.
  std::vector<int> kind;
  // Integer-weight torus coordinate generators per factor (unnormalized;
  // ad-eigenvalues on the complexification are exact integers). For su(n)
  // these are the n diagonal i*e_cc realifications; combinations must be
  // trace-balanced before use.
  struct TorusCoord {
    int factor;
    int coord;
    Eigen::MatrixXd gen;
  };
  std::vector<TorusCoord> torusCoords;
  std::vector<int> factorOffset;  // realified column offset of each factor

  double C(int a, int b, int c) const { return bracketTensor[(std::size_t(a) * dim + b) * dim + c]; }

  // Q on realified matrices.
  double q(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) const;
  // Coefficient vector of a realified matrix on the Q-orthonormal basis.
  Eigen::VectorXd coeffs(const Eigen::MatrixXd& X) const;
  Eigen::MatrixXd matrix(const Eigen::VectorXd& v) const;
  // ad(X) as a dim x dim matrix on coefficients, X given as coefficients.
  Eigen::MatrixXd ad(const Eigen::VectorXd& v) const;
};

LieAlgebraRep build_algebra(Family family, int n, double qScale = 0.5);
LieAlgebraRep build_algebra(const std::vector<FactorSpec>& factors, double qScale = 0.5);

// [X,Y] on coefficient vectors through the bracket tensor.
Eigen::VectorXd bracket(const LieAlgebraRep& alg, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Gram matrix of the negative Killing form B(X,Y) = -tr_g(ad X ad Y) on the
// Q-orthonormal basis. Positive semi-definite, zero exactly on the center.
Eigen::MatrixXd killing_gram(const LieAlgebraRep& alg);

// 2m x 2m realification of a complex matrix, [[X,-Y],[Y,X]].
Eigen::MatrixXd realify(const Eigen::MatrixXcd& Z);

}  // namespace nerve

#endif
