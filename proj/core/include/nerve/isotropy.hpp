#ifndef NERVE_ISOTROPY_HPP
#define NERVE_ISOTROPY_HPP

#include <optional>
#include <string>
#include <vector>

#include "nerve/liealg.hpp"

namespace nerve {

enum class SubgroupKind { BlockProduct, TorusSlope, MaximalTorus, Trivial };

struct BlockSpec {
  Family family;  // so / u / sp blocks; u inside su-ambient gives S(U(..)x..)
  int rank;
};

struct SpaceConfig {
  std::vector<FactorSpec> ambient;
  SubgroupKind kind = SubgroupKind::MaximalTorus;
  std::vector<BlockSpec> blocks;  // BlockProduct
  std::vector<long> slope;        // TorusSlope, one entry per torus coordinate
  double qScale = 0.5;
  int maxSummands = 22;
  long maxFaces = 2000000;
};

// One irreducible Ad(H)-summand of m (isotypical piece in the
// multiplicity-free case). basisColumns index into HomogeneousSpace::mBasis.
struct Summand {
  int index = 0;
  int d = 0;
  double b = 0;  // B|_{m_i} = b_i Q|_{m_i}
  double c = 0;  // Casimir constant of the H-action
  std::vector<int> basisColumns;
  std::string isotypeTag;
};

struct HomogeneousSpace {
  LieAlgebraRep g;
  Eigen::MatrixXd hBasis;  // coefficient columns, Q-orthonormal
  Eigen::MatrixXd mBasis;  // coefficient columns, Q-orthonormal, summand-adapted
  std::vector<Summand> summands;
  std::vector<double> tripleTensor;  // [ijk], ell^3 dense, totally symmetric
  bool multiplicityFree = true;
  std::vector<int> m0Index;  // summands with trivial H-action
  // equivariance torus used for isotype tags (h-torus, plus the adjoined
  // Cartan of m_0 for refined presentations); coefficient columns.
  Eigen::MatrixXd taggingTorus;
  std::string label;

  int ell() const { return int(summands.size()); }
  int dimH() const { return int(hBasis.cols()); }
  int dimM() const { return int(mBasis.cols()); }
  double T(int i, int j, int k) const {
    int l = ell();
    return tripleTensor[(std::size_t(i) * l + j) * l + k];
  }
  // [I J K] over summand index sets
  double TSum(const std::vector<int>& I, const std::vector<int>& J, const std::vector<int>& K) const;
  double bGH() const;  // sum d_i b_i
  std::vector<int> complementSet(const std::vector<int>& I) const;
  int dimOf(const std::vector<int>& I) const;
};

HomogeneousSpace build_space(const SpaceConfig& cfg);

// Internal entry point used by the torus-adjunction machinery: h given as
// orthonormal coefficient columns, tags computed against taggingTorus.
HomogeneousSpace build_space_from(const LieAlgebraRep& g, const Eigen::MatrixXd& hCols,
                                  const Eigen::MatrixXd& taggingTorus, int maxSummands,
                                  const std::string& label);

// Accessors for the spec-level operations (values are computed at build time).
const std::vector<double>& structure_tensor(const HomogeneousSpace& space);
struct SummandConstants {
  std::vector<int> d;
  std::vector<double> b, c;
};
SummandConstants summand_constants(const HomogeneousSpace& space);

// Residual of d_i b_i - 1/2 sum [ijk] = 2 d_i c_i + 1/2 sum [ijk] for summand i.
double casimir_identity_residual(const HomogeneousSpace& space, int i);

}  // namespace nerve

#endif
