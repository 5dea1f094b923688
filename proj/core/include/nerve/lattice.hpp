#ifndef NERVE_LATTICE_HPP
#define NERVE_LATTICE_HPP

#include <cstdint>
#include <vector>

#include "nerve/isotropy.hpp"

namespace nerve {

// An intermediate subalgebra k = h + m_I, I a summand index set.
struct Subalgebra {
  int id = 0;
  std::vector<int> indexSet;
  std::uint32_t mask = 0;
  int dim = 0;  // dim h + sum d_i
  bool toral = false;
  bool minimal = false;
};

struct SubalgebraPoset {
  std::vector<Subalgebra> nodes;
  bool torusAdjoined = false;
  int ell = 0;

  bool leq(int a, int b) const {  // containment
    return (nodes[a].mask & ~nodes[b].mask) == 0;
  }
  int nodeByMask(std::uint32_t mask) const;
};

// If m_0 != 0, absorb a Cartan subalgebra a of m_0 into the isotropy.
// quotient is the space G/AH (with dim N(h+a) = dim(h+a)); refined is G/H
// itself with summands re-split into Ad(AH)-isotypical pieces, the
// flow-invariant metric family of the Theorem-B pipeline. Both equal the
// input when m_0 = 0.
struct TorusAdjunction {
  HomogeneousSpace quotient;
  HomogeneousSpace refined;
  int adjoinedDim = 0;
  // AH = G: the space is a flat torus and no proper quotient exists
  bool quotientIsFullGroup = false;
};
TorusAdjunction adjoin_maximal_torus(const HomogeneousSpace& space);

// All proper summand-adapted intermediate subalgebras h < k < g, classified
// toral/non-toral and minimal. Requires a multiplicity-free summand
// decomposition (then every Ad(H)-invariant subspace is a summand sum).
SubalgebraPoset enumerate_intermediate(const HomogeneousSpace& space);

// Bracket closure of the union; -1 marks the top element g.
int generate(const HomogeneousSpace& space, const SubalgebraPoset& poset, int k1, int k2);

// Closure of a summand index mask under the triple tensor; returns the full
// mask when the closure is g.
std::uint32_t closure_mask(const HomogeneousSpace& space, std::uint32_t start);

bool is_closed_mask(const HomogeneousSpace& space, std::uint32_t mask);

}  // namespace nerve

#endif
