#ifndef NERVE_COMPLEX_HPP
#define NERVE_COMPLEX_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "nerve/flags.hpp"
#include "nerve/smith.hpp"

namespace nerve {

// Abstract simplicial complex given by its facets (pairwise non-contained
// sorted vertex sets). The empty complex has no vertices and no facets.
struct SimplicialComplex {
  int vertexCount = 0;
  std::vector<std::vector<int>> facets;

  bool empty() const { return facets.empty(); }
};

// sort facets, drop contained ones, recount vertices
SimplicialComplex canonicalized(SimplicialComplex c);

SimplicialComplex flag_complex(const PosetView& poset);
SimplicialComplex flag_complex(const SubalgebraPoset& poset);

enum class CombineOp { Join, Cone, Suspension };
SimplicialComplex combine(CombineOp op, const SimplicialComplex& x, const SimplicialComplex* y = nullptr);

struct HomologyProfile {
  std::vector<long> betti;  // reduced, degrees 0..dim
  std::vector<std::pair<int, std::vector<BigInt>>> torsion;
  bool emptyComplex = false;  // then H~_{-1} != 0 by convention
  std::vector<long> faceCounts;

  long bettiAt(int q) const {
    if (q == -1) return emptyComplex ? 1 : 0;
    return q >= 0 && q < int(betti.size()) ? betti[q] : 0;
  }
};

HomologyProfile homology(const SimplicialComplex& c, long maxFaces = 2000000);

struct Certificate {
  enum Kind { Contractible, NonContractible, Inconclusive, NotComputed } kind = NotComputed;
  int degree = 0;   // least q with nonvanishing reduced homology (-1 for empty)
  int witness = -1; // cone vertex / poset node
  std::string note;
};

const char* certificate_name(Certificate::Kind k);

Certificate contractibility_certificate(const SimplicialComplex& c, const HomologyProfile& h,
                                        const PosetView* poset = nullptr);

// facet list export, one facet per line, space-separated vertex indices
void write_facets(std::ostream& os, const SimplicialComplex& c);

}  // namespace nerve

#endif
