#ifndef NERVE_FLAGS_HPP
#define NERVE_FLAGS_HPP

#include "nerve/lattice.hpp"

namespace nerve {

// Minimal poset interface the flag combinatorics runs against; the
// subalgebra lattice implements it, tests add synthetic posets.
struct PosetView {
  virtual int size() const = 0;
  virtual bool leq(int a, int b) const = 0;
  // smallest element containing a and b; -1 marks the top element g
  virtual int join(int a, int b) const = 0;
  virtual ~PosetView() = default;
};

class LatticeView final : public PosetView {
 public:
  LatticeView(const HomogeneousSpace& space, const SubalgebraPoset& poset)
      : space_(&space), poset_(&poset) {}
  int size() const override { return int(poset_->nodes.size()); }
  bool leq(int a, int b) const override { return poset_->leq(a, b); }
  int join(int a, int b) const override { return generate(*space_, *poset_, a, b); }
  const SubalgebraPoset& poset() const { return *poset_; }

 private:
  const HomogeneousSpace* space_;
  const SubalgebraPoset* poset_;
};

// A strictly increasing chain of intermediate subalgebras; improper flags
// carry g as a final element.
struct Flag {
  std::vector<int> nodes;
  bool improper = false;

  int length() const { return int(nodes.size()) + (improper ? 1 : 0); }
  bool operator==(const Flag& o) const { return improper == o.improper && nodes == o.nodes; }
};

Flag make_flag(const PosetView& poset, std::vector<int> nodes, bool improper = false);

// Non-inductive description of the Graev partial order:
// phi <= psi iff max(phi) <= max(psi) and every element of psi \ phi lies
// strictly above max(phi).
bool flag_leq(const PosetView& poset, const Flag& phi, const Flag& psi);

// Breadth-first search over the elementary moves of the inductive
// definition (add a new maximum / remove a non-maximal element); the
// brute-force oracle flag_leq is checked against.
bool flag_leq_oracle(const PosetView& poset, const Flag& phi, const Flag& psi);

Flag flag_product(const PosetView& poset, const Flag& phi, const Flag& psi);

// A Q-self-adjoint Ad(H)-equivariant endomorphism, diagonal on summands
// (faithful in the multiplicity-free scope), implicitly zero on h.
struct SymEndo {
  Eigen::VectorXd a;
};

// Trace-free tangent direction: sum d_i v_i = 0.
struct TangentVector {
  Eigen::VectorXd v;
};

double endo_trace(const HomogeneousSpace& space, const SymEndo& A);
double endo_norm_sq(const HomogeneousSpace& space, const SymEndo& A);  // tr A^2

// A^k = (Id_g - Id_k) / (dim g - dim k) for k = h + m_I.
SymEndo canonical_endo(const HomogeneousSpace& space, const std::vector<int>& I);

// Gr(v) = (Id - v/lambda(v))/n with lambda(v) the smallest eigenvalue;
// homeomorphism from the unit sphere of trace-free directions onto the
// trace-one psd endomorphisms with nontrivial kernel.
SymEndo graev_map(const HomogeneousSpace& space, const TangentVector& v);
TangentVector graev_inverse(const HomogeneousSpace& space, const SymEndo& A);

// D(k): A >= 0, k in ker A, tr A = 1, [A, ad(k)] = 0.
bool disk_membership(const HomogeneousSpace& space, const SymEndo& A, const std::vector<int>& I);

struct ButterflyDecomposition {
  enum Kind { InDisk, Decomposed, NotMember } kind = NotMember;
  Eigen::VectorXd vertexWeights;  // lambda_1..lambda_{r-1}
  double kappa = 0;
  SymEndo diskPart;
};

// Membership and unique join coordinates in B[phi] =
// conv{A^{k_1},...,A^{k_{r-1}}} * D(k_r); for improper flags the butterfly
// is the flag simplex on all proper members.
ButterflyDecomposition butterfly_decompose(const HomogeneousSpace& space, const SubalgebraPoset& poset,
                                           const SymEndo& A, const Flag& phi);

}  // namespace nerve

#endif
