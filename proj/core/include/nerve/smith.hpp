#ifndef NERVE_SMITH_HPP
#define NERVE_SMITH_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace nerve {

using BigInt = boost::multiprecision::cpp_int;

struct SmithResult {
  int rank = 0;
  std::vector<BigInt> invariantFactors;  // nonzero diagonal, divisibility chain
};

// Smith normal form over the integers, exact (no modular shortcuts).
SmithResult smith_normal_form(std::vector<std::vector<BigInt>> m);

}  // namespace nerve

#endif
