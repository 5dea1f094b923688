#ifndef NERVE_UTIL_HPP
#define NERVE_UTIL_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace nerve {

// Tolerance policy: structural Lie-algebra identities are checked at
// kEpsStruct absolute; orthonormality and exact algebraic inversions at
// kEpsOrtho. Eigenvalue nonnegativity allows -kEpsOrtho of noise.
inline constexpr double kEpsStruct = 1e-9;
inline constexpr double kEpsOrtho = 1e-10;

inline constexpr const char* kVersion = "0.1.0";

// FNV-1a, used for config provenance hashes.
inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

// Radical-inverse (Halton) sequence, bases 2,3,5,...; deterministic
// low-discrepancy points for the solver's direction grid.
double halton(std::uint64_t index, int base);

// Number of worker threads: NERVE_EINSTEIN_THREADS if set, else hardware.
int worker_threads();

// Static partition of [0,n) over worker threads. fn(i) must be independent
// of execution order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace nerve

#endif
