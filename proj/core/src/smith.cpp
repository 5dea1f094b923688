#include "nerve/smith.hpp"

#include <algorithm>

namespace nerve {

namespace {

BigInt abs_big(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

}  // namespace

SmithResult smith_normal_form(std::vector<std::vector<BigInt>> m) {
  SmithResult out;
  if (m.empty() || m[0].empty()) return out;
  const int rows = int(m.size()), cols = int(m[0].size());
  int t = 0;
  while (t < rows && t < cols) {
    // smallest nonzero pivot in the remaining submatrix
    int pr = -1, pc = -1;
    BigInt best = 0;
    for (int i = t; i < rows; ++i)
      for (int j = t; j < cols; ++j) {
        if (m[i][j] == 0) continue;
        BigInt a = abs_big(m[i][j]);
        if (pr < 0 || a < best) {
          best = a;
          pr = i;
          pc = j;
        }
      }
    if (pr < 0) break;
    std::swap(m[t], m[pr]);
    for (int i = t; i < rows; ++i) std::swap(m[i][t], m[i][pc]);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (int i = t + 1; i < rows; ++i) {
        if (m[i][t] == 0) continue;
        BigInt q = m[i][t] / m[t][t];
        if (q != 0)
          for (int j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
        if (m[i][t] != 0) {  // remainder smaller than pivot: swap up
          std::swap(m[t], m[i]);
          clean = false;
        }
      }
      for (int j = t + 1; j < cols; ++j) {
        if (m[t][j] == 0) continue;
        BigInt q = m[t][j] / m[t][t];
        if (q != 0)
          for (int i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
        if (m[t][j] != 0) {
          for (int i = t; i < rows; ++i) std::swap(m[i][t], m[i][j]);
          clean = false;
        }
      }
    }
    // divisibility: fold in any entry the pivot does not divide
    bool refined = false;
    for (int i = t + 1; i < rows && !refined; ++i)
      for (int j = t + 1; j < cols && !refined; ++j)
        if (m[i][j] % m[t][t] != 0) {
          for (int jj = t; jj < cols; ++jj) m[t][jj] += m[i][jj];
          refined = true;
        }
    if (refined) continue;  // redo the pivot step
    if (m[t][t] < 0)
      for (int j = t; j < cols; ++j) m[t][j] = -m[t][j];
    out.invariantFactors.push_back(m[t][t]);
    ++t;
  }
  out.rank = int(out.invariantFactors.size());
  return out;
}

}  // namespace nerve
