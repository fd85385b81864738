#pragma once

#include "corrlab/algebra.hpp"
#include "corrlab/module.hpp"

namespace corrlab::testing {

inline CMatrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  CMatrix m(static_cast<Index>(rows.size()),
            static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (const auto& c : r) m(i, j++) = c;
    ++i;
  }
  return m;
}

inline CMatrix eij(Index n, Index i, Index j) {
  CMatrix m = CMatrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

// B = diag(C, M2) inside M3, the running counterexample algebra.
inline AlgebraPtr corner_algebra() {
  return make_multimatrix({{1, 1}, {2, 1}});
}

// The Morita-equivalence module E = (0 C^2*; C^2 0) in M3 over corner_algebra.
inline ConcreteModule corner_module(const AlgebraPtr& b) {
  CMatrix g1 = CMatrix::Zero(3, 3);
  g1(0, 1) = 1.0;
  g1(1, 0) = 1.0;
  CMatrix g2 = CMatrix::Zero(3, 3);
  g2(2, 0) = 1.0;  // second column direction; right closure fills the rest
  return make_module(b, 3, {g1, g2});
}

}  // namespace corrlab::testing
