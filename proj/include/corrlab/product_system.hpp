#pragma once

#include "corrlab/correspondence.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace corrlab {

// Discrete product system generated by one B-B correspondence: E_n is the
// n-fold interior tensor power with left-fold bracketing, E_0 the identity
// correspondence.  Powers are memoized; the cache is safe for concurrent
// readers and idempotent under redundant population.
class FiberSystem {
 public:
  FiberSystem() = default;  // empty placeholder; populate by assignment
  explicit FiberSystem(Correspondence generator, Tolerance tol = {});

  const AlgebraPtr& base() const { return base_; }
  const Correspondence& generator() const { return generator_; }
  const Tolerance& tolerance() const { return tol_; }

  // E_n, cached.  The cache is shared between copies; population is
  // idempotent, so redundant concurrent computation is harmless.
  const Correspondence& power(Index n) const;

  // The step frame of E_n = E_{n-1} (.) E_1 (n >= 2): phi[s] maps H_{n-1}
  // into H_n as the class map of basis element s.
  const std::vector<CMatrix>& step_phi(Index n) const;

  // The n-fold word operator x_{i_1} (.) ... (.) x_{i_n} as a concrete
  // element of E_n, for arbitrary elements of E_1 given as operators.
  CMatrix word(const std::vector<CMatrix>& letters) const;

 private:
  struct Entry {
    Correspondence corr;
    std::vector<CMatrix> phi;
  };
  struct Cache {
    std::map<Index, Entry> map;
    std::mutex mutex;
  };
  const Entry& entry(Index n) const;

  AlgebraPtr base_;
  Correspondence generator_;
  Tolerance tol_;
  std::shared_ptr<Cache> cache_;
};

struct Unit {
  CMatrix xi1;          // element of E_1, as an operator G -> H_1
  bool unital = false;  // <xi, xi> = 1_B
};

struct CentralUnit : Unit {
  double centrality_residual = 0.0;
};

// Validates membership in E_1 and records unitality.
Unit make_unit(const FiberSystem& s, const CMatrix& xi1, const Tolerance& tol = {});

struct CentralityReport {
  bool central = false;
  double max_commutator = 0.0;
};
CentralityReport is_central(const FiberSystem& s, const Unit& u,
                            const Tolerance& tol = {});

// Throws unless the candidate is central and unital.
CentralUnit make_central_unit(const FiberSystem& s, const CMatrix& xi1,
                              const Tolerance& tol = {});

// xi_n = xi^(.)n as a concrete element of E_n.
CMatrix unit_power(const FiberSystem& s, const Unit& u, Index n);

// T_n(b) = <xi_n, b xi_n>, a CP map on B (unital iff the unit is).
CPMap cp_from_unit(const FiberSystem& s, const Unit& u, Index n,
                   const Tolerance& tol = {});

// Canonical re-bracketing unitary H(E_m (.) E_n) -> H_{m+n}, built by
// matching word frames, plus its defects.
struct AssociatorReport {
  CMatrix map;
  double unitary_defect = 1.0;
  double word_match_defect = 1.0;
  IsoResult iso;  // iso_check(E_m (.) E_n, E_{m+n})
};
AssociatorReport associator_check(const FiberSystem& s, Index m, Index n);

// Defect of xi_m (.) xi_n = xi_{m+n} under the canonical associator.
double unit_consistency_defect(const FiberSystem& s, const Unit& u, Index m, Index n);

// The spatial product over central unital reference units: the generator
// fiber is omega B (+) (E1 - omega1 B) (+) (E2 - omega2 B) with the
// amalgamated inner product (cross terms <x, omega1><omega2, y>).
struct SpatialProduct {
  FiberSystem system;
  CentralUnit omega;
  // Embeddings of the original fibers: coordinates of the image of each
  // basis element of E^i_1 in the product fiber module basis.
  CMatrix embed1, embed2;
  double embedding_defect = 1.0;   // isometry + bimodule linearity
  double amalgamation_defect = 1.0;  // class(omega1) == class(omega2)
  double cross_orthogonality = 1.0;  // complements from different factors
};

SpatialProduct spatial_product(const FiberSystem& s1, const CentralUnit& w1,
                               const FiberSystem& s2, const CentralUnit& w2,
                               const Tolerance& tol = {});

// Multiplicity matrix of E_1 - omega B as a B-B correspondence; the zero
// matrix when the fiber is exhausted by omega B.
MultiplicityMatrix complement_multiplicity(const FiberSystem& s,
                                           const CentralUnit& w,
                                           const Tolerance& tol = {});

// The complement correspondence itself (empty module allowed).
struct FiberComplement {
  bool empty = false;
  Correspondence corr;  // valid only when !empty
};
FiberComplement fiber_complement(const FiberSystem& s, const CentralUnit& w,
                                 const Tolerance& tol = {});

}  // namespace corrlab
