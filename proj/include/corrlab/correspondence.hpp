#pragma once

#include "corrlab/module.hpp"

namespace corrlab {

// A two-sided module, stored concretely: the right module realization on its
// reachable H together with the commuting pair of representations (rho of the
// left algebra, rho' of the right commutant) acting on H.
struct Correspondence {
  AlgebraPtr left;                     // A
  AlgebraPtr right;                    // B
  ConcreteModule module;               // over B; target is the reach, H = C^h
  std::vector<CMatrix> left_images;    // rho(e) per matrix unit of A, on H
  AlgebraPtr right_commutant;          // B'
  std::vector<CMatrix> rho_prime_images;  // rho'(e') per matrix unit of B'
  CMatrix embedding;  // isometry H -> ambient target the module was built in

  Index h() const { return module.target_dim; }
  Index dim() const { return module.dim(); }

  // Left action of a concrete algebra element (decomposed against A).
  CMatrix apply_left(const CMatrix& a) const;
  // rho' of a concrete commutant element.
  CMatrix apply_rho_prime(const CMatrix& bp) const;
};

// A completely positive map between algebras.  The action on the matrix-unit
// basis is always materialized; Kraus pieces are kept when supplied.
struct CPMap {
  AlgebraPtr source;  // A on G_A
  AlgebraPtr target;  // B on G_B
  std::vector<CMatrix> kraus;   // optional; shapes g_B x g_A
  std::vector<CMatrix> action;  // image of each source matrix unit, in B(G_B)

  CMatrix apply(const CMatrix& a) const;
  CMatrix apply_unit(Index i) const { return action[static_cast<std::size_t>(i)]; }
};

CPMap cp_from_kraus(const AlgebraPtr& source, const AlgebraPtr& target,
                    std::vector<CMatrix> kraus, const Tolerance& tol = {});
CPMap cp_from_action(const AlgebraPtr& source, const AlgebraPtr& target,
                     std::vector<CMatrix> action, const Tolerance& tol = {});
CPMap compose(const CPMap& outer, const CPMap& inner, const Tolerance& tol = {});

// Minimal eigenvalue of the positivity kernel [T(e_i^* e_j)]_{uv}; complete
// positivity holds iff it is >= -cutoff.
double cp_kernel_min_eigenvalue(const CPMap& t);
bool is_completely_positive(const CPMap& t, const Tolerance& tol = {});
bool is_unital(const CPMap& t, const Tolerance& tol = {});

// Integer block-to-block multiplicities c_{kl}; the finite-dimensional
// isomorphism invariant of a correspondence.
struct MultiplicityMatrix {
  Eigen::MatrixXi entries;  // rows: blocks of A, cols: blocks of B

  bool operator==(const MultiplicityMatrix& o) const { return entries == o.entries; }
  Eigen::MatrixXi transpose() const { return entries.transpose(); }
};

// ---- constructors ---------------------------------------------------------

// Validates that the images define a unital *-homomorphism of A on the
// ambient target of E, commuting with rho' and preserving the module; the
// result is re-coordinatized to the reach of E.
Correspondence make_correspondence(const AlgebraPtr& a, const ConcreteModule& e,
                                   const std::vector<CMatrix>& left_images,
                                   const Tolerance& tol = {});

Correspondence identity_correspondence(const AlgebraPtr& b, const Tolerance& tol = {});

// Direct sum over matching algebras.
Correspondence direct_sum(const Correspondence& e1, const Correspondence& e2,
                          const Tolerance& tol = {});

// Re-type a correspondence over equal-span replacement algebras.
Correspondence reexpress(const Correspondence& e, const AlgebraPtr& new_left,
                         const AlgebraPtr& new_right, const Tolerance& tol = {});

// ---- the functors ---------------------------------------------------------

// Interior tensor product E1 (.) E2 over the middle algebra.  `phi[s]` maps
// H(E2) into the product's H as h (.) class(x_s (x) h); module elements are
// phi[s] composed with E2 elements.
struct TensorResult {
  Correspondence product;
  std::vector<CMatrix> phi;  // one h12 x h2 block per E1 basis element
};

TensorResult tensor(const Correspondence& e1, const Correspondence& e2,
                    const Tolerance& tol = {});

// Tensor of a plain right module with a correspondence over the same middle
// algebra: the quotient space E (.) H(F) and its class maps.
struct ModuleTensor {
  Index h = 0;               // dim of E (.) H(F)
  std::vector<CMatrix> phi;  // per basis element of E: h x h(F)
};
ModuleTensor module_tensor(const ConcreteModule& e, const Correspondence& f,
                           const Tolerance& tol = {});

// GNS correspondence of a CP map, with the cyclic vector realized as a
// concrete module element.  Throws when the positivity kernel fails.
struct GnsResult {
  Correspondence corr;
  CMatrix cyclic;          // xi: G_B -> H
  double reproduction_defect = 0.0;  // max over units of |<xi, a xi> - T(a)|
};

GnsResult gns(const CPMap& t, const Tolerance& tol = {});

// Commutant functor: E (A-B) -> E' (B'-A') on the same H.
Correspondence commutant(const Correspondence& e, const Tolerance& tol = {});

// Multiplicity matrix, optionally against replacement algebras with equal
// spans (units are decomposed concretely, so alignment is not required).
MultiplicityMatrix multiplicity_matrix(const Correspondence& e,
                                       const Tolerance& tol = {});
MultiplicityMatrix multiplicity_matrix_wrt(const Correspondence& e,
                                           const Algebra& left,
                                           const Algebra& right,
                                           const Tolerance& tol = {});

// Isomorphism decision (equality of multiplicity matrices) plus a certifying
// bilinear unitary when the verdict is positive.
struct IsoResult {
  bool isomorphic = false;
  MultiplicityMatrix left_mult, right_mult;
  CMatrix map;  // dim(F) x dim(E) coordinates of the bimodule unitary
  double unitary_defect = 1.0;
  double inner_product_defect = 1.0;
  double bilinearity_defect = 1.0;

  bool certified(const Tolerance& tol) const {
    return isomorphic && unitary_defect <= tol.cutoff(1.0) * 10 &&
           inner_product_defect <= tol.cutoff(1.0) * 10 &&
           bilinearity_defect <= tol.cutoff(1.0) * 10;
  }
};

IsoResult iso_check(const Correspondence& e, const Correspondence& f,
                    const Tolerance& tol = {});

// Verification of (E1 (.) E2)' = E2' (.) E1' including the explicit flip
// unitary x'2 (.) y1 (.) g -> y1 (.) x'2 (.) g of the proof.
struct FlipReport {
  bool verdict = false;
  MultiplicityMatrix lhs_mult, rhs_mult;
  IsoResult iso;
  double flip_unitary_defect = 1.0;
  double flip_intertwines_defect = 1.0;
  double flip_module_defect = 1.0;
};

FlipReport flip_check(const Correspondence& e1, const Correspondence& e2,
                      const Tolerance& tol = {});

// Sub-bimodule generated by one element (closed under both actions).
Correspondence generated_subcorrespondence(const Correspondence& e,
                                           const CMatrix& element,
                                           const Tolerance& tol = {});

// ---- random data ----------------------------------------------------------

// Random CP map A -> B realized as x^* (a (x) 1) x for a random intertwiner
// x; always completely positive with values in B.  For A = B,
// `random_cp_map_unital` normalizes a Kraus family inside B to a unital map.
CPMap random_cp_map(const AlgebraPtr& a, const AlgebraPtr& b,
                    std::uint64_t seed, const Tolerance& tol = {},
                    Index richness = 0);
CPMap random_cp_map_unital(const AlgebraPtr& b, Index kraus_count,
                           std::uint64_t seed, const Tolerance& tol = {});

// Random B-B correspondence (the GNS module of a random CP map), retried
// until its dimension is at most dim_cap.
Correspondence random_correspondence(const AlgebraPtr& b, Index dim_cap,
                                     std::uint64_t seed, const Tolerance& tol = {});

}  // namespace corrlab
