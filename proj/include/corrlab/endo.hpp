#pragma once

#include "corrlab/product_system.hpp"

namespace corrlab {

// A unital *-endomorphism of B^a(E), realized concretely on H = E (.) G
// through pi.  Images are aligned with the matrix units of pi(B^a(E)).
struct Endomorphism {
  ConcreteModule base;        // E over B, in ambient coordinates
  InducedRep rep;             // reach, pi(B^a(E)), rho', B'
  std::vector<CMatrix> images;  // theta(e) per matrix unit of rep.ba, on H

  Index h() const { return rep.h; }
  CMatrix apply(const CMatrix& a_on_h) const;  // decompose against rep.ba
};

// Validates that the images define a unital *-endomorphism of pi(B^a(E)).
Endomorphism make_endomorphism(const ConcreteModule& e,
                               const std::vector<CMatrix>& images,
                               const Tolerance& tol = {});

Endomorphism identity_endomorphism(const ConcreteModule& e, const Tolerance& tol = {});

// theta = Ad(u) for a unitary u in pi(B^a(E)).
Endomorphism inner_endomorphism(const ConcreteModule& e, const CMatrix& u,
                                const Tolerance& tol = {});

// Exchange two blocks of B^a(E) with identical size and multiplicity.
Endomorphism block_swap_endomorphism(const ConcreteModule& e, Index block_a,
                                     Index block_b, const Tolerance& tol = {});

// theta o theta.
Endomorphism iterate(const Endomorphism& theta, const Tolerance& tol = {});

// ---- the section-1 construction (unit vector) ------------------------------

struct UnitFiberResult {
  Correspondence fiber;   // E_1 = p_1 E with left action b . x = theta(xi b xi^*) x
  CMatrix p1;             // theta(xi xi^*), on H
  CMatrix xi;             // the unit vector, reduced to H
  CMatrix u_map;          // unitary H(E (.) fiber) -> H, x (.) y -> theta(x xi^*) y
  double unitary_defect = 1.0;
  double recover_defect = 1.0;  // max_a || theta(a) - u (a (.) id) u^* ||
};

UnitFiberResult construct_via_unit(const Endomorphism& theta, const CMatrix& xi_ambient,
                                   const Tolerance& tol = {});

// ---- the section-2 construction (commutant / intertwiners) -----------------

struct CommutantFiberResult {
  Correspondence fiber_prime;  // B'-B' correspondence of intertwiners
  Correspondence fiber;        // its commutant, retyped over B
  std::vector<CMatrix> intertwiners;  // x' in B(H) with theta(a) x' = x' a
  CMatrix w_map;               // unitary H(E (.) fiber) -> H, x (.) y' (.) g -> y'(x g)
  double unitary_defect = 1.0;
  double intertwine_defect = 1.0;  // w conjugates the B' actions
  double module_match_defect = 1.0;  // w carries E (.) fiber onto E
  double recover_defect = 1.0;       // theta(a) = a (.) id under w
};

// Refuses when E is not strongly full (rho' would not be faithful).
CommutantFiberResult construct_via_commutant(const Endomorphism& theta,
                                             const Tolerance& tol = {});

// ---- cross checks -----------------------------------------------------------

struct DualityReport {
  bool ok = false;
  IsoResult commutant_match;      // commutant(unit fiber) vs fiber_prime
  IsoResult square_unit;          // fiber(theta^2) vs fiber(theta)^(.)2, unit route
  IsoResult square_commutant;     // same, commutant route
};

DualityReport duality_check(const Endomorphism& theta, const CMatrix& xi_ambient,
                            const Tolerance& tol = {});

struct DilationReport {
  CMatrix p0, p1;
  bool order_holds = false;     // p1 >= p0, equivalently p1 xi = xi
  double order_residual = 0.0;  // || p1 xi - xi ||
  bool cp_valid = false;
  bool cp_unital = false;
  CPMap extracted;              // T(b) = <xi, theta(xi b xi^*) xi>
  double unit_power_defect = 0.0;  // max_{n<=3} || <xi_n, b xi_n> - T^n(b) ||
};

DilationReport dilation_check(const Endomorphism& theta, const CMatrix& xi_ambient,
                              const Tolerance& tol = {});

}  // namespace corrlab
