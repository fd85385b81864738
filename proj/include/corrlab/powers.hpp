#pragma once

#include "corrlab/product_system.hpp"

namespace corrlab {

// One spatial factor: a multiplicity space C^k with a unit reference vector.
struct SpatialDatum {
  Index k = 1;
  CVector omega;  // unit vector in C^k
};

// The CP map B(G (+) G) -> B((G (x) h1) (+) (G (x) h2)) with diagonal blocks
// a_ii (x) 1 and off-diagonal blocks contracted through the reference
// vectors.
struct PowersMap {
  Index g_dim = 1;
  SpatialDatum d1, d2;
  AlgebraPtr source;  // M_{2g}
  AlgebraPtr target;  // M_{g(k1+k2)}
  CPMap cp;
};

PowersMap build_powers_map(Index g_dim, SpatialDatum d1, SpatialDatum d2,
                           const Tolerance& tol = {});

// The predicted GNS data: H = C omega (+) (h1 - C omega1) (+) (h2 - C omega2)
// and the two-row cyclic vector, verified to reproduce the map.
struct PowersModel {
  Index h_dim = 0;   // k1 + k2 - 1
  CMatrix basis1;    // unitary completion of omega1 (first column omega1)
  CMatrix basis2;
  CMatrix m1, m2;    // h_i -> H_model: omega coordinate + complement
  CMatrix xi;        // G_B -> G_A (x) H_model
  double reproduction_defect = 1.0;  // max_a |<xi, a xi> - T(a)|
};

PowersModel predicted_gns(const PowersMap& p, const Tolerance& tol = {});

// GNS of the Powers map from first principles, with the explicit unitary
// onto the model and the cyclic-vector match.
struct PowersGnsReport {
  GnsResult gns;
  PowersModel model;
  Index multiplicity = 0;          // corner dimension of the GNS module
  bool multiplicity_matches = false;  // == k1 + k2 - 1
  CMatrix u;                       // unitary H_gns -> G_A (x) H_model
  double unitary_defect = 1.0;
  double intertwine_defect = 1.0;  // u pi(a) = (a (x) 1) u
  double cyclic_defect = 1.0;      // u xi_gns = xi_model
};

PowersGnsReport verify_powers_gns(const PowersMap& p, const Tolerance& tol = {});

// Comparison with the spatial product of the two factors over C.
struct SpatialComparisonReport {
  Index fiber_dim = 0;    // k1 + k2 - 1
  Index tensor_dim = 0;   // k1 * k2
  bool proper_factors = false;      // k1, k2 >= 2
  bool not_tensor_product = false;  // fiber_dim < tensor_dim
  double fiber_unitary_defect = 1.0;  // V: H_F -> H_model
  double omega_defect = 1.0;          // omega class -> omega coordinate
  double complement_defect = 1.0;     // factor complements -> model complements
  double tipdef_defect = 1.0;         // full inner-product table
  double gns_transport_defect = 1.0;  // transported into the GNS corner by u
};

SpatialComparisonReport compare_with_spatial_product(const PowersMap& p,
                                                     const PowersGnsReport& rep,
                                                     const Tolerance& tol = {});

// Discrete n-step consistency: the Powers map of the n-fold tensor powers has
// GNS multiplicity k1^n + k2^n - 1 and embeds isometrically into the n-th
// fiber of the spatial product as unit class plus single-factor complements.
struct NStepReport {
  Index n = 1;
  Index gns_multiplicity = 0;
  bool multiplicity_matches = false;  // == k1^n + k2^n - 1
  Index product_fiber_dim = 0;        // (k1 + k2 - 1)^n
  bool fiber_dim_matches = false;
  double embedding_defect = 1.0;  // isometry of the model into F^(.)n
  double unit_class_defect = 1.0; // omega words agree with the product unit
};

NStepReport powers_nstep_check(Index g_dim, const SpatialDatum& d1,
                               const SpatialDatum& d2, Index n,
                               const Tolerance& tol = {});

// The product system over C whose fiber is C^k, with trivial actions; the
// reference unit is the given vector.
FiberSystem scalar_fiber_system(Index k, const Tolerance& tol = {});
CentralUnit scalar_central_unit(const FiberSystem& s, const CVector& omega,
                                const Tolerance& tol = {});

// Deterministic unitary completion: first column is the given unit vector.
CMatrix complete_to_unitary(const CVector& first);

}  // namespace corrlab
