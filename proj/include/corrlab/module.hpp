#pragma once

#include "corrlab/algebra.hpp"

#include <optional>

namespace corrlab {

// A concrete Hilbert B-module: a right-invariant operator span E in B(G, H)
// whose inner products x^* y land in B.
struct ConcreteModule {
  AlgebraPtr algebra;   // right algebra B acting on G
  Index target_dim = 0; // ambient dimension of the H side
  OperatorSpan span;    // operators G -> H

  Index dim() const { return span.dim(); }
};

struct UnitCertificate {
  enum class Verdict { found, impossible, unknown };
  struct BlockRank {
    Index block = 0;
    Index needed = 0;     // block size n_k
    Index available = 0;  // achievable column rank over the block
  };
  Verdict verdict = Verdict::unknown;
  std::optional<CMatrix> witness;  // xi with <xi,xi> = 1, in the module span
  std::vector<BlockRank> ranks;    // per-block record; obstruction when available < needed
};

// Right-closure of the generators under B, with inner products validated to
// land in B.  Throws if a product escapes the algebra.
ConcreteModule make_module(const AlgebraPtr& b, Index target_dim,
                           const std::vector<CMatrix>& generators,
                           const Tolerance& tol = {});

// Build a module from an already right-invariant orthonormal span (validated).
ConcreteModule module_from_span(const AlgebraPtr& b, Index target_dim,
                                OperatorSpan span, const Tolerance& tol = {});

// Span of all inner products <x, y> over basis pairs, inside B(G).
OperatorSpan product_span(const ConcreteModule& e, const Tolerance& tol = {});

// Strong fullness: <E,E> spans all of B.
bool is_full(const ConcreteModule& e, const Tolerance& tol = {});

UnitCertificate unit_vector_certificate(const ConcreteModule& e,
                                        const Tolerance& tol = {});

// The representation data induced on H = span(E G): the reduced module, the
// concrete algebra pi(B^a(E)), and the commutant representation rho'.
struct InducedRep {
  Index h = 0;            // dim of the reachable span
  CMatrix isometry;       // target_dim x h; columns span E G
  ConcreteModule reduced; // the same module re-coordinatized to C^h
  AlgebraPtr ba;          // pi(B^a(E)) = span{x y^*}; null unless requested
  AlgebraPtr commutant;   // B'
  Representation rho_prime;  // of B' on C^h: x (.) g -> x (.) b'g
};

InducedRep induced_rep(const ConcreteModule& e, const Tolerance& tol = {},
                       AlgebraPtr precomputed_commutant = nullptr,
                       bool with_ba = true);

// Orthonormal span closed under adjoints and pairwise products; iterates
// until the dimension is stable so that weakly represented directions of the
// generated *-algebra are not lost to the rank cutoff.
OperatorSpan star_algebra_closure(const std::vector<CMatrix>& generators,
                                  const Tolerance& tol);

// Intertwiner functor: {x in B(G,H) : rho'(b') x = x b'} as a module over B.
ConcreteModule intertwiner_module(const AlgebraPtr& b,
                                  const Representation& rho_prime,
                                  const Tolerance& tol = {});

// Totality: the module reaches the whole representation space, span(E G) = H.
bool check_totality(const ConcreteModule& e, const Tolerance& tol = {});

// Pass to the full module over B_E = span<E,E> (a sum of blocks of B),
// compressing G to the support of B_E.
struct ModuleRestriction {
  ConcreteModule module;        // over the restricted algebra
  AlgebraPtr restricted;        // B_E
  CMatrix embedding;            // G_sub -> G isometry
  std::vector<Index> kept_blocks;
};

ModuleRestriction restrict_to_range(const ConcreteModule& e,
                                    const Tolerance& tol = {});

// Blockwise column data of a module: the reachable tilde-column space per
// block of B.  Used by closure, unit certificates, and dimension audits.
struct BlockColumns {
  Index block = 0;
  CMatrix basis;  // (target_dim * multiplicity) x d_k, orthonormal columns
  bool rank_ambiguous = false;
};

std::vector<BlockColumns> block_columns(const AlgebraPtr& b, Index target_dim,
                                        const std::vector<CMatrix>& elements,
                                        const Tolerance& tol);

}  // namespace corrlab
