#pragma once

#include "corrlab/span.hpp"

#include <memory>
#include <mutex>
#include <vector>

namespace corrlab {

// One simple summand M_n appearing with multiplicity m in the defining
// representation.  `frame` is an isometry C^(n*m) -> G under which algebra
// elements act as (matrix (x) id_m); `projection` is the central projection
// onto its range.
struct AlgebraBlock {
  Index size = 0;          // n
  Index multiplicity = 0;  // m
  CMatrix frame;           // rep_dim x (n*m)
  CMatrix projection;      // rep_dim x rep_dim
};

// A multimatrix von Neumann algebra B = (+)_k M_{n_k}, concretely and
// faithfully represented on G.  Carries explicit images of all matrix units;
// every other structure (span, coefficients, representations) derives from
// them.
class Algebra {
 public:
  Algebra(std::vector<AlgebraBlock> blocks, Index rep_dim);

  const std::vector<AlgebraBlock>& blocks() const { return blocks_; }
  Index block_count() const { return static_cast<Index>(blocks_.size()); }
  Index rep_dim() const { return rep_dim_; }
  Index dim() const { return dim_; }  // sum n_k^2

  // Matrix units e^k_{ij}, indexed block-major, row-major within a block.
  const std::vector<CMatrix>& units() const { return units_; }
  const CMatrix& unit_image(Index idx) const { return units_[static_cast<std::size_t>(idx)]; }
  Index unit_offset(Index block) const { return offsets_[static_cast<std::size_t>(block)]; }
  Index unit_index(Index block, Index i, Index j) const {
    return offsets_[static_cast<std::size_t>(block)] + i * blocks_[static_cast<std::size_t>(block)].size + j;
  }

  struct UnitPos {
    Index block = 0, row = 0, col = 0;
  };
  UnitPos unit_position(Index idx) const;
  Index unit_adjoint_index(Index idx) const;
  // Index of e_i e_j in the unit basis, or -1 when the product vanishes.
  Index unit_product_index(Index i, Index j) const;

  // Indices of a small *-closed generating family (per block: the (0,0)
  // unit and the sub/super-diagonal shifts).  Intertwiner conditions against
  // the generators already pin down intertwiners of the whole algebra.
  std::vector<Index> generator_indices() const;

  const OperatorSpan& span() const { return span_; }
  const CMatrix& identity() const { return identity_; }

  // Coordinates in the matrix-unit basis (valid on the span).
  CVector coefficients(const CMatrix& x) const;
  CMatrix from_coefficients(const CVector& c) const;

  // Orthogonal projection onto the algebra span, computed blockwise through
  // the frames (averaging over the multiplicity index).
  CMatrix project(const CMatrix& x) const;
  double membership_residual(const CMatrix& x) const { return frob(x - project(x)); }
  bool contains(const CMatrix& x, const Tolerance& tol) const {
    return membership_residual(x) <= tol.cutoff(1.0 + frob(x));
  }

  // Worst deviation from the matrix-unit relations; cheap structural audit.
  double structure_defect() const;

 private:
  friend std::shared_ptr<const Algebra> commutant_algebra(const Algebra&,
                                                          const Tolerance&);

  std::vector<AlgebraBlock> blocks_;
  Index rep_dim_ = 0;
  Index dim_ = 0;
  std::vector<Index> offsets_;
  std::vector<CMatrix> units_;
  OperatorSpan span_;
  CMatrix identity_;
  // Memoized commutant (the block layout does not depend on the tolerance for
  // any reasonable setting, so the first computation is reused).
  mutable std::mutex commutant_mutex_;
  mutable std::shared_ptr<const Algebra> commutant_cache_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

// A normal unital *-representation, given by images of the matrix units.
struct Representation {
  AlgebraPtr algebra;
  Index space_dim = 0;
  std::vector<CMatrix> images;  // aligned with algebra->units()

  CMatrix apply(const CMatrix& x) const;
  CMatrix apply_coefficients(const CVector& c) const;

  // Max residual over the matrix-unit relations, adjoints, and unitality.
  double hom_defect() const;
};

struct BlockSpec {
  Index size = 0;
  Index multiplicity = 0;
};

// Canonical model (+)_k M_{n_k} (x) 1_{m_k} on G = (+)_k C^{n_k} (x) C^{m_k},
// blocks sorted by (size, multiplicity).
AlgebraPtr make_multimatrix(const std::vector<BlockSpec>& blocks);

// Commutant B' on the same G, computed from the intertwiner equations and
// matched to the block model through explicitly recovered frames.  Blocks
// follow the order induced by the blocks of A (shared central projections).
AlgebraPtr commutant_algebra(const Algebra& a, const Tolerance& tol = {});

// Recognize multimatrix structure in a unital *-closed operator span.
// Deterministic for fixed seed; throws if the span is not an algebra.
AlgebraPtr structure_algebra(const OperatorSpan& span, const Tolerance& tol = {},
                             std::uint64_t seed = 0x5eed5eedULL);

// Representation on (+)_k C^{n_k} (x) C^{r_k} twisted by a seeded random
// unitary.  Blocks with r_k = 0 are dropped (must leave a nonzero space).
Representation random_representation(const AlgebraPtr& a,
                                     const std::vector<Index>& multiplicities,
                                     std::uint64_t seed,
                                     const Tolerance& tol = {});

// Restriction of A to a subset of its blocks, acting on the compressed space.
// Returns the new algebra and the isometry from the compressed space into G.
struct AlgebraRestriction {
  AlgebraPtr algebra;
  CMatrix embedding;  // rep_dim(A) x rep_dim(restricted)
};
AlgebraRestriction restrict_to_blocks(const Algebra& a,
                                      const std::vector<Index>& keep);

bool same_algebra_span(const Algebra& a, const Algebra& b, const Tolerance& tol);

}  // namespace corrlab
