#include "corrlab/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace corrlab {

namespace {

CMatrix matrix_unit(Index n, Index i, Index j) {
  CMatrix e = CMatrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

bool lex_less_diag(const CMatrix& a, const CMatrix& b) {
  for (Index i = 0; i < a.rows(); ++i) {
    const double ar = std::round(a(i, i).real() * 1e9);
    const double br = std::round(b(i, i).real() * 1e9);
    if (ar != br) return ar > br;  // earlier support first
  }
  return false;
}

}  // namespace

Algebra::Algebra(std::vector<AlgebraBlock> blocks, Index rep_dim)
    : blocks_(std::move(blocks)), rep_dim_(rep_dim) {
  if (blocks_.empty()) throw std::invalid_argument("Algebra: empty block list");
  Index total_space = 0;
  for (auto& blk : blocks_) {
    if (blk.size < 1 || blk.multiplicity < 1)
      throw std::invalid_argument("Algebra: block size and multiplicity must be >= 1");
    offsets_.push_back(dim_);
    dim_ += blk.size * blk.size;
    total_space += blk.size * blk.multiplicity;
  }
  if (total_space != rep_dim_)
    throw std::invalid_argument("Algebra: block dimensions do not fill the space");

  std::vector<CMatrix> normalized;
  identity_ = CMatrix::Zero(rep_dim_, rep_dim_);
  for (const auto& blk : blocks_) {
    const CMatrix idm = CMatrix::Identity(blk.multiplicity, blk.multiplicity);
    for (Index i = 0; i < blk.size; ++i)
      for (Index j = 0; j < blk.size; ++j) {
        CMatrix e = blk.frame * kron(matrix_unit(blk.size, i, j), idm) * blk.frame.adjoint();
        units_.push_back(e);
        normalized.push_back(e / std::sqrt(static_cast<double>(blk.multiplicity)));
      }
    identity_ += blk.projection;
  }
  span_ = OperatorSpan(rep_dim_, rep_dim_, std::move(normalized));
}

Algebra::UnitPos Algebra::unit_position(Index idx) const {
  UnitPos p;
  while (p.block + 1 < block_count() && offsets_[static_cast<std::size_t>(p.block + 1)] <= idx)
    ++p.block;
  const Index within = idx - offsets_[static_cast<std::size_t>(p.block)];
  const Index n = blocks_[static_cast<std::size_t>(p.block)].size;
  p.row = within / n;
  p.col = within % n;
  return p;
}

Index Algebra::unit_adjoint_index(Index idx) const {
  const UnitPos p = unit_position(idx);
  return unit_index(p.block, p.col, p.row);
}

Index Algebra::unit_product_index(Index i, Index j) const {
  const UnitPos a = unit_position(i), b = unit_position(j);
  if (a.block != b.block || a.col != b.row) return -1;
  return unit_index(a.block, a.row, b.col);
}

std::vector<Index> Algebra::generator_indices() const {
  std::vector<Index> out;
  for (Index k = 0; k < block_count(); ++k) {
    const Index n = blocks_[static_cast<std::size_t>(k)].size;
    out.push_back(unit_index(k, 0, 0));
    for (Index i = 0; i + 1 < n; ++i) {
      out.push_back(unit_index(k, i, i + 1));
      out.push_back(unit_index(k, i + 1, i));
    }
  }
  return out;
}

CVector Algebra::coefficients(const CMatrix& x) const {
  CVector c(dim_);
  Index idx = 0;
  for (const auto& blk : blocks_) {
    const double m = static_cast<double>(blk.multiplicity);
    for (Index i = 0; i < blk.size * blk.size; ++i, ++idx)
      c(idx) = hs_inner(units_[static_cast<std::size_t>(idx)], x) / m;
  }
  return c;
}

CMatrix Algebra::from_coefficients(const CVector& c) const {
  CMatrix x = CMatrix::Zero(rep_dim_, rep_dim_);
  for (Index i = 0; i < dim_; ++i) x += c(i) * units_[static_cast<std::size_t>(i)];
  return x;
}

CMatrix Algebra::project(const CMatrix& x) const {
  CMatrix out = CMatrix::Zero(rep_dim_, rep_dim_);
  for (const auto& blk : blocks_) {
    const Index n = blk.size, m = blk.multiplicity;
    const CMatrix corner = blk.frame.adjoint() * x * blk.frame;  // (n m) x (n m)
    CMatrix c = CMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index ip = 0; ip < n; ++ip) {
        Complex acc = 0;
        for (Index j = 0; j < m; ++j) acc += corner(i * m + j, ip * m + j);
        c(i, ip) = acc / static_cast<double>(m);
      }
    out += blk.frame * kron(c, CMatrix::Identity(m, m)) * blk.frame.adjoint();
  }
  return out;
}

double Algebra::structure_defect() const {
  double worst = 0.0;
  for (Index b = 0; b < block_count(); ++b) {
    const auto& blk = blocks_[static_cast<std::size_t>(b)];
    const Index n = blk.size;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        const CMatrix& e = unit_image(unit_index(b, i, j));
        worst = std::max(worst, frob(e.adjoint() - unit_image(unit_index(b, j, i))));
        for (Index p = 0; p < n; ++p)
          for (Index q = 0; q < n; ++q) {
            const CMatrix prod = e * unit_image(unit_index(b, p, q));
            const CMatrix expect =
                (j == p) ? unit_image(unit_index(b, i, q)) : CMatrix::Zero(rep_dim_, rep_dim_);
            worst = std::max(worst, frob(prod - expect));
          }
      }
  }
  worst = std::max(worst, frob(identity_ - CMatrix::Identity(rep_dim_, rep_dim_)));
  return worst;
}

CMatrix Representation::apply(const CMatrix& x) const {
  return apply_coefficients(algebra->coefficients(x));
}

CMatrix Representation::apply_coefficients(const CVector& c) const {
  CMatrix out = CMatrix::Zero(space_dim, space_dim);
  for (Index i = 0; i < c.size(); ++i) out += c(i) * images[static_cast<std::size_t>(i)];
  return out;
}

double Representation::hom_defect() const {
  double worst = 0.0;
  const auto& a = *algebra;
  CMatrix unit_sum = CMatrix::Zero(space_dim, space_dim);
  for (Index b = 0; b < a.block_count(); ++b) {
    const Index n = a.blocks()[static_cast<std::size_t>(b)].size;
    for (Index i = 0; i < n; ++i) {
      unit_sum += images[static_cast<std::size_t>(a.unit_index(b, i, i))];
      for (Index j = 0; j < n; ++j) {
        const CMatrix& e = images[static_cast<std::size_t>(a.unit_index(b, i, j))];
        worst = std::max(
            worst, frob(e.adjoint() - images[static_cast<std::size_t>(a.unit_index(b, j, i))]));
        for (Index p = 0; p < n; ++p)
          for (Index q = 0; q < n; ++q) {
            const CMatrix prod = e * images[static_cast<std::size_t>(a.unit_index(b, p, q))];
            const CMatrix expect = (j == p)
                                       ? images[static_cast<std::size_t>(a.unit_index(b, i, q))]
                                       : CMatrix::Zero(space_dim, space_dim);
            worst = std::max(worst, frob(prod - expect));
          }
      }
    }
    // Cross-block products vanish.
    for (Index b2 = 0; b2 < a.block_count(); ++b2) {
      if (b2 == b) continue;
      const CMatrix prod = images[static_cast<std::size_t>(a.unit_index(b, 0, 0))] *
                           images[static_cast<std::size_t>(a.unit_index(b2, 0, 0))];
      worst = std::max(worst, frob(prod));
    }
  }
  worst = std::max(worst, frob(unit_sum - CMatrix::Identity(space_dim, space_dim)));
  return worst;
}

AlgebraPtr make_multimatrix(const std::vector<BlockSpec>& specs) {
  if (specs.empty()) throw std::invalid_argument("make_multimatrix: empty block list");
  std::vector<BlockSpec> sorted = specs;
  std::stable_sort(sorted.begin(), sorted.end(), [](const BlockSpec& a, const BlockSpec& b) {
    if (a.size != b.size) return a.size < b.size;
    return a.multiplicity < b.multiplicity;
  });

  Index rep_dim = 0;
  for (const auto& s : sorted) {
    if (s.size < 1 || s.multiplicity < 1)
      throw std::invalid_argument("make_multimatrix: sizes and multiplicities must be >= 1");
    rep_dim += s.size * s.multiplicity;
  }

  std::vector<AlgebraBlock> blocks;
  Index off = 0;
  for (const auto& s : sorted) {
    AlgebraBlock blk;
    blk.size = s.size;
    blk.multiplicity = s.multiplicity;
    const Index w = s.size * s.multiplicity;
    blk.frame = CMatrix::Zero(rep_dim, w);
    for (Index t = 0; t < w; ++t) blk.frame(off + t, t) = 1.0;
    blk.projection = blk.frame * blk.frame.adjoint();
    blocks.push_back(std::move(blk));
    off += w;
  }
  return std::make_shared<Algebra>(std::move(blocks), rep_dim);
}

namespace {

// Orthonormalize the compression {p s p : s in basis} of a span to a corner.
OperatorSpan corner_span(const OperatorSpan& span, const CMatrix& p,
                         const Tolerance& tol) {
  std::vector<CMatrix> cut;
  for (const auto& s : span.basis()) cut.push_back(p * s * p);
  return hs_orthonormalize(cut, tol);
}

// Spectral projections of a generic self-adjoint element of a commutative
// span, one per minimal projection.  Throws if the element fails to separate.
std::vector<CMatrix> split_projections(const OperatorSpan& center, Index want,
                                       const Tolerance& tol, Rng& rng) {
  const Index n = center.ambient_rows();
  for (int attempt = 0; attempt < 8; ++attempt) {
    CMatrix z = CMatrix::Zero(n, n);
    for (const auto& c : center.basis()) z += rng.cgaussian() * c;
    z = (z + CMatrix(z.adjoint())) * 0.5;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(z);
    const auto& vals = eig.eigenvalues();
    const double spread = std::max(1.0, vals(n - 1) - vals(0));

    // Group eigenvalues at the (want-1) widest gaps.
    std::vector<std::pair<double, Index>> gaps;
    for (Index i = 0; i + 1 < n; ++i) gaps.push_back({vals(i + 1) - vals(i), i});
    std::sort(gaps.begin(), gaps.end(), [](auto& a, auto& b) { return a.first > b.first; });
    if (static_cast<Index>(gaps.size()) < want - 1) continue;
    std::vector<Index> cuts;
    for (Index i = 0; i < want - 1; ++i) cuts.push_back(gaps[static_cast<std::size_t>(i)].second);
    std::sort(cuts.begin(), cuts.end());

    const double min_separator =
        (want > 1) ? gaps[static_cast<std::size_t>(want - 2)].first : spread;
    const double max_intra = (want - 1 < static_cast<Index>(gaps.size()))
                                 ? gaps[static_cast<std::size_t>(want - 1)].first
                                 : 0.0;
    if (min_separator < 1e-6 * spread || max_intra > 1e-8 * spread) continue;

    std::vector<CMatrix> projections;
    Index lo = 0;
    for (Index c = 0; c < want; ++c) {
      const Index hi = (c + 1 < want) ? cuts[static_cast<std::size_t>(c)] + 1 : n;
      CMatrix p = CMatrix::Zero(n, n);
      for (Index i = lo; i < hi; ++i) {
        const CVector v = eig.eigenvectors().col(i);
        p += v * v.adjoint();
      }
      projections.push_back(std::move(p));
      lo = hi;
    }

    bool valid = true;
    for (const auto& p : projections) {
      if (center.residual(p) > tol.cutoff(1.0 + frob(p)) * 10) valid = false;
      if (frob(p * p - p) > tol.cutoff(1.0) * 10) valid = false;
      // Minimality inside the commutative span: span{z p} is one-dimensional.
      std::vector<CMatrix> slice;
      for (const auto& zc : center.basis()) slice.push_back(zc * p);
      if (hs_orthonormalize(slice, tol).dim() != 1) valid = false;
      if (!valid) break;
    }
    if (valid) return projections;
  }
  throw std::runtime_error("structure_algebra: could not separate central projections");
}

// Recover the M_n (x) 1_m structure of one central block of an algebra span.
AlgebraBlock recover_block(const OperatorSpan& span, const CMatrix& central_proj,
                           const Tolerance& tol, Rng& rng) {
  const Index N = span.ambient_rows();
  const OperatorSpan corner = corner_span(span, central_proj, tol);
  const Index corner_dim = corner.dim();
  const Index rank = static_cast<Index>(std::llround(central_proj.trace().real()));
  const Index n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(corner_dim))));
  if (n * n != corner_dim)
    throw std::runtime_error("structure_algebra: corner dimension is not a square");
  if (rank % n != 0)
    throw std::runtime_error("structure_algebra: block rank not divisible by size");
  const Index m = rank / n;

  // Minimal projection: spectral projection of a generic self-adjoint corner
  // element for its top eigenvalue cluster (cluster size must be m).
  CMatrix e;
  bool found = false;
  for (int attempt = 0; attempt < 8 && !found; ++attempt) {
    CMatrix a = CMatrix::Zero(N, N);
    for (const auto& c : corner.basis()) a += rng.cgaussian() * c;
    a = (a + CMatrix(a.adjoint())) * 0.5;
    // Shift inside the block so its spectrum separates cleanly from the
    // zero eigenvalues outside the central support.
    a += (frob(a) + 1.0) * central_proj;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(a);
    const auto& vals = eig.eigenvalues();
    // Top m eigenvalues must form one tight cluster, separated from the rest.
    const double top = vals(N - 1);
    const double gap = (N - m - 1 >= 0) ? vals(N - m) - vals(N - m - 1) : 1.0;
    double cluster_spread = vals(N - 1) - vals(N - m);
    if (gap < 1e-6 * std::abs(top) || cluster_spread > 1e-8 * std::abs(top)) continue;
    CMatrix cand = CMatrix::Zero(N, N);
    for (Index i = N - m; i < N; ++i) {
      const CVector v = eig.eigenvectors().col(i);
      cand += v * v.adjoint();
    }
    if (corner.residual(cand) > tol.cutoff(1.0 + frob(cand)) * 100) continue;
    // Minimality: e (corner) e is one-dimensional.
    std::vector<CMatrix> pinch;
    for (const auto& c : corner.basis()) pinch.push_back(cand * c * cand);
    if (hs_orthonormalize(pinch, tol).dim() != 1) continue;
    e = std::move(cand);
    found = true;
  }
  if (!found) throw std::runtime_error("structure_algebra: no minimal projection found");

  // The left module (corner algebra) * e carries the column structure; an
  // HS-orthonormal basis of it realizes C^n.
  std::vector<CMatrix> left;
  for (const auto& c : corner.basis()) left.push_back(c * e);
  const OperatorSpan col_mod = hs_orthonormalize(left, tol);
  if (col_mod.dim() != n)
    throw std::runtime_error("structure_algebra: column module has wrong dimension");

  // Orthonormal basis of range(e): the multiplicity directions.
  Eigen::SelfAdjointEigenSolver<CMatrix> pe(e);
  CMatrix fbase(N, m);
  Index got = 0;
  for (Index i = N - 1; i >= 0 && got < m; --i) {
    if (pe.eigenvalues()(i) > 0.5) fbase.col(got++) = pe.eigenvectors().col(i);
  }
  if (got != m) throw std::runtime_error("structure_algebra: projection rank mismatch");

  // g_{alpha j} = sqrt(m) * c_alpha f_j assemble the tensor frame.
  AlgebraBlock blk;
  blk.size = n;
  blk.multiplicity = m;
  blk.frame = CMatrix(N, n * m);
  const double root_m = std::sqrt(static_cast<double>(m));
  for (Index alpha = 0; alpha < n; ++alpha)
    for (Index j = 0; j < m; ++j)
      blk.frame.col(alpha * m + j) = root_m * (col_mod[static_cast<std::size_t>(alpha)] * fbase.col(j));
  blk.projection = central_proj;

  // Frame audit: isometry onto the block range, and every span element acts
  // as (matrix (x) 1_m) in frame coordinates.
  const double iso_defect = frob(CMatrix(blk.frame.adjoint() * blk.frame) -
                                 CMatrix::Identity(n * m, n * m));
  if (iso_defect > tol.cutoff(1.0) * 100)
    throw std::runtime_error("structure_algebra: recovered frame is not an isometry");
  return blk;
}

AlgebraPtr assemble_from_projections(const OperatorSpan& span,
                                     const std::vector<CMatrix>& projections,
                                     const Tolerance& tol, Rng& rng, bool sort_blocks) {
  std::vector<AlgebraBlock> blocks;
  for (const auto& p : projections) blocks.push_back(recover_block(span, p, tol, rng));
  if (sort_blocks) {
    std::stable_sort(blocks.begin(), blocks.end(), [](const AlgebraBlock& a, const AlgebraBlock& b) {
      if (a.size != b.size) return a.size < b.size;
      if (a.multiplicity != b.multiplicity) return a.multiplicity < b.multiplicity;
      return lex_less_diag(a.projection, b.projection);
    });
  }
  auto out = std::make_shared<Algebra>(std::move(blocks), span.ambient_rows());

  // The recovered units must reproduce the span exactly.
  if (out->dim() != span.dim())
    throw std::runtime_error("algebra recovery: dimension mismatch against span");
  for (const auto& u : out->units())
    if (span.residual(u) > tol.cutoff(1.0 + frob(u)) * 100)
      throw std::runtime_error("algebra recovery: unit image escapes the span");
  return out;
}

OperatorSpan center_of(const OperatorSpan& span, const Tolerance& tol) {
  // Coefficient-space kernel of the commutator map.
  const Index d = span.dim();
  const Index n2 = span.ambient_rows() * span.ambient_cols();
  CMatrix sys(d * n2, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      const CMatrix comm = span[static_cast<std::size_t>(j)] * span[static_cast<std::size_t>(i)] -
                           span[static_cast<std::size_t>(i)] * span[static_cast<std::size_t>(j)];
      sys.block(i * n2, j, n2, 1) = vec(comm);
    }
  }
  const Svd svd = robust_svd(sys, Eigen::ComputeThinV);
  const auto& sv = svd.sv;
  const double cut = tol.cutoff(sv.size() ? sv(0) : 0.0);
  std::vector<CMatrix> zs;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= cut) {
      CMatrix z = CMatrix::Zero(span.ambient_rows(), span.ambient_cols());
      for (Index j = 0; j < d; ++j) z += svd.v(j, i) * span[static_cast<std::size_t>(j)];
      zs.push_back(std::move(z));
    }
  return hs_orthonormalize(zs, tol);
}

}  // namespace

AlgebraPtr structure_algebra(const OperatorSpan& span, const Tolerance& tol,
                             std::uint64_t seed) {
  if (span.dim() == 0) throw std::invalid_argument("structure_algebra: empty span");
  if (span.ambient_rows() != span.ambient_cols())
    throw std::invalid_argument("structure_algebra: ambient not square");
  const Index N = span.ambient_rows();

  // Unital and *-closed.
  if (span.residual(CMatrix::Identity(N, N)) > tol.cutoff(1.0 + std::sqrt(static_cast<double>(N))) * 10)
    throw std::invalid_argument("structure_algebra: span is not unital");
  for (const auto& s : span.basis()) {
    if (span.residual(s.adjoint()) > tol.cutoff(2.0) * 10)
      throw std::invalid_argument("structure_algebra: span not closed under adjoints");
  }

  Rng rng(seed);
  const OperatorSpan center = center_of(span, tol);
  const auto projections = split_projections(center, center.dim(), tol, rng);
  return assemble_from_projections(span, projections, tol, rng, /*sort_blocks=*/true);
}

AlgebraPtr commutant_algebra(const Algebra& a, const Tolerance& tol) {
  {
    std::lock_guard<std::mutex> lock(a.commutant_mutex_);
    if (a.commutant_cache_) return a.commutant_cache_;
  }
  std::vector<CMatrix> gens;
  for (Index i : a.generator_indices()) gens.push_back(a.unit_image(i));
  const OperatorSpan comm =
      solve_intertwiners(gens, gens, a.rep_dim(), a.rep_dim(), tol);

  // Shared central projections, in the order induced by the blocks of A.
  std::vector<CMatrix> projections;
  for (const auto& blk : a.blocks()) projections.push_back(blk.projection);
  Rng rng(0xc0440u);
  auto out = assemble_from_projections(comm, projections, tol, rng, /*sort_blocks=*/false);

  // Structural duality: block k of B' must be (m_k, n_k).
  for (Index k = 0; k < a.block_count(); ++k) {
    const auto& src = a.blocks()[static_cast<std::size_t>(k)];
    const auto& dst = out->blocks()[static_cast<std::size_t>(k)];
    if (src.size != dst.multiplicity || src.multiplicity != dst.size)
      throw std::runtime_error("commutant_algebra: block duality violated");
  }
  std::lock_guard<std::mutex> lock(a.commutant_mutex_);
  if (!a.commutant_cache_) a.commutant_cache_ = out;
  return a.commutant_cache_;
}

Representation random_representation(const AlgebraPtr& a,
                                     const std::vector<Index>& multiplicities,
                                     std::uint64_t seed, const Tolerance& tol) {
  if (static_cast<Index>(multiplicities.size()) != a->block_count())
    throw std::invalid_argument("random_representation: one multiplicity per block");
  Index space = 0;
  for (Index k = 0; k < a->block_count(); ++k) {
    if (multiplicities[static_cast<std::size_t>(k)] < 0)
      throw std::invalid_argument("random_representation: negative multiplicity");
    space += a->blocks()[static_cast<std::size_t>(k)].size * multiplicities[static_cast<std::size_t>(k)];
  }
  if (space == 0)
    throw std::invalid_argument("random_representation: zero total dimension");

  Rng rng(seed);
  const CMatrix u = rng.unitary(space);

  Representation rep;
  rep.algebra = a;
  rep.space_dim = space;
  Index off = 0;
  for (Index k = 0; k < a->block_count(); ++k) {
    const Index n = a->blocks()[static_cast<std::size_t>(k)].size;
    const Index r = multiplicities[static_cast<std::size_t>(k)];
    const CMatrix idr = CMatrix::Identity(std::max<Index>(r, 0), std::max<Index>(r, 0));
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        CMatrix img = CMatrix::Zero(space, space);
        if (r > 0) img.block(off, off, n * r, n * r) = kron(matrix_unit(n, i, j), idr);
        rep.images.push_back(u * img * u.adjoint());
      }
    off += n * r;
  }
  if (rep.hom_defect() > tol.cutoff(1.0) * 100)
    throw std::runtime_error("random_representation: constructed images fail the *-hom audit");
  return rep;
}

AlgebraRestriction restrict_to_blocks(const Algebra& a, const std::vector<Index>& keep) {
  if (keep.empty()) throw std::invalid_argument("restrict_to_blocks: empty selection");
  Index sub_dim = 0;
  for (Index k : keep) sub_dim += a.blocks()[static_cast<std::size_t>(k)].size *
                                  a.blocks()[static_cast<std::size_t>(k)].multiplicity;

  // Embedding of the compressed space: concatenate the block frames.
  CMatrix emb(a.rep_dim(), sub_dim);
  Index at = 0;
  std::vector<AlgebraBlock> blocks;
  for (Index k : keep) {
    const auto& blk = a.blocks()[static_cast<std::size_t>(k)];
    const Index w = blk.size * blk.multiplicity;
    emb.middleCols(at, w) = blk.frame;
    at += w;
  }
  at = 0;
  for (Index k : keep) {
    const auto& blk = a.blocks()[static_cast<std::size_t>(k)];
    const Index w = blk.size * blk.multiplicity;
    AlgebraBlock nb;
    nb.size = blk.size;
    nb.multiplicity = blk.multiplicity;
    nb.frame = CMatrix::Zero(sub_dim, w);
    nb.frame.middleRows(at, w) = CMatrix::Identity(w, w);
    nb.projection = nb.frame * nb.frame.adjoint();
    blocks.push_back(std::move(nb));
    at += w;
  }
  AlgebraRestriction out;
  out.algebra = std::make_shared<Algebra>(std::move(blocks), sub_dim);
  out.embedding = emb;
  return out;
}

bool same_algebra_span(const Algebra& a, const Algebra& b, const Tolerance& tol) {
  return a.rep_dim() == b.rep_dim() && same_span(a.span(), b.span(), tol);
}

}  // namespace corrlab
