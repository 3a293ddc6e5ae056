#pragma once

// Symmetry reduction of equivariant operators on the weight space M(k,k).
//
// The diagonal action of a symmetric group (or a product of two) splits
// M(k,k) into isotypic components. An operator commuting with the action maps
// each component to itself and is determined there by a small square matrix,
// one row per copy of the irreducible. This header builds the decomposition,
// the explicit representative matrices spanning one copy of each irreducible,
// and the reduced blocks whose eigenvalues give the full spectrum with
// multiplicities equal to the irreducible degrees.
//
// Shapes are (k, p, q) with p + q = k. q = 0 is the one-block action
// (all coordinates equivalent); q >= 1 splits coordinates into a leading
// block of p and a trailing block of q. Supported shapes:
//   q = 0 with k >= 4;  q = 1 with k >= 5;  q >= 2 with p > q and k >= 4 + q.

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

#include "hesssym/core/geometry.hpp"
#include "hesssym/errors.hpp"

namespace hesssym {

enum class IrrepKind {
  Trivial,         // degree 1
  Standard,        // hyperplane sum(x) = 0 in R^m, degree m - 1
  ExteriorSquare,  // wedge^2 of Standard, degree (m-1)(m-2)/2
  PartitionK2,     // partition (m-2,2) class, degree m(m-3)/2
  ExteriorTensor,  // Standard(p) x Standard(q), degree (p-1)(q-1)
};

// Isomorphism class of an irreducible. Standard/ExteriorSquare/PartitionK2
// carry the block size m; ExteriorTensor carries both block sizes.
struct IrrepClass {
  IrrepKind kind = IrrepKind::Trivial;
  Index m = 0;
  Index p = 0;
  Index q = 0;
};

Index irrep_degree(const IrrepClass& irrep);

// Stable short label for records and CLI output: one of
// t, s_p, s_q, x_p, y_p, x_q, y_q, sxs. The suffix says which coordinate
// block of the decomposition shape (p, q) the size parameter refers to.
std::string irrep_label(const IrrepClass& irrep, Index p, Index q);

struct IsotypicComponent {
  IrrepClass irrep;
  Index multiplicity = 0;
  std::vector<Matd> representatives;  // multiplicity many k x k matrices
};

// The isotypic decomposition of M(k,k) under the shape's diagonal action,
// in the fixed component order t, s_p, s_q, x_p, y_p, x_q, y_q, sxs
// (absent components dropped). Throws UnsupportedShape outside the supported
// shapes. Multiplicities satisfy sum(multiplicity * degree) = k^2.
std::vector<std::pair<IrrepClass, Index>> isotypic_decomposition(Index k, Index p, Index q);

// Same decomposition with explicit representatives: multiplicity-many
// linearly independent matrices per component, images of a common generator
// of the standard representation under the natural embeddings (diagonal,
// skew, symmetric, cross-block). Representatives of distinct components are
// Frobenius-orthogonal.
std::vector<IsotypicComponent> representative_set(Index k, Index p, Index q);

// Same, with the standard-representation generators replaced. gen_p has size
// p and entries summing to zero; gen_q likewise for the trailing block
// (required only when q >= 2, pass an empty vector otherwise). Reduced block
// eigenvalues are invariant under this replacement.
std::vector<IsotypicComponent> representative_set(Index k, Index p, Index q,
                                                  const Vecd& gen_p, const Vecd& gen_q);

struct ReducedBlock {
  IsotypicComponent component;
  Matd matrix;             // row i = coefficients of H * rep_i in the rep basis
  double residual = 0.0;   // max_i |H r_i - projection| / |H r_i|
};

// Project H * representative back onto the representative span by least
// squares. H must be (k^2) x (k^2) acting on row-major vectorized matrices.
// Throws RankDeficientRepresentatives if the span degenerates. The residual
// is zero (to rounding) exactly when H commutes with the group action on the
// component.
ReducedBlock reduced_block(const Matd& H, const IsotypicComponent& comp);

// Eigenvalues of H restricted to the component's span, ascending. Computed on
// an orthonormalized basis so symmetry of H is preserved exactly; agrees with
// the eigenvalues of ReducedBlock::matrix when the residual vanishes.
Vecd reduced_component_eigenvalues(const Matd& H, const IsotypicComponent& comp);

struct SpectrumEntry {
  double eigenvalue = 0.0;
  Index multiplicity = 0;
  std::string component;
};

// Entries ordered by component (fixed order above), ascending eigenvalue
// within a component. Equal eigenvalues from different components are NOT
// merged; total multiplicity is k^2.
struct SpectrumWithMultiplicity {
  std::vector<SpectrumEntry> entries;
};

// Full spectrum of an equivariant H via the reduced blocks: each block
// eigenvalue enters with multiplicity equal to its irreducible degree.
// Throws EquivarianceViolation if any block residual exceeds 1e-6 (the
// operator does not actually commute with the requested action).
SpectrumWithMultiplicity reduced_spectrum(const Matd& H, Index k, Index p, Index q);

// Independent cross-check for the multiplicity-one components of the leading
// block: reads lambda_x (resp. lambda_y) off a single designated entry of
// H * representative, as a pure matrix-vector product with no projection.
// Throws ZeroProbeEntry if the designated entry of the representative is zero.
std::pair<double, double> direct_xy_eigenvalues(const Matd& H, Index k, Index p, Index q);

}  // namespace hesssym
