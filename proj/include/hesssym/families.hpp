#pragma once

// Construction and refinement of the known critical-point families of the
// population loss with identity teacher: the global minimum, the fully
// symmetric spurious family (type A), and the two last-neuron-special
// families (types I, II). Series truncations give starting points that
// damped Newton on the pattern coordinates polishes to machine precision.
// Refinement acts on the 2- or 5-dimensional coordinate space, so the
// isotropy pattern of the result is preserved structurally.

#include <variant>
#include <vector>

#include "hesssym/core/geometry.hpp"

namespace hesssym {

enum class FamilyId { GlobalMin, TypeA, TypeI, TypeII };

const char* family_name(FamilyId f);
FamilyId family_from_name(const std::string& name);  // ConfigError on unknown

// Coordinates of the two fixed-point spaces.
struct SkCoords {
  double R = 0;  // diagonal value
  double S = 0;  // off-diagonal value
};
struct Skm1Coords {
  double xi1 = 0;  // diagonal value of the regular neurons
  double xi2 = 0;  // off-diagonal value among the regular neurons
  double xi3 = 0;  // last coordinate of every regular neuron
  double xi4 = 0;  // regular coordinates of the special neuron
  double xi5 = 0;  // last coordinate of the special neuron
};
using FixedPointCoords = std::variant<SkCoords, Skm1Coords>;

// Pattern embedding and its inverse. unembed matches the fully symmetric
// template first (larger isotropy), then the last-neuron template; entries
// must agree with the pattern to tolerance 1e-10.
Matd embed(const FixedPointCoords& coords, Index k);
FixedPointCoords unembed(const Matd& W);  // PatternMismatch if neither fits

// Truncated power series (all published coefficients) for the family at
// width k, embedded into M(k,k). GlobalMin returns the identity.
FixedPointCoords series_coords(FamilyId family, Index k);
Matd series_initialize(FamilyId family, Index k);

struct NewtonReport {
  Matd W;
  int iterations = 0;
  double grad_norm = 0;  // Frobenius norm of the full loss gradient at W
};

// Damped Newton on the pattern coordinates of W0. Stops once the full
// gradient norm drops to tol; backtracking halves the step until the
// squared gradient norm decreases sufficiently.
NewtonReport newton_refine_report(const Matd& W0, const Matd& V, double tol,
                                  int max_iterations = 100);
Matd newton_refine(const Matd& W0, const Matd& V, double tol, int max_iterations = 100);

enum class IsotropyLabel { DeltaSk, DeltaSkm1, Trivial, Other };
const char* isotropy_name(IsotropyLabel label);

// Largest matching symmetry template of a square W: the fully symmetric
// pattern, the last-neuron pattern up to relabeling of the special neuron,
// any single diagonal transposition (Other), or none (Trivial).
IsotropyLabel classify_isotropy(const Matd& W, double tol);

}  // namespace hesssym
