#pragma once

// Brute-force spectral tools: dense symmetric eigensolver, single-linkage
// eigenvalue clustering, multiset spectrum comparison, density histograms,
// and the seeded perturbation experiment around a refined minimum.

#include <cstdint>
#include <vector>

#include "hesssym/core/geometry.hpp"
#include "hesssym/errors.hpp"

namespace hesssym {

struct Cluster {
  double center;  // mean of the member eigenvalues
  Index count;
  double spread;  // max - min of the member eigenvalues
};

// Invariants: clusters sorted by center, counts sum to the input length,
// every spread bounded by the clustering tolerance times the cluster width
// budget (count - 1 gaps).
struct ClusteredSpectrum {
  std::vector<Cluster> clusters;
  Index total() const;
};

struct DensityHistogram {
  std::vector<double> bin_edges;  // bin_count + 1 increasing edges
  std::vector<Index> counts;      // values outside the range are dropped
  Index normalization;            // total input count, for fractions
};

struct ComparisonReport {
  bool pass;
  double max_deviation;
  Index worst_index;  // position in the ascending order, 0 for empty input
};

// All eigenvalues of the dense symmetric matrix, ascending.
// Throws NotSymmetric when max |H - H'| exceeds 1e-10.
std::vector<double> full_spectrum(const Matd& H);

// Single-linkage clustering of a sorted list: a value joins the current
// cluster when its gap to the previous value is at most
// tol_abs + tol_rel * max(1, |value|). Input is sorted defensively.
ClusteredSpectrum cluster_eigenvalues(std::vector<double> eigs, double tol_abs = 1e-9,
                                      double tol_rel = 1e-7);

// Sorts both lists and reports the largest elementwise deviation.
// Throws LengthMismatch when the lengths differ.
ComparisonReport compare_spectra(std::vector<double> a, std::vector<double> b, double tol);

// Counting histogram over [lo, hi) with bin_count equal bins; the final bin
// is closed so hi itself is counted. Throws EmptyRange when hi <= lo or
// bin_count < 1.
DensityHistogram density_histogram(const std::vector<double>& eigs, Index bin_count, double lo,
                                   double hi);

// One perturbation trial: perturbs every entry of W by sigma * N(0,1) drawn
// from a counter-based generator keyed (seed, trial, entry), assembles the
// exact Hessian at the perturbed point, and clusters its spectrum. Throws
// ParallelRows for perturbations extreme enough to align rows.
ClusteredSpectrum perturbed_clustered_spectrum(const Matd& W, const Matd& V, double sigma,
                                               std::uint64_t seed, Index trial,
                                               double tol_abs = 1e-4, double tol_rel = 1e-7);

// Trials 0..trials-1 of the above, run concurrently; results are indexed by
// trial so output is order-independent. Propagates the first trial error.
std::vector<ClusteredSpectrum> perturbation_experiment(const Matd& W, const Matd& V, double sigma,
                                                       std::uint64_t seed, Index trials,
                                                       double tol_abs = 1e-4,
                                                       double tol_rel = 1e-7);

}  // namespace hesssym
