#include "hesssym/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "hesssym/core/hessian.hpp"
#include "hesssym/parallel.hpp"
#include "hesssym/rng.hpp"

namespace hesssym {

Index ClusteredSpectrum::total() const {
  Index n = 0;
  for (const auto& c : clusters) n += c.count;
  return n;
}

std::vector<double> full_spectrum(const Matd& H) {
  if (H.rows() != H.cols())
    throw Error(ErrorCode::NotSymmetric, "matrix is not square");
  const double asym = (H - H.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10)
    throw Error(ErrorCode::NotSymmetric,
                "max asymmetry " + std::to_string(asym) + " exceeds 1e-10");
  Eigen::SelfAdjointEigenSolver<Matd> solver(0.5 * (H + H.transpose()),
                                             Eigen::EigenvaluesOnly);
  const Vecd& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

ClusteredSpectrum cluster_eigenvalues(std::vector<double> eigs, double tol_abs, double tol_rel) {
  std::sort(eigs.begin(), eigs.end());
  ClusteredSpectrum out;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= eigs.size(); ++i) {
    const bool flush = i == eigs.size() ||
                       eigs[i] - eigs[i - 1] > tol_abs + tol_rel * std::max(1.0, std::abs(eigs[i]));
    if (!flush) continue;
    double sum = 0;
    for (std::size_t j = begin; j < i; ++j) sum += eigs[j];
    out.clusters.push_back({sum / double(i - begin), Index(i - begin), eigs[i - 1] - eigs[begin]});
    begin = i;
  }
  return out;
}

ComparisonReport compare_spectra(std::vector<double> a, std::vector<double> b, double tol) {
  if (a.size() != b.size())
    throw Error(ErrorCode::LengthMismatch, std::to_string(a.size()) + " vs " +
                                               std::to_string(b.size()) + " eigenvalues");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  ComparisonReport report{true, 0.0, 0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double dev = std::abs(a[i] - b[i]);
    if (dev > report.max_deviation) {
      report.max_deviation = dev;
      report.worst_index = Index(i);
    }
  }
  report.pass = report.max_deviation <= tol;
  return report;
}

DensityHistogram density_histogram(const std::vector<double>& eigs, Index bin_count, double lo,
                                   double hi) {
  if (bin_count < 1)
    throw Error(ErrorCode::EmptyRange, "bin count must be positive");
  if (!(lo < hi))
    throw Error(ErrorCode::EmptyRange, "histogram range is empty");
  DensityHistogram h;
  h.bin_edges.resize(std::size_t(bin_count) + 1);
  for (Index i = 0; i <= bin_count; ++i)
    h.bin_edges[std::size_t(i)] = lo + (hi - lo) * double(i) / double(bin_count);
  h.bin_edges.back() = hi;
  h.counts.assign(std::size_t(bin_count), 0);
  h.normalization = Index(eigs.size());
  for (const double v : eigs) {
    if (v < lo || v > hi) continue;
    Index bin = Index((v - lo) / (hi - lo) * double(bin_count));
    bin = std::min(bin, bin_count - 1);  // hi lands in the closed final bin
    ++h.counts[std::size_t(bin)];
  }
  return h;
}

ClusteredSpectrum perturbed_clustered_spectrum(const Matd& W, const Matd& V, double sigma,
                                               std::uint64_t seed, Index trial, double tol_abs,
                                               double tol_rel) {
  if (sigma < 0) throw Error(ErrorCode::DomainError, "sigma must be nonnegative");
  const Index cols = W.cols();
  Matd Wp = W;
  for (Index i = 0; i < W.rows(); ++i)
    for (Index j = 0; j < cols; ++j)
      Wp(i, j) += sigma * normal_sample(seed, std::uint64_t(trial),
                                        std::uint64_t(i) * std::uint64_t(cols) +
                                            std::uint64_t(j));
  return cluster_eigenvalues(full_spectrum(assemble_hessian(Wp, V)), tol_abs, tol_rel);
}

std::vector<ClusteredSpectrum> perturbation_experiment(const Matd& W, const Matd& V, double sigma,
                                                       std::uint64_t seed, Index trials,
                                                       double tol_abs, double tol_rel) {
  if (sigma < 0) throw Error(ErrorCode::DomainError, "sigma must be nonnegative");
  if (trials < 0) throw Error(ErrorCode::DomainError, "trials must be nonnegative");
  std::vector<ClusteredSpectrum> out(static_cast<std::size_t>(trials));
  parallel_for(std::size_t(trials), [&](std::size_t t) {
    out[t] = perturbed_clustered_spectrum(W, V, sigma, seed, Index(t), tol_abs, tol_rel);
  });
  return out;
}

}  // namespace hesssym
