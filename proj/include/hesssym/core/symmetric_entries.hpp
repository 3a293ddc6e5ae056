#pragma once

// Closed-form Hessian entries at weight matrices with the two symmetric
// patterns that occur at the critical points of interest (square case d = k):
//
//   * fully symmetric pattern: W has constant diagonal R and constant
//     off-diagonal S (isotropy: simultaneous permutations of all k neurons
//     and coordinates). Three angles (Theta, alpha, beta) and the row norm
//     tau determine every Hessian entry; each k x k block has at most five
//     distinct values.
//
//   * last-neuron-special pattern: rows 1..k-1 share the five-parameter
//     structure (xi1 on the diagonal, xi2 off-diagonal, xi4 in column k) and
//     row k is (xi3, ..., xi3, xi5) (isotropy: permutations of the first k-1
//     neurons/coordinates). Seven angles plus the two row norms determine
//     every entry; there are 26 distinct entry values.
//
// Each entries_* function returns the distinct values; materialize() expands
// them into the full k^2 x k^2 matrix. The case dispatch mirrors the
// sub-case labels of the per-entry formulas.

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "hesssym/core/geometry.hpp"
#include "hesssym/errors.hpp"

namespace hesssym {

// ---------------------------------------------------------------------------
// Fully symmetric pattern (all k neurons equivalent).

struct SkAngles {
  double Theta;  // angle between two distinct rows of W
  double alpha;  // angle between row i of W and teacher row j != i
  double beta;   // angle between row i of W and teacher row i
  double tau;    // common row norm of W
};

// The k x k matrix with diagonal R and off-diagonal S.
inline Matd sk_pattern_point(double R, double S, Index k) {
  Matd W = Matd::Constant(k, k, S);
  W.diagonal().setConstant(R);
  return W;
}

// Angles of the (R, S) pattern.
inline SkAngles sk_angles(double R, double S, Index k) {
  if (k < 2) raise(ErrorCode::DomainError, "sk_angles: need k >= 2");
  const double tau2 = R * R + double(k - 1) * S * S;
  if (!(tau2 > 0)) raise(ErrorCode::ZeroVector, "sk_angles: zero rows");
  const double tau = std::sqrt(tau2);
  const double cosTheta = std::clamp((2 * R * S + double(k - 2) * S * S) / tau2, -1.0, 1.0);
  SkAngles a;
  a.Theta = std::acos(cosTheta);
  a.alpha = std::acos(std::clamp(S / tau, -1.0, 1.0));
  a.beta = std::acos(std::clamp(R / tau, -1.0, 1.0));
  a.tau = tau;
  return a;
}

struct DeltaSkEntries {
  Index k = 0;
  SkAngles angles{};
  // diagonal block H^{pp}
  double diag_pp = 0;  // entry (p, p)
  double diag_ii = 0;  // entry (i, i), i != p
  double diag_ip = 0;  // entry (i, j), exactly one of i, j equals p
  double diag_ij = 0;  // entry (i, j), i != j, neither equals p
  // off-diagonal block H^{pq}, p != q
  double off_diag_in = 0;   // entry (i, i), i in {p, q}
  double off_diag_out = 0;  // entry (i, i), i not in {p, q}
  double off_cross = 0;     // entry (i, j), {i, j} = {p, q}
  double off_one = 0;       // entry (i, j), i != j, exactly one in {p, q}
  double off_none = 0;      // entry (i, j), i != j, neither in {p, q}
};

// Distinct Hessian entries of the (Theta, alpha, beta, tau) pattern, k >= 4.
inline DeltaSkEntries entries_deltaSk(double Theta, double alpha, double beta, double tau,
                                      Index k) {
  if (k < 4) raise(ErrorCode::UnsupportedK, "entries_deltaSk: need k >= 4");
  if (!(beta >= 0.0) || beta >= pi_d)
    raise(ErrorCode::DomainError, "entries_deltaSk: beta must lie in [0, pi)");
  const double sT = std::sin(Theta), cT = std::cos(Theta);
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const double sb = std::sin(beta), cb = std::cos(beta);
  if (!(sT > 1e-12) || !(sa > 1e-12))
    raise(ErrorCode::DomainError, "entries_deltaSk: sin(Theta) and sin(alpha) must be nonzero");
  if (!(tau > 0)) raise(ErrorCode::DomainError, "entries_deltaSk: tau must be positive");
  const double cot_a = ca / sa;
  const double km1 = double(k - 1), km2 = double(k - 2), km3 = double(k - 3);
  const double pi = pi_d;

  DeltaSkEntries e;
  e.k = k;
  e.angles = {Theta, alpha, beta, tau};

  e.diag_pp = 0.5 + km1 * sb * sb / (2 * pi) * (sT - sa / tau) - sb * sb * sb / (pi * tau) +
              km1 / (2 * pi) *
                  ((ca - cT * cb) * (ca - cT * cb) / sT - cot_a * ca * cb * cb / tau);

  e.diag_ii = 0.5 + km2 * sa * sa / (2 * pi) * (sT - sa / tau) +
              sa * sa / pi * (sT / 2 - sa / tau) +
              km2 / (2 * pi) * (ca * ca * (1 - cT) * (1 - cT) / sT - cot_a * ca * ca * ca / tau) +
              (cb - cT * ca) * (cb - cT * ca) / (2 * pi * sT) -
              sb / (2 * pi * tau) * (sa * sa + cb * cb / km1);

  e.diag_ip = -km1 * ca * cb / (2 * pi) * (sT - sa / tau) +
              km2 * ca / (2 * pi) * ((ca - cT * (ca + cb) + cT * cT * cb) / sT) -
              km2 / (2 * pi * tau) * sa * ca * cb * cot_a * cot_a +
              sa * ca * cb / (2 * pi * tau) +
              (ca * cb - cT * (ca * ca + cb * cb) + cT * cT * ca * cb) / (2 * pi * sT) +
              ca * sb * cb / (pi * tau);

  e.diag_ij = -km1 * ca * ca / (2 * pi) * (sT - sa / tau) +
              km3 * ca * ca / (2 * pi) * ((1 - cT) * (1 - cT) / sT - sa * cot_a * cot_a / tau) +
              ca / pi * ((cb - cT * (cb + ca) + cT * cT * ca) / sT + sa * ca / tau) +
              sb / (2 * pi * tau) * (ca * ca - cb * cb / km1);

  e.off_diag_in = (pi - Theta) / (2 * pi) +
                  (2 * ca * cb - cT * (ca * ca + cb * cb)) / (2 * pi * sT);
  e.off_diag_out = (pi - Theta) / (2 * pi) + ca * ca * (1 - cT) / (pi * sT);
  e.off_cross = (ca * ca + cb * cb - 2 * cT * ca * cb) / (2 * pi * sT);
  e.off_one = ca * (ca + cb) * (1 - cT) / (2 * pi * sT);
  e.off_none = ca * ca * (1 - cT) / (pi * sT);
  return e;
}

inline DeltaSkEntries entries_deltaSk(const SkAngles& a, Index k) {
  return entries_deltaSk(a.Theta, a.alpha, a.beta, a.tau, k);
}

// Expand the distinct entries into the full k^2 x k^2 Hessian.
inline Matd materialize(const DeltaSkEntries& e) {
  const Index k = e.k;
  Matd H(k * k, k * k);
  for (Index p = 0; p < k; ++p) {
    for (Index q = 0; q < k; ++q) {
      for (Index i = 0; i < k; ++i) {
        for (Index j = 0; j < k; ++j) {
          double v;
          if (p == q) {
            if (i == j)
              v = (i == p) ? e.diag_pp : e.diag_ii;
            else if (i == p || j == p)
              v = e.diag_ip;
            else
              v = e.diag_ij;
          } else {
            const bool iin = (i == p || i == q), jin = (j == p || j == q);
            if (i == j)
              v = iin ? e.off_diag_in : e.off_diag_out;
            else if (iin && jin)
              v = e.off_cross;
            else if (iin || jin)
              v = e.off_one;
            else
              v = e.off_none;
          }
          H(p * k + i, q * k + j) = v;
        }
      }
    }
  }
  return H;
}

// ---------------------------------------------------------------------------
// Case combinators for the fully symmetric pattern. These give an independent
// route to the same entries through the intermediate quantities
//   A^p_{ij} = w^p_i w^p_j / tau^2,
//   A^{pq}, B^{pq} (symmetrized products), and K^{pq} (normal corrections),
// and are exercised by the tests as a cross-check of the closed forms.

struct BlockEntryTerms {
  double A;    // A^p_{ij}
  double Apq;  // A^{pq}_{ij}
  double B;    // B^{pq}_{ij}
  double KA;   // K^{pq}_{ij} A^p_{ij}; NaN for the excluded entry (q, q)
};

inline BlockEntryTerms sk_block_terms(Index p, Index q, Index i, Index j, const SkAngles& a,
                                      Index k) {
  const double ca = std::cos(a.alpha), cb = std::cos(a.beta), sa = std::sin(a.alpha);
  const double cot_a = ca / sa;
  BlockEntryTerms t{};
  if (i == j && i == p)
    t.A = cb * cb;
  else if (i == p || j == p)
    t.A = ca * cb;
  else
    t.A = ca * ca;

  const bool iin = (i == p || i == q), jin = (j == p || j == q);
  if (i == j && iin) {
    t.Apq = ca * ca + cb * cb;
    t.B = 2 * ca * cb;
  } else if (i != j && iin && jin) {
    t.Apq = 2 * ca * cb;
    t.B = ca * ca + cb * cb;
  } else if (iin || jin) {
    t.Apq = ca * cb + ca * ca;
    t.B = ca * cb + ca * ca;
  } else {
    t.Apq = 2 * ca * ca;
    t.B = 2 * ca * ca;
  }

  if (p != q) {
    if (i == q && j == q) {
      t.KA = std::numeric_limits<double>::quiet_NaN();
    } else if (i == j && i == p) {
      t.KA = cb * cb * cot_a * cot_a;
    } else if (i != j && iin && jin) {
      t.KA = -ca * cb;
    } else if ((i == p || j == p) && i != q && j != q) {
      t.KA = ca * cb * cot_a * cot_a;
    } else if ((i == q || j == q) && i != p && j != p) {
      t.KA = -ca * ca;
    } else {
      t.KA = ca * ca * cot_a * cot_a;
    }
  } else {
    if (i == q && j == q) {
      t.KA = std::numeric_limits<double>::quiet_NaN();
    } else if (i == q || j == q) {
      t.KA = -ca * cb;
    } else {
      t.KA = cb * cb / double(k - 1);
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Last-neuron-special pattern.

struct SevenAngles {
  double Theta;   // between two distinct rows i, j < k
  double Lambda;  // between row i < k and row k
  double a_ii;    // row i < k vs teacher row i
  double a_ij;    // row i < k vs teacher row j != i, j < k
  double a_ik;    // row i < k vs teacher row k
  double a_kk;    // row k vs teacher row k
  double a_kj;    // row k vs teacher row j < k
  double tau;     // common norm of rows < k
  double tau_k;   // norm of row k
};

// The k x k matrix whose regular neurons (rows i < k) are
// (xi2 .. xi1 .. xi2, xi3) (xi1 in column i, xi3 in the last column) and
// whose special neuron (row k) is (xi4, ..., xi4, xi5). xi3 is the last
// coordinate of every regular neuron; xi4 the regular coordinates of the
// special neuron.
inline Matd skm1_pattern_point(double xi1, double xi2, double xi3, double xi4, double xi5,
                               Index k) {
  Matd W = Matd::Constant(k, k, xi2);
  W.diagonal().setConstant(xi1);
  W.col(k - 1).setConstant(xi3);
  W.row(k - 1).setConstant(xi4);
  W(k - 1, k - 1) = xi5;
  return W;
}

inline SevenAngles skm1_angles(double xi1, double xi2, double xi3, double xi4, double xi5,
                               Index k) {
  if (k < 3) raise(ErrorCode::DomainError, "skm1_angles: need k >= 3");
  const double tau2 = xi1 * xi1 + double(k - 2) * xi2 * xi2 + xi3 * xi3;
  const double tauk2 = double(k - 1) * xi4 * xi4 + xi5 * xi5;
  if (!(tau2 > 0) || !(tauk2 > 0)) raise(ErrorCode::ZeroVector, "skm1_angles: zero rows");
  SevenAngles a;
  a.tau = std::sqrt(tau2);
  a.tau_k = std::sqrt(tauk2);
  const double ip_theta = 2 * xi1 * xi2 + double(k - 3) * xi2 * xi2 + xi3 * xi3;
  const double ip_lambda = xi1 * xi4 + double(k - 2) * xi2 * xi4 + xi3 * xi5;
  a.Theta = std::acos(std::clamp(ip_theta / tau2, -1.0, 1.0));
  a.Lambda = std::acos(std::clamp(ip_lambda / (a.tau * a.tau_k), -1.0, 1.0));
  a.a_ii = std::acos(std::clamp(xi1 / a.tau, -1.0, 1.0));
  a.a_ij = std::acos(std::clamp(xi2 / a.tau, -1.0, 1.0));
  a.a_ik = std::acos(std::clamp(xi3 / a.tau, -1.0, 1.0));
  a.a_kk = std::acos(std::clamp(xi5 / a.tau_k, -1.0, 1.0));
  a.a_kj = std::acos(std::clamp(xi4 / a.tau_k, -1.0, 1.0));
  return a;
}

struct DeltaSkm1Entries {
  Index k = 0;
  SevenAngles angles{};
  // off-diagonal blocks, p != q, both p, q < k:
  double offA_a = 0;  // (i,i), i not in {p,q}, i < k
  double offA_b = 0;  // (i,i), i in {p,q}
  double offA_c = 0;  // (k,k)
  double offC_a = 0;  // (i,j), i != j, both < k, neither in {p,q}
  double offC_b = 0;  // (i,j), i != j, both < k, exactly one in {p,q}
  double offC_c = 0;  // (i,j), {i,j} = {p,q}
  double offC_d = 0;  // (i,j), one of i,j is k, the other in {p,q}
  double offC_e = 0;  // (i,j), one of i,j is k, the other not in {p,q}
  // off-diagonal blocks, p or q equal to k (the other, m, < k):
  double offB_a = 0;  // (i,i), i = m
  double offB_b = 0;  // (i,i), i < k, i != m
  double offB_c = 0;  // (k,k)
  double offD_a = 0;  // (i,j), i != j, both < k, neither = m
  double offD_b = 0;  // (i,j), i != j, both < k, one = m
  double offD_c = 0;  // (i,j), {i,j} = {m,k}
  double offD_d = 0;  // (i,j), one of i,j is k, the other not in {m,k}
  // diagonal blocks H^{pp}, p < k:
  double diagA_a = 0;  // (i,i), i not in {p,k}
  double diagA_b = 0;  // (p,p)
  double diagA_c = 0;  // (k,k)
  double diagB_a = 0;  // (i,j), i != j, both < k, neither = p
  double diagB_b = 0;  // (i,j), i != j, both < k, one = p
  double diagB_c = 0;  // (i,j), one of i,j is k, the other != p
  double diagB_d = 0;  // (i,j), {i,j} = {p,k}
  // diagonal block H^{kk}:
  double diagA_d = 0;  // (i,i), i < k
  double diagA_e = 0;  // (k,k)
  double diagB_e = 0;  // (i,j), i != j, both < k
  double diagB_f = 0;  // (i,j), one of i,j is k
};

// Distinct Hessian entries of the last-neuron-special pattern, k >= 5.
inline DeltaSkm1Entries entries_deltaSkm1(const SevenAngles& a, Index k) {
  if (k < 5) raise(ErrorCode::UnsupportedK, "entries_deltaSkm1: need k >= 5");
  const double sT = std::sin(a.Theta), cT = std::cos(a.Theta);
  const double sL = std::sin(a.Lambda), cL = std::cos(a.Lambda);
  const double cii = std::cos(a.a_ii), sii = std::sin(a.a_ii);
  const double cij = std::cos(a.a_ij), sij = std::sin(a.a_ij);
  const double cik = std::cos(a.a_ik), sik = std::sin(a.a_ik);
  const double ckk = std::cos(a.a_kk), skk = std::sin(a.a_kk);
  const double ckj = std::cos(a.a_kj), skj = std::sin(a.a_kj);
  const double tau = a.tau, tau_k = a.tau_k;
  if (!(sT > 1e-12) || !(sL > 1e-12) || !(sij > 1e-12) || !(sik > 1e-12) || !(skj > 1e-12))
    raise(ErrorCode::DomainError, "entries_deltaSkm1: degenerate angles");
  if (!(tau > 0) || !(tau_k > 0)) raise(ErrorCode::DomainError, "entries_deltaSkm1: bad norms");
  const double ctij = cij / sij, ctik = cik / sik, ctkj = ckj / skj;
  const double km1 = double(k - 1), km2 = double(k - 2), km3 = double(k - 3),
               km4 = double(k - 4);
  const double pi = pi_d;
  // shared denominator of the K-corrections for rows < k
  const double kden = km2 * cij * cij + cik * cik;
  if (!(kden > 0)) raise(ErrorCode::DomainError, "entries_deltaSkm1: degenerate K denominator");

  DeltaSkm1Entries e;
  e.k = k;
  e.angles = a;

  // --- off-diagonal blocks, p, q < k -------------------------------------
  e.offA_a = (pi - a.Theta) / (2 * pi) + cij * cij * (1 - cT) / (pi * sT);
  e.offA_b = (pi - a.Theta) / (2 * pi) +
             (2 * cii * cij - (cii * cii + cij * cij) * cT) / (2 * pi * sT);
  e.offA_c = (pi - a.Theta) / (2 * pi) + cik * cik * (1 - cT) / (pi * sT);
  e.offC_a = cij * cij * (1 - cT) / (pi * sT);
  e.offC_b = (cij * cii + cij * cij) * (1 - cT) / (2 * pi * sT);
  e.offC_c = (cii * cii + cij * cij - 2 * cT * cii * cij) / (2 * pi * sT);
  e.offC_d = cik * (cii + cij) * (1 - cT) / (2 * pi * sT);
  e.offC_e = cik * cij * (1 - cT) / (pi * sT);

  // --- off-diagonal blocks, p or q = k ------------------------------------
  e.offB_a = (pi - a.Lambda) / (2 * pi) +
             (2 * cii * ckj - (cii * cii + ckj * ckj) * cL) / (2 * pi * sL);
  e.offB_b = (pi - a.Lambda) / (2 * pi) +
             (2 * cij * ckj - (cij * cij + ckj * ckj) * cL) / (2 * pi * sL);
  e.offB_c = (pi - a.Lambda) / (2 * pi) +
             (2 * cik * ckk - (cik * cik + ckk * ckk) * cL) / (2 * pi * sL);
  e.offD_a = (2 * cij * ckj - (cij * cij + ckj * ckj) * cL) / (2 * pi * sL);
  e.offD_b = (ckj * (cij + cii) - cL * (ckj * ckj + cij * cii)) / (2 * pi * sL);
  e.offD_c = (ckk * cii + ckj * cik - cL * (ckk * ckj + cik * cii)) / (2 * pi * sL);
  e.offD_d = (ckk * cij + cik * ckj - cL * (ckk * ckj + cik * cij)) / (2 * pi * sL);

  // --- diagonal blocks H^{pp}, p < k --------------------------------------
  e.diagA_a = 0.5 + km2 * sij * sij / (2 * pi) * (sT - sij / tau) +
              km3 / (2 * pi) *
                  (cij * cij * (1 - cT) * (1 - cT) / sT - sij * ctij * ctij * cij * cij / tau) +
              (cii - cT * cij) * (cii - cT * cij) / (2 * pi * sT) -
              sij * sij * sij / (2 * pi * tau) +
              sij * sij * (tau_k * sL - sik) / (2 * pi * tau) -
              sik * ctik * ctik * cij * cij / (2 * pi * tau) +
              tau_k / (2 * pi * tau * sL) * (ckj - cL * cij) * (ckj - cL * cij) -
              sii / (2 * pi * tau) * (sij * sij + cii * cii * cij * cij / kden);

  e.diagA_b = 0.5 + km2 * sii * sii / (2 * pi) * (sT - sij / tau) +
              km2 / (2 * pi) *
                  ((cij - cT * cii) * (cij - cT * cii) / sT - sij * cii * cii * ctij * ctij / tau) +
              sii * sii / (2 * pi * tau) * (tau_k * sL - sik) - sii * sii * sii / (pi * tau) +
              tau_k / (2 * pi * tau * sL) * (ckj - cL * cii) * (ckj - cL * cii) -
              sik * ctik * ctik * cii * cii / (2 * pi * tau);

  e.diagA_c = 0.5 + km2 * sik * sik / (2 * pi) * (sT - sij / tau) +
              km2 * cik * cik / (2 * pi) * ((1 - cT) * (1 - cT) / sT - sij * ctij * ctij / tau) +
              sik * sik / (2 * pi * tau) * (tau_k * sL - sii) - sik * sik * sik / (pi * tau) +
              tau_k / (2 * pi * tau * sL) * (ckk - cL * cik) * (ckk - cL * cik) -
              sii / (2 * pi * tau) * (cii * cii * cik * cik / kden);

  e.diagA_d = 0.5 + km1 * skj * skj / (2 * pi * tau_k) * (tau * sL - skj) +
              km2 / (2 * pi * tau_k) *
                  (tau * (cij - cL * ckj) * (cij - cL * ckj) / sL - skj * ckj * ckj * ctkj * ctkj) -
              skj * skj * skj / (2 * pi * tau_k) -
              skk / (2 * pi * tau_k) * (skj * skj + ckk * ckk / km1) +
              tau / (2 * pi * tau_k * sL) * (cii - cL * ckj) * (cii - cL * ckj);

  e.diagA_e = 0.5 + km1 * skk * skk / (2 * pi * tau_k) * (tau * sL - skj) +
              km1 / (2 * pi * tau_k) *
                  (tau * (cik - cL * ckk) * (cik - cL * ckk) / sL - ctkj * ctkj * ckk * ckk * skj) -
              skk * skk * skk / (pi * tau_k);

  e.diagB_a = km2 * cij * cij / (2 * pi) * (sij / tau - sT) +
              km4 * cij * cij / (2 * pi * sT) * (1 - cT) * (1 - cT) -
              km4 * sij * cij * cij * ctij * ctij / (2 * pi * tau) + sij * cij * cij / (pi * tau) +
              cij / (pi * sT) * (cii - cT * (cii + cij) + cT * cT * cij) +
              cij * cij / (2 * pi * tau) * (sik - tau_k * sL) +
              tau_k / (2 * pi * tau * sL) * (ckj - cL * cij) * (ckj - cL * cij) -
              sik / (2 * pi * tau) * ctik * ctik * cij * cij +
              sii / (2 * pi * tau) * (cij * cij - cii * cii * cij * cij / kden);

  e.diagB_b = km2 * cij * cii / (2 * pi) * (sij / tau - sT) +
              km3 * cij / (2 * pi * sT) * (cij - cT * (cii + cij) + cT * cT * cii) -
              km3 * sij * cij * cii * ctij * ctij / (2 * pi * tau) +
              (cii * cij - cT * (cii * cii + cij * cij) + cT * cT * cii * cij) / (2 * pi * sT) +
              sij * cij * cii / (2 * pi * tau) + cij * cii / (2 * pi * tau) * (sik - tau_k * sL) -
              sik / (2 * pi * tau) * cii * cij * ctik * ctik +
              tau_k / (2 * pi * tau * sL) *
                  (ckj * ckj - cL * (ckj * (cij + cii)) + cL * cL * cii * cij) +
              sii / (pi * tau) * cii * cij;

  e.diagB_c = km2 * cij * cik / (2 * pi) * (sij / tau - sT) +
              km3 * cij * cik / (2 * pi * sT) * (1 - cT) * (1 - cT) -
              km3 * sij * cij * cik * ctij * ctij / (2 * pi * tau) +
              cik * (cii - cT * (cii + cij) + cT * cT * cij) / (2 * pi * sT) +
              sij * cij * cik / (2 * pi * tau) + cij * cik / (2 * pi * tau) * (sik - tau_k * sL) +
              tau_k * (ckk * ckj - cL * (ckk * cij + cik * ckj) + cL * cL * cij * cik) /
                  (2 * pi * tau * sL) +
              sik * cik * cij / (2 * pi * tau) +
              sii / (2 * pi * tau) * (cij * cik - cii * cii * cij * cik / kden);

  e.diagB_d = km2 * cii * cik / (2 * pi) * (sij / tau - sT) +
              km2 * cik / (2 * pi * sT) * (cij - cT * (cii + cij) + cT * cT * cii) -
              km2 * sij * cii * cik * ctij * ctij / (2 * pi * tau) +
              cii * cik / (2 * pi * tau) * (sik - tau_k * sL) +
              tau_k * (ckk * ckj - cL * (cii * ckk + cik * ckj) + cL * cL * cii * cik) /
                  (2 * pi * tau * sL) +
              sik * cii * cik / (2 * pi * tau) + sii * cii * cik / (pi * tau);

  e.diagB_e = km1 * ckj * ckj / (2 * pi * tau_k) * (skj - tau * sL) +
              km3 * tau / (2 * pi * tau_k * sL) * (cij - cL * ckj) * (cij - cL * ckj) -
              km3 * skj * ctkj * ctkj * ckj * ckj / (2 * pi * tau_k) +
              skj * ckj * ckj / (pi * tau_k) +
              tau / (pi * tau_k * sL) *
                  (cii * cij - cL * ckj * (cii + cij) + cL * cL * ckj * ckj) +
              skk / (2 * pi * tau_k) * (ckj * ckj - ckk * ckk / km1);

  e.diagB_f = km1 * ckk * ckj / (2 * pi * tau_k) * (skj - tau * sL) -
              km2 * skj / (2 * pi * tau_k) * ctkj * ctkj * ckk * ckj +
              km2 * tau * (cij * cik - cL * (ckk * cij + cik * ckj) + cL * cL * ckk * ckj) /
                  (2 * pi * tau_k * sL) +
              skj / (2 * pi * tau_k) * ckk * ckj + skk / (pi * tau_k) * ckk * ckj +
              tau * (cii * cik - cL * (ckk * cii + cik * ckj) + cL * cL * ckk * ckj) /
                  (2 * pi * tau_k * sL);

  return e;
}

// Expand the distinct entries into the full k^2 x k^2 Hessian. Index k-1 is
// the special neuron/coordinate.
inline Matd materialize(const DeltaSkm1Entries& e) {
  const Index k = e.k;
  const Index sp = k - 1;
  Matd H(k * k, k * k);
  for (Index p = 0; p < k; ++p) {
    for (Index q = 0; q < k; ++q) {
      for (Index i = 0; i < k; ++i) {
        for (Index j = 0; j < k; ++j) {
          double v;
          if (p == q) {
            if (p != sp) {
              if (i == j)
                v = (i == p) ? e.diagA_b : (i == sp ? e.diagA_c : e.diagA_a);
              else if (i != sp && j != sp)
                v = (i == p || j == p) ? e.diagB_b : e.diagB_a;
              else {
                const Index other = (i == sp) ? j : i;
                v = (other == p) ? e.diagB_d : e.diagB_c;
              }
            } else {
              if (i == j)
                v = (i == sp) ? e.diagA_e : e.diagA_d;
              else
                v = (i == sp || j == sp) ? e.diagB_f : e.diagB_e;
            }
          } else if (p != sp && q != sp) {
            const bool iin = (i == p || i == q), jin = (j == p || j == q);
            if (i == j)
              v = (i == sp) ? e.offA_c : (iin ? e.offA_b : e.offA_a);
            else if (i != sp && j != sp) {
              if (iin && jin)
                v = e.offC_c;
              else if (iin || jin)
                v = e.offC_b;
              else
                v = e.offC_a;
            } else {
              const Index other = (i == sp) ? j : i;
              v = (other == p || other == q) ? e.offC_d : e.offC_e;
            }
          } else {
            // p or q is the special neuron; m is the other one
            const Index m = (p == sp) ? q : p;
            if (i == j)
              v = (i == sp) ? e.offB_c : (i == m ? e.offB_a : e.offB_b);
            else if (i != sp && j != sp)
              v = (i == m || j == m) ? e.offD_b : e.offD_a;
            else {
              const Index other = (i == sp) ? j : i;
              v = (other == m) ? e.offD_c : e.offD_d;
            }
          }
          H(p * k + i, q * k + j) = v;
        }
      }
    }
  }
  return H;
}

}  // namespace hesssym
