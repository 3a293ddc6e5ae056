#pragma once

// Extension of the Hessian from the square case d = k to d > k. Padding the
// weights with d - k zero columns block-diagonalizes the Hessian (after
// regrouping coordinates): the original k^2 x k^2 Hessian is joined by d - k
// identical copies of a k x k block M acting on the new coordinates,
//
//   M_ij = (pi - angle(w_i, w_j)) / 2pi                      (i != j)
//   M_ii = 1/2 + (1/2pi) sum_l [ sin angle(w_i, w_l) |w_l| / |w_i|
//                              - sin angle(w_i, v_l) |v_l| / |w_i| ].
//
// The regrouping permutation sends padded coordinate (p, j) to position
// p*k + j for j < k and to k*k + (j - k)*k + p for j >= k.

#include <Eigen/Dense>

#include <cmath>

#include "hesssym/core/geometry.hpp"
#include "hesssym/core/hessian.hpp"
#include "hesssym/errors.hpp"

namespace hesssym {

// The k x k block M acting on each added coordinate. W and V are the square
// (d = k) weights.
template <class D1, class D2>
Mat<typename D1::Scalar> extension_block(const Eigen::MatrixBase<D1>& W,
                                         const Eigen::MatrixBase<D2>& V) {
  using S = typename D1::Scalar;
  if (W.rows() != V.rows() || W.cols() != V.cols())
    raise(ErrorCode::DomainError, "extension_block: W and V must have the same shape");
  detail::check_rows_nonzero(W, "extension_block(W)");
  detail::check_rows_nonzero(V, "extension_block(V)");
  detail::check_no_parallel_rows(W, "extension_block");
  const Index k = W.rows();
  const S two_pi = S(2) * S(pi_d);
  Mat<S> M(k, k);
  for (Index i = 0; i < k; ++i) {
    S diag = S(0.5);
    for (Index l = 0; l < k; ++l) {
      const S tw = pair_angle(W.row(i), W.row(l));
      const S tv = pair_angle(W.row(i), V.row(l));
      diag += (std::sin(tw) * W.row(l).norm() - std::sin(tv) * V.row(l).norm()) /
              (two_pi * W.row(i).norm());
      if (l != i) M(i, l) = (S(pi_d) - tw) / two_pi;
    }
    M(i, i) = diag;
  }
  return M;
}

// Hessian of the padded problem (width d > k), returned in the regrouped
// coordinate order: block-diag(H, M, ..., M) with d - k copies of M.
template <class D1, class D2>
Mat<typename D1::Scalar> extend_d_gt_k(const Eigen::MatrixBase<D1>& W,
                                       const Eigen::MatrixBase<D2>& V, Index d) {
  using S = typename D1::Scalar;
  const Index k = W.rows();
  if (W.cols() != k || V.rows() != k || V.cols() != k)
    raise(ErrorCode::DomainError, "extend_d_gt_k: W and V must be square k x k");
  if (d <= k) raise(ErrorCode::DomainError, "extend_d_gt_k: need d > k");
  Mat<S> H = assemble_hessian(W, V);
  Mat<S> M = extension_block(W, V);
  Mat<S> out = Mat<S>::Zero(k * d, k * d);
  out.topLeftCorner(k * k, k * k) = H;
  for (Index c = 0; c < d - k; ++c) out.block(k * k + c * k, k * k + c * k, k, k) = M;
  return out;
}

// The regrouping permutation as an index map: entry (p, j) of the padded
// gradient sits at position perm[p*d + j] of the regrouped vector.
inline std::vector<Index> extension_permutation(Index k, Index d) {
  if (d <= k) raise(ErrorCode::DomainError, "extension_permutation: need d > k");
  std::vector<Index> perm(static_cast<size_t>(k * d));
  for (Index p = 0; p < k; ++p)
    for (Index j = 0; j < d; ++j)
      perm[static_cast<size_t>(p * d + j)] = (j < k) ? p * k + j : k * k + (j - k) * k + p;
  return perm;
}

}  // namespace hesssym
