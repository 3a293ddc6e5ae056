#pragma once

// Geometry of the arc-cosine kernel and the Gaussian two-layer ReLU
// student-teacher population loss.
//
// Conventions used throughout the library:
//   * rows of W and V are neurons (k neurons in R^d, d >= k),
//   * the teacher V is the k x k identity padded with d - k zero columns,
//   * matrices of weights are vectorized row by row (neuron-major),
//   * all angles are in [0, pi]; cosines are clamped before acos.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "hesssym/errors.hpp"

namespace hesssym {

inline constexpr double pi_d = 3.14159265358979323846264338327950288;

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matd = Mat<double>;
using Vecd = Vec<double>;
using Eigen::Index;

// Two rows count as parallel when 1 - |cos angle| falls at or below this.
inline constexpr double parallel_tol = 1e-12;
// Below this sine the unit normal component n-bar is taken to be zero.
inline constexpr double normal_cutoff = 1e-9;

// Angle between two nonzero vectors, clamped cosine. Throws ZeroVector.
template <class D1, class D2>
typename D1::Scalar pair_angle(const Eigen::MatrixBase<D1>& u, const Eigen::MatrixBase<D2>& v) {
  using S = typename D1::Scalar;
  const S nu = u.norm();
  const S nv = v.norm();
  if (!(nu > S(0)) || !(nv > S(0))) raise(ErrorCode::ZeroVector, "pair_angle: zero input vector");
  const S c = std::clamp<S>(u.dot(v) / (nu * nv), S(-1), S(1));
  return std::acos(c);
}

// Arc-cosine kernel g(u, v) = (|u||v| / 2pi) (sin t + (pi - t) cos t) with
// t the angle between u and v. Equals E[relu(<u,x>) relu(<v,x>)] for
// x ~ N(0, I).
template <class D1, class D2>
typename D1::Scalar relu_kernel(const Eigen::MatrixBase<D1>& u, const Eigen::MatrixBase<D2>& v) {
  using S = typename D1::Scalar;
  const S t = pair_angle(u, v);
  return (u.norm() * v.norm() / (S(2) * S(pi_d))) *
         (std::sin(t) + (S(pi_d) - t) * std::cos(t));
}

namespace detail {

// Copy any vector expression (row or column) into a column vector.
template <class D>
Vec<typename D::Scalar> as_column(const Eigen::MatrixBase<D>& v) {
  if (v.rows() != 1 && v.cols() != 1) raise(ErrorCode::DomainError, "expected a vector");
  Vec<typename D::Scalar> out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[i] = (v.rows() == 1) ? v(0, i) : v(i, 0);
  return out;
}

template <class D>
void check_rows_nonzero(const Eigen::MatrixBase<D>& M, const char* who) {
  for (Index i = 0; i < M.rows(); ++i) {
    if (!(M.row(i).norm() > 0))
      raise(ErrorCode::ZeroVector, std::string(who) + ": row " + std::to_string(i) + " is zero");
  }
}

template <class D>
void check_no_parallel_rows(const Eigen::MatrixBase<D>& M, const char* who) {
  using S = typename D::Scalar;
  for (Index p = 0; p < M.rows(); ++p) {
    const S np = M.row(p).norm();
    for (Index q = p + 1; q < M.rows(); ++q) {
      const S c = std::abs(M.row(p).dot(M.row(q))) / (np * M.row(q).norm());
      if (S(1) - c <= S(parallel_tol))
        raise(ErrorCode::ParallelRows, std::string(who) + ": rows " + std::to_string(p) + " and " +
                                           std::to_string(q) + " are parallel");
    }
  }
}

}  // namespace detail

// Population loss F(W) = (1/2) E[(1' relu(Wx) - 1' relu(Vx))^2], x ~ N(0, I_d),
// expressed through the kernel:
//   F = (1/2) sum_{i,j} [ g(w_i, w_j) + g(v_i, v_j) - 2 g(w_i, v_j) ].
template <class D1, class D2>
typename D1::Scalar population_loss(const Eigen::MatrixBase<D1>& W, const Eigen::MatrixBase<D2>& V) {
  using S = typename D1::Scalar;
  if (W.rows() != V.rows() || W.cols() != V.cols())
    raise(ErrorCode::DomainError, "population_loss: W and V must have the same shape");
  detail::check_rows_nonzero(W, "population_loss(W)");
  detail::check_rows_nonzero(V, "population_loss(V)");
  const Index k = W.rows();
  S acc = S(0);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      acc += relu_kernel(W.row(i), W.row(j));
      acc += relu_kernel(V.row(i), V.row(j));
      acc -= S(2) * relu_kernel(W.row(i), V.row(j));
    }
  }
  return acc / S(2);
}

namespace detail {

// d/dw g(w, v) = (1/2pi) ( |v| sin t * w/|w| + (pi - t) v ). Continuous in w,
// including across parallel configurations (sin t -> 0 there).
template <class S, class D1, class D2>
Vec<S> kernel_grad_first(const Eigen::MatrixBase<D1>& w, const Eigen::MatrixBase<D2>& v) {
  const S t = pair_angle(w, v);
  const S nw = w.norm();
  const S nv = v.norm();
  Vec<S> g = (nv * std::sin(t) / nw) * as_column(w);
  g += (S(pi_d) - t) * as_column(v);
  return g / (S(2) * S(pi_d));
}

}  // namespace detail

// Gradient of the population loss with respect to W, same shape as W.
// Row p equals sum_q d1 g(w_p, w_q) - sum_q d1 g(w_p, v_q).
// Requires: no two distinct rows of W parallel (ParallelRows), no zero rows.
template <class D1, class D2>
Mat<typename D1::Scalar> loss_gradient(const Eigen::MatrixBase<D1>& W,
                                       const Eigen::MatrixBase<D2>& V) {
  using S = typename D1::Scalar;
  if (W.rows() != V.rows() || W.cols() != V.cols())
    raise(ErrorCode::DomainError, "loss_gradient: W and V must have the same shape");
  detail::check_rows_nonzero(W, "loss_gradient(W)");
  detail::check_rows_nonzero(V, "loss_gradient(V)");
  detail::check_no_parallel_rows(W, "loss_gradient");
  const Index k = W.rows();
  const Index d = W.cols();
  Mat<S> G = Mat<S>::Zero(k, d);
  for (Index p = 0; p < k; ++p) {
    Vec<S> row = Vec<S>::Zero(d);
    // paired accumulation so the student and teacher terms cancel exactly
    // when W = V
    for (Index q = 0; q < k; ++q)
      row += detail::kernel_grad_first<S>(W.row(p), W.row(q)) -
             detail::kernel_grad_first<S>(W.row(p), V.row(q));
    G.row(p) = row.transpose();
  }
  return G;
}

// The teacher: identity padded with d - k zero columns.
template <class Scalar = double>
Mat<Scalar> padded_identity(Index k, Index d) {
  if (k < 1 || d < k) raise(ErrorCode::DomainError, "padded_identity: need 1 <= k <= d");
  Mat<Scalar> V = Mat<Scalar>::Zero(k, d);
  V.topLeftCorner(k, k).setIdentity();
  return V;
}

// Zero-pad the columns of W up to width d.
template <class D>
Mat<typename D::Scalar> pad_columns(const Eigen::MatrixBase<D>& W, Index d) {
  if (d < W.cols()) raise(ErrorCode::DomainError, "pad_columns: target width smaller than input");
  Mat<typename D::Scalar> P = Mat<typename D::Scalar>::Zero(W.rows(), d);
  P.leftCols(W.cols()) = W;
  return P;
}

// Row-major (neuron-major) vectorization: entry (i, j) lands at i * cols + j.
template <class D>
Vec<typename D::Scalar> vec_row_major(const Eigen::MatrixBase<D>& M) {
  Vec<typename D::Scalar> v(M.rows() * M.cols());
  for (Index i = 0; i < M.rows(); ++i)
    for (Index j = 0; j < M.cols(); ++j) v(i * M.cols() + j) = M(i, j);
  return v;
}

namespace detail {

inline void check_permutation(const Eigen::VectorXi& perm, Index n, const char* who) {
  if (perm.size() != n) raise(ErrorCode::DomainError, std::string(who) + ": permutation size mismatch");
  std::vector<bool> seen(static_cast<size_t>(n), false);
  for (Index i = 0; i < n; ++i) {
    const int im = perm[i];
    if (im < 0 || im >= n || seen[static_cast<size_t>(im)])
      raise(ErrorCode::DomainError, std::string(who) + ": not a permutation");
    seen[static_cast<size_t>(im)] = true;
  }
}

}  // namespace detail

// Action of a pair of permutations g = (row_perm, col_perm) on weights:
// output(row_perm(i), col_perm(j)) = W(i, j), i.e. rows are relabelled by
// row_perm and coordinates by col_perm. Both maps send old index -> new index.
template <class D>
Mat<typename D::Scalar> apply_symmetry(const Eigen::MatrixBase<D>& W,
                                       const Eigen::VectorXi& row_perm,
                                       const Eigen::VectorXi& col_perm) {
  detail::check_permutation(row_perm, W.rows(), "apply_symmetry(rows)");
  detail::check_permutation(col_perm, W.cols(), "apply_symmetry(cols)");
  Mat<typename D::Scalar> out(W.rows(), W.cols());
  for (Index i = 0; i < W.rows(); ++i)
    for (Index j = 0; j < W.cols(); ++j) out(row_perm[i], col_perm[j]) = W(i, j);
  return out;
}

}  // namespace hesssym
