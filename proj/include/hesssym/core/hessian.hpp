#pragma once

// Closed-form Hessian of the population loss. The Hessian of
//   F(W) = (1/2) sum_{i,j} [ g(w_i, w_j) + g(v_i, v_j) - 2 g(w_i, v_j) ]
// decomposes into k x k blocks of size d x d indexed by neuron pairs:
//
//   H^{pp} = (1/2) I + sum_q h1(w_p, w_q) - sum_q h1(w_p, v_q)
//   H^{pq} = h2(w_p, w_q),  p != q
//
// with the second-derivative kernels (t = angle(w, v), hats are unit vectors,
// n_{w,v} = what - cos t vhat, nbar its normalization, nbar = 0 when
// sin t < normal_cutoff):
//
//   h1(w, v) = (sin t |v| / 2pi |w|) (I - what what' + nbar_{v,w} nbar_{v,w}')
//   h2(w, v) = (1/2pi) ((pi - t) I + nbar_{w,v} vhat' + nbar_{v,w} what')
//
// h1 is the second derivative of g in its first argument, h2 the mixed block;
// both identities hold at every configuration with non-parallel arguments, so
// the assembled matrix is the exact Hessian wherever it is defined, critical
// point or not.

#include <Eigen/Dense>

#include <cmath>

#include "hesssym/core/geometry.hpp"
#include "hesssym/errors.hpp"

namespace hesssym {

// Second derivative of g(w, v) in w. Returns the zero matrix when w and v are
// parallel within the normal cutoff (the prefactor sin t vanishes there).
template <class D1, class D2>
Mat<typename D1::Scalar> h1_term(const Eigen::MatrixBase<D1>& w, const Eigen::MatrixBase<D2>& v) {
  using S = typename D1::Scalar;
  const Index d = w.size();
  if (v.size() != d) raise(ErrorCode::DomainError, "h1_term: size mismatch");
  const S t = pair_angle(w, v);
  const S st = std::sin(t);
  if (st < S(normal_cutoff)) return Mat<S>::Zero(d, d);
  const S nw = w.norm();
  const S nv = v.norm();
  Vec<S> what = detail::as_column(w) / nw;
  Vec<S> n = detail::as_column(v) / nv - std::cos(t) * what;
  n /= n.norm();
  Mat<S> M = Mat<S>::Identity(d, d);
  M -= what * what.transpose();
  M += n * n.transpose();
  M *= st * nv / (S(2) * S(pi_d) * nw);
  return M;
}

// Mixed second derivative block of g(w, v): d^2 g / dv dw. Requires w, v not
// parallel (ParallelRows); satisfies h2(w, v) = h2(v, w)'.
template <class D1, class D2>
Mat<typename D1::Scalar> h2_term(const Eigen::MatrixBase<D1>& w, const Eigen::MatrixBase<D2>& v) {
  using S = typename D1::Scalar;
  const Index d = w.size();
  if (v.size() != d) raise(ErrorCode::DomainError, "h2_term: size mismatch");
  const S t = pair_angle(w, v);
  if (S(1) - std::abs(std::cos(t)) <= S(parallel_tol))
    raise(ErrorCode::ParallelRows, "h2_term: arguments are parallel");
  Vec<S> what = detail::as_column(w) / w.norm();
  Vec<S> vhat = detail::as_column(v) / v.norm();
  const S ct = std::cos(t);
  const S st = std::sin(t);
  Vec<S> n_wv = what - ct * vhat;
  Vec<S> n_vw = vhat - ct * what;
  if (st < S(normal_cutoff)) {
    n_wv.setZero();
    n_vw.setZero();
  } else {
    n_wv /= n_wv.norm();
    n_vw /= n_vw.norm();
  }
  Mat<S> M = (S(pi_d) - t) * Mat<S>::Identity(d, d);
  M += n_wv * vhat.transpose();
  M += n_vw * what.transpose();
  M /= S(2) * S(pi_d);
  return M;
}

// Full Hessian of the population loss at W, as a kd x kd matrix in row-major
// (neuron-major) vectorization. Exactly symmetric by construction: off-diagonal
// blocks are mirrored, diagonal blocks are sums of symmetric rank-one terms,
// and the summation order over q is fixed.
// Requires: no zero rows, no two distinct rows of W parallel.
template <class D1, class D2>
Mat<typename D1::Scalar> assemble_hessian(const Eigen::MatrixBase<D1>& W,
                                          const Eigen::MatrixBase<D2>& V) {
  using S = typename D1::Scalar;
  if (W.rows() != V.rows() || W.cols() != V.cols())
    raise(ErrorCode::DomainError, "assemble_hessian: W and V must have the same shape");
  detail::check_rows_nonzero(W, "assemble_hessian(W)");
  detail::check_rows_nonzero(V, "assemble_hessian(V)");
  detail::check_no_parallel_rows(W, "assemble_hessian");
  const Index k = W.rows();
  const Index d = W.cols();
  const S two_pi = S(2) * S(pi_d);

  Vec<S> wnorm(k), vnorm(k);
  Mat<S> what(k, d), vhat(k, d);
  for (Index p = 0; p < k; ++p) {
    wnorm[p] = W.row(p).norm();
    vnorm[p] = V.row(p).norm();
    what.row(p) = W.row(p) / wnorm[p];
    vhat.row(p) = V.row(p) / vnorm[p];
  }

  Mat<S> H(k * d, k * d);

  // Diagonal blocks.
  Mat<S> D(d, d);
  for (Index p = 0; p < k; ++p) {
    D.setZero();
    S iso = S(0);  // accumulated coefficient of (I - what_p what_p')
    for (Index q = 0; q < k; ++q) {
      if (q == p) continue;  // h1(w, w) = 0
      const S c = std::clamp<S>(what.row(p).dot(what.row(q)), S(-1), S(1));
      const S st = std::sin(std::acos(c));
      if (st < S(normal_cutoff)) continue;
      const S coef = st * wnorm[q] / (two_pi * wnorm[p]);
      Vec<S> n = (what.row(q) - c * what.row(p)).transpose();
      // scale the vector, not the outer product, so D stays bitwise symmetric
      n *= std::sqrt(coef) / n.norm();
      iso += coef;
      D.noalias() += n * n.transpose();
    }
    for (Index q = 0; q < k; ++q) {
      const S c = std::clamp<S>(what.row(p).dot(vhat.row(q)), S(-1), S(1));
      const S st = std::sin(std::acos(c));
      if (st < S(normal_cutoff)) continue;
      const S coef = st * vnorm[q] / (two_pi * wnorm[p]);
      Vec<S> n = (vhat.row(q) - c * what.row(p)).transpose();
      n *= std::sqrt(coef) / n.norm();
      iso -= coef;
      D.noalias() -= n * n.transpose();
    }
    Vec<S> wp = what.row(p).transpose();
    D.noalias() += iso * (Mat<S>::Identity(d, d) - wp * wp.transpose());
    D.diagonal().array() += S(0.5);
    H.block(p * d, p * d, d, d) = D;
  }

  // Off-diagonal blocks, mirrored exactly.
  Mat<S> B(d, d);
  for (Index p = 0; p < k; ++p) {
    for (Index q = p + 1; q < k; ++q) {
      const S c = std::clamp<S>(what.row(p).dot(what.row(q)), S(-1), S(1));
      const S t = std::acos(c);
      const S st = std::sin(t);
      Vec<S> n_pq = (what.row(p) - c * what.row(q)).transpose();
      Vec<S> n_qp = (what.row(q) - c * what.row(p)).transpose();
      if (st < S(normal_cutoff)) {
        n_pq.setZero();
        n_qp.setZero();
      } else {
        n_pq /= n_pq.norm();
        n_qp /= n_qp.norm();
      }
      B.setZero();
      B.noalias() += n_pq * what.row(q);
      B.noalias() += n_qp * what.row(p);
      B.diagonal().array() += S(pi_d) - t;
      B /= two_pi;
      H.block(p * d, q * d, d, d) = B;
      H.block(q * d, p * d, d, d) = B.transpose();
    }
  }
  return H;
}

}  // namespace hesssym
