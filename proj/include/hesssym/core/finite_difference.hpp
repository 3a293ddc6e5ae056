#pragma once

// Central finite-difference oracles for the loss gradient and Hessian. These
// exist to validate the closed forms independently; the verify command and the
// test suite both use them.

#include <Eigen/Dense>

#include "hesssym/core/geometry.hpp"

namespace hesssym {

// Central difference of the loss in each coordinate of W.
inline Matd fd_loss_gradient(const Matd& W, const Matd& V, double h = 1e-5) {
  Matd G(W.rows(), W.cols());
  Matd Wp = W;
  for (Index i = 0; i < W.rows(); ++i) {
    for (Index j = 0; j < W.cols(); ++j) {
      const double w0 = W(i, j);
      Wp(i, j) = w0 + h;
      const double fp = population_loss(Wp, V);
      Wp(i, j) = w0 - h;
      const double fm = population_loss(Wp, V);
      Wp(i, j) = w0;
      G(i, j) = (fp - fm) / (2 * h);
    }
  }
  return G;
}

// Central difference of the analytic gradient, symmetrized; row-major
// vectorization matching assemble_hessian.
inline Matd fd_hessian(const Matd& W, const Matd& V, double h = 1e-5) {
  const Index k = W.rows();
  const Index d = W.cols();
  Matd H(k * d, k * d);
  Matd Wp = W;
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < d; ++j) {
      const double w0 = W(i, j);
      Wp(i, j) = w0 + h;
      const Matd Gp = loss_gradient(Wp, V);
      Wp(i, j) = w0 - h;
      const Matd Gm = loss_gradient(Wp, V);
      Wp(i, j) = w0;
      const Matd col = (Gp - Gm) / (2 * h);
      for (Index p = 0; p < k; ++p)
        for (Index q = 0; q < d; ++q) H(p * d + q, i * d + j) = col(p, q);
    }
  }
  return (H + H.transpose()) / 2;
}

}  // namespace hesssym
