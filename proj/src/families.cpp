#include "hesssym/families.hpp"

#include <Eigen/LU>

#include <cmath>

#include "hesssym/core/hessian.hpp"
#include "hesssym/errors.hpp"

namespace hesssym {

namespace {

constexpr double kPatternTol = 1e-10;

// 0/1 basis matrices of the fixed-point space, disjoint supports.
std::vector<Matd> pattern_basis(bool full_sym, Index k) {
  std::vector<Matd> basis;
  if (full_sym) {
    basis.push_back(Matd::Identity(k, k));
    basis.push_back(Matd::Ones(k, k) - Matd::Identity(k, k));
    return basis;
  }
  Matd P1 = Matd::Zero(k, k), P2 = Matd::Zero(k, k), P3 = Matd::Zero(k, k),
       P4 = Matd::Zero(k, k), P5 = Matd::Zero(k, k);
  for (Index i = 0; i + 1 < k; ++i) {
    P1(i, i) = 1;
    P3(i, k - 1) = 1;
    P4(k - 1, i) = 1;
    for (Index j = 0; j + 1 < k; ++j)
      if (i != j) P2(i, j) = 1;
  }
  P5(k - 1, k - 1) = 1;
  basis = {P1, P2, P3, P4, P5};
  return basis;
}

bool matches_sk(const Matd& W, double tol, SkCoords* out = nullptr) {
  const Index k = W.rows();
  const double R = W(0, 0), S = W(0, 1);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      const double ref = (i == j) ? R : S;
      if (std::abs(W(i, j) - ref) > tol) return false;
    }
  }
  if (out) *out = SkCoords{R, S};
  return true;
}

bool matches_skm1(const Matd& W, double tol, Skm1Coords* out = nullptr) {
  const Index k = W.rows();
  if (k < 3) return false;
  const Skm1Coords c{W(0, 0), W(0, 1), W(0, k - 1), W(k - 1, 0), W(k - 1, k - 1)};
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      double ref;
      if (i == k - 1)
        ref = (j == k - 1) ? c.xi5 : c.xi4;
      else if (j == k - 1)
        ref = c.xi3;
      else
        ref = (i == j) ? c.xi1 : c.xi2;
      if (std::abs(W(i, j) - ref) > tol) return false;
    }
  }
  if (out) *out = c;
  return true;
}

FixedPointCoords coords_from_vector(bool full_sym, const Vecd& x) {
  if (full_sym) return SkCoords{x(0), x(1)};
  return Skm1Coords{x(0), x(1), x(2), x(3), x(4)};
}

Vecd coords_to_vector(const FixedPointCoords& coords) {
  if (const auto* sk = std::get_if<SkCoords>(&coords)) {
    Vecd x(2);
    x << sk->R, sk->S;
    return x;
  }
  const auto& c = std::get<Skm1Coords>(coords);
  Vecd x(5);
  x << c.xi1, c.xi2, c.xi3, c.xi4, c.xi5;
  return x;
}

}  // namespace

const char* family_name(FamilyId f) {
  switch (f) {
    case FamilyId::GlobalMin: return "global";
    case FamilyId::TypeA: return "typeA";
    case FamilyId::TypeI: return "typeI";
    case FamilyId::TypeII: return "typeII";
  }
  raise(ErrorCode::ConfigError, "family_name: bad id");
}

FamilyId family_from_name(const std::string& name) {
  if (name == "global") return FamilyId::GlobalMin;
  if (name == "typeA") return FamilyId::TypeA;
  if (name == "typeI") return FamilyId::TypeI;
  if (name == "typeII") return FamilyId::TypeII;
  raise(ErrorCode::ConfigError, "unknown family: " + name);
}

Matd embed(const FixedPointCoords& coords, Index k) {
  if (const auto* sk = std::get_if<SkCoords>(&coords)) {
    if (k < 2) raise(ErrorCode::DomainError, "embed: fully symmetric pattern needs k >= 2");
    Matd W = Matd::Constant(k, k, sk->S);
    W.diagonal().setConstant(sk->R);
    return W;
  }
  const auto& c = std::get<Skm1Coords>(coords);
  if (k < 3) raise(ErrorCode::DomainError, "embed: last-neuron pattern needs k >= 3");
  Matd W = Matd::Constant(k, k, c.xi2);
  W.diagonal().setConstant(c.xi1);
  W.col(k - 1).setConstant(c.xi3);
  W.row(k - 1).setConstant(c.xi4);
  W(k - 1, k - 1) = c.xi5;
  return W;
}

FixedPointCoords unembed(const Matd& W) {
  if (W.rows() != W.cols() || W.rows() < 2)
    raise(ErrorCode::DomainError, "unembed: need a square matrix, k >= 2");
  SkCoords sk;
  if (matches_sk(W, kPatternTol, &sk)) return sk;
  Skm1Coords c;
  if (matches_skm1(W, kPatternTol, &c)) return c;
  raise(ErrorCode::PatternMismatch, "unembed: matrix fits neither symmetry template");
}

FixedPointCoords series_coords(FamilyId family, Index k) {
  const double pi = pi_d;
  switch (family) {
    case FamilyId::GlobalMin:
      return SkCoords{1.0, 0.0};
    case FamilyId::TypeA: {
      if (k < 6) raise(ErrorCode::UnsupportedK, "series_coords: spurious families need k >= 6");
      const double ik = 1.0 / double(k);
      const double R = -1.0 + 2.0 * ik + (8.0 / pi - 4.0) * ik * ik;
      const double S = 2.0 * ik + (4.0 / pi - 2.0) * ik * ik;
      return SkCoords{R, S};
    }
    case FamilyId::TypeII: {
      if (k < 6) raise(ErrorCode::UnsupportedK, "series_coords: spurious families need k >= 6");
      const double u = 1.0 / std::sqrt(double(k));
      const double u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u5 = u4 * u;
      const double c4 = 8.0 / pi;
      const double c5 = -320.0 * pi / (3.0 * std::pow(pi, 4) * (pi - 2.0));
      const double d2 = 2.0 + (8.0 * pi + 8.0) / (pi * pi);
      const double d3 = (64.0 * pi - 768.0) / (3.0 * std::pow(pi, 4) * (pi - 2.0));
      const double e4 = -4.0 / pi;
      const double e5 = -32.0 / std::pow(pi, 3);
      const double f2 = 2.0, f3 = 0.0;
      const double g2 = -e4, g3 = -e5;
      Skm1Coords c;
      c.xi1 = 1.0 + c4 * u4 + c5 * u5;
      c.xi2 = e4 * u4 + e5 * u5;
      c.xi3 = f2 * u2 + f3 * u3;
      c.xi4 = g2 * u2 + g3 * u3;
      c.xi5 = -1.0 + d2 * u2 + d3 * u3;
      return c;
    }
    case FamilyId::TypeI: {
      if (k < 6) raise(ErrorCode::UnsupportedK, "series_coords: spurious families need k >= 6");
      const double u = 1.0 / std::sqrt(double(k));
      const double u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u5 = u4 * u;
      const double c2 = 2.0, c4 = 16.0 / pi - 4.0, c5 = 4.441691;
      const double d2 = 8.0 * (pi - 1.0) / (pi * pi), d3 = -4.798751;
      const double e2 = 2.0, e4 = 8.0 / pi - 2.0;
      const double e5 = 8.0 * (pi * pi + 4.0 * (pi - 1.0)) / std::pow(pi, 3);
      const double f4 = 16.0 / (pi * pi) - 12.0 / pi, f5 = 6.205827;
      const double g2 = 2.0 - 4.0 / pi;
      const double g3 = (32.0 / (pi * pi)) * (1.0 / pi - 1.0);
      Skm1Coords c;
      c.xi1 = -1.0 + c2 * u2 + c4 * u4 + c5 * u5;
      c.xi2 = e2 * u2 + e4 * u4 + e5 * u5;
      c.xi3 = f4 * u4 + f5 * u5;
      c.xi4 = g2 * u2 + g3 * u3;
      c.xi5 = 1.0 + d2 * u2 + d3 * u3;
      return c;
    }
  }
  raise(ErrorCode::ConfigError, "series_coords: bad family id");
}

Matd series_initialize(FamilyId family, Index k) { return embed(series_coords(family, k), k); }

NewtonReport newton_refine_report(const Matd& W0, const Matd& V, double tol,
                                  int max_iterations) {
  const Index k = W0.rows();
  const FixedPointCoords coords0 = unembed(W0);
  const bool full_sym = std::holds_alternative<SkCoords>(coords0);
  const std::vector<Matd> basis = pattern_basis(full_sym, k);
  const Index nb = Index(basis.size());
  std::vector<Vecd> basis_vec;
  basis_vec.reserve(basis.size());
  for (const Matd& P : basis) basis_vec.push_back(vec_row_major(P));

  Vecd x = coords_to_vector(coords0);
  const auto grad_at = [&](const Vecd& xv) {
    return loss_gradient(embed(coords_from_vector(full_sym, xv), k), V);
  };

  Matd G = grad_at(x);
  double phi = G.squaredNorm();
  NewtonReport rep;
  rep.iterations = 0;
  for (; rep.iterations < max_iterations && !(std::sqrt(phi) <= tol); ++rep.iterations) {
    // restricted gradient and Hessian on the pattern coordinates
    Vecd gr(nb);
    for (Index a = 0; a < nb; ++a) gr(a) = (basis[a].array() * G.array()).sum();
    const Matd H = assemble_hessian(embed(coords_from_vector(full_sym, x), k), V);
    Matd hr(nb, nb);
    for (Index b = 0; b < nb; ++b) {
      const Vecd hv = H * basis_vec[b];
      for (Index a = 0; a < nb; ++a) hr(a, b) = basis_vec[a].dot(hv);
    }
    Eigen::FullPivLU<Matd> lu(hr);
    if (!lu.isInvertible())
      raise(ErrorCode::SingularRestrictedHessian,
            "newton_refine: restricted Hessian is singular");
    const Vecd step = lu.solve(-gr);

    double t = 1.0;
    Vecd x_new;
    Matd G_new;
    double phi_new;
    for (;;) {
      x_new = x + t * step;
      G_new = grad_at(x_new);
      phi_new = G_new.squaredNorm();
      if (phi_new <= (1.0 - 1e-4 * t) * phi) break;
      t *= 0.5;
      if (t < std::ldexp(1.0, -30))
        raise(ErrorCode::NoConvergence, "newton_refine: line search failed");
    }
    x = x_new;
    G = G_new;
    phi = phi_new;
  }
  if (!(std::sqrt(phi) <= tol))
    raise(ErrorCode::NoConvergence, "newton_refine: gradient tolerance not reached");
  rep.W = embed(coords_from_vector(full_sym, x), k);
  rep.grad_norm = std::sqrt(phi);
  return rep;
}

Matd newton_refine(const Matd& W0, const Matd& V, double tol, int max_iterations) {
  return newton_refine_report(W0, V, tol, max_iterations).W;
}

const char* isotropy_name(IsotropyLabel label) {
  switch (label) {
    case IsotropyLabel::DeltaSk: return "DeltaSk";
    case IsotropyLabel::DeltaSkm1: return "DeltaSkm1";
    case IsotropyLabel::Trivial: return "Trivial";
    case IsotropyLabel::Other: return "Other";
  }
  raise(ErrorCode::ConfigError, "isotropy_name: bad label");
}

IsotropyLabel classify_isotropy(const Matd& W, double tol) {
  if (W.rows() != W.cols() || W.rows() < 2)
    raise(ErrorCode::DomainError, "classify_isotropy: need a square matrix, k >= 2");
  const Index k = W.rows();
  if (matches_sk(W, tol)) return IsotropyLabel::DeltaSk;
  for (Index r = 0; r < k; ++r) {
    // move candidate special neuron r to the last slot
    Matd M = W;
    if (r != k - 1) {
      M.row(r).swap(M.row(k - 1));
      M.col(r).swap(M.col(k - 1));
    }
    if (matches_skm1(M, tol)) return IsotropyLabel::DeltaSkm1;
  }
  for (Index i = 0; i < k; ++i) {
    for (Index j = i + 1; j < k; ++j) {
      Matd M = W;
      M.row(i).swap(M.row(j));
      M.col(i).swap(M.col(j));
      if (((M - W).cwiseAbs().maxCoeff()) <= tol) return IsotropyLabel::Other;
    }
  }
  return IsotropyLabel::Trivial;
}

}  // namespace hesssym
