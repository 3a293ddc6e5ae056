#include "hesssym/reduction.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <utility>

namespace hesssym {

namespace {

void check_shape(Index k, Index p, Index q, const char* who) {
  if (k < 1 || p < 1 || q < 0 || p + q != k)
    raise(ErrorCode::UnsupportedShape, std::string(who) + ": need p + q = k with p >= 1, q >= 0");
  if (q == 0 && k < 4)
    raise(ErrorCode::UnsupportedShape, std::string(who) + ": one-block action needs k >= 4");
  if (q == 1 && k < 5)
    raise(ErrorCode::UnsupportedShape, std::string(who) + ": q = 1 needs k >= 5");
  if (q >= 2 && !(p > q && k >= 4 + q))
    raise(ErrorCode::UnsupportedShape, std::string(who) + ": q >= 2 needs p > q and k >= 4 + q");
}

Vecd canonical_generator(Index m) {
  Vecd x = Vecd::Zero(m);
  x(0) = 1.0;
  x(1) = -1.0;
  return x;
}

void check_generator(const Vecd& x, Index m, const char* which) {
  if (x.size() != m)
    raise(ErrorCode::ConfigError, std::string("representative_set: ") + which + " generator size mismatch");
  const double scale = x.cwiseAbs().maxCoeff();
  if (!(scale > 0.0))
    raise(ErrorCode::ConfigError, std::string("representative_set: ") + which + " generator is zero");
  if (std::abs(x.sum()) > 1e-12 * (1.0 + scale) * double(m))
    raise(ErrorCode::ConfigError, std::string("representative_set: ") + which + " generator must sum to zero");
}

// One copy of the standard representation inside the diagonal matrices.
Matd std_diag(const Vecd& x) { return Matd(x.asDiagonal()); }

// One copy inside the skew matrices: entries x_i - x_j.
Matd std_skew(const Vecd& x) {
  const Index m = x.size();
  Matd M(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) M(i, j) = x(i) - x(j);
  return M;
}

// One copy inside the symmetric zero-diagonal matrices: entries x_i + x_j.
Matd std_sym(const Vecd& x) {
  const Index m = x.size();
  Matd M = Matd::Zero(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      if (i != j) M(i, j) = x(i) + x(j);
  return M;
}

// Skew matrix with zero row sums spanning one copy of the exterior square;
// nonzero entries only in the first and last row/column. m >= 3.
Matd exterior_square_rep(Index m) {
  Matd X = Matd::Zero(m, m);
  for (Index j = 1; j + 1 < m; ++j) {
    X(0, j) = 1.0;
    X(j, 0) = -1.0;
    X(j, m - 1) = 1.0;
    X(m - 1, j) = -1.0;
  }
  X(0, m - 1) = -double(m - 2);
  X(m - 1, 0) = double(m - 2);
  return X;
}

// Symmetric zero-diagonal matrix with zero row sums spanning one copy of the
// partition (m-2,2) class. m >= 4.
Matd partition_rep(Index m) {
  Matd Y = Matd::Zero(m, m);
  Y(0, 1) = Y(1, 0) = double(m - 3);
  Y(0, 2) = Y(2, 0) = 3.0 - double(m);
  for (Index j = 3; j < m; ++j) {
    Y(1, j) = Y(j, 1) = -1.0;
    Y(2, j) = Y(j, 2) = 1.0;
  }
  return Y;
}

Matd embed_block(Index k, Index r0, Index c0, const Matd& B) {
  Matd M = Matd::Zero(k, k);
  M.block(r0, c0, B.rows(), B.cols()) = B;
  return M;
}

IrrepClass trivial_class() { return {IrrepKind::Trivial, 0, 0, 0}; }
IrrepClass standard_class(Index m) { return {IrrepKind::Standard, m, 0, 0}; }
IrrepClass exterior_class(Index m) { return {IrrepKind::ExteriorSquare, m, 0, 0}; }
IrrepClass partition_class(Index m) { return {IrrepKind::PartitionK2, m, 0, 0}; }
IrrepClass tensor_class(Index p, Index q) { return {IrrepKind::ExteriorTensor, 0, p, q}; }

Matd stack_columns(const std::vector<Matd>& reps) {
  const Index n2 = reps.front().rows() * reps.front().cols();
  Matd R(n2, Index(reps.size()));
  for (Index j = 0; j < Index(reps.size()); ++j) R.col(j) = vec_row_major(reps[size_t(j)]);
  return R;
}

}  // namespace

Index irrep_degree(const IrrepClass& irrep) {
  switch (irrep.kind) {
    case IrrepKind::Trivial:
      return 1;
    case IrrepKind::Standard:
      return irrep.m - 1;
    case IrrepKind::ExteriorSquare:
      return (irrep.m - 1) * (irrep.m - 2) / 2;
    case IrrepKind::PartitionK2:
      return irrep.m * (irrep.m - 3) / 2;
    case IrrepKind::ExteriorTensor:
      return (irrep.p - 1) * (irrep.q - 1);
  }
  raise(ErrorCode::DomainError, "irrep_degree: unknown kind");
}

std::string irrep_label(const IrrepClass& irrep, Index p, Index q) {
  const char* suffix = nullptr;
  switch (irrep.kind) {
    case IrrepKind::Trivial:
      return "t";
    case IrrepKind::ExteriorTensor:
      return "sxs";
    case IrrepKind::Standard:
      suffix = "s";
      break;
    case IrrepKind::ExteriorSquare:
      suffix = "x";
      break;
    case IrrepKind::PartitionK2:
      suffix = "y";
      break;
  }
  if (irrep.m == p) return std::string(suffix) + "_p";
  if (irrep.m == q) return std::string(suffix) + "_q";
  raise(ErrorCode::DomainError, "irrep_label: size parameter matches neither block");
}

std::vector<std::pair<IrrepClass, Index>> isotypic_decomposition(Index k, Index p, Index q) {
  check_shape(k, p, q, "isotypic_decomposition");
  std::vector<std::pair<IrrepClass, Index>> out;
  if (q == 0) {
    out.emplace_back(trivial_class(), 2);
    out.emplace_back(standard_class(k), 3);
    out.emplace_back(exterior_class(k), 1);
    out.emplace_back(partition_class(k), 1);
    return out;
  }
  out.emplace_back(trivial_class(), q == 1 ? 5 : 6);
  out.emplace_back(standard_class(p), 5);
  if (q >= 2) out.emplace_back(standard_class(q), q == 2 ? 4 : 5);
  out.emplace_back(exterior_class(p), 1);
  out.emplace_back(partition_class(p), 1);
  if (q >= 3) out.emplace_back(exterior_class(q), 1);
  if (q >= 4) out.emplace_back(partition_class(q), 1);
  if (q >= 2) out.emplace_back(tensor_class(p, q), 2);
  return out;
}

std::vector<IsotypicComponent> representative_set(Index k, Index p, Index q) {
  const Vecd gp = canonical_generator(p);
  const Vecd gq = q >= 2 ? canonical_generator(q) : Vecd();
  return representative_set(k, p, q, gp, gq);
}

std::vector<IsotypicComponent> representative_set(Index k, Index p, Index q, const Vecd& gen_p,
                                                  const Vecd& gen_q) {
  check_shape(k, p, q, "representative_set");
  check_generator(gen_p, p, "leading-block");
  if (q >= 2) check_generator(gen_q, q, "trailing-block");

  std::vector<IsotypicComponent> out;
  const Matd Ikk = Matd::Identity(k, k);
  if (q == 0) {
    out.push_back({trivial_class(), 2, {Ikk, Matd::Ones(k, k) - Ikk}});
    out.push_back({standard_class(k), 3, {std_diag(gen_p), std_skew(gen_p), std_sym(gen_p)}});
    out.push_back({exterior_class(k), 1, {exterior_square_rep(k)}});
    out.push_back({partition_class(k), 1, {partition_rep(k)}});
    return out;
  }

  const Matd Ip = Matd::Identity(p, p);
  const Matd Iq = Matd::Identity(q, q);
  const Vecd onep = Vecd::Ones(p);
  const Vecd oneq = Vecd::Ones(q);

  {
    std::vector<Matd> reps;
    reps.push_back(embed_block(k, 0, 0, Ip));
    reps.push_back(embed_block(k, 0, 0, Matd::Ones(p, p) - Ip));
    reps.push_back(embed_block(k, p, p, Iq));
    if (q >= 2) reps.push_back(embed_block(k, p, p, Matd::Ones(q, q) - Iq));
    reps.push_back(embed_block(k, 0, p, Matd::Ones(p, q)));
    reps.push_back(embed_block(k, p, 0, Matd::Ones(q, p)));
    out.push_back({trivial_class(), Index(reps.size()), std::move(reps)});
  }
  {
    std::vector<Matd> reps;
    reps.push_back(embed_block(k, 0, 0, std_diag(gen_p)));
    reps.push_back(embed_block(k, 0, 0, std_skew(gen_p)));
    reps.push_back(embed_block(k, 0, 0, std_sym(gen_p)));
    reps.push_back(embed_block(k, 0, p, gen_p * oneq.transpose()));
    reps.push_back(embed_block(k, p, 0, oneq * gen_p.transpose()));
    out.push_back({standard_class(p), Index(reps.size()), std::move(reps)});
  }
  if (q >= 2) {
    std::vector<Matd> reps;
    reps.push_back(embed_block(k, p, p, std_diag(gen_q)));
    reps.push_back(embed_block(k, p, p, std_skew(gen_q)));
    if (q >= 3) reps.push_back(embed_block(k, p, p, std_sym(gen_q)));
    reps.push_back(embed_block(k, 0, p, onep * gen_q.transpose()));
    reps.push_back(embed_block(k, p, 0, gen_q * onep.transpose()));
    out.push_back({standard_class(q), Index(reps.size()), std::move(reps)});
  }
  out.push_back({exterior_class(p), 1, {embed_block(k, 0, 0, exterior_square_rep(p))}});
  out.push_back({partition_class(p), 1, {embed_block(k, 0, 0, partition_rep(p))}});
  if (q >= 3) out.push_back({exterior_class(q), 1, {embed_block(k, p, p, exterior_square_rep(q))}});
  if (q >= 4) out.push_back({partition_class(q), 1, {embed_block(k, p, p, partition_rep(q))}});
  if (q >= 2) {
    std::vector<Matd> reps;
    reps.push_back(embed_block(k, 0, p, gen_p * gen_q.transpose()));
    reps.push_back(embed_block(k, p, 0, gen_q * gen_p.transpose()));
    out.push_back({tensor_class(p, q), 2, std::move(reps)});
  }
  return out;
}

ReducedBlock reduced_block(const Matd& H, const IsotypicComponent& comp) {
  const Index m = comp.multiplicity;
  if (m < 1 || Index(comp.representatives.size()) != m)
    raise(ErrorCode::DomainError, "reduced_block: multiplicity does not match representatives");
  const Index k = comp.representatives.front().rows();
  if (H.rows() != k * k || H.cols() != k * k)
    raise(ErrorCode::DomainError, "reduced_block: operator size does not match representatives");

  const Matd R = stack_columns(comp.representatives);
  Eigen::ColPivHouseholderQR<Matd> qr(R);
  if (qr.rank() < m)
    raise(ErrorCode::RankDeficientRepresentatives, "reduced_block: representatives are dependent");

  ReducedBlock out{comp, Matd(m, m), 0.0};
  for (Index i = 0; i < m; ++i) {
    const Vecd u = H * R.col(i);
    const Vecd c = qr.solve(u);
    out.matrix.row(i) = c.transpose();
    const double un = u.norm();
    if (un > 0.0) out.residual = std::max(out.residual, (u - R * c).norm() / un);
  }
  return out;
}

Vecd reduced_component_eigenvalues(const Matd& H, const IsotypicComponent& comp) {
  const Index m = comp.multiplicity;
  if (m < 1 || Index(comp.representatives.size()) != m)
    raise(ErrorCode::DomainError, "reduced_component_eigenvalues: multiplicity mismatch");
  const Matd R = stack_columns(comp.representatives);
  Eigen::ColPivHouseholderQR<Matd> rank_check(R);
  if (rank_check.rank() < m)
    raise(ErrorCode::RankDeficientRepresentatives,
          "reduced_component_eigenvalues: representatives are dependent");
  Eigen::HouseholderQR<Matd> qr(R);
  const Matd Q = qr.householderQ() * Matd::Identity(R.rows(), m);
  const Matd B = Q.transpose() * H * Q;
  Eigen::SelfAdjointEigenSolver<Matd> es(0.5 * (B + B.transpose()));
  return es.eigenvalues();
}

SpectrumWithMultiplicity reduced_spectrum(const Matd& H, Index k, Index p, Index q) {
  check_shape(k, p, q, "reduced_spectrum");
  if (H.rows() != k * k || H.cols() != k * k)
    raise(ErrorCode::DomainError, "reduced_spectrum: operator size does not match k");

  SpectrumWithMultiplicity out;
  Index total = 0;
  for (const IsotypicComponent& comp : representative_set(k, p, q)) {
    const ReducedBlock blk = reduced_block(H, comp);
    if (blk.residual > 1e-6)
      raise(ErrorCode::EquivarianceViolation,
            "reduced_spectrum: residual " + std::to_string(blk.residual) + " on component " +
                irrep_label(comp.irrep, p, q));
    const Vecd evs = reduced_component_eigenvalues(H, comp);
    const Index deg = irrep_degree(comp.irrep);
    const std::string label = irrep_label(comp.irrep, p, q);
    for (Index i = 0; i < evs.size(); ++i) {
      out.entries.push_back({evs(i), deg, label});
      total += deg;
    }
  }
  if (total != k * k)
    raise(ErrorCode::DomainError, "reduced_spectrum: degree bookkeeping failed");
  return out;
}

std::pair<double, double> direct_xy_eigenvalues(const Matd& H, Index k, Index p, Index q) {
  check_shape(k, p, q, "direct_xy_eigenvalues");
  if (H.rows() != k * k || H.cols() != k * k)
    raise(ErrorCode::DomainError, "direct_xy_eigenvalues: operator size does not match k");

  // Probe entry (0, 1): X has value 1 there, Y has value p - 3 (p >= 4 in all
  // supported shapes, so both are nonzero; guarded anyway).
  const auto probe = [&](const Matd& rep) {
    const Vecd r = vec_row_major(rep);
    const double den = r(1);
    if (std::abs(den) < 1e-300)
      raise(ErrorCode::ZeroProbeEntry, "direct_xy_eigenvalues: designated entry vanishes");
    return (H * r)(1) / den;
  };
  const Index m = q == 0 ? k : p;
  const double lx = probe(embed_block(k, 0, 0, exterior_square_rep(m)));
  const double ly = probe(embed_block(k, 0, 0, partition_rep(m)));
  return {lx, ly};
}

}  // namespace hesssym
