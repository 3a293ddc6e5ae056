#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <vector>

#include "hesssym/core/geometry.hpp"
#include "hesssym/core/hessian.hpp"
#include "hesssym/families.hpp"
#include "hesssym/reduction.hpp"
#include "test_support.hpp"

using namespace hesssym;

namespace {

std::vector<double> expand(const SpectrumWithMultiplicity& spec) {
  std::vector<double> out;
  for (const auto& e : spec.entries)
    for (Index r = 0; r < e.multiplicity; ++r) out.push_back(e.eigenvalue);
  return out;
}

// Merge entries whose eigenvalues agree to tol, summing multiplicities.
std::map<double, Index> merged(const SpectrumWithMultiplicity& spec, double tol) {
  std::map<double, Index> out;
  for (const auto& e : spec.entries) {
    bool placed = false;
    for (auto& [v, m] : out)
      if (std::abs(v - e.eigenvalue) <= tol) {
        m += e.multiplicity;
        placed = true;
        break;
      }
    if (!placed) out[e.eigenvalue] = e.multiplicity;
  }
  return out;
}

// Deterministic orbit-structured operator commuting with the two-block
// diagonal action: sums of channels X -> M X N and X -> M X' N with X' the
// transpose, M and N drawn from the 6-dimensional algebra of matrices
// constant on index orbits, plus an orbit-mask Hadamard channel; the operator
// matrix is symmetrized afterwards (transposition preserves equivariance of
// orthogonal actions).
Matd synthetic_equivariant(Index k, Index p, Index q, std::uint64_t seed) {
  std::vector<Matd> alg;
  {
    Matd Ip = Matd::Zero(k, k), Iq = Matd::Zero(k, k);
    Ip.topLeftCorner(p, p).setIdentity();
    Iq.bottomRightCorner(q, q).setIdentity();
    Matd Jpp = Matd::Zero(k, k), Jqq = Matd::Zero(k, k), Jpq = Matd::Zero(k, k),
         Jqp = Matd::Zero(k, k);
    Jpp.topLeftCorner(p, p).setOnes();
    Jpp.topLeftCorner(p, p) -= Ip.topLeftCorner(p, p);
    Jqq.bottomRightCorner(q, q).setOnes();
    Jqq.bottomRightCorner(q, q) -= Iq.bottomRightCorner(q, q);
    Jpq.topRightCorner(p, q).setOnes();
    Jqp.bottomLeftCorner(q, p).setOnes();
    alg = {Ip, Iq, Jpp, Jqq, Jpq, Jqp};
  }
  // Hadamard mask constant on the six entry orbits.
  Matd mask(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) {
      const int oi = i < p ? 0 : 1, oj = j < p ? 0 : 1;
      const int orbit = i == j ? oi : 2 + 2 * oi + oj;
      mask(i, j) = normal_sample(seed, 7, std::uint64_t(orbit));
    }

  const Index n2 = k * k;
  Matd T = Matd::Zero(n2, n2);
  std::uint64_t ctr = 0;
  for (size_t a = 0; a < alg.size(); ++a)
    for (size_t b = 0; b < alg.size(); ++b) {
      const double cd = normal_sample(seed, 1, ctr++);
      const double ct = normal_sample(seed, 2, ctr++);
      // Column (i, j) of the operator is vec(M E N + M E' N) for unit E.
      for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j) {
          Matd E = Matd::Zero(k, k);
          E(i, j) = 1.0;
          const Matd img = cd * alg[a] * E * alg[b] + ct * alg[a] * E.transpose() * alg[b];
          T.col(i * k + j) += vec_row_major(img);
        }
    }
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) {
      const Index v = i * k + j;
      T(v, v) += mask(i, j);
    }
  return 0.5 * (T + T.transpose());
}

}  // namespace

TEST_CASE("decomposition counts and dimension audit") {
  struct Shape {
    Index k, p, q;
  };
  const Shape shapes[] = {{4, 4, 0},  {5, 5, 0},  {6, 6, 0},  {20, 20, 0}, {64, 64, 0},
                          {5, 4, 1},  {6, 5, 1},  {8, 7, 1},  {20, 19, 1}, {6, 4, 2},
                          {7, 5, 2},  {8, 5, 3},  {9, 5, 4},  {12, 7, 5},  {20, 13, 7}};
  for (const auto& s : shapes) {
    CAPTURE(s.k);
    CAPTURE(s.q);
    Index total = 0;
    for (const auto& [irrep, mult] : isotypic_decomposition(s.k, s.p, s.q))
      total += mult * irrep_degree(irrep);
    CHECK(total == s.k * s.k);
  }

  // Component multiplicities for the two shapes the critical families use.
  {
    const auto d = isotypic_decomposition(6, 6, 0);
    REQUIRE(d.size() == 4);
    CHECK(d[0].second == 2);  // t
    CHECK(d[1].second == 3);  // s_p
    CHECK(d[2].second == 1);  // x_p
    CHECK(d[3].second == 1);  // y_p
  }
  {
    const auto d = isotypic_decomposition(6, 5, 1);
    REQUIRE(d.size() == 4);
    CHECK(d[0].second == 5);
    CHECK(d[1].second == 5);
    CHECK(d[1].first.m == 5);
    CHECK(d[2].second == 1);
    CHECK(d[3].second == 1);
  }
  {
    const auto d = isotypic_decomposition(7, 5, 2);  // q = 2 drops x_q, y_q, one s_q copy
    REQUIRE(d.size() == 6);
    CHECK(d[0].second == 6);                         // t
    CHECK(d[1].second == 5);                         // s_p
    CHECK(d[2].second == 4);                         // s_q, q = 2
    CHECK(d[5].first.kind == IrrepKind::ExteriorTensor);
    CHECK(d[5].second == 2);
  }
  {
    const auto d = isotypic_decomposition(9, 5, 4);
    REQUIRE(d.size() == 8);
    CHECK(d[2].second == 5);  // s_q, q >= 3
  }

  CHECK_THROWS_AS(isotypic_decomposition(3, 3, 0), Error);
  CHECK_THROWS_AS(isotypic_decomposition(4, 3, 1), Error);
  CHECK_THROWS_AS(isotypic_decomposition(6, 3, 3), Error);   // needs p > q
  CHECK_THROWS_AS(isotypic_decomposition(5, 3, 2), Error);   // needs k >= 6
  CHECK_THROWS_AS(isotypic_decomposition(6, 4, 1), Error);   // p + q != k
}

TEST_CASE("representatives match the published templates") {
  // One-block shape at k = 5: 7 representatives, X structure as published.
  const auto comps = representative_set(5, 5, 0);
  Index count = 0;
  for (const auto& c : comps) count += c.multiplicity;
  CHECK(count == 7);

  const Matd& X = comps[2].representatives[0];
  CHECK(comps[2].irrep.kind == IrrepKind::ExteriorSquare);
  for (Index i = 0; i < 5; ++i) {
    CHECK(X.row(i).sum() == 0.0);
    CHECK(X.col(i).sum() == 0.0);
  }
  for (Index i = 1; i < 4; ++i)
    for (Index j = 1; j < 4; ++j) CHECK(X(i, j) == 0.0);
  CHECK(X(0, 1) == 1.0);
  CHECK(X(0, 4) == -3.0);
  CHECK(X(4, 0) == 3.0);
  CHECK((X + X.transpose()).cwiseAbs().maxCoeff() == 0.0);

  const Matd& Y = comps[3].representatives[0];
  CHECK(Y(0, 1) == 2.0);
  CHECK(Y(0, 2) == -2.0);
  CHECK(Y(1, 3) == -1.0);
  CHECK(Y(2, 4) == 1.0);
  CHECK((Y - Y.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(Y.diagonal().cwiseAbs().maxCoeff() == 0.0);
  for (Index i = 0; i < 5; ++i) CHECK(Y.row(i).sum() == 0.0);

  // Representatives of distinct irreducible classes are Frobenius-orthogonal
  // (this construction gives full pairwise orthogonality).
  for (const auto& shape : {std::array<Index, 3>{6, 6, 0}, {6, 5, 1}, {8, 5, 3}, {9, 5, 4}}) {
    const auto cs = representative_set(shape[0], shape[1], shape[2]);
    std::vector<Matd> all;
    for (const auto& c : cs)
      for (const auto& r : c.representatives) all.push_back(r);
    for (size_t a = 0; a < all.size(); ++a)
      for (size_t b = a + 1; b < all.size(); ++b)
        CHECK(std::abs((all[a].array() * all[b].array()).sum()) <= 1e-12);
  }
}

TEST_CASE("reduced blocks at the teacher point match the published matrices") {
  const Index k = 6;
  const Matd V = Matd::Identity(k, k);
  const Matd H = assemble_hessian(V, V);
  const auto comps = representative_set(k, k, 0);

  // Row i holds the coefficients of the image of representative i: the
  // operator sends D1 to (1/2 + (k-1)/2pi) D1 + 1/4 D2 and D2 to
  // (k-1)/4 D1 + (k/4 + 1/2pi) D2.
  const ReducedBlock bt = reduced_block(H, comps[0]);
  Matd t_expected(2, 2);
  t_expected << 0.5 + (k - 1) / (2 * pi_d), 0.25, (k - 1) / 4.0, 1 / (2 * pi_d) + k / 4.0;
  CHECK((bt.matrix - t_expected).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(bt.residual <= 1e-12);

  const ReducedBlock bs = reduced_block(H, comps[1]);
  Matd s_expected(3, 3);
  s_expected << 0.5 - 1 / (2 * pi_d), -1.0 / 8, 1.0 / 8,
      -k / 4.0, (k + 2) / 8.0 - 1 / (2 * pi_d), -k / 8.0,
      (k - 2) / 4.0, -(k - 2) / 8.0, k / 8.0 + 1 / (2 * pi_d);
  CHECK((bs.matrix - s_expected).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(bs.residual <= 1e-12);

  const ReducedBlock bx = reduced_block(H, comps[2]);
  CHECK(std::abs(bx.matrix(0, 0) - (0.25 - 1 / (2 * pi_d))) <= 1e-12);
  const ReducedBlock by = reduced_block(H, comps[3]);
  CHECK(std::abs(by.matrix(0, 0) - (0.25 + 1 / (2 * pi_d))) <= 1e-12);

  // Eigenvalues frozen from the worked example (10-digit published values).
  const Vecd lt = reduced_component_eigenvalues(H, comps[0]);
  CHECK(std::abs(lt(0) - 0.8896627389) <= 1e-9);
  CHECK(std::abs(lt(1) - 2.0652669197) <= 1e-9);
  const Vecd ls = reduced_component_eigenvalues(H, comps[1]);
  CHECK(std::abs(ls(0) - 0.090845056908) <= 1e-10);
  CHECK(std::abs(ls(1) - 0.287081474245) <= 1e-10);
  CHECK(std::abs(ls(2) - 1.712918525755) <= 1e-10);
  // The cubic factors: lambda_1 equals 1/4 - 1/2pi, the others solve
  // lambda^2 - (k + 2)/4 lambda + (k + 1)/16 + 1/4pi - 1/4pi^2 = 0.
  CHECK(std::abs(ls(0) - (0.25 - 1 / (2 * pi_d))) <= 1e-12);
  const double tr = (k + 2) / 4.0;
  const double det = (k + 1) / 16.0 + 1 / (4 * pi_d) - 1 / (4 * pi_d * pi_d);
  CHECK(std::abs(ls(1) * ls(2) - det) <= 1e-12);
  CHECK(std::abs(ls(1) + ls(2) - tr) <= 1e-12);

  // Identity operator reduces to identity blocks with zero residual.
  const Matd Id = Matd::Identity(k * k, k * k);
  const ReducedBlock bid = reduced_block(Id, comps[1]);
  CHECK((bid.matrix - Matd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(bid.residual <= 1e-14);
}

TEST_CASE("teacher point spectrum merges to the published six values") {
  const Index k = 6;
  const Matd V = Matd::Identity(k, k);
  const Matd H = assemble_hessian(V, V);
  const auto spec = reduced_spectrum(H, k, k, 0);

  Index total = 0;
  for (const auto& e : spec.entries) total += e.multiplicity;
  CHECK(total == k * k);

  const auto m = merged(spec, 1e-9);
  REQUIRE(m.size() == 6);
  const std::pair<double, Index> expected[] = {
      {0.25 - 1 / (2 * pi_d), 15}, {0.287081474245, 5}, {0.25 + 1 / (2 * pi_d), 9},
      {0.8896627389, 1},           {1.712918525755, 5}, {2.0652669197, 1}};
  auto it = m.begin();
  for (const auto& [v, mult] : expected) {
    CHECK(std::abs(it->first - v) <= 1e-9);
    CHECK(it->second == mult);
    ++it;
  }

  // The same point is symmetric under the two-block subgroup as well; the
  // finer reduction must reproduce the identical multiset.
  const auto spec1 = reduced_spectrum(H, k, k - 1, 1);
  CHECK(testsup::max_abs_diff_sorted(expand(spec), expand(spec1)) <= 1e-10);

  const auto [lx, ly] = direct_xy_eigenvalues(H, k, k, 0);
  CHECK(std::abs(lx - (0.25 - 1 / (2 * pi_d))) <= 1e-12);
  CHECK(std::abs(ly - (0.25 + 1 / (2 * pi_d))) <= 1e-12);
}

TEST_CASE("reduced spectrum equals brute force at refined points") {
  struct Case {
    FamilyId family;
    Index k, p, q;
  };
  const Case cases[] = {{FamilyId::TypeA, 10, 10, 0},
                        {FamilyId::TypeI, 6, 5, 1},
                        {FamilyId::TypeII, 8, 7, 1}};
  for (const auto& c : cases) {
    CAPTURE(int(c.family));
    const Matd V = Matd::Identity(c.k, c.k);
    const Matd W = newton_refine(series_initialize(c.family, c.k), V, 1e-11);
    const Matd H = assemble_hessian(W, V);
    const auto spec = reduced_spectrum(H, c.k, c.p, c.q);
    CHECK(testsup::max_abs_diff_sorted(expand(spec), testsup::eigen_list(H)) <= 1e-8);

    // Probe route agrees with the projection route for the leading x and y.
    const auto [lx, ly] = direct_xy_eigenvalues(H, c.k, c.p, c.q);
    for (const auto& comp : representative_set(c.k, c.p, c.q)) {
      if (comp.irrep.kind == IrrepKind::ExteriorSquare && comp.irrep.m == c.p)
        CHECK(std::abs(reduced_block(H, comp).matrix(0, 0) - lx) <= 1e-10);
      if (comp.irrep.kind == IrrepKind::PartitionK2 && comp.irrep.m == c.p)
        CHECK(std::abs(reduced_block(H, comp).matrix(0, 0) - ly) <= 1e-10);
    }
  }
}

TEST_CASE("published x eigenvalue estimate holds at k = 32") {
  const Index k = 32;
  const Matd V = Matd::Identity(k, k);
  const Matd W = newton_refine(series_initialize(FamilyId::TypeII, k), V, 1e-11);
  const Matd H = assemble_hessian(W, V);
  const auto [lx, ly] = direct_xy_eigenvalues(H, k, k - 1, 1);
  (void)ly;
  const double predicted = 0.25 - 1 / (2 * pi_d) - 1 / (pi_d * k);
  CHECK(std::abs(lx - predicted) <= 5.0 / (k * k));
}

TEST_CASE("synthetic two-block operators reduce exactly") {
  struct Shape {
    Index k, p, q;
  };
  for (const auto& s : {Shape{7, 5, 2}, Shape{8, 5, 3}, Shape{9, 5, 4}}) {
    CAPTURE(s.k);
    const Matd T = synthetic_equivariant(s.k, s.p, s.q, 0x5eed0 + std::uint64_t(s.q));
    const auto spec = reduced_spectrum(T, s.k, s.p, s.q);
    CHECK(testsup::max_abs_diff_sorted(expand(spec), testsup::eigen_list(T)) <= 1e-8);

    // A symmetric but orbit-breaking bump is flagged, not silently reduced.
    Matd Tb = T;
    Tb(0, 0) += 0.01;
    CHECK_THROWS_AS(reduced_spectrum(Tb, s.k, s.p, s.q), Error);
    try {
      reduced_spectrum(Tb, s.k, s.p, s.q);
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::EquivarianceViolation);
    }
  }
}

TEST_CASE("reduced eigenvalues do not depend on the generator") {
  // One-block shape at the teacher point.
  {
    const Index k = 6;
    const Matd H = assemble_hessian(Matd::Identity(k, k), Matd::Identity(k, k));
    Vecd g(k);
    g << 0.3, -1.1, 0.8, 0.0, 0.0, 0.0;
    const auto base = representative_set(k, k, 0);
    const auto alt = representative_set(k, k, 0, g, Vecd());
    for (size_t c = 0; c < base.size(); ++c) {
      const Vecd e1 = reduced_component_eigenvalues(H, base[c]);
      const Vecd e2 = reduced_component_eigenvalues(H, alt[c]);
      CHECK((e1 - e2).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
  // Two-block shape on a synthetic operator, both generators replaced.
  {
    const Index k = 8, p = 5, q = 3;
    const Matd T = synthetic_equivariant(k, p, q, 0xabc);
    Vecd gp(p), gq(q);
    gp << 1.7, -0.2, -0.5, -1.0, 0.0;
    gq << 2.0, -0.5, -1.5;
    const auto base = representative_set(k, p, q);
    const auto alt = representative_set(k, p, q, gp, gq);
    for (size_t c = 0; c < base.size(); ++c) {
      const Vecd e1 = reduced_component_eigenvalues(T, base[c]);
      const Vecd e2 = reduced_component_eigenvalues(T, alt[c]);
      CAPTURE(c);
      CHECK((e1 - e2).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("degenerate inputs are rejected") {
  const auto comps = representative_set(6, 6, 0);

  IsotypicComponent dup = comps[1];
  dup.representatives[1] = dup.representatives[0];
  const Matd Id = Matd::Identity(36, 36);
  CHECK_THROWS_AS(reduced_block(Id, dup), Error);
  try {
    reduced_block(Id, dup);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::RankDeficientRepresentatives);
  }

  CHECK_THROWS_AS(reduced_block(Matd::Identity(25, 25), comps[0]), Error);

  Vecd bad(6);
  bad << 1, 1, 0, 0, 0, 0;  // does not sum to zero
  CHECK_THROWS_AS(representative_set(6, 6, 0, bad, Vecd()), Error);
}
