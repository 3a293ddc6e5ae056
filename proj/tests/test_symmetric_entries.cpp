#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hesssym/core/geometry.hpp"
#include "hesssym/core/hessian.hpp"
#include "hesssym/core/symmetric_entries.hpp"

using namespace hesssym;

namespace {

// Sum route for the fully symmetric pattern: rebuild each Hessian block from
// the A/B/K combinators instead of the final closed forms. Independent check
// that the per-entry formulas agree with their own building blocks.
Matd sum_route_sk(const SkAngles& a, Index k) {
  const double sT = std::sin(a.Theta), cT = std::cos(a.Theta);
  const double sa = std::sin(a.alpha), sb = std::sin(a.beta);
  const double tau = a.tau;
  Matd H(k * k, k * k);
  for (Index p = 0; p < k; ++p) {
    for (Index q = 0; q < k; ++q) {
      for (Index i = 0; i < k; ++i) {
        for (Index j = 0; j < k; ++j) {
          const double delta = (i == j) ? 1.0 : 0.0;
          double v = 0;
          if (p != q) {
            const BlockEntryTerms t = sk_block_terms(p, q, i, j, a, k);
            v = (pi_d - a.Theta) * delta / (2 * pi_d) + (t.B - cT * t.Apq) / (2 * pi_d * sT);
          } else {
            v = 0.5 * delta;
            for (Index r = 0; r < k; ++r) {
              if (r == p) continue;
              const BlockEntryTerms t = sk_block_terms(p, r, i, j, a, k);
              const double Aq = sk_block_terms(r, p, i, j, a, k).A;
              v += sT / (2 * pi_d) * (delta - t.A) +
                   (Aq - cT * t.B + cT * cT * t.A) / (2 * pi_d * sT);
            }
            for (Index r = 0; r < k; ++r) {
              const BlockEntryTerms t = sk_block_terms(p, r, i, j, a, k);
              const double s_front = (r == p) ? sb : sa;
              if (i == r && j == r)
                v -= s_front * s_front * s_front / (pi_d * tau);
              else
                v -= s_front / (2 * pi_d * tau) * (delta - t.A + t.KA);
            }
          }
          H(p * k + i, q * k + j) = v;
        }
      }
    }
  }
  return H;
}

}  // namespace

TEST_CASE("fully symmetric pattern: teacher point reproduces the exact blocks") {
  const Index k = 6;
  // angles of W = V: rows are standard basis vectors
  const auto e = entries_deltaSk(pi_d / 2, pi_d / 2, 0.0, 1.0, k);
  CHECK(e.diag_pp == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(e.diag_ii == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(e.diag_ip) < 1e-16);
  CHECK(std::abs(e.diag_ij) < 1e-16);
  CHECK(e.off_diag_in == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(e.off_diag_out == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(e.off_cross == doctest::Approx(1.0 / (2 * pi_d)).epsilon(1e-15));
  CHECK(std::abs(e.off_one) < 1e-16);
  CHECK(std::abs(e.off_none) < 1e-16);
}

TEST_CASE("fully symmetric pattern: entries match the assembled Hessian") {
  const double pts[][2] = {{1.1, 0.2}, {0.3, -0.45}, {-0.8, 0.15}, {0.9, 0.7}};
  for (Index k : {4, 5, 7, 10}) {
    const Matd V = Matd::Identity(k, k);
    for (const auto& rs : pts) {
      CAPTURE(k);
      CAPTURE(rs[0]);
      CAPTURE(rs[1]);
      const Matd W = sk_pattern_point(rs[0], rs[1], k);
      const Matd H = assemble_hessian(W, V);
      const auto ent = entries_deltaSk(sk_angles(rs[0], rs[1], k), k);
      const Matd M = materialize(ent);
      CHECK((M - H).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((M - M.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("fully symmetric pattern: combinator sum route agrees") {
  const double pts[][2] = {{1.1, 0.2}, {0.3, -0.45}, {-0.8, 0.15}};
  for (Index k : {4, 6, 9}) {
    for (const auto& rs : pts) {
      CAPTURE(k);
      CAPTURE(rs[0]);
      CAPTURE(rs[1]);
      const SkAngles a = sk_angles(rs[0], rs[1], k);
      const Matd M = materialize(entries_deltaSk(a, k));
      const Matd S = sum_route_sk(a, k);
      CHECK((M - S).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("fully symmetric pattern: diagonal correction terms stay bounded") {
  // The K^{qq} A^q products must be bounded by 1 for every admissible angle
  // pair; this is what keeps the closed forms valid in the limit W -> V.
  for (int bi = 0; bi <= 20; ++bi) {
    for (int ai = 1; ai < 40; ++ai) {
      const double beta = bi * (pi_d / 21);
      const double alpha = ai * (pi_d / 40);
      SkAngles a{pi_d / 2, alpha, beta, 1.0};
      for (Index k : {4, 8}) {
        for (Index i : {0, 1, 2}) {
          for (Index j : {0, 1, 2}) {
            const BlockEntryTerms t = sk_block_terms(1, 1, i, j, a, k);
            if (i == 1 && j == 1) continue;
            CHECK(std::abs(t.KA) <= 1.0 + 1e-15);
          }
        }
      }
    }
  }
}

TEST_CASE("last-neuron pattern: entries match the assembled Hessian") {
  const double pts[][5] = {
      {1.05, 0.12, -0.20, 0.30, -0.90},
      {0.80, -0.10, 0.15, -0.25, 1.10},
      {-0.60, 0.22, 0.40, 0.18, 0.70},
      {1.00, 0.05, 0.08, 0.20, -1.00},
  };
  for (Index k : {5, 6, 8}) {
    const Matd V = Matd::Identity(k, k);
    for (const auto& xi : pts) {
      CAPTURE(k);
      CAPTURE(xi[0]);
      const Matd W = skm1_pattern_point(xi[0], xi[1], xi[2], xi[3], xi[4], k);
      const Matd H = assemble_hessian(W, V);
      const SevenAngles a = skm1_angles(xi[0], xi[1], xi[2], xi[3], xi[4], k);
      const Matd M = materialize(entries_deltaSkm1(a, k));
      CHECK((M - H).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((M - M.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("last-neuron pattern: seven angles agree with row geometry") {
  const Index k = 7;
  const double xi[5] = {1.05, 0.12, -0.20, 0.30, -0.90};
  const Matd W = skm1_pattern_point(xi[0], xi[1], xi[2], xi[3], xi[4], k);
  const SevenAngles a = skm1_angles(xi[0], xi[1], xi[2], xi[3], xi[4], k);
  CHECK(a.tau == doctest::Approx(W.row(0).norm()).epsilon(1e-15));
  CHECK(a.tau_k == doctest::Approx(W.row(k - 1).norm()).epsilon(1e-15));
  CHECK(a.Theta == doctest::Approx(pair_angle(W.row(0), W.row(1))).epsilon(1e-13));
  CHECK(a.Lambda == doctest::Approx(pair_angle(W.row(0), W.row(k - 1))).epsilon(1e-13));
  const Matd V = Matd::Identity(k, k);
  CHECK(a.a_ii == doctest::Approx(pair_angle(W.row(0), V.row(0))).epsilon(1e-13));
  CHECK(a.a_ij == doctest::Approx(pair_angle(W.row(0), V.row(1))).epsilon(1e-13));
  CHECK(a.a_ik == doctest::Approx(pair_angle(W.row(0), V.row(k - 1))).epsilon(1e-13));
  CHECK(a.a_kk == doctest::Approx(pair_angle(W.row(k - 1), V.row(k - 1))).epsilon(1e-13));
  CHECK(a.a_kj == doctest::Approx(pair_angle(W.row(k - 1), V.row(0))).epsilon(1e-13));
}

TEST_CASE("entry tables reject degenerate configurations") {
  CHECK_THROWS_WITH_AS(entries_deltaSk(pi_d / 2, pi_d / 2, 0.0, 1.0, 3),
                       "UnsupportedK: entries_deltaSk: need k >= 4", Error);
  CHECK_THROWS_AS(entries_deltaSk(0.0, pi_d / 2, 0.0, 1.0, 6), Error);          // sin(Theta) = 0
  CHECK_THROWS_AS(entries_deltaSk(pi_d / 2, 0.0, 0.0, 1.0, 6), Error);          // sin(alpha) = 0
  CHECK_THROWS_AS(entries_deltaSk(pi_d / 2, pi_d / 2, pi_d, 1.0, 6), Error);    // beta out of range
  CHECK_THROWS_AS(entries_deltaSk(pi_d / 2, pi_d / 2, 0.0, -1.0, 6), Error);    // bad norm
  try {
    entries_deltaSk(0.0, pi_d / 2, 0.0, 1.0, 6);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::DomainError);
  }

  const SevenAngles good = skm1_angles(1.05, 0.12, -0.2, 0.3, -0.9, 6);
  CHECK_THROWS_AS(entries_deltaSkm1(good, 4), Error);  // k too small
  SevenAngles bad = good;
  bad.Lambda = 0.0;
  CHECK_THROWS_AS(entries_deltaSkm1(bad, 6), Error);
  CHECK_THROWS_AS(skm1_angles(0.0, 0.0, 0.0, 0.2, 1.0, 6), Error);  // zero student row
}
