// Command-line front end: emits spectrum reports, runs verification suites,
// sweeps asymptotics over k, and reproduces the perturbation experiment.
// All commands are deterministic given their flags; identical invocations
// produce byte-identical reports. Exit codes: 0 success, 1 check failure,
// 2 precondition or configuration error (including refinement failure),
// 3 internal consistency violation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hesssym/core/extension.hpp"
#include "hesssym/core/finite_difference.hpp"
#include "hesssym/core/geometry.hpp"
#include "hesssym/core/hessian.hpp"
#include "hesssym/errors.hpp"
#include "hesssym/families.hpp"
#include "hesssym/parallel.hpp"
#include "hesssym/records.hpp"
#include "hesssym/reduction.hpp"
#include "hesssym/spectrum.hpp"

namespace {

using namespace hesssym;

struct Options {
  std::string family = "typeII";
  Index k = 8;
  Index k_max = 64;
  Index d = 0;  // 0 means d = k
  Index cap = 64;
  std::vector<double> sigmas;
  Index trials = 5;
  std::uint64_t seed = 0;
  double tol_grad = 1e-12;
  double tol_spec = 1e-8;
  std::string format = "csv";
  std::string out;
};

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::EquivarianceViolation:
    case ErrorCode::NotSymmetric:
    case ErrorCode::RankDeficientRepresentatives:
    case ErrorCode::ZeroProbeEntry:
    case ErrorCode::LengthMismatch:
      return 3;
    default:
      return 2;  // configuration, domain, or refinement failure
  }
}

void validate_k(FamilyId family, Index k, Index cap) {
  const Index kmin = family == FamilyId::GlobalMin ? 4 : 6;
  if (k < kmin)
    throw Error(ErrorCode::UnsupportedK, std::string(family_name(family)) + " needs k >= " +
                                             std::to_string(kmin) + ", got " + std::to_string(k));
  if (k > cap)
    throw Error(ErrorCode::ConfigError, "k = " + std::to_string(k) +
                                            " exceeds the dense-solver cap " +
                                            std::to_string(cap) + " (raise --cap knowingly)");
}

std::pair<Index, Index> reduction_shape(FamilyId family, Index k) {
  if (family == FamilyId::GlobalMin || family == FamilyId::TypeA) return {k, 0};
  return {k - 1, 1};
}

Index expected_cluster_count(FamilyId family) {
  switch (family) {
    case FamilyId::GlobalMin: return 6;
    case FamilyId::TypeA: return 7;
    default: return 12;  // types I and II
  }
}

Matd refine_family(FamilyId family, Index k, double tol) {
  const Matd V = Matd::Identity(k, k);
  return newton_refine(series_initialize(family, k), V, tol);
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot open output file " + out);
  f << text;
}

std::string render(const Options& o, const std::vector<SpectrumRow>& rows) {
  if (o.format == "json") return to_json(rows);
  if (o.format == "csv") return to_csv(rows);
  throw Error(ErrorCode::ConfigError, "unknown format " + o.format);
}
std::string render(const Options& o, const std::vector<SweepRow>& rows) {
  if (o.format == "json") return to_json(rows);
  if (o.format == "csv") return to_csv(rows);
  throw Error(ErrorCode::ConfigError, "unknown format " + o.format);
}
std::string render(const Options& o, const std::vector<PerturbRow>& rows) {
  if (o.format == "json") return to_json(rows);
  if (o.format == "csv") return to_csv(rows);
  throw Error(ErrorCode::ConfigError, "unknown format " + o.format);
}
std::string render(const Options& o, const std::vector<VerifyCheck>& rows) {
  if (o.format == "json") return to_json(rows);
  if (o.format == "csv") return to_csv(rows);
  throw Error(ErrorCode::ConfigError, "unknown format " + o.format);
}

// Expands reduced rows to an eigenvalue multiset for reduced-vs-full checks.
std::vector<double> expand_rows(const std::vector<SpectrumRow>& rows) {
  std::vector<double> out;
  for (const auto& r : rows)
    if (r.source == "reduced")
      for (Index i = 0; i < r.multiplicity; ++i) out.push_back(r.eigenvalue);
  return out;
}

int run_spectrum(const Options& o) {
  const FamilyId family = family_from_name(o.family);
  validate_k(family, o.k, o.cap);
  const Index d = o.d == 0 ? o.k : o.d;
  if (d < o.k) throw Error(ErrorCode::ConfigError, "d must be at least k");
  if (d > 2 * o.cap)
    throw Error(ErrorCode::ConfigError, "d exceeds twice the dense-solver cap");

  const Matd W = refine_family(family, o.k, o.tol_grad);
  const Matd V = Matd::Identity(o.k, o.k);
  const Matd H = assemble_hessian(W, V);
  const Matd Wp = pad_columns(W, d);
  const Matd Vp = padded_identity(o.k, d);
  const double loss = population_loss(Wp, Vp);
  const double grad_norm = loss_gradient(Wp, Vp).norm();

  const auto [p, q] = reduction_shape(family, o.k);
  const auto reduced = reduced_spectrum(H, o.k, p, q);

  std::vector<SpectrumRow> rows;
  for (const auto& e : reduced.entries)
    rows.push_back({o.family, o.k, d, "reduced", e.component, e.eigenvalue, e.multiplicity, loss,
                    grad_norm});
  if (d > o.k) {
    const auto ext = full_spectrum(extension_block(W, V));
    for (double v : ext)
      rows.push_back({o.family, o.k, d, "reduced", "ext", v, d - o.k, loss, grad_norm});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SpectrumRow& a, const SpectrumRow& b) {
    return a.eigenvalue < b.eigenvalue;
  });

  const Matd Hfull = d > o.k ? extend_d_gt_k(W, V, d) : H;
  const auto full = full_spectrum(Hfull);
  const std::size_t reduced_rows = rows.size();
  for (double v : full) rows.push_back({o.family, o.k, d, "full", "-", v, 1, loss, grad_norm});

  const auto cmp = compare_spectra(
      expand_rows({rows.begin(), rows.begin() + long(reduced_rows)}), full, o.tol_spec);
  emit(render(o, rows), o.out);
  std::cerr << "spectrum family=" << o.family << " k=" << o.k << " d=" << d
            << " loss=" << format_double(loss) << " grad_norm=" << format_double(grad_norm)
            << " reduced_vs_full=" << format_double(cmp.max_deviation) << "\n";
  if (!cmp.pass) {
    std::cerr << "error: reduced and brute-force spectra disagree beyond tol-spec\n";
    return 3;
  }
  return 0;
}

int run_verify(const Options& o) {
  const FamilyId family = family_from_name(o.family);
  validate_k(family, o.k, o.cap);
  const Index d = o.d == 0 ? o.k : o.d;
  if (d < o.k) throw Error(ErrorCode::ConfigError, "d must be at least k");
  if (d > 2 * o.cap)
    throw Error(ErrorCode::ConfigError, "d exceeds twice the dense-solver cap");

  const Matd W = refine_family(family, o.k, o.tol_grad);
  const Matd V = Matd::Identity(o.k, o.k);
  const Matd H = assemble_hessian(W, V);
  std::vector<VerifyCheck> checks;

  {
    const double gn = loss_gradient(pad_columns(W, d), padded_identity(o.k, d)).norm();
    checks.push_back({"refined_gradient_norm", gn, 1e-10, gn <= 1e-10});
  }
  {
    const double err = (fd_loss_gradient(W, V, 1e-6) - loss_gradient(W, V)).cwiseAbs().maxCoeff();
    checks.push_back({"fd_gradient_max_error", err, 1e-7, err <= 1e-7});
  }
  if (o.k <= 12) {  // quartic cost; larger k is covered by the cheaper checks
    const double err = (fd_hessian(W, V, 1e-5) - H).cwiseAbs().maxCoeff();
    checks.push_back({"fd_hessian_max_error", err, 1e-5, err <= 1e-5});
  }
  const auto [p, q] = reduction_shape(family, o.k);
  {
    double residual = 0;
    for (const auto& comp : representative_set(o.k, p, q))
      residual = std::max(residual, reduced_block(H, comp).residual);
    checks.push_back({"equivariance_residual", residual, 1e-8, residual <= 1e-8});
  }
  const auto reduced = reduced_spectrum(H, o.k, p, q);
  std::vector<double> expanded;
  for (const auto& e : reduced.entries)
    for (Index i = 0; i < e.multiplicity; ++i) expanded.push_back(e.eigenvalue);
  const auto eigs = full_spectrum(H);
  {
    const auto cmp = compare_spectra(expanded, eigs, o.tol_spec);
    checks.push_back(
        {"reduced_vs_full_max_deviation", cmp.max_deviation, o.tol_spec, cmp.pass});
  }
  {
    const auto cs = cluster_eigenvalues(eigs, 1e-6, 1e-7);
    const Index expected = expected_cluster_count(family);
    checks.push_back({"cluster_count", double(cs.clusters.size()), double(expected),
                      Index(cs.clusters.size()) == expected});
  }
  if (o.k >= 8) {
    const double mn = eigs.front();
    checks.push_back({"min_eigenvalue", mn, 1e-6, mn > 1e-6});
  }
  if (d > o.k) {
    std::vector<double> ext = full_spectrum(extension_block(W, V));
    std::vector<double> combined = eigs;
    for (double v : ext)
      for (Index c = 0; c < d - o.k; ++c) combined.push_back(v);
    const auto brute = full_spectrum(assemble_hessian(pad_columns(W, d), padded_identity(o.k, d)));
    const auto cmp = compare_spectra(combined, brute, o.tol_spec);
    checks.push_back({"extension_vs_padded_brute", cmp.max_deviation, o.tol_spec, cmp.pass});
  }

  emit(render(o, checks), o.out);
  bool all = true;
  for (const auto& c : checks) {
    std::cerr << (c.pass ? "pass " : "FAIL ") << c.name << " measured=" << format_double(c.measured)
              << " threshold=" << format_double(c.threshold) << "\n";
    all = all && c.pass;
  }
  return all ? 0 : 1;
}

int run_sweep(const Options& o) {
  const FamilyId family = family_from_name(o.family);
  validate_k(family, o.k, o.cap);
  if (o.k_max < o.k) throw Error(ErrorCode::ConfigError, "k-max must be at least k");
  if (o.k_max > o.cap)
    throw Error(ErrorCode::ConfigError, "k-max exceeds the dense-solver cap (raise --cap)");

  std::vector<Index> grid;
  for (Index k = o.k; k <= o.k_max; k *= 2) grid.push_back(k);
  std::vector<SweepRow> rows(grid.size());

  parallel_for(grid.size(), [&](std::size_t i) {
    SweepRow& r = rows[i];
    r.family = o.family;
    r.k = grid[i];
    try {
      const Index k = grid[i];
      const Matd W = refine_family(family, k, o.tol_grad);
      const Matd V = Matd::Identity(k, k);
      const Matd H = assemble_hessian(W, V);
      const auto [p, q] = reduction_shape(family, k);
      const auto reduced = reduced_spectrum(H, k, p, q);
      const auto [lx, ly] = direct_xy_eigenvalues(H, k, p, q);
      r.lambda_x = lx;
      r.lambda_y = ly;
      for (const auto& e : reduced.entries) {
        r.lambda_max = std::max(r.lambda_max, e.eigenvalue);
        if (e.eigenvalue > 1.0) r.outliers += e.multiplicity;
      }
      r.scaled_x = double(k) * (lx - (0.25 - 1 / (2 * pi_d)));
      r.scaled_y = double(k) * (ly - (0.25 + 1 / (2 * pi_d)));
      r.loss = population_loss(W, V);
      r.grad_norm = loss_gradient(W, V).norm();
    } catch (const Error& e) {
      r = SweepRow{};
      r.family = o.family;
      r.k = grid[i];
      r.ok = false;
      r.error = e.what();
    }
  });

  emit(render(o, rows), o.out);
  for (const auto& r : rows)
    std::cerr << "sweep k=" << r.k
              << (r.ok ? " scaled_x=" + format_double(r.scaled_x) +
                             " lambda_max=" + format_double(r.lambda_max)
                       : " FAILED " + r.error)
              << "\n";
  return 0;
}

int run_perturb(const Options& o) {
  const FamilyId family = family_from_name(o.family);
  validate_k(family, o.k, o.cap);
  if (o.d != 0 && o.d != o.k)
    throw Error(ErrorCode::ConfigError, "perturb runs at d = k");
  if (o.trials < 1) throw Error(ErrorCode::ConfigError, "trials must be positive");
  std::vector<double> sigmas = o.sigmas.empty() ? std::vector<double>{1e-3} : o.sigmas;
  std::sort(sigmas.begin(), sigmas.end());
  for (double s : sigmas)
    if (s < 0) throw Error(ErrorCode::ConfigError, "sigma must be nonnegative");

  const Matd W = refine_family(family, o.k, o.tol_grad);
  const Matd V = Matd::Identity(o.k, o.k);

  // One job per (sigma, trial); each job appends its rows to a dedicated slot.
  const std::size_t jobs = sigmas.size() * std::size_t(o.trials);
  std::vector<std::vector<PerturbRow>> slots(jobs);
  parallel_for(jobs, [&](std::size_t j) {
    const double sigma = sigmas[j / std::size_t(o.trials)];
    const Index trial = Index(j % std::size_t(o.trials));
    PerturbRow base;
    base.family = o.family;
    base.k = o.k;
    base.d = o.k;
    base.sigma = sigma;
    base.seed = o.seed;
    base.trial = trial;
    try {
      const auto cs = perturbed_clustered_spectrum(W, V, sigma, o.seed, trial);
      for (std::size_t c = 0; c < cs.clusters.size(); ++c) {
        PerturbRow r = base;
        r.cluster = Index(c);
        r.center = cs.clusters[c].center;
        r.count = cs.clusters[c].count;
        r.spread = cs.clusters[c].spread;
        slots[j].push_back(r);
      }
    } catch (const Error& e) {
      base.ok = false;
      base.error = e.what();
      slots[j].push_back(base);
    }
  });

  std::vector<PerturbRow> rows;
  for (const auto& s : slots) rows.insert(rows.end(), s.begin(), s.end());
  emit(render(o, rows), o.out);
  std::cerr << "perturb family=" << o.family << " k=" << o.k << " seed=" << o.seed << " rows="
            << rows.size() << "\n";
  return 0;
}

void add_common(CLI::App* cmd, Options& o, bool with_d) {
  cmd->add_option("--family", o.family, "family: global | typeA | typeI | typeII")
      ->capture_default_str();
  cmd->add_option("--k", o.k, "student width")->capture_default_str();
  if (with_d) cmd->add_option("--d", o.d, "input dimension (default: k)");
  cmd->add_option("--cap", o.cap, "dense-eigensolver cost cap on k")->capture_default_str();
  cmd->add_option("--tol-grad", o.tol_grad, "refinement gradient tolerance")
      ->capture_default_str();
  cmd->add_option("--tol-spec", o.tol_spec, "reduced-vs-full spectrum tolerance")
      ->capture_default_str();
  cmd->add_option("--format", o.format, "output format: csv | json")->capture_default_str();
  cmd->add_option("--out", o.out, "output path (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hessian spectra of shallow ReLU student-teacher losses at symmetric critical "
               "points: exact assembly, isotypic reduction, brute-force verification"};
  app.require_subcommand(1);

  Options so, vo, wo, po;
  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "refine a family at (k, d) and report reduced and full spectra");
  add_common(spectrum, so, true);
  CLI::App* verify = app.add_subcommand(
      "verify", "run the invariant suite (finite differences, equivariance, reduced vs full)");
  add_common(verify, vo, true);
  CLI::App* sweep = app.add_subcommand(
      "sweep", "doubling grid k, 2k, ... <= k-max: eigenvalue asymptotics per k");
  add_common(sweep, wo, false);
  sweep->add_option("--k-max", wo.k_max, "sweep upper bound")->capture_default_str();
  CLI::App* perturb = app.add_subcommand(
      "perturb", "clustered spectra under seeded Gaussian perturbations of the refined point");
  add_common(perturb, po, true);
  perturb->add_option("--sigma", po.sigmas, "perturbation scale (repeatable; default 1e-3)");
  perturb->add_option("--trials", po.trials, "trials per sigma")->capture_default_str();
  perturb->add_option("--seed", po.seed, "base RNG seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (spectrum->parsed()) return run_spectrum(so);
    if (verify->parsed()) return run_verify(vo);
    if (sweep->parsed()) return run_sweep(wo);
    return run_perturb(po);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
