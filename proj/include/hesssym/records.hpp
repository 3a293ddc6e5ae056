#pragma once

// Machine-readable report rows and their CSV/JSON serializations. Every
// writer is deterministic: identical rows produce byte-identical text.

#include <cstdint>
#include <string>
#include <vector>

#include "hesssym/core/geometry.hpp"

namespace hesssym {

// One eigenvalue row of the spectrum report. For a fixed
// (family, k, d, source) the multiplicities sum to k * d.
struct SpectrumRow {
  std::string family;     // global | typeA | typeI | typeII
  Index k = 0;
  Index d = 0;
  std::string source;     // reduced | full
  std::string component;  // isotypic label; "ext" for the d > k block; "-" for full
  double eigenvalue = 0;
  Index multiplicity = 0;
  double loss = 0;
  double grad_norm = 0;
};

// One point of an asymptotics sweep. On a per-k failure the row is kept with
// ok = false and the message in error; numeric fields are zero.
struct SweepRow {
  std::string family;
  Index k = 0;
  bool ok = true;
  std::string error;
  double lambda_x = 0;
  double lambda_y = 0;
  double lambda_max = 0;
  Index outliers = 0;   // eigenvalues exceeding 1
  double scaled_x = 0;  // k * (lambda_x - (1/4 - 1/2pi))
  double scaled_y = 0;  // k * (lambda_y - (1/4 + 1/2pi))
  double loss = 0;
  double grad_norm = 0;
};

// One cluster of one perturbation trial. A failed trial is a single row with
// ok = false, the message in error, and no cluster data.
struct PerturbRow {
  std::string family;
  Index k = 0;
  Index d = 0;
  double sigma = 0;
  std::uint64_t seed = 0;
  Index trial = 0;
  bool ok = true;
  std::string error;
  Index cluster = 0;
  double center = 0;
  Index count = 0;
  double spread = 0;
};

// One named check of a verification run.
struct VerifyCheck {
  std::string name;
  double measured = 0;
  double threshold = 0;
  bool pass = false;
};

// 17 significant digits; parses back to the identical double.
std::string format_double(double v);

// Header line plus one line per row, LF-terminated. Cells containing commas,
// quotes, or newlines are quoted per RFC 4180.
std::string to_csv(const std::vector<SpectrumRow>& rows);
std::string to_csv(const std::vector<SweepRow>& rows);
std::string to_csv(const std::vector<PerturbRow>& rows);
std::string to_csv(const std::vector<VerifyCheck>& rows);

// Two-space indented JSON array of objects, keys in schema order, trailing
// newline. Numbers serialize round-trip exactly.
std::string to_json(const std::vector<SpectrumRow>& rows);
std::string to_json(const std::vector<SweepRow>& rows);
std::string to_json(const std::vector<PerturbRow>& rows);
std::string to_json(const std::vector<VerifyCheck>& rows);

}  // namespace hesssym
