#include "hesssym/records.hpp"

#include <cstdio>

#include "json.hpp"

namespace hesssym {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string cat(std::initializer_list<std::string> cells) {
  std::string line;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) line += ',';
    line += csv_escape(c);
    first = false;
  }
  line += '\n';
  return line;
}

std::string fi(Index v) { return std::to_string(v); }
std::string fu(std::uint64_t v) { return std::to_string(v); }
std::string fb(bool v) { return v ? "true" : "false"; }

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const std::vector<SpectrumRow>& rows) {
  std::string out = cat({"family", "k", "d", "source", "component", "eigenvalue", "multiplicity",
                         "loss", "grad_norm"});
  for (const auto& r : rows)
    out += cat({r.family, fi(r.k), fi(r.d), r.source, r.component, format_double(r.eigenvalue),
                fi(r.multiplicity), format_double(r.loss), format_double(r.grad_norm)});
  return out;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = cat({"family", "k", "ok", "error", "lambda_x", "lambda_y", "lambda_max",
                         "outliers", "scaled_x", "scaled_y", "loss", "grad_norm"});
  for (const auto& r : rows)
    out += cat({r.family, fi(r.k), fb(r.ok), r.error, format_double(r.lambda_x),
                format_double(r.lambda_y), format_double(r.lambda_max), fi(r.outliers),
                format_double(r.scaled_x), format_double(r.scaled_y), format_double(r.loss),
                format_double(r.grad_norm)});
  return out;
}

std::string to_csv(const std::vector<PerturbRow>& rows) {
  std::string out = cat({"family", "k", "d", "sigma", "seed", "trial", "ok", "error", "cluster",
                         "center", "count", "spread"});
  for (const auto& r : rows)
    out += cat({r.family, fi(r.k), fi(r.d), format_double(r.sigma), fu(r.seed), fi(r.trial),
                fb(r.ok), r.error, fi(r.cluster), format_double(r.center), fi(r.count),
                format_double(r.spread)});
  return out;
}

std::string to_csv(const std::vector<VerifyCheck>& rows) {
  std::string out = cat({"check", "measured", "threshold", "pass"});
  for (const auto& r : rows)
    out += cat({r.name, format_double(r.measured), format_double(r.threshold), fb(r.pass)});
  return out;
}

namespace {

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string to_json(const std::vector<SpectrumRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows)
    arr.push_back({{"family", r.family},
                   {"k", r.k},
                   {"d", r.d},
                   {"source", r.source},
                   {"component", r.component},
                   {"eigenvalue", r.eigenvalue},
                   {"multiplicity", r.multiplicity},
                   {"loss", r.loss},
                   {"grad_norm", r.grad_norm}});
  return dump(arr);
}

std::string to_json(const std::vector<SweepRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows)
    arr.push_back({{"family", r.family},
                   {"k", r.k},
                   {"ok", r.ok},
                   {"error", r.error},
                   {"lambda_x", r.lambda_x},
                   {"lambda_y", r.lambda_y},
                   {"lambda_max", r.lambda_max},
                   {"outliers", r.outliers},
                   {"scaled_x", r.scaled_x},
                   {"scaled_y", r.scaled_y},
                   {"loss", r.loss},
                   {"grad_norm", r.grad_norm}});
  return dump(arr);
}

std::string to_json(const std::vector<PerturbRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows)
    arr.push_back({{"family", r.family},
                   {"k", r.k},
                   {"d", r.d},
                   {"sigma", r.sigma},
                   {"seed", r.seed},
                   {"trial", r.trial},
                   {"ok", r.ok},
                   {"error", r.error},
                   {"cluster", r.cluster},
                   {"center", r.center},
                   {"count", r.count},
                   {"spread", r.spread}});
  return dump(arr);
}

std::string to_json(const std::vector<VerifyCheck>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows)
    arr.push_back({{"check", r.name},
                   {"measured", r.measured},
                   {"threshold", r.threshold},
                   {"pass", r.pass}});
  return dump(arr);
}

}  // namespace hesssym
