#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fractherm/model.hpp"
#include "fractherm/solver.hpp"

namespace fractherm {

inline constexpr std::string_view kVersion = "1.0.0";

/// Input error with the 1-based line it refers to (0 when not tied to a line).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Round-trippable decimal rendering (17 significant digits).
inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_real(v[i]);
  }
  return s;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> to_real(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

inline std::vector<double> to_list(std::string_view s, std::size_t line) {
  std::vector<double> out;
  s = trim(s);
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = s.find(',', pos);
    const auto item = s.substr(pos, comma == std::string_view::npos ? s.size() - pos : comma - pos);
    const auto v = to_real(item);
    if (!v) throw ParseError(line, "bad number '" + std::string(trim(item)) + "' in list");
    out.push_back(*v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace detail

/// Contents of a problem file: the problem plus its default discretization.
struct ProblemFile {
  ThermistorProblem problem;
  std::size_t mesh_n = 512;
  double mesh_grading = 1.0;

  bool operator==(const ProblemFile&) const = default;
};

/// Parses the key-value problem format:
///
///     # comment
///     alpha = 0.25
///     lambda = 1
///     T = 1
///     f.kind = affine-clamped      (constant | affine-clamped | sinusoidal | table)
///     f.params = 1.0, 0.5
///     f.L = 0.5
///     f.c1 = 0.5
///     f.c2 = 1.5
///     h.kind = zero                (zero | constant | table | polynomial)
///     h.params =
///     mesh.n = 512
///     mesh.grading = 1
///
/// Lines inside a `[section]` other than `[problem]` are skipped, so a
/// report document parses back to the problem it echoes.
inline ProblemFile parse_problem(std::istream& in) {
  struct Entry {
    std::string value;
    std::size_t line;
  };
  static const std::vector<std::string> known = {
      "alpha", "lambda", "T", "f.kind", "f.params", "f.L", "f.c1", "f.c2",
      "h.kind", "h.params", "mesh.n", "mesh.grading"};
  std::map<std::string, Entry> entries;
  std::string raw;
  std::size_t lineno = 0;
  bool in_problem = true;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = detail::trim(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = detail::trim(line.substr(0, hash));
    }
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(lineno, "malformed section header");
      in_problem = detail::trim(line.substr(1, line.size() - 2)) == "problem";
      continue;
    }
    if (!in_problem) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(lineno, "expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ParseError(lineno, "unknown key '" + key + "'");
    }
    if (entries.count(key)) {
      throw ParseError(lineno, "duplicate key '" + key + "' (first on line " +
                                   std::to_string(entries[key].line) + ")");
    }
    entries[key] = {value, lineno};
  }
  const std::size_t eof_line = lineno + 1;

  auto line_of = [&](const std::string& key) {
    const auto it = entries.find(key);
    return it == entries.end() ? eof_line : it->second.line;
  };
  auto require = [&](const std::string& key) -> const Entry& {
    const auto it = entries.find(key);
    if (it == entries.end()) throw ParseError(eof_line, "missing required key '" + key + "'");
    return it->second;
  };
  auto real = [&](const std::string& key) {
    const Entry& e = require(key);
    const auto v = detail::to_real(e.value);
    if (!v) throw ParseError(e.line, "key '" + key + "' expects a number, got '" + e.value + "'");
    return *v;
  };
  auto list = [&](const std::string& key) {
    const auto it = entries.find(key);
    return it == entries.end() ? std::vector<double>{} : detail::to_list(it->second.value, it->second.line);
  };
  // Re-raise a constructor's complaint against the line that caused it.
  auto at_line = [](std::size_t line, auto&& make) {
    try {
      return make();
    } catch (const std::invalid_argument& e) {
      throw ParseError(line, e.what());
    }
  };

  const double alpha = real("alpha");
  const double lambda = real("lambda");
  const double T = real("T");
  if (!(T > 0.0) || !std::isfinite(T)) throw ParseError(line_of("T"), "T must be positive");
  const FractionalOrder order = at_line(line_of("alpha"), [&] { return FractionalOrder(alpha); });

  const Entry& fkind = require("f.kind");
  const ConductivityKind fk = at_line(fkind.line, [&] { return parse_conductivity_kind(fkind.value); });
  const auto fparams = list("f.params");
  const double L = real("f.L"), c1 = real("f.c1"), c2 = real("f.c2");
  Conductivity f = at_line(fkind.line, [&] { return Conductivity(fk, fparams, L, c1, c2); });

  SourceKind hk = SourceKind::zero;
  if (entries.count("h.kind")) {
    const Entry& e = entries.at("h.kind");
    hk = at_line(e.line, [&] { return parse_source_kind(e.value); });
  }
  const auto hparams = list("h.params");
  Source h = at_line(line_of("h.kind"), [&] { return Source(hk, hparams, T); });

  ThermistorProblem problem =
      at_line(line_of("lambda"), [&] { return ThermistorProblem(order, lambda, T, f, h); });

  ProblemFile file{problem};
  if (entries.count("mesh.n")) {
    const Entry& e = entries.at("mesh.n");
    std::size_t n = 0;
    const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), n);
    if (ec != std::errc() || ptr != e.value.data() + e.value.size() || n < 1) {
      throw ParseError(e.line, "mesh.n expects a positive integer, got '" + e.value + "'");
    }
    file.mesh_n = n;
  }
  if (entries.count("mesh.grading")) {
    file.mesh_grading = real("mesh.grading");
    if (!(file.mesh_grading >= 1.0)) throw ParseError(line_of("mesh.grading"), "mesh.grading must be >= 1");
  }
  return file;
}

inline ProblemFile parse_problem(const std::string& text) {
  std::istringstream in(text);
  return parse_problem(in);
}

/// Problem file text in a fixed key order; parse_problem inverts it exactly.
inline std::string format_problem(const ProblemFile& file) {
  const ThermistorProblem& p = file.problem;
  std::ostringstream os;
  os << "alpha = " << format_real(p.alpha()) << '\n'
     << "lambda = " << format_real(p.lambda) << '\n'
     << "T = " << format_real(p.T) << '\n'
     << "f.kind = " << to_string(p.f.kind()) << '\n'
     << "f.params = " << format_list(p.f.params()) << '\n'
     << "f.L = " << format_real(p.f.lipschitz()) << '\n'
     << "f.c1 = " << format_real(p.f.c1()) << '\n'
     << "f.c2 = " << format_real(p.f.c2()) << '\n'
     << "h.kind = " << to_string(p.h.kind()) << '\n'
     << "h.params = " << format_list(p.h.params()) << '\n'
     << "mesh.n = " << file.mesh_n << '\n'
     << "mesh.grading = " << format_real(file.mesh_grading) << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Report documents
// ---------------------------------------------------------------------------

/// Builder for the `[section]` / `key = value` report format.
class ReportWriter {
 public:
  ReportWriter& comment(std::string_view text) {
    os_ << "# " << text << '\n';
    return *this;
  }
  ReportWriter& section(std::string_view name) {
    if (os_.tellp() > 0) os_ << '\n';
    os_ << '[' << name << "]\n";
    return *this;
  }
  ReportWriter& raw(std::string_view text) {
    os_ << text;
    return *this;
  }
  ReportWriter& field(std::string_view key, std::string_view value) {
    os_ << key << " = " << value << '\n';
    return *this;
  }
  ReportWriter& field(std::string_view key, const char* value) { return field(key, std::string_view(value)); }
  ReportWriter& field(std::string_view key, double value) { return field(key, format_real(value)); }
  ReportWriter& field(std::string_view key, bool value) { return field(key, value ? "true" : "false"); }
  ReportWriter& field(std::string_view key, int value) { return field(key, std::to_string(value)); }
  ReportWriter& field(std::string_view key, std::size_t value) { return field(key, std::to_string(value)); }

  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

inline void write_problem_section(ReportWriter& w, const ProblemFile& file) {
  w.section("problem").raw(format_problem(file));
}

inline void write_solve_section(ReportWriter& w, const SolveReport& r) {
  w.section("solve")
      .field("converged", r.converged)
      .field("iterations", r.iterations)
      .field("initial_guess", to_string(r.initial_guess))
      .field("N", r.N)
      .field("theoretical_q", r.theoretical_q)
      .field("contraction_certified", r.contraction_certified())
      .field("lambda_threshold", r.lambda_threshold)
      .field("apriori_bound", r.apriori_bound)
      .field("weighted_norm_u", r.weighted_norm_u)
      .field("empirical_rate", r.empirical_rate)
      .field("residual_sup", std::isnan(r.residual_sup) ? std::string("unset") : format_real(r.residual_sup))
      .field("min_u", r.min_u)
      .field("f_clamped", r.f_clamped)
      .field("step_norms", format_list(r.step_norms));
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string solution_csv(const GridFunction& u) {
  std::string s = "t,u\n";
  for (std::size_t k = 0; k < u.size(); ++k) {
    s += format_real(u.node(k));
    s += ',';
    s += format_real(u[k]);
    s += '\n';
  }
  return s;
}

/// Reads (t, u) rows written by solution_csv.
inline std::vector<std::pair<double, double>> read_solution_csv(std::istream& in) {
  std::vector<std::pair<double, double>> rows;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string_view line = detail::trim(raw);
    if (line.empty()) continue;
    if (lineno == 1 && line == "t,u") continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) throw ParseError(lineno, "expected 't,u'");
    const auto t = detail::to_real(line.substr(0, comma));
    const auto u = detail::to_real(line.substr(comma + 1));
    if (!t || !u) throw ParseError(lineno, "bad number in solution row");
    rows.emplace_back(*t, *u);
  }
  if (rows.empty()) throw ParseError(0, "solution file has no rows");
  return rows;
}

}  // namespace fractherm
