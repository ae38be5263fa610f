#include "lelab/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "lelab/error.hpp"

namespace lelab {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
  double x = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::InvalidInput, "not a number: '" + std::string(text) + "'");
  }
  return x;
}

// ---- JSON ----

void JsonWriter::separate() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (!has_items_.empty()) {
    if (has_items_.back()) out_ += ',';
    has_items_.back() = true;
  }
}

JsonWriter& JsonWriter::begin_object() {
  separate();
  out_ += '{';
  has_items_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  has_items_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separate();
  out_ += '[';
  has_items_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  has_items_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
  value(k);
  out_ += ':';
  after_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double x) {
  if (!std::isfinite(x)) return null();
  separate();
  out_ += format_number(x);
  return *this;
}

JsonWriter& JsonWriter::value(bool b) {
  separate();
  out_ += b ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(std::string_view s) {
  separate();
  out_ += '"';
  for (const char ch : s) {
    switch (ch) {
      case '"': out_ += "\\\""; break;
      case '\\': out_ += "\\\\"; break;
      case '\n': out_ += "\\n"; break;
      case '\t': out_ += "\\t"; break;
      case '\r': out_ += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(ch));
          out_ += buf;
        } else {
          out_ += ch;
        }
    }
  }
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::value(const std::optional<bool>& b) { return b ? value(*b) : null(); }
JsonWriter& JsonWriter::value(const std::optional<double>& x) { return x ? value(*x) : null(); }

JsonWriter& JsonWriter::integer(long long n) {
  separate();
  out_ += std::to_string(n);
  return *this;
}

JsonWriter& JsonWriter::null() {
  separate();
  out_ += "null";
  return *this;
}

void write_params(JsonWriter& w, const SystemParams& p) {
  w.begin_object().key("p").value(p.p()).key("q").value(p.q()).key("d").value(p.d()).end_object();
}

std::string to_json(const RegimeReport& r) {
  JsonWriter w;
  w.begin_object();
  w.key("params");
  write_params(w, r.params);
  const auto& c = r.constants;
  w.key("constants").begin_object();
  w.key("alpha").value(c.alpha).key("beta").value(c.beta).key("gamma").value(c.gamma);
  w.key("H").value(c.H).key("lambda").value(c.lambda).key("mu").value(c.mu);
  w.key("a_coef").value(c.a_coef).key("b_coef").value(c.b_coef);
  w.end_object();
  w.key("criticality").value(to_string(r.criticality));
  w.key("jl_margin").value(r.jl_margin);
  w.key("x0_plain").value(r.x0_plain);
  w.key("x0_jl").value(r.x0_jl);
  w.key("on_or_above_jl").value(r.on_or_above_jl);
  w.key("thm_d_le_10_applies").value(r.thm_d_le_10_applies);
  w.key("thm_below_jl_applies").value(r.thm_below_jl_applies);
  w.key("thm_quartic_applies").value(r.thm_quartic_applies);
  w.key("thm_stable_radial_exists").value(r.thm_stable_radial_exists);
  w.key("notes").begin_array();
  for (const auto& n : r.notes) w.value(n);
  w.end_array();
  w.end_object();
  return w.str();
}

std::string to_json(const VerificationReport& r) {
  JsonWriter w;
  w.begin_object();
  w.key("check").value(r.check);
  w.key("params");
  write_params(w, r.params);
  w.key("lhs").value(r.lhs);
  w.key("rhs").value(r.rhs);
  w.key("residual").value(r.residual);
  w.key("tolerance").value(r.tolerance);
  w.key("passed").value(r.passed);
  w.key("details").value(r.details);
  w.end_object();
  return w.str();
}

std::string to_json(const CurveTrace& t) {
  JsonWriter w;
  w.begin_object();
  w.key("d").value(t.d);
  w.key("curve").value(to_string(t.curve));
  w.key("empty").value(t.empty());
  w.key("samples").begin_array();
  for (const auto& s : t.samples) {
    w.begin_object().key("p").value(s.p).key("q").value(s.q).key("status").value(to_string(s.status)).end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

// ---- CSV ----

namespace {

std::string flag(const std::optional<bool>& b) {
  if (!b) return "na";
  return *b ? "true" : "false";
}

std::optional<bool> parse_flag(std::string_view s) {
  if (s == "na") return std::nullopt;
  if (s == "true") return true;
  if (s == "false") return false;
  throw Error(ErrorCode::InvalidInput, "not a flag: '" + std::string(s) + "'");
}

Criticality parse_criticality(std::string_view s) {
  for (auto c : {Criticality::Subcritical, Criticality::CriticalHyperbola, Criticality::Supercritical}) {
    if (to_string(c) == s) return c;
  }
  throw Error(ErrorCode::InvalidInput, "unknown criticality '" + std::string(s) + "'");
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

void expect_line(std::istream& in, std::string_view want) {
  std::string line;
  if (!std::getline(in, line) || line != want) {
    throw Error(ErrorCode::InvalidInput, "expected '" + std::string(want) + "', got '" + line + "'");
  }
}

}  // namespace

GridRow to_grid_row(const RegimeReport& r) {
  const auto& c = r.constants;
  return {r.params.p(),
          r.params.q(),
          r.params.d(),
          c.alpha,
          c.beta,
          c.gamma,
          c.H,
          c.lambda,
          c.mu,
          r.jl_margin,
          r.x0_plain,
          r.x0_jl,
          r.criticality,
          r.on_or_above_jl,
          r.thm_d_le_10_applies,
          r.thm_below_jl_applies,
          r.thm_quartic_applies,
          r.thm_stable_radial_exists};
}

void write_grid_csv(std::ostream& out, std::span<const RegimeReport> rows) {
  out << kGridHeader << '\n' << kGridColumns << '\n';
  for (const auto& rep : rows) {
    const GridRow g = to_grid_row(rep);
    for (const double x : {g.p, g.q, g.d, g.alpha, g.beta, g.gamma, g.H, g.lambda, g.mu, g.jl_margin, g.x0_plain, g.x0_jl}) {
      out << format_number(x) << ',';
    }
    out << to_string(g.criticality) << ',' << (g.on_or_above_jl ? "true" : "false") << ',' << flag(g.thm_d_le_10) << ','
        << flag(g.thm_below_jl) << ',' << flag(g.thm_quartic) << ',' << flag(g.stable_radial_exists) << '\n';
  }
}

std::vector<GridRow> parse_grid_csv(std::istream& in) {
  expect_line(in, kGridHeader);
  expect_line(in, kGridColumns);
  std::vector<GridRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 18) throw Error(ErrorCode::InvalidInput, "grid row has " + std::to_string(f.size()) + " fields");
    double x[12];
    for (int i = 0; i < 12; ++i) x[i] = parse_number(f[static_cast<std::size_t>(i)]);
    const auto on = parse_flag(f[13]);
    if (!on) throw Error(ErrorCode::InvalidInput, "on_or_above_jl cannot be na");
    rows.push_back({x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7], x[8], x[9], x[10], x[11],
                    parse_criticality(f[12]), *on, parse_flag(f[14]), parse_flag(f[15]), parse_flag(f[16]),
                    parse_flag(f[17])});
  }
  return rows;
}

void write_radial_csv(std::ostream& out, const RadialSolution& sol) {
  const auto& P = sol.params();
  out << kRadialHeader << '\n';
  out << "# p=" << format_number(P.p()) << " q=" << format_number(P.q()) << " d=" << format_number(P.d())
      << " u0=" << format_number(sol.u0()) << " v0=" << format_number(sol.v0()) << " status=" << to_string(sol.status().kind)
      << " r_end=" << format_number(sol.status().r) << '\n';
  out << "r,u,v,du,dv\n";
  for (const auto& s : sol.samples()) {
    out << format_number(s.r) << ',' << format_number(s.u) << ',' << format_number(s.v) << ',' << format_number(s.du) << ','
        << format_number(s.dv) << '\n';
  }
}

std::vector<RadialState> parse_radial_csv(std::istream& in) {
  expect_line(in, kRadialHeader);
  std::vector<RadialState> out;
  std::string line;
  bool seen_columns = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!seen_columns) {
      if (line != "r,u,v,du,dv") throw Error(ErrorCode::InvalidInput, "unexpected radial columns '" + line + "'");
      seen_columns = true;
      continue;
    }
    const auto f = split(line);
    if (f.size() != 5) throw Error(ErrorCode::InvalidInput, "radial row needs 5 fields");
    out.push_back({parse_number(f[0]), parse_number(f[1]), parse_number(f[2]), parse_number(f[3]), parse_number(f[4])});
  }
  return out;
}

void write_curve_csv(std::ostream& out, const CurveTrace& trace) {
  out << kCurveHeader << '\n';
  out << "# d=" << format_number(trace.d) << " curve=" << to_string(trace.curve) << '\n';
  out << "p,q,status\n";
  for (const auto& s : trace.samples) {
    out << format_number(s.p) << ',' << format_number(s.q) << ',' << to_string(s.status) << '\n';
  }
}

}  // namespace lelab
