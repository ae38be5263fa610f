#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lelab/classifier.hpp"
#include "lelab/radial.hpp"
#include "lelab/verify.hpp"

namespace lelab {

/// Shortest "%.17g" style rendering, locale independent. Non-finite values
/// print as nan, inf, -inf.
std::string format_number(double x);

/// Inverse of format_number. Throws Error(InvalidInput) on trailing junk.
double parse_number(std::string_view text);

/// Minimal streaming JSON builder producing compact, deterministic output.
/// Non-finite numbers are written as null.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);
  JsonWriter& value(double x);
  JsonWriter& value(bool b);
  JsonWriter& value(std::string_view s);
  JsonWriter& value(const char* s) { return value(std::string_view(s)); }
  JsonWriter& value(const std::optional<bool>& b);
  JsonWriter& value(const std::optional<double>& x);
  JsonWriter& integer(long long n);
  JsonWriter& null();

  const std::string& str() const noexcept { return out_; }

 private:
  void separate();

  std::string out_;
  std::vector<bool> has_items_;
  bool after_key_ = false;
};

/// Grid CSV layout, one row per lattice point, header line "# lelab-v1".
inline constexpr std::string_view kGridHeader = "# lelab-v1";
inline constexpr std::string_view kGridColumns =
    "p,q,d,alpha,beta,gamma,H,lambda,mu,jl_margin,x0_plain,x0_jl,criticality,on_or_above_jl,thm_d_le_10,"
    "thm_below_jl,thm_quartic,stable_radial_exists";

/// The RegimeReport fields that the grid CSV carries.
struct GridRow {
  double p, q, d;
  double alpha, beta, gamma, H, lambda, mu;
  double jl_margin, x0_plain, x0_jl;
  Criticality criticality;
  bool on_or_above_jl;
  std::optional<bool> thm_d_le_10;
  std::optional<bool> thm_below_jl;
  std::optional<bool> thm_quartic;
  std::optional<bool> stable_radial_exists;

  bool operator==(const GridRow&) const = default;
};

GridRow to_grid_row(const RegimeReport& r);
void write_grid_csv(std::ostream& out, std::span<const RegimeReport> rows);
/// Throws Error(InvalidInput) on a missing header or malformed row.
std::vector<GridRow> parse_grid_csv(std::istream& in);

inline constexpr std::string_view kRadialHeader = "# lelab-radial-v1";
/// Header, a comment with parameters and status, then r,u,v,du,dv rows.
void write_radial_csv(std::ostream& out, const RadialSolution& sol);
std::vector<RadialState> parse_radial_csv(std::istream& in);

inline constexpr std::string_view kCurveHeader = "# lelab-curve-v1";
void write_curve_csv(std::ostream& out, const CurveTrace& trace);

std::string to_json(const RegimeReport& r);
std::string to_json(const VerificationReport& r);
std::string to_json(const CurveTrace& t);

/// Pieces reused by the command line front end.
void write_params(JsonWriter& w, const SystemParams& p);

}  // namespace lelab
