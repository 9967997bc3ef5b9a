#pragma once

// Command-line front end. run() parses arguments, dispatches one
// subcommand and writes a JSON report (or CSV for convergence tables).
//
// Exit codes: 0 success, 1 internal failure, 2 malformed input,
// 3 precondition violated, 4 inconclusive under --strict.

#include "fkdet/fkdet.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace fkdet::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kSchema = "fkdet-report/1";

enum ExitCode { kOk = 0, kInternal = 1, kBadInput = 2, kPrecondition = 3, kInconclusive = 4 };

struct Options {
  std::string command;
  std::string poly;
  std::size_t dim = 1;
  std::uint64_t prime = 0;
  std::int64_t precision = kDefaultPadicPrecision;
  std::uint64_t grid_n = 0;  // 0: command default
  double offset = 0.0;
  std::string boxes;
  std::string n_list;
  std::string method;
  bool csv = false;
  bool strict = false;
  double tol = -1.0;  // negative: command default
};

/// Malformed flag values (box lists, n lists, methods).
class UsageError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::uint64_t parse_count(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a positive integer: '" + s + "'");
  }
  if (used != s.size() || v == 0 || s[0] == '-') throw UsageError("not a positive integer: '" + s + "'");
  return v;
}

inline std::vector<std::uint64_t> parse_n_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& t : split(s, ',')) out.push_back(parse_count(t));
  if (out.empty()) throw UsageError("empty n list");
  return out;
}

/// "8x8,16x16" or "2,4,8"; a single side is repeated across all axes.
inline std::vector<std::vector<std::uint64_t>> parse_boxes(const std::string& s, std::size_t dim) {
  std::vector<std::vector<std::uint64_t>> out;
  for (const auto& t : split(s, ',')) {
    std::vector<std::uint64_t> box;
    for (const auto& side : split(t, 'x')) box.push_back(parse_count(side));
    if (box.size() == 1) box.assign(dim, box[0]);
    if (box.size() != dim) throw UsageError("box '" + t + "' does not have " + std::to_string(dim) + " sides");
    out.push_back(std::move(box));
  }
  if (out.empty()) throw UsageError("empty box list");
  return out;
}

inline Json padic_json(const PadicScalar& x) {
  Json j;
  if (x.is_zero()) j["valuation"] = nullptr;
  else j["valuation"] = x.valuation();
  j["unit_digits"] = x.unit_digits();
  j["precision"] = x.absolute_precision();
  j["decimal"] = x.decimal();
  return j;
}

inline Json padic_json(const std::optional<PadicScalar>& x) {
  return x ? padic_json(*x) : Json(nullptr);
}

inline Json real_table_json(const RealReport& r) {
  Json t;
  Json entries = Json::array();
  for (const auto& e : r.entries) entries.push_back({{"index", e.index}, {"value", e.value}});
  t["entries"] = entries;
  t["differences"] = r.differences;
  t["limit_estimate"] = r.limit_estimate ? Json(*r.limit_estimate) : Json(nullptr);
  t["final_diagnostic"] = r.final_diagnostic ? Json(*r.final_diagnostic) : Json(nullptr);
  t["verdict"] = to_string(r.verdict);
  return t;
}

inline Json padic_table_json(const PadicReport& r) {
  Json t;
  Json entries = Json::array();
  for (const auto& e : r.entries) entries.push_back({{"index", e.index}, {"value", padic_json(e.value)}});
  t["entries"] = entries;
  t["difference_valuations"] = r.differences;
  t["limit_estimate"] = padic_json(r.limit_estimate);
  t["final_diagnostic"] = r.final_diagnostic ? Json(*r.final_diagnostic) : Json(nullptr);
  t["verdict"] = to_string(r.verdict);
  return t;
}

inline std::string real_table_csv(const RealReport& r) {
  std::ostringstream out;
  out << "index,value,difference\n";
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    out << r.entries[i].index << ',' << Json(r.entries[i].value).dump() << ',';
    if (i > 0) out << Json(r.differences[i - 1]).dump();
    out << '\n';
  }
  return out.str();
}

inline std::string padic_table_csv(const PadicReport& r) {
  std::ostringstream out;
  out << "index,valuation,unit,precision,decimal,difference_valuation\n";
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    const auto& v = r.entries[i].value;
    out << r.entries[i].index << ',' << (v.is_zero() ? std::string() : std::to_string(v.valuation()))
        << ',' << (v.is_zero() ? std::string("0") : v.unit().str()) << ',' << v.absolute_precision()
        << ',' << v.decimal() << ',';
    if (i > 0) out << r.differences[i - 1];
    out << '\n';
  }
  return out.str();
}

inline Json box_json(const std::vector<std::uint64_t>& box) { return Json(box); }

inline Json verdict_json(const ExpansivenessVerdict& v) {
  Json j;
  j["status"] = to_string(v.status);
  j["margin"] = v.margin;
  j["witness_angles"] = v.witness_angles;
  j["witness_value"] = std::isfinite(v.witness_value) ? Json(v.witness_value) : Json(nullptr);
  j["grid_n"] = v.grid_n;
  j["gradient_bound"] = v.gradient_bound;
  j["method"] = v.method;
  return j;
}

/// Residues 0 ... p-1 rendered as an integer polynomial.
inline std::string render_mod_p(const ModPLaurentPoly& g) {
  IntLaurentPoly lift(g.dim());
  for (const auto& [m, c] : g.terms()) lift.add_term(m, BigInt(c));
  return render(lift);
}

inline Json padic_verdict_json(const PadicVerdict& v, std::uint64_t p) {
  Json j;
  j["status"] = to_string(v.status);
  j["prime"] = p;
  j["p_power"] = v.p_power;
  j["reduction"] = render_mod_p(v.reduction);
  j["reason"] = v.reason;
  return j;
}

inline Json heis_json(const HeisenbergValue& h) {
  return {{"value", h.value},
          {"convergence_estimate", h.convergence_estimate},
          {"degraded", h.degraded},
          {"flags", h.flags}};
}

/// Everything a command produces, before serialization.
struct Outcome {
  Json body = Json::object();
  std::vector<std::string> flags;
  std::string route;
  std::string csv;  // convergence table, when the command has one
  bool inconclusive = false;
};

struct Input {
  IntLaurentPoly f;
  std::vector<std::string> names;
};

inline std::uint64_t require_prime_flag(const Options& o) {
  if (o.prime == 0) throw UsageError("--prime is required");
  return o.prime;
}

inline void require_method(const std::string& m, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (m == a) return;
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : "|") + std::string(a);
  throw UsageError("--method must be one of " + list);
}

// ---- commands -------------------------------------------------------------------

inline Outcome cmd_mahler(const Options& o, const Input& in) {
  Outcome r;
  const std::string method = o.method.empty() ? (in.f.dim() == 1 ? "jensen" : "quadrature") : o.method;
  require_method(method, {"jensen", "quadrature"});
  r.body["quantity"] = "mahler_measure";
  r.body["method"] = method;
  if (method == "jensen") {
    if (in.f.dim() != 1) throw DimensionMismatch("jensen needs one variable");
    if (in.f.is_zero()) throw PreconditionError("Mahler measure of the zero polynomial");
    const auto roots = roots_d1(in.f);
    const auto forms = jensen_forms(roots);
    r.body["value"] = forms.leading_form;
    r.body["tolerance"] = std::max(std::abs(forms.leading_form - forms.trailing_form), 1e-12);
    r.body["trailing_form"] = forms.trailing_form;
    r.body["roots_on_circle"] = forms.roots_on_circle;
    r.body["max_root_residual"] = roots.max_residual;
    r.route = "log|a_m| plus log|alpha| over roots outside the unit circle";
  } else {
    const std::uint64_t n = o.grid_n ? o.grid_n : 64;
    const double v = mahler_quadrature(in.f, TorusGridConfig::uniform(in.f.dim(), n, o.offset));
    r.body["value"] = v;
    r.body["grid_n"] = n;
    r.body["offset"] = o.offset;
    if (n >= 2) {
      const double half = mahler_quadrature(in.f, TorusGridConfig::uniform(in.f.dim(), n / 2, o.offset));
      r.body["tolerance"] = std::abs(v - half);
      r.body["tolerance_kind"] = "difference from grid n/2";
    } else {
      r.body["tolerance"] = nullptr;
    }
    r.route = "average of log|f^| over the rotated roots-of-unity grid";
  }
  return r;
}

inline Outcome cmd_fk_limit(const Options& o, const Input& in) {
  Outcome r;
  const auto ns = o.n_list.empty() ? std::vector<std::uint64_t>{4, 8, 16, 32} : parse_n_list(o.n_list);
  FkLimitConfig cfg;
  if (o.tol > 0) cfg.tolerance = o.tol;
  const auto rep = fk_limit(in.f, ns, cfg);
  r.body["quantity"] = "fk_limit";
  r.body["tolerance"] = cfg.tolerance;
  r.body["verified"] = rep.verified;
  r.body["expansiveness"] = verdict_json(rep.verdict);
  r.body["table"] = real_table_json(rep.table);
  r.flags = rep.table.flags;
  r.csv = real_table_csv(rep.table);
  r.inconclusive = rep.table.verdict == ConvergenceVerdict::Inconclusive;
  r.route = "finite quotient determinants along growing roots-of-unity grids";
  return r;
}

inline Outcome cmd_fixcount(const Options& o, const Input& in) {
  Outcome r;
  if (o.boxes.empty()) throw UsageError("--boxes is required");
  Json rows = Json::array();
  for (const auto& box : parse_boxes(o.boxes, in.f.dim())) {
    const auto rec = fix_count(in.f, box);
    Json row;
    row["box"] = box_json(box);
    row["index"] = rec.index;
    row["determinant"] = rec.value.str();
    row["fixed_points"] = rec.is_zero ? Json("infinite") : Json(abs_value(rec.value).str());
    row["log_count_per_index"] =
        rec.is_zero ? Json(nullptr) : Json(log_abs(rec.value) / static_cast<double>(rec.index));
    if (rec.index <= FixStructureConfig{}.volume_cap) {
      Json divisors = Json::array();
      for (const auto& d : fix_structure(in.f, box)) divisors.push_back(d.str());
      row["elementary_divisors"] = divisors;
    }
    rows.push_back(row);
  }
  r.body["quantity"] = "fix_count";
  r.body["exact"] = true;
  r.body["counts"] = rows;
  r.route = "exact determinant of the multilevel circulant by CRT over primes";
  return r;
}

inline Outcome cmd_entropy(const Options& o, const Input& in) {
  Outcome r;
  EntropyConfig cfg;
  if (o.grid_n) cfg.grid_n = o.grid_n;
  if (!o.boxes.empty()) cfg.boxes = parse_boxes(o.boxes, in.f.dim());
  if (o.tol > 0) cfg.tolerance = o.tol;
  const auto rep = entropy_report(in.f, cfg);
  r.body["quantity"] = "entropy";
  r.body["tolerance"] = cfg.tolerance;
  r.body["expansiveness"] = verdict_json(rep.verdict);
  r.body["mahler_measure"] = {{"value", rep.mahler}, {"method", rep.mahler_method}};
  r.body["periodic_entropy"] = real_table_json(rep.periodic.table);
  r.body["pairing_value"] = rep.pairing_value;
  r.body["verified"] = rep.verified;
  r.body["routes_agree"] = rep.routes_agree;
  r.flags = rep.flags;
  r.csv = real_table_csv(rep.periodic.table);
  r.inconclusive = !rep.verified || !rep.routes_agree;
  r.route = "Mahler measure, periodic point growth and pairing value of an expansive system";
  return r;
}

inline Outcome cmd_expansive(const Options&, const Input& in) {
  Outcome r;
  const auto v = wiener_unit_check(in.f);
  r.body["quantity"] = "expansiveness";
  r.body["verdict"] = verdict_json(v);
  r.inconclusive = v.status == ExpansivenessStatus::Undetermined;
  r.route = "grid minimum of |f^| minus gradient bound times mesh";
  return r;
}

inline Outcome cmd_padic_expansive(const Options& o, const Input& in) {
  Outcome r;
  const auto p = require_prime_flag(o);
  r.body["quantity"] = "padic_expansiveness";
  r.body["verdict"] = padic_verdict_json(padic_expansive_check(in.f, p), p);
  r.body["exact"] = true;
  r.route = "reduction of the p-stripped polynomial modulo p is a monomial";
  return r;
}

inline Outcome cmd_padic_mahler(const Options& o, const Input& in) {
  Outcome r;
  const auto p = require_prime_flag(o);
  const std::string method = o.method.empty() ? (in.f.dim() == 1 ? "closed-form" : "snirelman") : o.method;
  require_method(method, {"closed-form", "snirelman"});
  r.body["quantity"] = "padic_mahler_measure";
  r.body["method"] = method;
  r.body["prime"] = p;
  if (method == "closed-form") {
    if (in.f.dim() != 1) throw DimensionMismatch("closed-form needs one variable");
    const auto cf = mp_closed_form_detail(in.f, p, o.precision);
    r.body["value"] = padic_json(cf.trailing_form);
    r.body["leading_form"] = padic_json(cf.leading_form);
    Json roots = Json::array();
    for (const auto& a : cf.roots) roots.push_back(padic_json(a));
    r.body["roots"] = roots;
    r.route = "log_p a_r minus log_p alpha over roots of positive valuation";
  } else {
    SnirelmanConfig sc;
    sc.precision = o.precision;
    const auto ns = o.n_list.empty() ? default_snirelman_n_list(p, in.f.dim(), sc.degree_cap)
                                     : parse_n_list(o.n_list);
    const auto rep = snirelman_integral(in.f, p, ns, sc);
    r.body["value"] = padic_json(rep.limit_estimate);
    r.body["target_digits"] = sc.target;
    r.body["table"] = padic_table_json(rep);
    r.flags = rep.flags;
    r.csv = padic_table_csv(rep);
    r.inconclusive = rep.verdict == ConvergenceVerdict::Inconclusive;
    r.route = "averages of log_p|f| over n-th roots of unity with n prime to p";
  }
  return r;
}

inline Outcome cmd_padic_entropy(const Options& o, const Input& in) {
  Outcome r;
  const auto p = require_prime_flag(o);
  PadicPeriodicConfig cfg;
  cfg.precision = o.precision;
  const auto boxes = o.boxes.empty() ? default_padic_boxes(in.f.dim(), cfg.fix.volume_cap)
                                     : parse_boxes(o.boxes, in.f.dim());
  const auto rep = h_p_per(in.f, p, boxes, cfg);
  r.body["quantity"] = "padic_periodic_entropy";
  r.body["prime"] = p;
  r.body["target_digits"] = cfg.target;
  r.body["table"] = padic_table_json(rep.table);
  Json counts = Json::array();
  for (const auto& c : rep.counts)
    counts.push_back({{"box", box_json(c.box)}, {"index", c.index}, {"determinant", c.value.str()}});
  r.body["counts"] = counts;
  r.flags = rep.table.flags;
  r.csv = padic_table_csv(rep.table);
  r.inconclusive = rep.table.verdict == ConvergenceVerdict::Inconclusive;
  r.route = "log_p of periodic point counts divided by the index";
  return r;
}

inline Outcome cmd_padic_det(const Options& o, const Input& in) {
  Outcome r;
  const auto p = require_prime_flag(o);
  PadicDetConfig cfg;
  cfg.precision = o.precision;
  if (!o.n_list.empty()) cfg.n_list = parse_n_list(o.n_list);
  if (!o.boxes.empty()) cfg.boxes = parse_boxes(o.boxes, in.f.dim());
  const auto rep = log_p_det(in.f, p, cfg);
  r.body["quantity"] = "log_p_det";
  r.body["prime"] = p;
  r.body["verdict"] = padic_verdict_json(rep.verdict, p);
  r.body["closed_form"] = padic_json(rep.closed_form);
  r.body["closed_form_status"] = rep.closed_form_status;
  r.body["snirelman"] = rep.snirelman ? padic_table_json(*rep.snirelman) : Json(nullptr);
  r.body["periodic"] = rep.periodic ? padic_table_json(rep.periodic->table) : Json(nullptr);
  r.body["pairing_value"] = padic_json(rep.pairing_value);
  r.body["common_precision"] = rep.common_precision;
  r.body["routes_agree"] = rep.routes_agree;
  r.flags = rep.flags;
  for (const auto& f : rep.flags)
    if (f.rfind("Inconclusive", 0) == 0 || f.rfind("Unverified", 0) == 0) r.inconclusive = true;
  if (!rep.routes_agree) r.inconclusive = true;
  r.route = "closed form, Snirelman integral and periodic counts compared at common precision";
  return r;
}

inline Outcome cmd_mp_sigma(const Options& o, const Input& in) {
  Outcome r;
  const auto p = require_prime_flag(o);
  const auto forms = mp_sigma_rational_detail(in.f, p, o.precision);
  r.body["quantity"] = "mp_sigma";
  r.body["prime"] = p;
  r.body["value"] = padic_json(forms.trailing_form);
  r.body["leading_form"] = padic_json(forms.leading_form);
  Json roots = Json::array();
  for (const auto& a : forms.roots)
    roots.push_back({{"numerator", a.num.str()}, {"denominator", a.den.str()}, {"multiplicity", a.multiplicity}});
  r.body["rational_roots"] = roots;
  r.route = "log_p a_r minus log_p alpha over rational roots inside the complex unit circle";
  return r;
}

inline Outcome cmd_heisenberg(const Options& o, const Input& in) {
  Outcome r;
  const std::string method = o.method.empty() ? "compare" : o.method;
  require_method(method, {"heisenberg", "abelianized", "compare"});
  HeisenbergConfig cfg;
  if (o.grid_n) cfg.outer_n = cfg.inner_n = o.grid_n;
  cfg.outer_offset = o.offset;
  r.body["quantity"] = "heisenberg_log_det";
  r.body["method"] = method;
  r.body["grid_n"] = cfg.outer_n;
  if (method == "heisenberg") {
    const auto h = heis_logdet(in.f, cfg);
    r.body["value"] = h.value;
    r.body["tolerance"] = h.convergence_estimate;
    r.body["degraded"] = h.degraded;
    r.flags = h.flags;
    r.route = "outer average over z of the positive part of the Mahler measure in y";
  } else if (method == "abelianized") {
    const auto h = abelianized_logdet(in.f, cfg);
    r.body["value"] = h.value;
    r.body["tolerance"] = h.convergence_estimate;
    r.flags = h.flags;
    r.route = "average of log+|a| over the two-torus";
  } else {
    const double tol = o.tol > 0 ? o.tol : 1e-6;
    const auto c = compare_heisenberg(in.f, cfg, tol);
    r.body["heisenberg"] = heis_json(c.heisenberg);
    r.body["abelianized"] = heis_json(c.abelianized);
    r.body["difference"] = c.difference;
    r.body["inequality_holds"] = c.inequality_holds;
    r.body["tolerance"] = c.tolerance;
    for (const auto& f : c.heisenberg.flags) r.flags.push_back(f);
    for (const auto& f : c.abelianized.flags) r.flags.push_back(f);
    r.route = "Heisenberg value against its abelianized counterpart";
  }
  return r;
}

struct Command {
  const char* name;
  const char* help;
  Outcome (*fn)(const Options&, const Input&);
};

inline const std::vector<Command>& commands() {
  static const std::vector<Command> table = {
      {"mahler", "Mahler measure (jensen|quadrature)", cmd_mahler},
      {"fk-limit", "grid Mahler sums along --n-list", cmd_fk_limit},
      {"fixcount", "exact periodic point counts for --boxes", cmd_fixcount},
      {"entropy", "Mahler measure, periodic entropy and pairing value", cmd_entropy},
      {"expansive", "certified nonvanishing on the torus", cmd_expansive},
      {"padic-expansive", "p-adic expansiveness decision", cmd_padic_expansive},
      {"padic-mahler", "p-adic Mahler measure (closed-form|snirelman)", cmd_padic_mahler},
      {"padic-entropy", "p-adic periodic entropy along --boxes", cmd_padic_entropy},
      {"padic-det", "log_p det by all available routes", cmd_padic_det},
      {"mp-sigma", "p-adic measure over rational roots", cmd_mp_sigma},
      {"heisenberg", "Heisenberg determinant of 1 - a(y,z) x (heisenberg|abelianized|compare)",
       cmd_heisenberg},
  };
  return table;
}

inline Json envelope(const Options& o, const Input& in) {
  Json j;
  j["schema"] = kSchema;
  j["tool_version"] = kToolVersion;
  j["command"] = o.command;
  Json input;
  input["poly"] = render(in.f, in.names);
  input["dim"] = in.f.dim();
  input["variables"] = in.names;
  if (o.prime) input["prime"] = o.prime;
  if (!o.boxes.empty()) input["boxes"] = o.boxes;
  if (!o.n_list.empty()) input["n_list"] = o.n_list;
  if (o.command.rfind("padic", 0) == 0 || o.command == "mp-sigma") input["precision"] = o.precision;
  j["input"] = input;
  return j;
}

inline int report_error(std::ostream& out, const Options& o, int code, const std::string& kind,
                        const std::string& message, std::optional<std::size_t> position = {}) {
  Json j;
  j["schema"] = kSchema;
  j["tool_version"] = kToolVersion;
  j["command"] = o.command;
  j["error"] = {{"kind", kind}, {"message", message}};
  if (position) j["error"]["position"] = *position;
  j["exit_code"] = code;
  out << j.dump(2) << '\n';
  return code;
}

}  // namespace detail

/// Runs one invocation; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Fuglede-Kadison determinants, Mahler measures and entropy"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  std::vector<CLI::App*> subs;
  for (const auto& c : detail::commands()) {
    auto* s = app.add_subcommand(c.name, c.help);
    s->add_option("--poly", o.poly, "Laurent polynomial")->required();
    s->add_option("--dim", o.dim, "number of variables");
    s->add_option("--prime", o.prime, "prime p");
    s->add_option("--precision", o.precision, "p-adic digits");
    s->add_option("--grid-n", o.grid_n, "grid nodes per axis");
    s->add_option("--offset", o.offset, "grid rotation angle");
    s->add_option("--boxes", o.boxes, "boxes, e.g. 8x8,16x16 or 2,4,8");
    s->add_option("--n-list", o.n_list, "comma-separated n");
    s->add_option("--method", o.method, "computation route");
    s->add_option("--tol", o.tol, "tolerance");
    s->add_flag("--strict", o.strict, "exit 4 when inconclusive");
    auto* json = s->add_flag("--json", "JSON output (default)");
    s->add_flag("--csv", o.csv, "CSV convergence table")->excludes(json);
    subs.push_back(s);
  }

  std::vector<const char*> argv{"fkdet"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }
  for (auto* s : subs)
    if (s->parsed()) o.command = s->get_name();

  detail::Input in;
  try {
    if (o.precision <= 0) throw UsageError("--precision must be positive");
    if (o.command == "heisenberg") {
      in.names = {"y", "z"};
    } else {
      if (o.dim == 0) throw UsageError("--dim must be positive");
      in.names = default_variable_names(o.dim);
    }
    in.f = parse_poly(o.poly, in.names);

    detail::Outcome r;
    for (const auto& c : detail::commands())
      if (o.command == c.name) r = c.fn(o, in);

    if (o.csv && !r.csv.empty()) {
      out << r.csv;
    } else {
      Json j = detail::envelope(o, in);
      for (auto& [k, v] : r.body.items()) j[k] = v;
      j["flags"] = r.flags;
      j["route"] = r.route;
      out << j.dump(2) << '\n';
    }
    return o.strict && r.inconclusive ? kInconclusive : kOk;
  } catch (const ParseError& e) {
    return detail::report_error(out, o, kBadInput, "ParseError", e.message(), e.position());
  } catch (const UsageError& e) {
    return detail::report_error(out, o, kBadInput, "UsageError", e.what());
  } catch (const PreconditionError& e) {
    return detail::report_error(out, o, kPrecondition, "PreconditionError", e.what());
  } catch (const std::exception& e) {
    return detail::report_error(out, o, kInternal, "Error", e.what());
  }
}

}  // namespace fkdet::cli
