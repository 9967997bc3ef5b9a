// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include "cli.hpp"
#include "fkdet/fkdet.hpp"
#include "oracles.hpp"
#include "process.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace fkdet;

namespace {

class Check {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && failure_.empty()) failure_ = what;
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream s;
    s.precision(17);
    s << what << ": got " << got << ", want " << want << " +- " << tol;
    require(std::abs(got - want) <= tol, s.str());
  }
  const std::string& failure() const { return failure_; }

 private:
  std::string failure_;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<void(Check&)> body;
};

IntLaurentPoly P(const char* text, std::size_t dim = 1) { return parse_poly(text, dim); }

const double kLog2 = std::log(2.0);

/// (1/n) log(2^n - 1), accurate for all n.
double z_minus_two_grid_value(std::uint64_t n) {
  return kLog2 + std::log1p(-std::ldexp(1.0, -static_cast<int>(n))) / static_cast<double>(n);
}

BigInt pow2(unsigned n) { return BigInt(1) << n; }

cli::Json cli_json(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  if (cli::run(args, out, err) != 0) return nullptr;
  return cli::Json::parse(out.str());
}

// ---- criteria -----------------------------------------------------------------

void jensen_exactness(Check& c) {
  const auto a = cli_json({"mahler", "--poly", "x - 2", "--dim", "1", "--method", "jensen"});
  c.require(!a.is_null(), "mahler z-2 failed");
  if (!a.is_null()) c.near(a["value"].get<double>(), kLog2, 1e-12, "m(z-2)");
  const auto b = cli_json({"mahler", "--poly", "x^2 - x - 1", "--dim", "1", "--method", "jensen"});
  c.require(!b.is_null(), "mahler z^2-z-1 failed");
  if (!b.is_null())
    c.near(b["value"].get<double>(), std::log((1.0 + std::sqrt(5.0)) / 2.0), 1e-10, "m(z^2-z-1)");
  const std::vector<const char*> cyclotomic = {
      "z - 1", "z + 1", "z^2 + z + 1", "z^2 + 1", "z^4 + z^3 + z^2 + z + 1", "z^2 - z + 1",
      "z^4 - z^2 + 1", "z^6 + z^3 + 1", "z^4 + 1"};
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    IntLaurentPoly f = IntLaurentPoly::constant(1, 1);
    std::string name;
    const int factors = 1 + trial % 4;
    for (int i = 0; i < factors; ++i) {
      const char* phi = cyclotomic[rng() % cyclotomic.size()];
      f = f * P(phi);
      name += std::string("(") + phi + ")";
    }
    c.require(mahler_jensen(f) == 0.0, "nonzero measure for cyclotomic product " + name);
  }
}

void grid_limit(Check& c) {
  const auto f = P("z - 2");
  for (unsigned k = 2; k <= 10; ++k) {
    const std::uint64_t n = 1ULL << k;
    const double q = mahler_quadrature(f, TorusGridConfig::uniform(1, n));
    c.near(q, z_minus_two_grid_value(n), 1e-12, "grid n=" + std::to_string(n));
    if (k == 10) c.near(q, kLog2, 1e-3, "n=1024 against log 2");
  }
}

void exact_float_cross_route(Check& c) {
  struct Case {
    const char* text;
    std::size_t dim;
  };
  std::size_t compared = 0;
  for (const Case& k : {Case{"z - 2", 1}, Case{"3 + x + y", 2}, Case{"z^2 - z - 1", 1}}) {
    const auto f = P(k.text, k.dim);
    std::vector<std::vector<std::uint64_t>> boxes;
    if (k.dim == 1) {
      for (std::uint64_t n = 1; n <= 1024; ++n) boxes.push_back({n});
    } else {
      for (std::uint64_t a = 1; a <= 32; ++a)
        for (std::uint64_t b = 1; b <= 32; ++b) boxes.push_back({a, b});
      boxes.push_back({1, 1024});
      boxes.push_back({1024, 1});
      boxes.push_back({2, 512});
    }
    for (const auto& box : boxes) {
      const auto rec = fix_count(f, box);
      if (rec.is_zero) continue;
      const double exact = log_abs(rec.value) / static_cast<double>(rec.index);
      const double quad = mahler_quadrature(f, TorusGridConfig::box(box));
      std::string name = k.text;
      for (auto n : box) name += " " + std::to_string(n);
      c.require(std::abs(exact - quad) <= 1e-9 * std::abs(quad) + 1e-15,
                "fix_count vs grid sum at " + name);
      ++compared;
    }
  }
  c.require(compared > 2000, "too few boxes compared");
  const auto f = P("z - 2");
  for (unsigned n = 1; n <= 64; ++n) {
    const std::vector<std::uint64_t> box{n};
    const auto rec = fix_count(f, box);
    c.require(abs_value(rec.value) == pow2(n) - 1, "fix_count(z-2, " + std::to_string(n) + ")");
  }
}

void multiplicativity(Check& c) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = oracle::random_poly_d1(rng, 1 + trial % 4, 5);
    const auto g = oracle::random_poly_d1(rng, 1 + (trial / 4) % 4, 5);
    const auto fg = f * g;
    c.near(mahler_jensen(fg), mahler_jensen(f) + mahler_jensen(g), 1e-8,
           "additivity for " + render(f) + " and " + render(g));
    for (std::uint64_t n : {1, 2, 3, 5, 8, 12}) {
      const std::vector<std::uint64_t> box{n};
      c.require(fix_count(fg, box).value == fix_count(f, box).value * fix_count(g, box).value,
                "fix_count multiplicativity for " + render(f) + " and " + render(g));
    }
  }
}

void expansiveness(Check& c) {
  const auto e = wiener_unit_check(P("3 + x + y", 2));
  c.require(e.status == ExpansivenessStatus::Expansive && e.margin > 0, "3+x+y not certified");
  for (const auto& [text, dim] : std::vector<std::pair<const char*, std::size_t>>{{"1 + x + y", 2}, {"z - 1", 1}}) {
    const auto f = P(text, dim);
    const auto v = wiener_unit_check(f);
    c.require(v.status == ExpansivenessStatus::LikelyNotExpansive, std::string(text) + " not flagged");
    c.require(v.witness_angles.size() == dim, std::string(text) + " has no witness");
    if (v.witness_angles.size() == dim)
      c.require(std::abs(evaluate_on_torus(f, v.witness_angles)) <= 1e-8 * to_double(f.one_norm()),
                std::string(text) + " witness is not near a zero");
  }
  std::vector<IntLaurentPoly> inputs = {P("3 + x + y", 2), P("z - 2"), P("5 + x - y + x*y", 2),
                                        P("4 + x + y + z", 3), P("2*x^2 - x^-1 + 6", 1)};
  std::mt19937_64 rng(5);
  while (inputs.size() < 20) inputs.push_back(oracle::random_poly(rng, 1 + inputs.size() % 2, 4, -2, 2, 3));
  std::size_t certified = 0;
  for (const auto& f : inputs) {
    const auto v = wiener_unit_check(f);
    if (v.status != ExpansivenessStatus::Expansive) continue;
    ++certified;
    const auto values = evaluate_grid(f, TorusGridConfig::uniform(f.dim(), 4 * v.grid_n, 0.0));
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& z : values) lo = std::min(lo, std::abs(z));
    c.require(lo >= v.margin, "refined grid goes below the margin for " + render(f));
  }
  c.require(certified >= 5, "too few certified inputs");
}

void padic_identities(Check& c) {
  const auto f = P("3*z - 10");
  const std::uint64_t p = 5;
  const std::int64_t N = 20;
  const auto closed = mp_closed_form(f, p, N);
  const auto log3 = iwasawa_log(padic_of_integer(3, p, N));
  c.require(agrees_mod(closed, log3, std::min(closed.absolute_precision(), log3.absolute_precision())),
            "closed form differs from log_5(3)");
  c.require(closed.absolute_precision() >= 16, "closed form precision below 16 digits");
  PadicPeriodicConfig pc;
  pc.precision = N;
  const auto per = h_p_per(f, p, {{2}, {4}, {8}, {16}, {32}}, pc);
  c.require(per.table.limit_estimate && agrees_mod(*per.table.limit_estimate, closed, 4),
            "periodic limit differs from the closed form mod 5^4");
  SnirelmanConfig sc;
  sc.precision = N;
  const auto sn = snirelman_integral(f, p, default_snirelman_n_list(p, 1), sc);
  c.require(sn.limit_estimate && agrees_mod(*sn.limit_estimate, closed, 4),
            "Snirelman estimate differs from the closed form mod 5^4");
  c.require(sn.final_diagnostic && *sn.final_diagnostic >= 4, "Snirelman final difference valuation < 4");
  std::size_t late = 0;
  for (const auto& e : sn.entries)
    if (e.index >= 8) {
      ++late;
      c.require(agrees_mod(e.value, closed, 4), "Snirelman entry n=" + std::to_string(e.index));
    }
  c.require(late >= 10, "too few Snirelman entries");
}

void padic_expansiveness(Check& c) {
  struct Case {
    const char* text;
    std::uint64_t p;
    bool expansive;
  };
  for (const Case& k : {Case{"3*z - 10", 5, true}, Case{"z - 3", 5, false}, Case{"z - 2", 3, false}}) {
    const auto f = P(k.text);
    for (int sign : {1, -1})
      for (std::int64_t v = -3; v <= 3; ++v)
        for (int scale = 0; scale <= 2; ++scale) {
          IntLaurentPoly g = f * IntLaurentPoly::monomial(Monomial{v}, BigInt(sign));
          for (int s = 0; s < scale; ++s) g = g * IntLaurentPoly::constant(1, BigInt(k.p));
          c.require(padic_expansive_check(g, k.p).expansive() == k.expansive,
                    "wrong decision for " + render(g) + " at p=" + std::to_string(k.p));
        }
  }
}

void iwasawa_log_units(Check& c) {
  for (std::uint64_t p : {2, 3, 5, 7, 11, 101}) {
    c.require(iwasawa_log(padic_of_integer(BigInt(p), p, 24)).is_zero(), "log_p(p) != 0");
    c.require(iwasawa_log(padic_of_integer(-1, p, 24)).is_zero(), "log_p(-1) != 0");
  }
  const auto l6 = iwasawa_log(padic_of_integer(6, 5, 12));
  const BigInt rep = prime_power(5, l6.valuation()) * l6.unit();
  c.require(l6.valuation() >= 0 && rep % 625 == 555, "log_5(6) mod 5^4 is " + BigInt(rep % 625).str());
  std::mt19937_64 rng(8);
  const std::vector<std::uint64_t> primes = {2, 3, 5, 7, 11, 13};
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint64_t p = primes[trial % primes.size()];
    std::uniform_int_distribution<std::int64_t> prec(6, 30);
    auto unit = [&](std::int64_t n) {
      const BigInt m = prime_power(p, n);
      BigInt x = 0;
      for (int i = 0; i < 4; ++i) x = (x << 63) + BigInt(rng() >> 1);
      x = x % m;
      if (x % BigInt(p) == 0) x += 1;
      return padic_of_integer(x, p, n);
    };
    const auto a = unit(prec(rng)), b = unit(prec(rng));
    const auto lhs = iwasawa_log(a * b), rhs = iwasawa_log(a) + iwasawa_log(b);
    const std::int64_t m = std::min(lhs.absolute_precision(), rhs.absolute_precision());
    c.require(m >= 5 && agrees_mod(lhs, rhs, m),
              "log_p(ab) != log_p(a) + log_p(b) at p=" + std::to_string(p));
  }
}

void heisenberg(Check& c) {
  const auto A = [](const char* text) { return parse_poly(text, {"y", "z"}); };
  const auto yz = A("y + z");
  c.near(heis_logdet(yz).value, 0.0, 1e-3, "heisenberg y+z");
  HeisenbergConfig coarse, fine;
  fine.inner_n = fine.outer_n = 2 * coarse.outer_n;
  const double ab = abelianized_logdet(yz, coarse).value;
  c.near(ab, abelianized_logdet(yz, fine).value, 1e-3, "abelianized y+z against doubled grid");
  c.near(ab, 0.3230659472194505, 1e-3, "abelianized y+z against the two-variable measure");
  std::mt19937_64 rng(9);
  HeisenbergConfig cfg;
  cfg.inner_n = cfg.outer_n = 128;
  int checked = 0;
  for (int guard = 0; checked < 20 && guard < 200; ++guard) {
    const auto a = oracle::random_poly(rng, 2, 2 + guard % 3, -1, 2, 3);
    try {
      const auto r = compare_heisenberg(a, cfg, 1e-6);
      c.require(r.inequality_holds, "inequality fails for " + render(a, {"y", "z"}));
      ++checked;
    } catch (const IdenticallyZeroSlice&) {
    }
  }
  c.require(checked == 20, "fewer than 20 random inputs compared");
  const auto two = compare_heisenberg(A("2"));
  c.near(two.heisenberg.value, kLog2, 1e-9, "heisenberg 2");
  c.near(two.abelianized.value, kLog2, 1e-9, "abelianized 2");
}

void mp_sigma(Check& c) {
  const std::uint64_t p = 5;
  const std::int64_t N = 24;
  const auto log2 = iwasawa_log(padic_of_integer(2, p, N));
  for (const char* text : {"z - 2", "2*z - 1"}) {
    const auto forms = mp_sigma_rational_detail(P(text), p, N);
    const std::int64_t common =
        std::min(forms.trailing_form.absolute_precision(), forms.leading_form.absolute_precision());
    c.require(common >= N - 2, std::string("precision lost for ") + text);
    c.require(agrees_mod(forms.trailing_form, forms.leading_form, common),
              std::string("forms disagree for ") + text);
    c.require(agrees_mod(forms.trailing_form, log2, std::min(common, log2.absolute_precision())),
              std::string("value is not log_5(2) for ") + text);
  }
  bool rejected = false;
  try {
    mp_sigma_rational(P("z - 5"), p, N);
  } catch (const AdmissibilityViolated&) {
    rejected = true;
  }
  c.require(rejected, "z - 5 not rejected");
}

void cli_determinism(Check& c) {
  const std::vector<std::vector<std::string>> invocations = {
      {"mahler", "--poly", "x^10 + x^9 - x^7 - x^6 - x^5 - x^4 - x^3 + x + 1", "--dim", "1"},
      {"entropy", "--poly", "3 + x + y", "--dim", "2"},
      {"fk-limit", "--poly", "3 + x + y", "--dim", "2", "--n-list", "8,16,32", "--csv"},
      {"fixcount", "--poly", "3 + x + y", "--dim", "2", "--boxes", "4x4,8x8"},
      {"padic-det", "--poly", "3*z - 10", "--prime", "5", "--precision", "16"},
      {"heisenberg", "--poly", "y + z", "--grid-n", "64"},
  };
  for (const auto& args : invocations) {
    const auto a = oracle::run_process(FKDET_CLI_PATH, args);
    const auto b = oracle::run_process(FKDET_CLI_PATH, args);
    c.require(a.exit_code == 0 && !a.output.empty(), "cli failed for " + args[0]);
    c.require(a.output == b.output, "output differs between runs for " + args[0]);
  }
  const auto corpus = oracle::round_trip_corpus();
  c.require(corpus.size() == 50, "corpus size");
  for (const auto& f : corpus) {
    const auto text = render(f);
    const auto r = oracle::run_process(
        FKDET_CLI_PATH, {"padic-expansive", "--poly", text, "--dim", std::to_string(f.dim()), "--prime", "3"});
    if (r.exit_code != 0) {
      c.require(false, "cli failed on " + text);
      continue;
    }
    const auto echoed = cli::Json::parse(r.output)["input"]["poly"].get<std::string>();
    c.require(parse_poly(echoed, f.dim()) == f && echoed == text, "round trip fails for " + text);
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Jensen exactness", 1.0, jensen_exactness},
      {2, "roots-of-unity grid limit", 30.0, grid_limit},
      {3, "exact and floating-point routes agree", 30.0, exact_float_cross_route},
      {4, "multiplicativity", 30.0, multiplicativity},
      {5, "expansiveness certification", 60.0, expansiveness},
      {6, "p-adic measure, periodic and Snirelman routes", 60.0, padic_identities},
      {7, "p-adic expansiveness decisions", 10.0, padic_expansiveness},
      {8, "Iwasawa logarithm", 10.0, iwasawa_log_units},
      {9, "Heisenberg determinant", 120.0, heisenberg},
      {10, "p-adic measure over rational roots", 10.0, mp_sigma},
      {11, "CLI determinism and round trip", 60.0, cli_determinism},
  };
  int failures = 0;
  for (const auto& k : criteria) {
    Check check;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      k.body(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    check.require(secs <= k.budget_seconds, "runtime " + std::to_string(secs) + " s over budget");
    std::ostringstream line;
    line.precision(3);
    line << std::fixed;
    if (check.failure().empty()) {
      line << "PASS " << k.id << " " << k.name << " (" << secs << " s)";
    } else {
      ++failures;
      line << "FAIL " << k.id << " " << k.name << " (" << secs << " s): " << check.failure();
    }
    std::cout << line.str() << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
