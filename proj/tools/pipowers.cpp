#include <CLI11.hpp>

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "pipowers/json_io.hpp"
#include "pipowers/pipowers.hpp"

namespace {

using namespace pipowers;

enum class Format { table, json, csv };

struct Common {
  unsigned k = 0;
  std::string x = "1/4";
  std::string n = "auto";
  mpfr_prec_t precision = 256;
  std::string target_error = "1e-30";
  Format format = Format::table;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n ") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void print_csv(std::ostream& os, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
  os << '\n';
}

void print_fields(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& fields) {
  std::size_t width = 0;
  for (const auto& [k, v] : fields) width = std::max(width, k.size());
  for (const auto& [k, v] : fields) os << std::left << std::setw(static_cast<int>(width + 2)) << k << v << '\n';
}

BigReal parse_target(const std::string& text) {
  BigReal t = BigReal::parse(text, 128);
  if (!(t.sign() > 0) || !t.is_finite()) throw UsageError("--target-error must be a positive number");
  return t;
}

std::uint64_t resolve_n(const Common& c, const Rational& x, unsigned k) {
  if (c.n == "auto") return choose_truncation(x, k, parse_target(c.target_error));
  if (c.n.empty() || c.n.find_first_not_of("0123456789") != std::string::npos)
    throw UsageError("--N must be a positive integer or 'auto', got '" + c.n + "'");
  try {
    std::uint64_t n = std::stoull(c.n);
    if (n == 0) throw UsageError("--N must be positive");
    return n;
  } catch (const std::out_of_range&) {
    throw UsageError("--N is out of range: " + c.n);
  }
}

void check_precision(mpfr_prec_t bits) {
  if (bits < 64 || bits > (1 << 20)) throw UsageError("--precision must lie in [64, 1048576] bits");
}

std::vector<unsigned> to_vector(std::span<const unsigned> m) { return {m.begin(), m.end()}; }

std::string join(std::span<const unsigned> m) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + std::to_string(m[i]);
  return s;
}

int cmd_enumerate(const Common& c) {
  auto list = enumerate_multi_indices(c.k);
  if (c.format == Format::json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& mi : list) arr.push_back(to_vector(mi.multiplicities()));
    std::cout << nlohmann::ordered_json{{"k", c.k}, {"count", list.size()}, {"multi_indices", arr}}.dump()
              << '\n';
  } else if (c.format == Format::csv) {
    std::vector<std::string> header;
    for (unsigned j = 1; j <= c.k; ++j) header.push_back("m" + std::to_string(j));
    print_csv(std::cout, header);
    for (const auto& mi : list) std::cout << join(mi.multiplicities()) << '\n';
  } else {
    for (const auto& mi : list) std::cout << mi.to_string() << '\n';
  }
  return 0;
}

int cmd_coeff(const Common& c, const std::string& m) {
  auto table = coefficient_table(c.k);
  std::vector<const CoefficientEntry*> rows;
  if (!m.empty()) {
    std::vector<unsigned> mult;
    std::stringstream ss(m);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
        throw UsageError("--m must be a comma-separated list of non-negative integers");
      mult.push_back(static_cast<unsigned>(std::stoul(part)));
    }
    if (mult.size() != c.k) throw UsageError("--m needs exactly k multiplicities");
    MultiIndex mi(std::move(mult));
    auto it = table->position.find(mi);
    if (it == table->position.end()) throw UsageError("multi-index is not of order k");
    rows.push_back(&table->entries[it->second]);
  } else {
    for (const auto& e : table->entries) rows.push_back(&e);
  }
  if (c.format == Format::json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto* e : rows)
      arr.push_back({{"m", to_vector(e->index.multiplicities())},
                     {"weight", e->weight},
                     {"coefficient", e->coefficient.get_str()}});
    std::cout << nlohmann::ordered_json{{"k", c.k}, {"coefficients", arr}}.dump() << '\n';
  } else if (c.format == Format::csv) {
    print_csv(std::cout, {"m", "weight", "coefficient"});
    for (const auto* e : rows)
      print_csv(std::cout, {e->index.to_string(), std::to_string(e->weight), e->coefficient.get_str()});
  } else {
    std::size_t w = 1;
    for (const auto* e : rows) w = std::max(w, e->index.to_string().size());
    std::cout << std::left << std::setw(static_cast<int>(w + 2)) << "m" << std::setw(8) << "S"
              << "C(k,m)\n";
    for (const auto* e : rows)
      std::cout << std::setw(static_cast<int>(w + 2)) << e->index.to_string() << std::setw(8)
                << e->weight << e->coefficient.get_str() << '\n';
  }
  return 0;
}

std::string monomial_text(const BellMonomial& mono) {
  std::string s = mono.coefficient.get_str();
  auto j = mono.exponents.multiplicities();
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i] == 0) continue;
    s += " x" + std::to_string(i + 1);
    if (j[i] > 1) s += "^" + std::to_string(j[i]);
  }
  return s;
}

int cmd_bell(const Common& c, std::optional<unsigned> l, const std::string& args_text) {
  BellArguments args;
  if (!args_text.empty()) {
    std::stringstream ss(args_text);
    std::string part;
    while (std::getline(ss, part, ',')) args.push_back(parse_rational(part));
  }
  std::vector<unsigned> ls;
  if (l) {
    if (*l > c.k) throw UsageError("--l must not exceed --k");
    ls.push_back(*l);
  } else {
    for (unsigned i = 1; i <= c.k; ++i) ls.push_back(i);
  }
  std::vector<BellMonomial> monos;
  for (unsigned li : ls)
    for (auto& m : partial_bell_monomials(c.k, li)) monos.push_back(std::move(m));
  std::optional<Rational> value;
  if (!args.empty()) value = l ? partial_bell(c.k, *l, args) : complete_bell(c.k, args);
  const std::string name = l ? "B_{" + std::to_string(c.k) + "," + std::to_string(*l) + "}"
                             : "B_" + std::to_string(c.k);

  if (c.format == Format::json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& m : monos)
      arr.push_back({{"exponents", to_vector(m.exponents.multiplicities())}, {"coefficient", m.coefficient.get_str()}});
    nlohmann::ordered_json j{{"polynomial", name}, {"k", c.k}};
    if (l) j["l"] = *l;
    j["monomials"] = arr;
    if (value) j["value"] = to_string(*value);
    std::cout << j.dump() << '\n';
  } else if (c.format == Format::csv) {
    print_csv(std::cout, {"exponents", "coefficient"});
    for (const auto& m : monos) print_csv(std::cout, {m.exponents.to_string(), m.coefficient.get_str()});
    if (value) print_csv(std::cout, {"value", to_string(*value)});
  } else {
    std::cout << name << " =";
    if (monos.empty()) std::cout << " 0";
    for (std::size_t i = 0; i < monos.size(); ++i) std::cout << (i ? " + " : " ") << monomial_text(monos[i]);
    std::cout << '\n';
    if (value) std::cout << name << "(" << args_text << ") = " << to_string(*value) << '\n';
  }
  return 0;
}

void emit_fields(Format format, const std::vector<std::pair<std::string, std::string>>& fields) {
  if (format == Format::json) {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : fields) j[k] = v;
    std::cout << j.dump() << '\n';
  } else if (format == Format::csv) {
    std::vector<std::string> keys, values;
    for (const auto& [k, v] : fields) {
      keys.push_back(k);
      values.push_back(v);
    }
    print_csv(std::cout, keys);
    print_csv(std::cout, values);
  } else {
    print_fields(std::cout, fields);
  }
}

int cmd_sum(const Common& c) {
  check_precision(c.precision);
  Rational x = parse_rational(c.x);
  std::uint64_t n = resolve_n(c, x, c.k);
  SeriesResult s = bilateral_sum(SeriesParams{x, c.k, n, c.precision});
  emit_fields(c.format, {{"k", std::to_string(c.k)},
                         {"x", to_string(x)},
                         {"N", std::to_string(n)},
                         {"precision_bits", std::to_string(c.precision)},
                         {"working_bits", std::to_string(s.working_bits)},
                         {"partial_sum", BigReal(s.partial_sum, c.precision).to_string()},
                         {"tail_bound", s.tail_bound.to_string()},
                         {"rounding_bound", s.rounding_bound.to_string()},
                         {"mpfr_terms", std::to_string(s.mpfr_terms)},
                         {"double_double_terms", std::to_string(s.double_double_terms)},
                         {"double_terms", std::to_string(s.double_terms)}});
  return 0;
}

int cmd_pi(const Common& c) {
  check_precision(c.precision);
  Rational x = parse_rational(c.x);
  std::uint64_t n = resolve_n(c, x, c.k);
  PiComputation p = compute_pi_power(c.k, x, n, c.precision);
  if (c.format == Format::json) {
    std::cout << to_json(p).dump() << '\n';
  } else {
    std::vector<std::pair<std::string, std::string>> fields;
    const auto j = to_json(p);
    for (const auto& [key, v] : j.items())
      fields.emplace_back(key, v.is_string() ? v.get<std::string>() : v.dump());
    if (c.format == Format::table) {
      fields.emplace_back("guaranteed_digits", std::to_string(p.guaranteed_digits()));
      const Integer& q = p.x.get_den();
      if (q == 5 || q == 10) {
        auto t = trig_values(p.x, c.precision);
        fields.emplace_back("sin^2(pi x)", t->sin_sq.to_string());
        fields.emplace_back("cosec^2(pi x)", (BigReal(1L, c.precision) / t->sin_sq).to_string());
      }
    }
    emit_fields(c.format, fields);
  }
  return p.pass ? 0 : 1;
}

int cmd_verify(const Common& c, unsigned pi_k_max, std::uint64_t n_override) {
  check_precision(c.precision);
  SuiteConfig cfg;
  cfg.precision_bits = c.precision;
  cfg.target_error = parse_target(c.target_error);
  cfg.pi_k_max = pi_k_max;
  cfg.n_override = n_override;
  auto reports = run_suite(cfg);
  const bool ok = all_pass(reports);
  std::size_t failed = 0;
  for (const auto& r : reports) failed += r.pass ? 0 : 1;

  if (c.format == Format::json) {
    for (const auto& r : reports) std::cout << to_json(r).dump() << '\n';
  } else if (c.format == Format::csv) {
    print_csv(std::cout, {"identity", "parameters", "abs_diff", "rel_diff", "tolerance", "tolerance_kind", "pass"});
    for (const auto& r : reports)
      print_csv(std::cout, {r.identity_name, r.parameters(), BigReal(r.abs_diff, 64).to_string(),
                            BigReal(r.rel_diff, 64).to_string(), r.tolerance.to_string(),
                            to_string(r.tolerance_kind), r.pass ? "true" : "false"});
  } else {
    std::size_t wn = 8, wp = 10;
    for (const auto& r : reports) {
      wn = std::max(wn, r.identity_name.size());
      wp = std::max(wp, r.parameters().size());
    }
    auto short_num = [](const BigReal& v) {
      std::ostringstream os;
      os << std::setprecision(3) << std::scientific << v.to_double();
      return os.str();
    };
    std::cout << std::left << std::setw(static_cast<int>(wn + 2)) << "identity"
              << std::setw(static_cast<int>(wp + 2)) << "parameters" << std::setw(12) << "abs_diff"
              << std::setw(12) << "rel_diff" << std::setw(22) << "tolerance" << "result\n";
    for (const auto& r : reports)
      std::cout << std::setw(static_cast<int>(wn + 2)) << r.identity_name
                << std::setw(static_cast<int>(wp + 2)) << r.parameters() << std::setw(12)
                << short_num(r.abs_diff) << std::setw(12) << short_num(r.rel_diff) << std::setw(22)
                << (short_num(r.tolerance) + " " + to_string(r.tolerance_kind))
                << (r.pass ? "PASS" : "FAIL") << '\n';
    std::cout << reports.size() - failed << " passed, " << failed << " failed\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Powers of pi from trigonometric prefactors and bilateral series"};
  app.require_subcommand(1);
  const std::map<std::string, Format> formats{{"table", Format::table}, {"json", Format::json}, {"csv", Format::csv}};

  Common c;
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", c.format, "Output format: table, json or csv")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case).description("{table,json,csv}"));
  };
  auto add_k = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--k", c.k, "Derivative order k")->check(CLI::Range(0u, 4096u));
    if (required) opt->required();
  };
  auto add_series = [&](CLI::App* sub) {
    sub->add_option("--x", c.x, "Evaluation point as a rational literal p/q")->required();
    sub->add_option("--N", c.n, "Truncation radius, or 'auto'")->capture_default_str();
    sub->add_option("--precision", c.precision, "Target precision in bits")->capture_default_str();
    sub->add_option("--target-error", c.target_error, "Absolute tail target for --N auto")
        ->capture_default_str();
  };

  auto* enumerate = app.add_subcommand("enumerate", "List the multi-indices of order k");
  add_k(enumerate, true);
  add_format(enumerate);

  std::string m_text;
  auto* coeff = app.add_subcommand("coeff", "Faa di Bruno coefficients of order k");
  add_k(coeff, true);
  coeff->add_option("--m", m_text, "A single multi-index, e.g. 1,1,0");
  add_format(coeff);

  std::optional<unsigned> l;
  std::string bell_args;
  auto* bell = app.add_subcommand("bell", "Partial (with --l) or complete Bell polynomials");
  add_k(bell, true);
  bell->add_option("--l", l, "Number of parts");
  bell->add_option("--args", bell_args, "Comma-separated rational arguments x1,x2,...");
  add_format(bell);

  auto* sum = app.add_subcommand("sum", "Truncated bilateral sum of 1/(x-n)^(k+2) with error bounds");
  add_k(sum, true);
  add_series(sum);
  add_format(sum);

  auto* pi = app.add_subcommand("pi", "pi^(k+2) from the prefactor and the series");
  add_k(pi, true);
  add_series(pi);
  add_format(pi);

  unsigned pi_k_max = 12;
  std::uint64_t n_override = 0;
  auto* verify = app.add_subcommand("verify", "Run the identity verification suite");
  verify->add_option("--precision", c.precision, "Target precision in bits")->capture_default_str();
  verify->add_option("--target-error", c.target_error, "Tail target for the pi sweep")->capture_default_str();
  verify->add_option("--k-max", pi_k_max, "Largest k in the pi sweep")->capture_default_str()->check(CLI::Range(0u, 64u));
  verify->add_option("--n-override", n_override,
                     "Force every auto truncation radius to this value (tolerances unchanged)");
  add_format(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*enumerate) return cmd_enumerate(c);
    if (*coeff) return cmd_coeff(c, m_text);
    if (*bell) return cmd_bell(c, l, bell_args);
    if (*sum) return cmd_sum(c);
    if (*pi) return cmd_pi(c);
    if (*verify) return cmd_verify(c, pi_k_max, n_override);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const pipowers::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
