#include "padiccf/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

#include "padiccf/json_io.hpp"
#include "padiccf/text_io.hpp"

namespace padiccf {
namespace {

struct Outcome {
  int code = exit_code::ok;
  json result;
};

const char* yes_no(bool b) { return b ? "yes" : "no"; }

std::string status_line(const Expansion& ex) {
  std::ostringstream os;
  os << "status: " << to_string(ex.status);
  if (ex.status == ExpansionStatus::periodic)
    os << ", preperiod " << ex.preperiod.size() << ", period " << ex.period->size();
  else if (ex.status == ExpansionStatus::open)
    os << " after " << ex.preperiod.size() << " quotients";
  else
    os << ", " << ex.preperiod.size() << " quotients";
  return os.str();
}

// ------------------------------------------------------------------ expand

struct ExpandArgs {
  std::string quad, rational;
};

Outcome cmd_expand(const RunConfig& cfg, const ExpandArgs& a, std::ostream& out) {
  const OddPrime p(cfg.p);
  Expansion ex;
  json input;
  if (!a.quad.empty()) {
    const QuadSpec q = parse_quad_spec(a.quad);
    ex = expand(normalize(p, q.delta, q.b, q.c, q.k, q.branch), cfg.flavor, cfg.max_steps);
    input = {{"quad", a.quad}};
  } else {
    ex = expand_rational(parse_rational(a.rational), p, cfg.flavor, cfg.max_steps);
    input = {{"rational", a.rational}};
  }
  Outcome o;
  o.result = expansion_to_json(ex);
  o.result["input"] = input;
  if (cfg.output == OutputFormat::json) {
    out << o.result.dump() << '\n';
  } else {
    out << ex.text() << '\n' << status_line(ex) << '\n';
  }
  o.code = ex.status == ExpansionStatus::open ? exit_code::open : exit_code::ok;
  return o;
}

// --------------------------------------------------------------- construct

struct ConstructArgs {
  std::string cf, cf_file, h = "0";
  unsigned jobs = 1;
};

std::string read_first_line(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::string line;
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
  throw ParseError(path + " is empty");
}

Outcome cmd_construct(const RunConfig& cfg, const ConstructArgs& a, std::ostream& out, std::ostream& err) {
  const OddPrime p(cfg.p);
  if (a.cf.empty() && a.cf_file.empty()) throw ParseError("construct needs --cf or --cf-file");
  const std::string text = a.cf.empty() ? read_first_line(a.cf_file) : a.cf;
  const QuotientList cf = parse_quotient_list(text, p);
  const auto [h_lo, h_hi] = parse_range(a.h);
  DlogBudget budget;
  budget.max_table = cfg.dlog_budget;
  const NiceCertificate cert = is_nice(cf, budget);
  Outcome o;
  if (!cert.nice()) {
    err << "not nice: condition (" << cert.failed.value_or('?') << ") "
        << (cert.status == NiceStatus::indeterminate ? "undecided" : "fails") << ": " << cert.detail << '\n';
    o.code = exit_code::not_nice;
    o.result = {{"certificate", certificate_to_json(cert)}};
    return o;
  }

  ConstructOptions opt;
  opt.max_omega = cfg.precision_cap;
  const std::size_t count = h_hi - h_lo + 1;
  std::vector<std::optional<ConstructionResult>> results(count);
  std::vector<std::string> errors(count);
  auto work = [&](std::size_t i) {
    try {
      results[i] = construct(cert, h_lo + i, opt);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };
  const unsigned jobs = std::max(1u, a.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j)
      pool.emplace_back([&, j] {
        for (std::size_t i = j; i < count; i += jobs) work(i);
      });
    for (auto& th : pool) th.join();
  }

  o.result = {{"certificate", certificate_to_json(cert)}, {"results", json::array()}};
  for (std::size_t i = 0; i < count; ++i) {
    if (!results[i]) {
      err << "h=" << h_lo + i << ": " << errors[i] << '\n';
      o.code = exit_code::failed;
      o.result["results"].push_back({{"h", h_lo + i}, {"error", errors[i]}});
      continue;
    }
    const ConstructionResult& r = *results[i];
    if (!r.verified) o.code = exit_code::failed;
    const json j = construction_to_json(r);
    o.result["results"].push_back(j);
    if (cfg.output == OutputFormat::json) {
      out << j.dump() << '\n';
      continue;
    }
    out << "h=" << r.h << " omega=" << r.omega << " k_t=" << r.kt << " c~=" << r.c_tilde << " a_t=" << r.a_t.str()
        << " m=" << r.m << " branch=" << (r.branch ? std::to_string(*r.branch) : "-")
        << " verified=" << yes_no(r.verified) << '\n'
        << "  " << r.expansion.text() << '\n';
  }
  if (cfg.output == OutputFormat::text) {
    out << "h\tomega\tm\n";
    for (const auto& r : results)
      if (r) out << r->h << '\t' << r->omega << '\t' << r->m << '\n';
  }
  return o;
}

// ------------------------------------------------------------ verify-paper

struct Check {
  std::string group, name;
  bool pass = false;
  std::string detail;
};

class Suite {
 public:
  explicit Suite(std::string only) : only_(std::move(only)) {}

  bool wants(const std::string& group) const { return only_.empty() || only_ == group; }

  void run(const std::string& group, const std::string& name, const std::function<bool(std::string&)>& fn) {
    Check c{group, name, false, ""};
    try {
      c.pass = fn(c.detail);
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = std::string("exception: ") + e.what();
    }
    checks_.push_back(std::move(c));
  }

  const std::vector<Check>& checks() const { return checks_; }

 private:
  std::string only_;
  std::vector<Check> checks_;
};

QuotientList ql(const OddPrime& p, const std::string& s) { return parse_quotient_list(s, p); }

void suite_examples(Suite& s) {
  s.run("examples", "period-12 expansion of (-13+sqrt(19))/30, p=5", [](std::string& d) {
    const auto ex = expand(normalize(OddPrime(5), 19, -13, 6, 1, 2), Flavor::browkin);
    d = ex.text();
    return ex.status == ExpansionStatus::periodic && ex.preperiod.empty() &&
           *ex.period == ql(OddPrime(5), "4/5, -11/5, -3/5, -4/25, 274/125, -4/25, -3/5, -11/5, 4/5, 1/5, 24/25, 1/5");
  });
  s.run("examples", "(8+sqrt(89))/5, p=5: 14 quotients, open at 10000", [](std::string& d) {
    const OddPrime p(5);
    const QuadIrr a = normalize(p, 89, 8, 5, 0, 3);
    const auto ex = expand(a, Flavor::browkin, 10000);
    d = to_string(ex.status);
    return ex.status == ExpansionStatus::open &&
           ex.prefix(14) == ql(p, "-9/5, -2/5, -59/25, 2/5, -9/5, 23/25, 3/5, 1/5, 51/25, 8/5, 2/5, -7/5, -12/5, 6/5");
  });
  s.run("examples", "(1+sqrt(37))/6, p=3 is [(1/3)*]", [](std::string& d) {
    const auto ex = expand(normalize(OddPrime(3), 37, 1, 6, 0, 1), Flavor::browkin);
    d = ex.text();
    return d == "[(1/3)*]";
  });
  s.run("examples", "10/3 over p=3 is [1/3, 1/3]", [](std::string& d) {
    const auto ex = expand_rational(Rational(10, 3), OddPrime(3), Flavor::browkin);
    d = ex.text();
    return ex.status == ExpansionStatus::finite && d == "[1/3, 1/3]";
  });
}

void suite_dlog(Suite& s) {
  s.run("dlog", "ord_36(5) = 6", [](std::string& d) {
    d = mult_order(5, 36).get_str();
    return d == "6";
  });
  s.run("dlog", "ord_100(3) = 20", [](std::string& d) {
    d = mult_order(3, 100).get_str();
    return d == "20";
  });
  s.run("dlog", "ord_{353^2}(3) = 124256", [](std::string& d) {
    d = mult_order(3, 353 * 353).get_str();
    return d == "124256";
  });
  s.run("dlog", "log_3 110 mod 353^2 = 31861", [](std::string& d) {
    const auto r = discrete_log(3, 110, 353 * 353);
    d = r.value ? r.value->get_str() : "none";
    return d == "31861";
  });
}

void suite_nice(Suite& s) {
  for (unsigned long pv : {3ul, 5ul, 7ul}) {
    const OddPrime p(pv);
    const std::string P = std::to_string(pv);
    s.run("nice", "[1/p, 1/p], p=" + P, [p, P](std::string& d) {
      const auto c = is_nice(ql(p, "1/" + P + ", 1/" + P));
      d = "B~ = " + c.Btilde_last.get_str();
      return c.nice() && c.Btilde_last == 1;
    });
    s.run("nice", "[1/p, (1-p)/p, (1+p)/p], p=" + P, [p, pv](std::string& d) {
      const long P = static_cast<long>(pv);
      const auto c = is_nice({LaurentInt(1, 1, p), LaurentInt(1 - P, 1, p), LaurentInt(1 + P, 1, p)});
      d = "B~ = " + c.Btilde_last.get_str();
      return c.nice() && c.Btilde_last == 1;
    });
    s.run("nice", "[1/p, -(p^3-1)/(2p^2), 1/p, -2/p^2, 1/p], p=" + P, [p, pv](std::string& d) {
      const long P = static_cast<long>(pv);
      const auto c = is_nice({LaurentInt(1, 1, p), LaurentInt(-(P * P * P - 1) / 2, 2, p), LaurentInt(1, 1, p),
                              LaurentInt(-2, 2, p), LaurentInt(1, 1, p)});
      d = "B~ = " + c.Btilde_last.get_str();
      return c.nice() && c.Btilde_last == -1;
    });
  }
  s.run("nice", "[a_0] excluded for p=3", [](std::string& d) {
    SearchLimits lim;
    lim.num_bound = 30;
    lim.exp_bound = 3;
    const auto r = nice_search(OddPrime(3), 1, QuotientPool::all, lim);
    d = std::to_string(r.examined) + " candidates";
    return r.hits.empty();
  });
}

void suite_construct(Suite& s, const RunConfig& cfg) {
  ConstructOptions opt;
  opt.max_omega = cfg.precision_cap;
  s.run("construct", "[6/5], omega=6,12,18", [&](std::string& d) {
    const OddPrime p(5);
    const auto cert = is_nice(ql(p, "6/5"));
    const auto r0 = construct(cert, 0, opt), r1 = construct(cert, 1, opt), r2 = construct(cert, 2, opt);
    d = r0.expansion.text() + ", m = " + r0.m.get_str() + ", " + r1.m.get_str() + ", " + r2.m.get_str();
    return r0.verified && r1.verified && r2.verified && r0.m == -434 && r0.kt == 5 && r0.c_tilde == -2604 &&
           r1.omega == 12 && r1.m == Int(-4) * 1695421 && r2.omega == 18 && r2.m == Int("-105963812934");
  });
  s.run("construct", "[1/3, 1/3], omega=20,40,60", [&](std::string& d) {
    const OddPrime p(3);
    const auto cert = is_nice(ql(p, "1/3, 1/3"));
    const auto r0 = construct(cert, 0, opt), r1 = construct(cert, 1, opt), r2 = construct(cert, 2, opt);
    d = "b = " + r0.b.get_str() + ", k_t = " + std::to_string(r0.kt) + ", m = " + r0.m.get_str();
    return r0.verified && r1.verified && r2.verified && r0.b == 34867844 && r0.kt == 17 &&
           r0.m == Int(-484) * 72041 && r1.m == Int(-484) * Int("251191435104482") &&
           r2.m == Int(-484) * Int("875850377587111642857323");
  });
  s.run("construct", "[1/3, 110/81]: omega0=31861, k_2=31852", [&](std::string& d) {
    const OddPrime p(3);
    const auto cert = is_nice(ql(p, "1/3, 110/81"));
    const auto r = construct(cert, 0, opt);
    Int c;
    mpz_ui_pow_ui(c.get_mpz_t(), 3, 31856);
    d = "omega = " + r.omega.get_str() + ", s = " + r.order_s.get_str() + ", k_2 = " + std::to_string(r.kt);
    return r.verified && cert.omega0 == 31861 && r.order_s == 124256 && r.kt == 31852 && r.c_tilde == (-c - 1) / 353;
  });
}

void suite_beta(Suite& s, const RunConfig& cfg, unsigned n_max) {
  for (unsigned long pv : {3ul, 5ul, 7ul}) {
    for (unsigned k = 1; k <= 2; ++k) {
      s.run("beta", "beta_n^k properties, p=" + std::to_string(pv) + ", k=" + std::to_string(k) + ", n<=5",
            [pv, k](std::string& d) {
              const OddPrime p(pv);
              for (unsigned n = 1; n <= 5; ++n) {
                const auto b = beta(p, n, k);
                Rational expect(U_tilde_poly(n, p.pow(k)));
                expect /= Rational(p.pow(k));
                if (eval_finite(b) != expect || !beta_polynomials(p, n, k).all() ||
                    !cala_identities(b, bullet_sequence(b)).holds() || !is_nice(b).nice()) {
                  d = "n = " + std::to_string(n);
                  return false;
                }
              }
              return true;
            });
    }
  }
  ConstructOptions opt;
  opt.max_omega = cfg.precision_cap;
  // The completion of a nice list of length t has period 2t, so period 2^n
  // comes from beta_{n-1}^1; for n = 1 the length-1 list [6/5] stands in.
  for (unsigned n = 1; n <= n_max; ++n) {
    const std::string from = n == 1 ? "[6/5]" : "beta_" + std::to_string(n - 1) + "^1";
    s.run("beta", "period 2^" + std::to_string(n) + " from " + from + ", p=5", [n, &opt](std::string& d) {
      const OddPrime p(5);
      const QuotientList cf = n == 1 ? ql(p, "6/5") : beta(p, n - 1, 1);
      const auto cert = is_nice(cf);
      const auto r = construct(cert, 0, opt);
      d = "omega = " + r.omega.get_str() + ", period " + std::to_string(r.expansion.period->size());
      return r.verified && r.expansion.period->size() == (std::size_t{1} << n);
    });
  }
}

void suite_section6(Suite& s) {
  const std::pair<unsigned long, long> cases[] = {{3, 2}, {5, 2}, {5, 3}, {7, 3}};
  for (int v = 1; v <= 3; ++v) {
    for (const auto& [pv, t] : cases) {
      if (v > 1 && (pv < 5 || t < 3)) continue;
      s.run("section6", "variant " + std::to_string(v) + ", p=" + std::to_string(pv) + ", t=" + std::to_string(t),
            [v, pv, t](std::string& d) {
              const auto r = family_section6(v, OddPrime(pv), t);
              d = r.claimed.text();
              if (r.literal_quotient == CheckStatus::indeterminate) d += "; literal head indeterminate";
              return r.verified() && r.charpoly_matches;
            });
    }
  }
}

void suite_ruban(Suite& s) {
  s.run("ruban", "delta/p^h family, p=5, h=1..3", [](std::string& d) {
    const OddPrime p(5);
    for (long h = 1; h <= 3; ++h) {
      const auto ex = expand(ruban_family(p, h), Flavor::ruban);
      const std::string ph = p.pow(static_cast<unsigned long>(h)).get_str();
      if (ex.text() != "[1/" + ph + ", (2/" + ph + ")*]") {
        d = ex.text();
        return false;
      }
    }
    return true;
  });
  s.run("ruban", "p sqrt(m) probes stay open", [](std::string& d) {
    const OddPrime p(5);
    int probes = 0;
    for (long m = 2; probes < 5 && m < 200; ++m) {
      if (m % 5 == 0 || is_perfect_square(m) || legendre(m, p) != 1) continue;
      const auto r = ruban_nonperiodic_probe(p, m, 1, 500);
      if (r.status != ExpansionStatus::open || !r.formula_matches || !r.both_embeddings_negative) {
        d = "m = " + std::to_string(m);
        return false;
      }
      ++probes;
    }
    d = std::to_string(probes) + " probes";
    return probes == 5;
  });
}

void suite_structural(Suite& s) {
  s.run("structural", "determinant identity, 200 random lists", [](std::string& d) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
      const OddPrime p(i % 2 ? 5 : 7);
      QuotientList cf;
      const std::size_t len = 1 + rng() % 10;
      for (std::size_t j = 0; j < len; ++j) {
        long x = 0;
        while (x % static_cast<long>(p.value()) == 0) x = static_cast<long>(rng() % 17) - 8;
        cf.emplace_back(x, 1 + static_cast<long>(rng() % 2), p);
      }
      const ConvergentTable t(cf);
      for (long n = 0; n < t.size(); ++n) {
        const Rational det = t.A(n).value() * t.B(n - 1).value() - t.A(n - 1).value() * t.B(n).value();
        if (det != Rational(n % 2 == 0 ? -1 : 1)) {
          d = "list " + std::to_string(i);
          return false;
        }
      }
    }
    return true;
  });
  s.run("structural", "no period 1 or 3 among sqrt(m), |m| <= 2000, p=5,7", [](std::string& d) {
    int periodic = 0;
    for (unsigned long pv : {5ul, 7ul}) {
      const OddPrime p(pv);
      for (long m = -2000; m <= 2000; ++m) {
        if (m == 0 || is_perfect_square(m)) continue;
        const auto info = padic_square_exists(m, p);
        if (!info.exists) continue;
        const auto ex = expand(normalize(p, m, 0, 1, 0, *sqrt_mod_p(info.unit, p)), Flavor::browkin, 400);
        if (ex.status != ExpansionStatus::periodic) continue;
        ++periodic;
        if (ex.period->size() == 1 || ex.period->size() == 3) {
          d = "p = " + std::to_string(pv) + ", m = " + std::to_string(m);
          return false;
        }
      }
    }
    d = std::to_string(periodic) + " periodic";
    return true;
  });
}

Outcome cmd_verify(const RunConfig& cfg, const std::string& only, unsigned n, std::ostream& out) {
  static const std::vector<std::string> groups{"examples", "dlog",     "nice",  "construct",
                                               "beta",     "section6", "ruban", "structural"};
  if (!only.empty() && std::find(groups.begin(), groups.end(), only) == groups.end())
    throw ParseError("unknown group '" + only + "'");
  Suite s(only);
  if (s.wants("examples")) suite_examples(s);
  if (s.wants("dlog")) suite_dlog(s);
  if (s.wants("nice")) suite_nice(s);
  if (s.wants("construct")) suite_construct(s, cfg);
  if (s.wants("beta")) suite_beta(s, cfg, n);
  if (s.wants("section6")) suite_section6(s);
  if (s.wants("ruban")) suite_ruban(s);
  if (s.wants("structural")) suite_structural(s);

  Outcome o;
  o.result = json::array();
  std::size_t passed = 0;
  for (const auto& c : s.checks()) {
    passed += c.pass;
    o.result.push_back({{"group", c.group}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    if (cfg.output == OutputFormat::json) continue;
    out << (c.pass ? "PASS " : "FAIL ") << c.group << ": " << c.name;
    if (!c.detail.empty()) out << " (" << c.detail << ")";
    out << '\n';
  }
  if (cfg.output == OutputFormat::json)
    out << json{{"checks", o.result}, {"passed", passed}, {"total", s.checks().size()}}.dump() << '\n';
  else
    out << passed << "/" << s.checks().size() << " checks passed\n";
  o.code = passed == s.checks().size() ? exit_code::ok : exit_code::failed;
  return o;
}

// ------------------------------------------------------------------ search

struct SearchArgs {
  long t = 1;
  std::string pool = "all";
  SearchLimits limits;
};

Outcome cmd_search(const RunConfig& cfg, const SearchArgs& a, std::ostream& out, std::ostream& err) {
  const OddPrime p(cfg.p);
  SearchLimits lim = a.limits;
  lim.budget.max_table = cfg.dlog_budget;
  Outcome o;
  o.result = {{"hits", json::array()}};
  auto sink = [&](const SearchHit& hit) {
    json j = certificate_to_json(hit.certificate);
    j["index"] = hit.index;
    o.result["hits"].push_back(j);
    if (cfg.output == OutputFormat::json) {
      out << j.dump() << '\n';
    } else {
      out << '#' << hit.index << " [" << format_quotient_list(hit.certificate.cf) << "] q=" << hit.certificate.q
          << " omega0=" << hit.certificate.omega0 << '\n';
    }
  };
  const SearchSummary sum = nice_search(p, a.t, pool_from_string(a.pool), lim, sink);
  o.result["space_size"] = sum.space_size;
  o.result["examined"] = sum.examined;
  o.result["next_cursor"] = sum.next_cursor;
  o.result["indeterminate"] = sum.indeterminate;
  err << "examined " << sum.examined << " of " << sum.space_size << ", " << sum.hits.size() << " nice, "
      << sum.indeterminate << " indeterminate, next cursor " << sum.next_cursor << '\n';
  return o;
}

// ------------------------------------------------------------------ replay

Outcome cmd_replay(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  Outcome o;
  std::string line;
  std::size_t n = 0, same = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json rec = json::parse(line);
    const auto argv = rec.at("inputs").at("argv").get<std::vector<std::string>>();
    std::ostringstream o2, e2;
    const int code = run_cli(argv, o2, e2);
    const bool ok = code == rec.at("outputs").at("exit_code").get<int>() &&
                    o2.str() == rec.at("outputs").at("stdout").get<std::string>();
    out << "record " << n << " (" << rec.at("command").get<std::string>() << "): "
        << (ok ? "identical" : "DIFFERENT") << '\n';
    same += ok;
    ++n;
  }
  if (n == 0) err << "no records in " << path << '\n';
  o.code = (n > 0 && same == n) ? exit_code::ok : exit_code::failed;
  o.result = {{"records", n}, {"identical", same}};
  return o;
}

std::vector<std::string> strip_out_file(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out-file") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out-file=", 0) == 0) continue;
    kept.push_back(args[i]);
  }
  return kept;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-adic continued fractions: expansion, construction and search", "padiccf"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  RunConfig cfg;
  std::string flavor = "browkin", output = "text", out_file;
  app.add_option("--p", cfg.p, "odd prime")->capture_default_str();
  app.add_option("--flavor", flavor, "browkin|ruban")->check(CLI::IsMember({"browkin", "ruban"}));
  app.add_option("--max-steps", cfg.max_steps, "step limit for expansions")->check(CLI::PositiveNumber);
  app.add_option("--precision-cap", cfg.precision_cap, "largest omega a construction may use");
  app.add_option("--dlog-budget", cfg.dlog_budget, "largest baby-step table");
  app.add_option("--output", output, "text|json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--out-file", out_file, "append a JSONL result record here");

  ExpandArgs ea;
  auto* expand_cmd = app.add_subcommand("expand", "expand a quadratic irrational or a rational");
  auto* quad_opt = expand_cmd->add_option("--quad", ea.quad, "Delta,b,c,k,branch for (b+sqrt(Delta))/(p^k c)");
  auto* rat_opt = expand_cmd->add_option("--rational", ea.rational, "a rational n/d");
  quad_opt->excludes(rat_opt);
  expand_cmd->require_option(1);

  ConstructArgs ca;
  auto* construct_cmd = app.add_subcommand("construct", "complete a nice list to periodic expansions");
  construct_cmd->set_help_flag("--help", "print this help and exit");
  auto* cf_opt = construct_cmd->add_option("--cf", ca.cf, "comma separated quotients");
  auto* cf_file_opt = construct_cmd->add_option("--cf-file", ca.cf_file, "file whose first line is the list");
  cf_opt->excludes(cf_file_opt);
  construct_cmd->add_option("--h", ca.h, "admissible omega index or range a..b");
  construct_cmd->add_option("--jobs", ca.jobs, "worker threads");

  std::string only;
  unsigned beta_n = 2;
  auto* verify_cmd = app.add_subcommand("verify-paper", "run the reproduction suite");
  verify_cmd->add_option("--only", only, "examples|dlog|nice|construct|beta|section6|ruban|structural");
  verify_cmd->add_option("--n", beta_n, "largest n for the period-2^n constructions")->check(CLI::Range(1u, 8u));

  SearchArgs sa;
  auto* search_cmd = app.add_subcommand("search", "enumerate nice lists");
  search_cmd->add_option("--t", sa.t, "list length")->check(CLI::PositiveNumber);
  search_cmd->add_option("--pool", sa.pool, "all|pos|conj3")->check(CLI::IsMember({"all", "pos", "conj3"}));
  search_cmd->add_option("--num-bound", sa.limits.num_bound, "largest |numerator|");
  search_cmd->add_option("--exp-bound", sa.limits.exp_bound, "largest p-exponent");
  search_cmd->add_option("--cursor", sa.limits.cursor, "enumeration index to resume from");
  search_cmd->add_option("--max-candidates", sa.limits.max_candidates, "stop after this many candidates");
  search_cmd->add_option("--jobs", sa.limits.jobs, "worker threads");

  std::string in_file;
  auto* replay_cmd = app.add_subcommand("replay", "re-run JSONL result records and compare outputs");
  replay_cmd->add_option("--in-file", in_file, "records to replay")->required();

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_code::ok;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << '\n';
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return exit_code::usage;
  }

  cfg.flavor = flavor_from_string(flavor);
  cfg.output = output == "json" ? OutputFormat::json : OutputFormat::text;
  if (!out_file.empty()) cfg.out_file = out_file;

  std::ostringstream buf;
  Outcome o;
  std::string command;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (replay_cmd->parsed()) return cmd_replay(in_file, out, err).code;
    OddPrime::from_int(Int(cfg.p));
    if (expand_cmd->parsed()) {
      command = "expand";
      o = cmd_expand(cfg, ea, buf);
    } else if (construct_cmd->parsed()) {
      command = "construct";
      o = cmd_construct(cfg, ca, buf, err);
    } else if (verify_cmd->parsed()) {
      command = "verify-paper";
      o = cmd_verify(cfg, only, beta_n, buf);
    } else {
      command = "search";
      o = cmd_search(cfg, sa, buf, err);
    }
  } catch (const std::invalid_argument& e) {
    out << buf.str();
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const std::domain_error& e) {
    out << buf.str();
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const std::exception& e) {
    out << buf.str();
    err << "error: " << e.what() << '\n';
    return exit_code::failed;
  }
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  out << buf.str();

  if (cfg.out_file) {
    std::ofstream f(*cfg.out_file, std::ios::app);
    if (!f) {
      err << "error: cannot write " << *cfg.out_file << '\n';
      return exit_code::failed;
    }
    json rec;
    rec["command"] = command;
    rec["inputs"] = {{"argv", strip_out_file(args)}, {"p", cfg.p}, {"flavor", flavor}, {"max_steps", cfg.max_steps},
                     {"precision_cap", cfg.precision_cap}, {"dlog_budget", cfg.dlog_budget}, {"output", output}};
    rec["outputs"] = {{"exit_code", o.code}, {"stdout", buf.str()}, {"result", o.result}};
    rec["timings"] = {{"wall_ms", ms}};
    rec["version"] = kVersion;
    f << rec.dump() << '\n';
  }
  return o.code;
}

}  // namespace padiccf
