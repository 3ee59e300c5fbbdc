// steinchi: command-line front end.
//
// Exit codes: 0 success, 2 usage or validation error, 3 identity failure.

#include "steinchi/json_io.hpp"
#include "steinchi/moments.hpp"
#include "steinchi/steinchi.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace steinchi;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIdentity = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string spec;
  std::string mode;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> shards;
  std::size_t threads = 0;
};

SpecInput load_spec(const CommonOptions& opt) {
  if (opt.spec.empty()) throw UsageError("--spec is required");
  std::string text = opt.spec;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') {
    std::ifstream in(opt.spec);
    if (!in) throw UsageError("cannot read spec file '" + opt.spec + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  SpecInput in = parse_spec_text(text);
  if (!opt.mode.empty()) in.mode = parse_mode(opt.mode);
  return in;
}

std::size_t default_shards() {
  if (const char* env = std::getenv("STEINCHI_SHARDS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("STEINCHI_SHARDS must be a positive integer, got '") + env + "'");
  }
  return 16;
}

ParallelConfig parallel_from(const CommonOptions& opt) {
  if (!opt.seed) throw UsageError("--seed is required for stochastic commands");
  return {opt.shards.value_or(default_shards()), opt.threads};
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

// ---------------------------------------------------------------------------
// coeffs

template <Field T>
int coeffs_in(const SpecInput& in, const std::string& format) {
  const auto table = build_table(to_spec<T>(in));
  if (format == "csv") {
    std::cout << table_to_csv(table);
  } else {
    print_json(table_to_json(table));
  }
  return 0;
}

int run_coeffs(const CommonOptions& opt) {
  const SpecInput in = load_spec(opt);
  return in.mode == Mode::exact ? coeffs_in<Rational>(in, opt.format) : coeffs_in<double>(in, opt.format);
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  int max_degree = 8;
  std::string single_chisq;
  bool corrupt_table = false;
};

json check_to_json(const IdentityCheck& c) {
  return json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}};
}

void ibp_checks(const Rational& p, int max_degree, std::vector<IdentityCheck>& out) {
  IdentityCheck check{"ibp_p=" + format_rational(p)};
  for (int d = 0; d <= max_degree; ++d) {
    const Rational residual = ibp_residual(p, Polynomial<Rational>::monomial(static_cast<std::size_t>(d)));
    if (!residual.is_zero() && check.passed) {
      check.passed = false;
      check.detail = "residual " + format_rational(residual) + " for x^" + std::to_string(d);
    }
  }
  out.push_back(check);
}

int run_verify(const CommonOptions& opt, const VerifyOptions& vopt) {
  if (vopt.max_degree < 0) throw UsageError("--max-degree must be >= 0");
  if (!opt.mode.empty() && parse_mode(opt.mode) != Mode::exact) {
    throw UsageError("verify runs in exact mode only");
  }
  std::vector<IdentityCheck> checks;
  json header;

  if (!vopt.single_chisq.empty()) {
    const Rational p = parse_rational(vopt.single_chisq);
    if (p.sign() <= 0) throw UsageError("--single-chisq needs a positive dof");
    ibp_checks(p, vopt.max_degree, checks);
    header["single_chisq"] = format_rational(p);
  } else {
    SpecInput in = load_spec(opt);
    in.mode = Mode::exact;
    const auto spec = to_spec<Rational>(in);
    auto table = assemble_table(spec);
    if (vopt.corrupt_table) table.lambda_loo[0][1] += 1;
    header["spec"] = spec_to_json(spec);
    header["corrupted"] = vopt.corrupt_table;

    checks = check_identities(table);
    for (auto centering : {Centering::centered, Centering::noncentered}) {
      const std::string form = centering == Centering::centered ? "centered" : "noncentered";
      for (int d = 0; d <= vopt.max_degree; ++d) {
        const auto f = Polynomial<Rational>::monomial(static_cast<std::size_t>(d));
        const Rational value = operator_expectation(table, f, centering);
        IdentityCheck c{"zero_expectation_" + form + "_x^" + std::to_string(d)};
        if (!value.is_zero()) {
          c.passed = false;
          c.detail = "E Tf = " + format_rational(value);
        }
        checks.push_back(c);
      }
    }
    std::vector<Rational> dofs;
    for (const auto& m : spec.dofs()) {
      if (std::find(dofs.begin(), dofs.end(), m) == dofs.end()) dofs.push_back(m);
    }
    for (const auto& m : dofs) ibp_checks(m, vopt.max_degree, checks);
  }

  json report = header;
  report["max_degree"] = vopt.max_degree;
  report["checks"] = json::array();
  json failures = json::array();
  for (const auto& c : checks) {
    report["checks"].push_back(check_to_json(c));
    if (!c.passed) failures.push_back(check_to_json(c));
  }
  report["failures"] = failures;
  report["all_passed"] = failures.empty();
  print_json(report);
  for (const auto& c : checks) {
    std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << (c.passed ? "" : ": " + c.detail) << '\n';
  }
  return failures.empty() ? 0 : kExitIdentity;
}

// ---------------------------------------------------------------------------
// expect

struct ExpectOptions {
  std::string function;
  bool centered = false;
  bool apply_operator = false;
  long moments = -1;
};

int run_expect(const CommonOptions& opt, const ExpectOptions& eopt) {
  SpecInput in = load_spec(opt);
  in.mode = Mode::exact;
  const auto spec = to_spec<Rational>(in);
  json out{{"spec", spec_to_json(spec)}};
  if (eopt.moments >= 1) {
    const auto table = moment_table(spec, eopt.moments);
    out["cumulants"] = scalars_to_json<Rational>(table.cumulants);
    out["central_moments"] = scalars_to_json<Rational>(table.central_moments);
    out["raw_moments"] = scalars_to_json<Rational>(table.raw_moments);
  }
  if (!eopt.function.empty()) {
    const auto f = parse_test_function<Rational>(eopt.function);
    const auto* p = f.polynomial();
    if (!p) throw UsageError("expect takes polynomial test functions only");
    const Centering c = eopt.centered ? Centering::centered : Centering::noncentered;
    out["function"] = test_function_to_json(f);
    out["centered"] = eopt.centered;
    out["operator"] = eopt.apply_operator;
    if (eopt.apply_operator) {
      const auto table = build_table(spec);
      out["operator_polynomial"] = polynomial_to_json(operator_polynomial(table, *p, c));
      out["value"] = format_rational(expect_operator(spec, *p, c));
    } else {
      out["value"] = format_rational(expect_polynomial(spec, *p, c));
    }
  }
  if (eopt.moments < 1 && eopt.function.empty()) throw UsageError("expect needs --f or --moments");
  print_json(out);
  return 0;
}

// ---------------------------------------------------------------------------
// mc, sample, gof

struct McOptions {
  std::string function;
  std::size_t n = 1'000'000;
  bool noncentered = false;
  double multiplier = 4.0;
};

int run_mc(const CommonOptions& opt, const McOptions& mopt) {
  if (mopt.function.empty()) throw UsageError("--f is required");
  const auto parallel = parallel_from(opt);
  const auto spec = to_spec<double>(load_spec(opt));
  const auto f = parse_test_function<double>(mopt.function);
  const Centering c = mopt.noncentered ? Centering::noncentered : Centering::centered;
  const auto est = mc_expect_operator(spec, f, c, mopt.n, *opt.seed, parallel);
  json out = mc_to_json(est, mopt.multiplier);
  out["function"] = test_function_to_json(f);
  out["centered"] = !mopt.noncentered;
  out["spec"] = spec_to_json(spec);
  print_json(out);
  return 0;
}

struct SampleOptions {
  std::size_t n = 0;
  std::string output;
};

int run_sample(const CommonOptions& opt, const SampleOptions& sopt) {
  const auto parallel = parallel_from(opt);
  if (sopt.n == 0) throw UsageError("--n must be positive");
  const auto spec = to_spec<double>(load_spec(opt));
  const auto draws = sample(spec, sopt.n, *opt.seed, parallel);
  if (sopt.output.empty()) {
    write_samples(std::cout, draws);
  } else {
    std::ofstream out(sopt.output);
    if (!out) throw UsageError("cannot write '" + sopt.output + "'");
    write_samples(out, draws);
  }
  return 0;
}

struct GofOptions {
  std::string data;
  std::size_t B = 999;
  bool centered = false;
  std::vector<std::string> battery;
};

int run_gof(const CommonOptions& opt, const GofOptions& gopt) {
  const auto parallel = parallel_from(opt);
  const auto spec = to_spec<double>(load_spec(opt));
  std::ifstream in(gopt.data);
  if (!in) throw UsageError("cannot read data file '" + gopt.data + "'");
  const auto data = read_samples(in);

  std::optional<FunctionBattery> battery;
  if (gopt.battery.empty()) {
    battery.emplace(default_battery(spec));
  } else {
    std::vector<TestFunction<double>> fs;
    for (const auto& text : gopt.battery) fs.push_back(parse_test_function<double>(text));
    battery.emplace(std::move(fs), spec);
  }
  const Centering c = gopt.centered ? Centering::centered : Centering::noncentered;
  const auto result = bootstrap_pvalue(data, spec, *battery, c, gopt.B, *opt.seed, parallel);
  json out = gof_to_json(result, *battery);
  out["n"] = data.size();
  out["centered"] = gopt.centered;
  out["spec"] = spec_to_json(spec);
  print_json(out);
  return 0;
}

void add_spec_options(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--spec", opt.spec, "Spec JSON inline or a path to a JSON file")->required();
  cmd->add_option("--mode", opt.mode, "Override the spec's scalar mode")
      ->check(CLI::IsMember({"exact", "float"}));
}

void add_stochastic_options(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--seed", opt.seed, "64-bit seed (required)");
  cmd->add_option("--shards", opt.shards, "Logical substreams (default $STEINCHI_SHARDS or 16)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", opt.threads, "Worker threads (0 = all cores); never changes output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stein operator toolkit for weighted sums of independent chi-square variables"};
  app.require_subcommand(1);

  CommonOptions opt;
  VerifyOptions vopt;
  ExpectOptions eopt;
  McOptions mopt;
  SampleOptions sopt;
  GofOptions gopt;

  auto* coeffs = app.add_subcommand("coeffs", "Print Lambda_k, Lambda_{k,i}, mu_k and mu");
  add_spec_options(coeffs, opt);
  coeffs->add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* verify = app.add_subcommand("verify", "Run the exact identity suite");
  verify->add_option("--spec", opt.spec, "Spec JSON inline or a path to a JSON file");
  verify->add_option("--mode", opt.mode, "Must be exact if given");
  verify->add_option("--max-degree", vopt.max_degree, "Highest monomial degree checked");
  verify->add_option("--single-chisq", vopt.single_chisq, "Only check integration by parts for chi^2_p");
  verify->add_flag("--corrupt-table", vopt.corrupt_table, "Test hook: perturb Lambda_{1,1} before checking")
      ->group("");

  auto* expect = app.add_subcommand("expect", "Exact expectations of polynomials or operator images");
  add_spec_options(expect, opt);
  expect->add_option("--f", eopt.function, "Polynomial test function, e.g. poly:0,1");
  expect->add_flag("--centered", eopt.centered, "Expect under U - mu instead of U");
  expect->add_flag("--operator", eopt.apply_operator, "Expectation of Tf instead of f");
  expect->add_option("--moments", eopt.moments, "Also print moment tables up to this order");

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate of E Tf");
  add_spec_options(mc, opt);
  add_stochastic_options(mc, opt);
  mc->add_option("--f", mopt.function, "Test function: poly:c0,c1,.. | exp:s | sin:t | cos:t | JSON")
      ->required();
  mc->add_option("--n", mopt.n, "Sample count")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
  mc->add_flag("--noncentered", mopt.noncentered, "Use the non-centered operator on U");
  mc->add_option("--multiplier", mopt.multiplier, "Standard-error band for within_band");

  auto* samp = app.add_subcommand("sample", "Draw U and write one value per line");
  add_spec_options(samp, opt);
  add_stochastic_options(samp, opt);
  samp->add_option("--n", sopt.n, "Sample count")->required();
  samp->add_option("--output", sopt.output, "Output file (default stdout)");

  auto* gof = app.add_subcommand("gof", "Stein goodness-of-fit test with parametric bootstrap");
  add_spec_options(gof, opt);
  add_stochastic_options(gof, opt);
  gof->add_option("--data", gopt.data, "Data file, one value per line")->required();
  gof->add_option("--B", gopt.B, "Bootstrap replicates (>= 99)");
  gof->add_flag("--centered", gopt.centered, "Data are already centered (values of U - mu)");
  gof->add_option("--f", gopt.battery, "Battery entry; repeat to replace the default battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*coeffs) return run_coeffs(opt);
    if (*verify) return run_verify(opt, vopt);
    if (*expect) return run_expect(opt, eopt);
    if (*mc) return run_mc(opt, mopt);
    if (*samp) return run_sample(opt, sopt);
    if (*gof) return run_gof(opt, gopt);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << '\n';
    if (is_identity_failure(e.code())) {
      std::cout << json{{"failure", errc_name(e.code())}, {"message", e.what()}}.dump(2) << '\n';
      return kExitIdentity;
    }
    return kExitUsage;
  }
  return kExitUsage;
}
