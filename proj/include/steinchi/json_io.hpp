#pragma once

#include "steinchi/coefficients.hpp"
#include "steinchi/error.hpp"
#include "steinchi/gof.hpp"
#include "steinchi/polynomial.hpp"
#include "steinchi/scalar.hpp"
#include "steinchi/simulation.hpp"
#include "steinchi/test_function.hpp"
#include "steinchi/weight_spec.hpp"

#include <json.hpp>

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Wire formats. Scalars always travel as strings: "p/q" or integers in
// exact mode, "%.17g" decimals in float mode.

namespace steinchi {

using json = nlohmann::json;

/// A weight specification as read, before choosing a scalar field.
struct SpecInput {
  std::vector<std::string> weights;
  std::vector<std::string> dofs;
  Mode mode = Mode::exact;
};

/// {"weights": [...], "dofs": [...], "mode": "exact"|"float"}; mode defaults
/// to exact. Entries may be strings or JSON integers (floats in float mode).
SpecInput parse_spec(const json& j);
SpecInput parse_spec_text(std::string_view text);

template <Field T>
WeightSpec<T> to_spec(const SpecInput& in) {
  std::vector<T> w, m;
  for (const auto& s : in.weights) w.push_back(parse_scalar<T>(s));
  for (const auto& s : in.dofs) m.push_back(parse_scalar<T>(s));
  return WeightSpec<T>::make(std::move(w), std::move(m));
}

template <Field T>
json scalars_to_json(std::span<const T> values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(format_scalar(v));
  return out;
}

template <Field T>
json spec_to_json(const WeightSpec<T>& spec) {
  json out{{"weights", scalars_to_json(spec.weights())},
           {"dofs", scalars_to_json(spec.dofs())},
           {"mode", mode_name(mode_of<T>())}};
  if (spec.merged()) {
    json merges = json::array();
    for (const auto& group : spec.sources()) {
      if (group.size() < 2) continue;
      json idx = json::array();
      for (auto i : group) idx.push_back(i + 1);
      merges.push_back(idx);
    }
    out["merged_inputs"] = merges;
  }
  return out;
}

template <Field T>
json table_to_json(const CoefficientTable<T>& t) {
  json loo = json::array();
  for (const auto& row : t.lambda_loo) loo.push_back(scalars_to_json<T>(row));
  return json{{"spec", spec_to_json(t.spec)},
              {"r", t.order()},
              {"lambda_full", scalars_to_json<T>(t.lambda_full)},
              {"lambda_loo", loo},
              {"mu_seq", scalars_to_json<T>(t.mu_seq)},
              {"mu", format_scalar(t.mu)}};
}

/// Header `k,lambda_k,mu_k`, one row per k = 0..r.
template <Field T>
std::string table_to_csv(const CoefficientTable<T>& t) {
  std::string out = "k,lambda_k,mu_k\n";
  for (std::size_t k = 0; k <= t.order(); ++k) {
    out += std::to_string(k) + "," + format_scalar(t.lambda_full[k]) + "," + format_scalar(t.mu_seq[k]) + "\n";
  }
  return out;
}

template <Field T>
json polynomial_to_json(const Polynomial<T>& p) {
  return scalars_to_json(p.coeffs());
}

/// {"family": "polynomial", "coeffs": [...]}, {"family": "exponential",
/// "scale": s}, {"family": "sine"|"cosine", "frequency": t}; optional
/// "amplitude" for the non-polynomial families.
template <Field T>
TestFunction<T> test_function_from_json(const json& j) {
  try {
    const std::string family = j.at("family").get<std::string>();
    const double amplitude = j.value("amplitude", 1.0);
    if (family == "polynomial") {
      std::vector<T> c;
      for (const auto& e : j.at("coeffs")) {
        c.push_back(parse_scalar<T>(e.is_string() ? e.get<std::string>() : e.dump()));
      }
      if (c.empty()) throw Error(Errc::ParseError, "polynomial needs at least one coefficient");
      return Polynomial<T>(std::move(c));
    }
    if (family == "exponential") return Exponential{j.at("scale").get<double>(), amplitude};
    if (family == "sine") return Sine{j.at("frequency").get<double>(), amplitude};
    if (family == "cosine") return Cosine{j.at("frequency").get<double>(), amplitude};
    throw Error(Errc::ParseError, "unknown test function family '" + family + "'");
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("malformed test function: ") + e.what());
  }
}

/// Either a JSON object as above or the short form "poly:c0,c1,...",
/// "exp:s", "sin:t", "cos:t".
template <Field T>
TestFunction<T> parse_test_function(std::string_view text) {
  if (!text.empty() && text.front() == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw Error(Errc::ParseError, std::string("malformed test function JSON: ") + e.what());
    }
    return test_function_from_json<T>(j);
  }
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(Errc::ParseError, "test function '" + std::string(text) + "' needs the form family:params");
  }
  const std::string_view family = text.substr(0, colon);
  const std::string_view params = text.substr(colon + 1);
  if (family == "poly") {
    std::vector<T> c;
    std::size_t start = 0;
    while (start <= params.size()) {
      const auto comma = params.find(',', start);
      const auto end = comma == std::string_view::npos ? params.size() : comma;
      c.push_back(parse_scalar<T>(params.substr(start, end - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return Polynomial<T>(std::move(c));
  }
  const double value = parse_double(params);
  if (family == "exp") return Exponential{value};
  if (family == "sin") return Sine{value};
  if (family == "cos") return Cosine{value};
  throw Error(Errc::ParseError, "unknown test function family '" + std::string(family) + "'");
}

template <Field T>
json test_function_to_json(const TestFunction<T>& f) {
  return std::visit(
      [](const auto& g) -> json {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, Polynomial<T>>) {
          return json{{"family", "polynomial"}, {"coeffs", polynomial_to_json(g)}};
        } else if constexpr (std::is_same_v<G, Exponential>) {
          return json{{"family", "exponential"}, {"scale", g.scale}, {"amplitude", g.amplitude}};
        } else if constexpr (std::is_same_v<G, Sine>) {
          return json{{"family", "sine"}, {"frequency", g.frequency}, {"amplitude", g.amplitude}};
        } else {
          return json{{"family", "cosine"}, {"frequency", g.frequency}, {"amplitude", g.amplitude}};
        }
      },
      f.family());
}

json mc_to_json(const MCEstimate& est, double multiplier);
json gof_to_json(const GofResult& result, const FunctionBattery& battery);

/// One float per line, 17 significant digits.
void write_samples(std::ostream& out, std::span<const double> values);
/// Reads one float per line; blank lines and a leading non-numeric header are skipped.
std::vector<double> read_samples(std::istream& in);

}  // namespace steinchi
