#include "steinchi/json_io.hpp"

#include <cctype>
#include <istream>
#include <ostream>

namespace steinchi {

namespace {

std::vector<std::string> scalar_strings(const json& arr, const char* field, Mode mode) {
  if (!arr.is_array()) throw Error(Errc::ParseError, std::string("'") + field + "' must be an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& e = arr[i];
    if (e.is_string()) {
      out.push_back(e.get<std::string>());
    } else if (e.is_number_integer()) {
      out.push_back(e.dump());
    } else if (e.is_number_float() && mode == Mode::floating) {
      out.push_back(format_double(e.get<double>()));
    } else {
      throw Error(Errc::ParseError, std::string("'") + field + "' entry " + std::to_string(i + 1) +
                                        " must be a string or integer scalar");
    }
  }
  return out;
}

}  // namespace

SpecInput parse_spec(const json& j) {
  if (!j.is_object()) throw Error(Errc::ParseError, "spec must be a JSON object");
  if (!j.contains("weights") || !j.contains("dofs")) {
    throw Error(Errc::ParseError, "spec needs 'weights' and 'dofs'");
  }
  SpecInput in;
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) throw Error(Errc::ParseError, "'mode' must be a string");
    in.mode = parse_mode(j["mode"].get<std::string>());
  }
  in.weights = scalar_strings(j["weights"], "weights", in.mode);
  in.dofs = scalar_strings(j["dofs"], "dofs", in.mode);
  return in;
}

SpecInput parse_spec_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("malformed spec JSON: ") + e.what());
  }
  return parse_spec(j);
}

json mc_to_json(const MCEstimate& est, double multiplier) {
  return json{{"mean", est.mean},
              {"std_error", est.std_error},
              {"n", est.n},
              {"seed", est.seed},
              {"shards", est.shards},
              {"multiplier", multiplier},
              {"within_4se", est.within(4.0)},
              {"within_band", est.within(multiplier)}};
}

json gof_to_json(const GofResult& result, const FunctionBattery& battery) {
  json per = json::array();
  for (std::size_t j = 0; j < battery.size(); ++j) {
    per.push_back(json{{"function", battery.functions()[j].describe()},
                       {"standardized_mean", result.per_function[j]}});
  }
  return json{{"statistic", result.statistic},
              {"pvalue", result.pvalue},
              {"per_function", per},
              {"B", result.B},
              {"exceedances", result.exceedances},
              {"seed", result.seed},
              {"shards", result.shards}};
}

void write_samples(std::ostream& out, std::span<const double> values) {
  for (double v : values) out << format_double(v) << '\n';
}

std::vector<double> read_samples(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = line;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    if (s.empty()) continue;
    try {
      out.push_back(parse_double(s));
    } catch (const Error&) {
      if (out.empty() && line_no == 1) continue;  // header
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": not a number: '" +
                                        std::string(s) + "'");
    }
  }
  return out;
}

}  // namespace steinchi
