#include "wrp/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "wrp/errors.hpp"

namespace wrp {

namespace {

using nlohmann::json;

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string(what) + " is not valid JSON: " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void check_schema(const json& j, const char* what) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, std::string(what) + " must be an object");
  if (!j.contains("schema_version")) {
    throw Error(ErrorCode::ConfigError, std::string(what) + ": missing schema_version");
  }
  if (!j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != kSchemaVersion) {
    throw Error(ErrorCode::ConfigError, std::string(what) + ": unsupported schema_version (expected " +
                                            std::to_string(kSchemaVersion) + ")");
  }
}

double number(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::ConfigError, std::string("missing field ") + key);
  if (!j[key].is_number()) throw Error(ErrorCode::ConfigError, std::string(key) + " must be a number");
  return j[key].get<double>();
}

std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return number(j, key);
}

std::vector<double> number_array(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw Error(ErrorCode::ConfigError, std::string(key) + " must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw Error(ErrorCode::ConfigError, std::string(key) + " must be numeric");
    out.push_back(v.get<double>());
  }
  return out;
}

double to_double(std::string_view s, bool& ok) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  ok = ec == std::errc() && p == s.data() + s.size() && !s.empty();
  return v;
}

}  // namespace

LevyTriplet parse_model(std::string_view text) {
  const json j = parse_json(text, "model");
  check_schema(j, "model");
  const double sigma = number(j, "sigma");
  const auto zeta = optional_number(j, "zeta");
  JumpMeasure jumps = NoJumps{};
  std::optional<double> mu = optional_number(j, "mu");
  if (j.contains("jumps") && !j["jumps"].is_null()) {
    const json& jm = j["jumps"];
    if (!jm.is_object() || !jm.contains("kind") || !jm["kind"].is_string()) {
      throw Error(ErrorCode::ConfigError, "jumps must be an object with a string kind");
    }
    const std::string kind = jm["kind"].get<std::string>();
    if (kind == "none") {
    } else if (kind == "gamma") {
      GammaJumps g{number(jm, "alpha"), number(jm, "beta")};
      if (!mu) mu = -g.beta / g.alpha;
      jumps = g;
    } else if (kind == "tabulated") {
      jumps = TabulatedJumps{number_array(jm, "x"), number_array(jm, "density")};
    } else {
      throw Error(ErrorCode::ConfigError, "unknown jump kind '" + kind + "'");
    }
  }
  try {
    return LevyTriplet(mu.value_or(0.0), sigma, std::move(jumps), zeta);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) throw Error(ErrorCode::ConfigError, e.what());
    throw;
  }
}

LevyTriplet load_model(const std::string& path) { return parse_model(read_file(path)); }

FourierPayoff parse_payoff(std::string_view text, double default_zeta, const std::string& base_dir) {
  const json j = parse_json(text, "payoff");
  check_schema(j, "payoff");
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw Error(ErrorCode::ConfigError, "payoff kind must be a string");
  }
  const std::string kind = j["kind"].get<std::string>();
  const double zeta = optional_number(j, "zeta").value_or(default_zeta);
  if (kind == "put") return make_put(number(j, "K"), zeta);
  if (kind == "indicator") return make_indicator(number(j, "K"), zeta);
  if (kind == "custom") {
    if (!j.contains("grid") || !j["grid"].is_string()) {
      throw Error(ErrorCode::ConfigError, "custom payoff needs a grid CSV path");
    }
    std::filesystem::path p(j["grid"].get<std::string>());
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    std::vector<double> x, h;
    read_csv_columns(p.string(), x, h);
    return make_custom(std::move(x), std::move(h), zeta);
  }
  throw Error(ErrorCode::ConfigError, "unknown payoff kind '" + kind + "'");
}

FourierPayoff load_payoff(const std::string& path, double default_zeta) {
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_payoff(read_file(path), default_zeta, dir.empty() ? "." : dir.string());
}

std::vector<double> parse_grid(std::string_view spec) {
  bool ok = false;
  const auto c1 = spec.find(':');
  if (c1 == std::string_view::npos) {
    const double v = to_double(spec, ok);
    if (!ok) throw Error(ErrorCode::InvalidArgument, "bad grid '" + std::string(spec) + "'");
    return {v};
  }
  const auto c2 = spec.find(':', c1 + 1);
  if (c2 == std::string_view::npos) {
    throw Error(ErrorCode::InvalidArgument, "grid must be a:b:n, got '" + std::string(spec) + "'");
  }
  bool ok_a = false, ok_b = false, ok_n = false;
  const double a = to_double(spec.substr(0, c1), ok_a);
  const double b = to_double(spec.substr(c1 + 1, c2 - c1 - 1), ok_b);
  const double nd = to_double(spec.substr(c2 + 1), ok_n);
  if (!ok_a || !ok_b || !ok_n || nd < 1 || nd != std::floor(nd) || nd > 1e8) {
    throw Error(ErrorCode::InvalidArgument, "grid must be a:b:n with integer n >= 1, got '" +
                                                std::string(spec) + "'");
  }
  const auto n = static_cast<std::size_t>(nd);
  if (n == 1) {
    if (a != b) throw Error(ErrorCode::InvalidArgument, "a:b:1 needs a == b");
    return {a};
  }
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = a + (b - a) * static_cast<double>(i) / (n - 1);
  g.back() = b;
  return g;
}

void read_csv_columns(const std::string& path, std::vector<double>& a, std::vector<double>& b) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path);
  a.clear();
  b.clear();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    bool ok1 = false, ok2 = false;
    double v1 = 0.0, v2 = 0.0;
    if (comma != std::string::npos) {
      const std::string_view sv(line);
      v1 = to_double(sv.substr(0, comma), ok1);
      const auto rest = sv.substr(comma + 1);
      v2 = to_double(rest.substr(0, rest.find(',')), ok2);
    }
    if (!ok1 || !ok2) {
      if (a.empty() && lineno == 1) continue;  // header
      throw Error(ErrorCode::ConfigError, path + ":" + std::to_string(lineno) + ": expected two numbers");
    }
    a.push_back(v1);
    b.push_back(v2);
  }
  if (a.empty()) throw Error(ErrorCode::ConfigError, path + ": no data rows");
}

std::string format_double(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (columns.size() != header.size()) {
    throw Error(ErrorCode::InvalidArgument, "header and column counts differ");
  }
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != n) throw Error(ErrorCode::InvalidArgument, "columns differ in length");
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
  os << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < columns.size(); ++k) {
      os << (k ? "," : "") << format_double(columns[k][i]);
    }
    os << '\n';
  }
  if (!os) throw Error(ErrorCode::IoError, "write failed: " + path);
}

}  // namespace wrp
