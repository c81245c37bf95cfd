#include "twistorlab/verify/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace twistorlab::verify {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) return s.substr(1, s.size() - 2);
  return s;
}

[[noreturn]] void fail_at(int line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + what);
}

double parse_factor(const std::string& token, int line, const std::string& key) {
  const std::string t = trim(token);
  if (t == "pi") return std::numbers::pi;
  double v = 0.0;
  const char* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (t.empty() || ec != std::errc() || ptr != end) fail_at(line, key + ": expected a number, got '" + t + "'");
  return v;
}

// Products and quotients of numbers and pi, e.g. "pi/2", "0.5*pi", "-1e-3".
double parse_number(const std::string& text, int line, const std::string& key) {
  std::string s = trim(text);
  double sign = 1.0;
  if (!s.empty() && s[0] == '-' && s.find_first_of("*/") != std::string::npos) {
    sign = -1.0;
    s = s.substr(1);
  }
  double value = 1.0;
  char op = '*';
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == '*' || s[i] == '/') {
      const double f = parse_factor(s.substr(start, i - start), line, key);
      value = op == '*' ? value * f : value / f;
      if (i < s.size()) op = s[i];
      start = i + 1;
    }
  }
  if (!std::isfinite(value)) fail_at(line, key + ": value is not finite");
  return sign * value;
}

long long parse_integer(const std::string& text, int line, const std::string& key) {
  const std::string t = trim(text);
  long long v = 0;
  const char* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (t.empty() || ec != std::errc() || ptr != end) fail_at(line, key + ": expected an integer, got '" + t + "'");
  return v;
}

std::vector<std::string> parse_list(const std::string& text) {
  std::string s = trim(text);
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = unquote(trim(item));
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, int, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto number = [](double FamilySpec::*field) {
      return [field](RunConfig& c, const std::string& v, int line, const std::string& key) {
        c.family.*field = parse_number(v, line, key);
      };
    };
    t["family.kind"] = [](RunConfig& c, const std::string& v, int line, const std::string&) {
      try {
        c.family.kind = family_kind_from_string(unquote(v));
      } catch (const ParameterError& e) {
        fail_at(line, std::string("family.kind: ") + e.what());
      }
    };
    t["family.n"] = [](RunConfig& c, const std::string& v, int line, const std::string& key) {
      c.family.n = static_cast<int>(parse_integer(v, line, key));
    };
    t["family.radius"] = number(&FamilySpec::radius);
    t["family.k"] = number(&FamilySpec::k);
    t["family.a"] = number(&FamilySpec::a);
    t["family.perturbation"] = number(&FamilySpec::perturbation);
    t["family.l"] = [](RunConfig& c, const std::string& v, int line, const std::string& key) {
      c.family.l = parse_number(v, line, key);
    };
    t["family.c"] = [](RunConfig& c, const std::string& v, int line, const std::string& key) {
      c.family.c = parse_number(v, line, key);
    };
    t["family.xi"] = [](RunConfig& c, const std::string& v, int, const std::string&) { c.family.xi = unquote(v); };
    t["family.gamma.kind"] = [](RunConfig& c, const std::string& v, int, const std::string&) {
      c.family.gamma.kind = unquote(v);
    };
    t["family.gamma.epsilon"] = [](RunConfig& c, const std::string& v, int line, const std::string& key) {
      c.family.gamma.epsilon = parse_number(v, line, key);
    };
    auto number_list = [](std::vector<double> ProfileSpec::*field) {
      return [field](RunConfig& c, const std::string& v, int line, const std::string& key) {
        std::vector<double> out;
        for (const std::string& item : parse_list(v)) out.push_back(parse_number(item, line, key));
        c.family.gamma.*field = std::move(out);
      };
    };
    t["family.gamma.coeffs"] = number_list(&ProfileSpec::coeffs);
    t["family.gamma.values"] = number_list(&ProfileSpec::values);
    t["run.samples"] = [](RunConfig& c, const std::string& v, int line, const std::string& key) {
      c.samples = static_cast<int>(parse_integer(v, line, key));
    };
    t["run.seed"] = [](RunConfig& c, const std::string& v, int line, const std::string& key) {
      const long long s = parse_integer(v, line, key);
      if (s < 0) throw ConfigError("run.seed: must be non-negative");
      c.seed = static_cast<std::uint64_t>(s);
    };
    t["run.threads"] = [](RunConfig& c, const std::string& v, int line, const std::string& key) {
      c.threads = static_cast<int>(parse_integer(v, line, key));
    };
    t["run.omegas"] = [](RunConfig& c, const std::string& v, int line, const std::string& key) {
      c.omegas = static_cast<int>(parse_integer(v, line, key));
    };
    t["run.suites"] = [](RunConfig& c, const std::string& v, int line, const std::string&) {
      const std::vector<std::string> names = parse_list(v);
      for (const std::string& name : names) {
        if (name != "all" && std::find(all_suites().begin(), all_suites().end(), name) == all_suites().end())
          fail_at(line, "run.suites: unknown suite '" + name + "'");
      }
      c.suites.clear();
      for (const std::string& s : all_suites())
        if (std::find(names.begin(), names.end(), s) != names.end() ||
            std::find(names.begin(), names.end(), "all") != names.end())
          c.suites.push_back(s);
    };
    t["tol.order1"] = [](RunConfig& c, const std::string& v, int line, const std::string& key) {
      c.tolerances.order1 = parse_number(v, line, key);
    };
    t["tol.order2"] = [](RunConfig& c, const std::string& v, int line, const std::string& key) {
      c.tolerances.order2 = parse_number(v, line, key);
    };
    t["tol.order3"] = [](RunConfig& c, const std::string& v, int line, const std::string& key) {
      c.tolerances.order3 = parse_number(v, line, key);
    };
    t["output.dir"] = [](RunConfig& c, const std::string& v, int, const std::string&) { c.output_dir = unquote(v); };
    t["output.format"] = [](RunConfig& c, const std::string& v, int line, const std::string&) {
      const std::string f = unquote(v);
      if (!valid_format(f)) fail_at(line, "output.format: unknown format '" + f + "'");
      c.format = f;
    };
    return t;
  }();
  return table;
}

std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quote) {
      if (ch == quote) quote = 0;
    } else if (ch == '"' || ch == '\'') {
      quote = ch;
    } else if (ch == '#' || ch == ';') {
      return line.substr(0, i);
    }
  }
  return line;
}

}  // namespace

bool valid_format(const std::string& format) {
  return format == "json" || format == "csv-summary" || format == "csv-profiles";
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string raw, section;
  std::map<std::string, int> seen;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string body = trim(strip_comment(raw));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') fail_at(line, "unterminated section header");
      section = trim(std::string_view(body).substr(1, body.size() - 2));
      if (section.empty()) fail_at(line, "empty section name");
      continue;
    }
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) fail_at(line, "expected 'key = value'");
    std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) fail_at(line, "missing key");
    if (value.empty()) fail_at(line, "missing value for '" + key + "'");
    if (!section.empty() && !setters().count(key)) key = section + "." + key;
    const auto it = setters().find(key);
    if (it == setters().end()) fail_at(line, "unknown key '" + key + "'");
    if (const auto prev = seen.find(key); prev != seen.end())
      fail_at(line, "duplicate key '" + key + "' (first set on line " + std::to_string(prev->second) + ")");
    seen[key] = line;
    it->second(config, value, line, key);
  }
  validate(config);
  apply_suite_rules(config);
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(c.samples >= 1, "samples: must be at least 1 (run.samples)");
  require(c.threads >= 0, "run.threads: must be non-negative");
  require(c.omegas >= 1, "run.omegas: must be at least 1");
  require(c.family.n >= 2 && c.family.n <= 6, "family.n: must lie in [2, 6]");
  require(c.family.radius > 0.0, "family.radius: must be positive");
  require(c.family.k > 0.0, "family.k: must be positive");
  require(!c.family.l || *c.family.l > 0.0, "family.l: must be positive");
  require(!c.family.c || *c.family.c > 0.0, "family.c: must be positive");
  require(c.family.perturbation > -1.0 && c.family.perturbation < 1.0, "family.perturbation: must lie in (-1, 1)");
  for (const auto& [key, v] : {std::pair{"tol.order1", c.tolerances.order1}, std::pair{"tol.order2", c.tolerances.order2},
                               std::pair{"tol.order3", c.tolerances.order3}})
    require(v > 0.0, std::string(key) + ": must be positive");
  require(c.tolerance_scale > 0.0, "tolerance scale: must be positive");
  require(valid_format(c.format), "output.format: unknown format '" + c.format + "'");
}

void apply_suite_rules(RunConfig& config) {
  const bool has_boundary = config.family.kind == FamilyKind::RiemannianJoin || config.family.kind == FamilyKind::GcvfFactor;
  if (!has_boundary) return;
  if (config.suites.empty()) return;
  if (std::find(config.suites.begin(), config.suites.end(), "boundary") != config.suites.end()) return;
  std::vector<std::string> ordered;
  for (const std::string& s : all_suites())
    if (s == "boundary" || std::find(config.suites.begin(), config.suites.end(), s) != config.suites.end())
      ordered.push_back(s);
  config.suites = std::move(ordered);
}

}  // namespace twistorlab::verify
