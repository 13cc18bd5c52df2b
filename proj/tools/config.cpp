#include "config.hpp"

#include <fstream>
#include <sstream>

namespace bspcli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void die(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& s, int line, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    die(line, "bad number for " + key + ": '" + s + "'");
  }
}

std::uint64_t parse_u64(const std::string& s, int line,
                        const std::string& key) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    die(line, "bad integer for " + key + ": '" + s + "'");
  }
}

void apply_key(AttrConfig& a, const std::string& key, const std::string& value,
               int line) {
  if (key == "kind") {
    if (value == "numeric")
      a.kind = AttrConfig::Kind::Numeric;
    else if (value == "categorical")
      a.kind = AttrConfig::Kind::Categorical;
    else
      die(line, "kind must be numeric or categorical");
  } else if (key == "lambda") {
    const auto parts = split_ws(value);
    if (parts.size() == 1 && parts[0] == "uniform") {
      a.policy.lambda_mode = BSP_LAMBDA_UNIFORM;
    } else if (parts.size() == 2 && parts[0] == "fixed") {
      a.policy.lambda_mode = BSP_LAMBDA_FIXED;
      a.policy.lambda_value = parse_double(parts[1], line, key);
    } else {
      die(line, "lambda must be 'uniform' or 'fixed <value>'");
    }
  } else if (key == "transforms") {
    const auto parts = split_ws(value);
    if (parts.size() == 2 && parts[0] == "fixed") {
      a.policy.transforms_mode = BSP_TRANSFORMS_FIXED;
      a.policy.transforms_lo = a.policy.transforms_hi =
          static_cast<std::uint32_t>(parse_u64(parts[1], line, key));
    } else if (parts.size() == 3 && parts[0] == "range") {
      a.policy.transforms_mode = BSP_TRANSFORMS_RANGE;
      a.policy.transforms_lo =
          static_cast<std::uint32_t>(parse_u64(parts[1], line, key));
      a.policy.transforms_hi =
          static_cast<std::uint32_t>(parse_u64(parts[2], line, key));
    } else {
      die(line, "transforms must be 'fixed <n>' or 'range <lo> <hi>'");
    }
  } else if (key == "matrix") {
    a.matrix_path = value;
  } else if (key == "target-beta") {
    a.target_beta = parse_double(value, line, key);
  } else if (key == "size") {
    a.size = parse_u64(value, line, key);
  } else if (key == "labels") {
    a.labels = split_ws(value);
    if (a.labels.empty()) die(line, "labels must list at least one label");
  } else if (key == "unknown") {
    if (value == "reject")
      a.unknown = BSP_UNKNOWN_REJECT;
    else if (value == "expand")
      a.unknown = BSP_UNKNOWN_EXPAND;
    else
      die(line, "unknown must be reject or expand");
  } else if (key == "expand-lambda") {
    a.expand_lambda = parse_double(value, line, key);
  } else if (key == "expand-target") {
    a.expand_target = value;
  } else {
    die(line, "unrecognized attribute key '" + key + "'");
  }
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);

  RunConfig cfg;
  AttrConfig* current = nullptr;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') die(line, "unterminated section header");
      const auto parts = split_ws(s.substr(1, s.size() - 2));
      if (parts.size() != 2 || parts[0] != "attribute")
        die(line, "expected [attribute <name>]");
      for (const auto& a : cfg.attributes)
        if (a.name == parts[1]) die(line, "duplicate attribute " + parts[1]);
      cfg.attributes.push_back(AttrConfig{});
      current = &cfg.attributes.back();
      current->name = parts[1];
      continue;
    }

    const auto eq = s.find('=');
    if (eq == std::string::npos) die(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty() || value.empty()) die(line, "expected key = value");

    if (current == nullptr) {
      if (key == "seed") {
        cfg.seed = parse_u64(value, line, key);
        cfg.has_seed = true;
      } else {
        die(line, "unrecognized global key '" + key + "'");
      }
    } else {
      apply_key(*current, key, value, line);
    }
  }

  if (cfg.attributes.empty())
    throw ConfigError("config declares no attributes: " + path);
  for (const auto& a : cfg.attributes) {
    if (a.kind == AttrConfig::Kind::Categorical) {
      if (a.labels.empty())
        throw ConfigError("attribute " + a.name + ": categorical needs labels");
      if (a.matrix_path.empty() && a.target_beta < 0)
        throw ConfigError("attribute " + a.name +
                          ": categorical needs matrix or target-beta");
    }
  }
  return cfg;
}

}  // namespace bspcli
