#include "rcm/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rcm {

namespace {

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_array(const std::string& value, const std::string& key) {
  if (value.size() < 2 || value.front() != '[' || value.back() != ']')
    throw std::invalid_argument("config: expected an array for " + key);
  std::vector<double> out;
  std::string body = value.substr(1, value.size() - 2);
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size())
      throw std::invalid_argument("config: bad number '" + item + "' in " + key);
  }
  return out;
}

double parse_number(const std::string& value, const std::string& key) {
  size_t used = 0;
  const double v = std::stod(value, &used);
  if (used != value.size()) throw std::invalid_argument("config: bad number for " + key);
  return v;
}

std::string parse_string(const std::string& value) {
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
    return value.substr(1, value.size() - 2);
  return value;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_array(const std::vector<double>& xs) {
  std::string out = "[";
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += fmt(xs[i]);
  }
  return out + "]";
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " is not key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty())
      throw std::invalid_argument("config: empty value for " + key);

    if (key == "d") cfg.d = static_cast<int>(parse_number(value, key));
    else if (key == "q") cfg.q = static_cast<int>(parse_number(value, key));
    else if (key == "alpha") cfg.alpha = static_cast<int>(parse_number(value, key));
    else if (key == "n") cfg.n = static_cast<std::int64_t>(parse_number(value, key));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_number(value, key));
    else if (key == "threads") cfg.threads = static_cast<int>(parse_number(value, key));
    else if (key == "bootstrap") cfg.bootstrap = static_cast<int>(parse_number(value, key));
    else if (key == "family") cfg.family = parse_string(value);
    else if (key == "family_r") cfg.family_r = parse_number(value, key);
    else if (key == "fixed_radius") cfg.fixed_radius = parse_number(value, key);
    else if (key == "radius_lo") cfg.radius_lo = parse_number(value, key);
    else if (key == "radius_hi") cfg.radius_hi = parse_number(value, key);
    else if (key == "levels_c") cfg.levels_c = parse_array(value, key);
    else if (key == "levels_rate") cfg.levels_rate = parse_array(value, key);
    else if (key == "D") cfg.D = parse_number(value, key);
    else if (key == "beta") cfg.beta = parse_number(value, key);
    else if (key == "betas") cfg.betas = parse_array(value, key);
    else if (key == "r") cfg.r = parse_number(value, key);
    else if (key == "r_grid") cfg.r_grid = parse_array(value, key);
    else if (key == "s") cfg.s = parse_number(value, key);
    else if (key == "r_small") cfg.r_small = parse_number(value, key);
    else if (key == "r_large") cfg.r_large = parse_number(value, key);
    else if (key == "beta_min") cfg.beta_min = parse_number(value, key);
    else if (key == "beta_max") cfg.beta_max = parse_number(value, key);
    else if (key == "grid_steps") cfg.grid_steps = static_cast<int>(parse_number(value, key));
    else if (key == "tau") cfg.tau = parse_number(value, key);
    else if (key == "beta_c_hat") cfg.beta_c_hat = parse_number(value, key);
    else if (key == "proxy_r") cfg.proxy_r = parse_number(value, key);
    else if (key == "out") cfg.out = parse_string(value);
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  const auto put = [&](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  put("d", std::to_string(cfg.d));
  put("q", std::to_string(cfg.q));
  put("alpha", std::to_string(cfg.alpha));
  put("n", std::to_string(cfg.n));
  put("seed", std::to_string(cfg.seed));
  put("threads", std::to_string(cfg.threads));
  put("bootstrap", std::to_string(cfg.bootstrap));
  put("family", "\"" + cfg.family + "\"");
  if (cfg.family_r) put("family_r", fmt(*cfg.family_r));
  if (cfg.fixed_radius) put("fixed_radius", fmt(*cfg.fixed_radius));
  if (cfg.radius_lo) put("radius_lo", fmt(*cfg.radius_lo));
  if (cfg.radius_hi) put("radius_hi", fmt(*cfg.radius_hi));
  if (!cfg.levels_c.empty()) put("levels_c", fmt_array(cfg.levels_c));
  if (!cfg.levels_rate.empty()) put("levels_rate", fmt_array(cfg.levels_rate));
  if (cfg.D) put("D", fmt(*cfg.D));
  if (cfg.beta) put("beta", fmt(*cfg.beta));
  if (!cfg.betas.empty()) put("betas", fmt_array(cfg.betas));
  if (cfg.r) put("r", fmt(*cfg.r));
  if (!cfg.r_grid.empty()) put("r_grid", fmt_array(cfg.r_grid));
  if (cfg.s) put("s", fmt(*cfg.s));
  if (cfg.r_small) put("r_small", fmt(*cfg.r_small));
  if (cfg.r_large) put("r_large", fmt(*cfg.r_large));
  if (cfg.beta_min) put("beta_min", fmt(*cfg.beta_min));
  if (cfg.beta_max) put("beta_max", fmt(*cfg.beta_max));
  put("grid_steps", std::to_string(cfg.grid_steps));
  put("tau", fmt(cfg.tau));
  if (cfg.beta_c_hat) put("beta_c_hat", fmt(*cfg.beta_c_hat));
  if (cfg.proxy_r) put("proxy_r", fmt(*cfg.proxy_r));
  put("out", "\"" + cfg.out + "\"");
  return out;
}

std::uint64_t config_hash(const RunConfig& cfg) {
  const std::string text = serialize_config(cfg);
  const Key128 key{0x52434d2d636f6e66ull, 0x69672d686173682eull};
  return siphash24(key, reinterpret_cast<const std::uint8_t*>(text.data()), text.size());
}

ConnectionFamily family_from_config(const RunConfig& cfg) {
  std::optional<double> D = cfg.D;
  if (cfg.family == "vr") {
    if (!cfg.family_r) throw std::invalid_argument("config: vr needs family_r");
    return make_vietoris_rips(cfg.alpha, *cfg.family_r, D);
  }
  if (cfg.family == "cech") {
    if (!cfg.family_r) throw std::invalid_argument("config: cech needs family_r");
    return make_cech(cfg.alpha, *cfg.family_r, D);
  }
  if (cfg.family == "boolean") {
    MarkLaw law;
    if (cfg.fixed_radius) law = MarkLaw::fixed_radius(*cfg.fixed_radius);
    else if (cfg.radius_lo && cfg.radius_hi)
      law = MarkLaw::uniform_radius(*cfg.radius_lo, *cfg.radius_hi);
    else throw std::invalid_argument("config: boolean needs fixed_radius or radius_lo/radius_hi");
    return make_boolean_balls(cfg.alpha, law, D);
  }
  if (cfg.family == "diam_kernel") {
    if (!D) throw std::invalid_argument("config: diam_kernel needs an explicit D (V2 cutoff)");
    if (cfg.levels_c.empty() || cfg.levels_c.size() != cfg.levels_rate.size())
      throw std::invalid_argument("config: diam_kernel needs matching levels_c / levels_rate");
    std::vector<DiamLevel> levels;
    for (size_t i = 0; i < cfg.levels_c.size(); ++i)
      levels.push_back(DiamLevel{cfg.levels_c[i], cfg.levels_rate[i]});
    return make_diam_kernel(levels, *D);
  }
  throw std::invalid_argument("config: unknown family '" + cfg.family + "'");
}

std::vector<std::string> validate_config(const RunConfig& cfg) {
  std::vector<std::string> errors;
  if (cfg.d < 1 || cfg.d > kMaxDim) errors.push_back("d must be in 1.." + std::to_string(kMaxDim));
  if (cfg.q < 0) errors.push_back("q must be >= 0");
  if (cfg.q >= cfg.alpha) errors.push_back("q must be < alpha (q-graphs need (q+1)-simplices)");
  if (cfg.n < 1) errors.push_back("n must be >= 1");
  if (cfg.threads < 1) errors.push_back("threads must be >= 1");
  if (cfg.beta && *cfg.beta < 0.0) errors.push_back("beta must be >= 0");
  for (const double b : cfg.betas)
    if (b < 0.0) errors.push_back("betas must be >= 0");
  if (cfg.r && !(*cfg.r > 0.0)) errors.push_back("r must be > 0");
  if (cfg.s && cfg.r && *cfg.s > *cfg.r) errors.push_back("s must be <= r");
  if (cfg.s && !(*cfg.s > 0.0)) errors.push_back("s must be > 0");
  try {
    const ConnectionFamily family = family_from_config(cfg);
    if (cfg.q >= family.alpha) errors.push_back("q must be < alpha");
    else if (cfg.q < family.min_valid_q())
      errors.push_back("family's (V2) cutoff is declared only for q >= " +
                       std::to_string(family.min_valid_q()));
  } catch (const std::invalid_argument& e) {
    errors.push_back(e.what());
  }
  return errors;
}

}  // namespace rcm
