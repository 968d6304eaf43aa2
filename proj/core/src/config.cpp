#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "mfcert/config.hpp"
#include "mfcert/error.hpp"

namespace mfcert {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw Error(ErrorCode::InvalidConfig, key + ": '" + value + "' is not a number");
  return out;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw Error(ErrorCode::InvalidConfig, key + ": '" + value + "' is not a nonnegative integer");
  return out;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string potential_name(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::Zero: return "zero";
    case PotentialKind::Constant: return "constant";
    case PotentialKind::Bounded: return "bounded";
    case PotentialKind::Spiky: return "spiky";
    case PotentialKind::CoulombLike: return "coulomb";
    case PotentialKind::Explicit: return "explicit";
  }
  return "unknown";
}

std::size_t saturating_power(std::size_t base, std::size_t exponent, std::size_t cap) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && out > cap / base) return cap + 1;
    out *= base;
  }
  return out;
}

}  // namespace

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Product: return "product";
    case ScenarioKind::NearProduct: return "near-product";
    case ScenarioKind::Mixture: return "mixture";
  }
  return "unknown";
}

void ExperimentConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "name") {
    name = value;
  } else if (key == "L") {
    sites = parse_unsigned(key, value);
  } else if (key == "N") {
    particles = parse_unsigned(key, value);
  } else if (key == "h") {
    const std::string v = lower(value);
    if (v == "laplacian") one_body = OneBodyPreset::Laplacian;
    else if (v == "zero") one_body = OneBodyPreset::Zero;
    else throw Error(ErrorCode::InvalidConfig, "h: unknown preset '" + value + "'");
  } else if (key == "V") {
    const std::string v = lower(value);
    if (v == "zero") potential.kind = PotentialKind::Zero;
    else if (v == "constant") potential.kind = PotentialKind::Constant;
    else if (v == "bounded") potential.kind = PotentialKind::Bounded;
    else if (v == "spiky") potential.kind = PotentialKind::Spiky;
    else if (v == "coulomb" || v == "coulomb-like") potential.kind = PotentialKind::CoulombLike;
    else if (v == "explicit") potential.kind = PotentialKind::Explicit;
    else throw Error(ErrorCode::InvalidConfig, "V: unknown preset '" + value + "'");
  } else if (key == "lambda") {
    potential.lambda = parse_double(key, value);
  } else if (key == "delta") {
    potential.delta = parse_double(key, value);
  } else if (key == "v") {
    potential.v = parse_double(key, value);
  } else if (key == "V_values") {
    potential.values.clear();
    for (const auto& item : split_list(value)) potential.values.push_back(parse_double(key, item));
  } else if (key == "scenario") {
    const std::string v = lower(value);
    if (v == "product") scenario = ScenarioKind::Product;
    else if (v == "near-product" || v == "near_product") scenario = ScenarioKind::NearProduct;
    else if (v == "mixture") scenario = ScenarioKind::Mixture;
    else throw Error(ErrorCode::InvalidConfig, "scenario: unknown '" + value + "'");
  } else if (key == "rank") {
    rank = parse_unsigned(key, value);
  } else if (key == "epsilon") {
    epsilon = parse_double(key, value);
  } else if (key == "dt") {
    grid.dt = parse_double(key, value);
  } else if (key == "t_final") {
    grid.t_final = parse_double(key, value);
  } else if (key == "sample_stride") {
    grid.sample_stride = parse_unsigned(key, value);
  } else if (key == "k") {
    k_values.clear();
    for (const auto& item : split_list(value)) k_values.push_back(parse_unsigned(key, item));
  } else if (key == "seed") {
    seed = parse_unsigned(key, value);
  } else if (key == "out_dir") {
    out_dir = value;
  } else if (key == "tol") {
    tolerance = parse_double(key, value);
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
  }
}

void ExperimentConfig::validate() const {
  if (particles < 2) throw Error(ErrorCode::InvalidConfig, "N must be at least 2 (got " + std::to_string(particles) + ")");
  if (sites < 2) throw Error(ErrorCode::InvalidConfig, "L must be at least 2");
  if (saturating_power(sites, particles, kPhysicalBudget) > kPhysicalBudget)
    throw Error(ErrorCode::SizeBudgetExceeded, "L^N exceeds " + std::to_string(kPhysicalBudget));
  if (saturating_power(sites * sites, particles, kLiftedBudget) > kLiftedBudget)
    throw Error(ErrorCode::SizeBudgetExceeded, "(L a)^N exceeds " + std::to_string(kLiftedBudget));
  if (effective_rank() > sites) throw Error(ErrorCode::InvalidConfig, "rank exceeds L");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw Error(ErrorCode::InvalidConfig, "epsilon must lie in [0, 1]");
  if (k_values.empty()) throw Error(ErrorCode::InvalidConfig, "no k values");
  for (std::size_t k : k_values)
    if (k == 0 || k > particles) throw Error(ErrorCode::InvalidConfig, "k = " + std::to_string(k) + " not in [1, N]");
  if (scenario == ScenarioKind::Mixture &&
      std::find(k_values.begin(), k_values.end(), std::size_t{1}) == k_values.end())
    throw Error(ErrorCode::InvalidConfig, "the mixture scenario needs k = 1");
  if (potential.kind == PotentialKind::Explicit && potential.values.size() != sites)
    throw Error(ErrorCode::InvalidConfig, "V_values must have L entries");
  if (!(tolerance >= 0.0)) throw Error(ErrorCode::InvalidConfig, "tol must be nonnegative");
  (void)grid.steps();
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream out;
  out << "name = " << name << '\n'
      << "L = " << sites << '\n'
      << "N = " << particles << '\n'
      << "h = " << (one_body == OneBodyPreset::Laplacian ? "laplacian" : "zero") << '\n'
      << "V = " << potential_name(potential.kind) << '\n'
      << "lambda = " << format_double(potential.lambda) << '\n'
      << "delta = " << format_double(potential.delta) << '\n'
      << "v = " << format_double(potential.v) << '\n';
  if (!potential.values.empty()) {
    out << "V_values = ";
    for (std::size_t i = 0; i < potential.values.size(); ++i)
      out << (i ? "," : "") << format_double(potential.values[i]);
    out << '\n';
  }
  out << "scenario = " << to_string(scenario) << '\n'
      << "rank = " << rank << '\n'
      << "epsilon = " << format_double(epsilon) << '\n'
      << "dt = " << format_double(grid.dt) << '\n'
      << "t_final = " << format_double(grid.t_final) << '\n'
      << "sample_stride = " << grid.sample_stride << '\n'
      << "k = ";
  for (std::size_t i = 0; i < k_values.size(); ++i) out << (i ? "," : "") << k_values[i];
  out << '\n'
      << "seed = " << seed << '\n'
      << "out_dir = " << out_dir.string() << '\n'
      << "tol = " << format_double(tolerance) << '\n';
  return out.str();
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(number) + ": expected key = value");
    config.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open config " + path.string());
  ExperimentConfig config = parse_config(in);
  if (config.name == "run") config.name = path.stem().string();
  return config;
}

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig config;
  config.name = name;
  config.out_dir = std::filesystem::path("out") / name;
  if (name == "smoke") {
    config.sites = 2;
    config.particles = 2;
    config.grid = {0.1, 1e-3, 1};
    config.potential.kind = PotentialKind::Bounded;
  } else if (name == "paper-check") {
    config.sites = 4;
    config.particles = 3;
    config.grid = {1.0, 1e-3, 1};
    config.potential.kind = PotentialKind::Bounded;
  } else if (name == "mixture") {
    config.sites = 4;
    config.particles = 3;
    config.grid = {1.0, 1e-3, 1};
    config.potential.kind = PotentialKind::Bounded;
    config.scenario = ScenarioKind::Mixture;
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown preset '" + name + "'");
  }
  return config;
}

}  // namespace mfcert
