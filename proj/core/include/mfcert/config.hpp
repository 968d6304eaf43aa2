#pragma once

// Flat key = value experiment configuration.
//
//   # comment
//   name        = paper-check
//   L           = 4
//   N           = 3
//   h           = laplacian | zero
//   V           = zero | constant | bounded | spiky | coulomb | explicit
//   lambda      = 1.0          amplitude (constant, bounded, coulomb)
//   delta       = 0.5          coulomb regularizer
//   v           = 1.0          spiky height
//   V_values    = 0,1,0,1      explicit potential
//   scenario    = product | near-product | mixture
//   rank        = 0            rank of gamma0, 0 means L
//   epsilon     = 0.1          near-product noise weight
//   dt          = 0.001
//   t_final     = 1.0
//   sample_stride = 1
//   k           = 1,2
//   seed        = 1
//   out_dir     = out/paper-check
//   tol         = 1e-8         certification tolerance

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mfcert/dynamics.hpp"
#include "mfcert/model.hpp"

namespace mfcert {

enum class ScenarioKind { Product, NearProduct, Mixture };

struct ExperimentConfig {
  std::string name = "run";
  std::size_t sites = 4;
  std::size_t particles = 3;
  OneBodyPreset one_body = OneBodyPreset::Laplacian;
  PotentialSpec potential;
  ScenarioKind scenario = ScenarioKind::Product;
  std::size_t rank = 0;
  double epsilon = 0.1;
  TimeGrid grid;
  std::vector<std::size_t> k_values{1, 2};
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "out";
  double tolerance = 1e-8;

  /// Budgets: L^N <= 20000 and (L * a)^N <= 200000 with a = L.
  static constexpr std::size_t kPhysicalBudget = 20000;
  static constexpr std::size_t kLiftedBudget = 200000;

  std::size_t effective_rank() const { return rank == 0 ? sites : rank; }

  /// Throws InvalidConfig (or SizeBudgetExceeded) before any computation.
  void validate() const;

  /// Applies one key = value pair; throws InvalidConfig on unknown keys or
  /// malformed values.
  void set(const std::string& key, const std::string& value);

  /// Canonical text form, parseable by parse_config.
  std::string to_text() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// "smoke", "paper-check" or "mixture".
ExperimentConfig preset_config(const std::string& name);

std::string to_string(ScenarioKind kind);

}  // namespace mfcert
