#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "balanced/sections.hpp"
#include "balanced/types.hpp"

namespace balanced {

enum class InitKind { Identity, Random, File };

/// Batch run configuration. The file format is one `key = value` per line,
/// `#` starts a comment. Keys:
///   bundle       LineP1(k) | LineP2(k) | Sum(a,b) | TangentP2   (required)
///   manifold     P1 | P2 (optional, must agree with the bundle)
///   order        quadrature order >= 2                          (required)
///   init         identity | random | file                       [identity]
///   amplitude    random perturbation size in (0, 1)             [0.2]
///   seed         unsigned integer                               [0]
///   init_file    result JSON whose final_gram is the start      (init = file)
///   tol          [1e-8]   spread_max [1e6]   max_iter [500]
///   deterministic true | false                                  [true]
///   trace_csv    output path                                    [trace.csv]
///   result_json  output path                                    [result.json]
/// Relative paths are resolved against the config file's directory.
struct RunConfig {
  Manifold manifold = Manifold::P1;
  BundleId bundle;
  int order = 0;
  InitKind init = InitKind::Identity;
  double amplitude = 0.2;
  std::uint64_t seed = 0;
  std::filesystem::path init_file;
  double tol = 1e-8;
  double spread_max = 1e6;
  int max_iter = 500;
  bool deterministic = true;
  std::filesystem::path trace_csv = "trace.csv";
  std::filesystem::path result_json = "result.json";
};

/// Throws invalid-input on unknown keys, malformed values or violated
/// ranges. `base_dir` anchors relative paths.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// H0 = L L^dagger with L = I + amplitude * X, X a Gaussian Hermitian
/// matrix scaled to unit operator norm; eigenvalues are floored at
/// 1e-12 * lambda_max. Requires 0 < amplitude < 1.
HermitianForm random_initial_gram(int dim, double amplitude, std::uint64_t seed);

}  // namespace balanced
