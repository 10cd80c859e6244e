#include "balanced/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "balanced/errors.hpp"

namespace balanced {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || !std::isfinite(v)) {
    fail(ErrorKind::InvalidInput, "'" + key + "' expects a number, got '" + value + "'");
  }
  return v;
}

long long parse_integer(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size()) {
    fail(ErrorKind::InvalidInput, "'" + key + "' expects an integer, got '" + value + "'");
  }
  return v;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  return (p.is_relative() && !base.empty()) ? base / p : p;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  cfg.trace_csv = resolve(base_dir, "trace.csv");
  cfg.result_json = resolve(base_dir, "result.json");
  bool have_bundle = false, have_order = false;
  std::string manifold_text;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::InvalidInput, "line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) fail(ErrorKind::InvalidInput, "'" + key + "' has an empty value");

    if (key == "bundle") {
      cfg.bundle = BundleId::parse(value);
      have_bundle = true;
    } else if (key == "manifold") {
      if (value != "P1" && value != "P2") {
        fail(ErrorKind::InvalidInput, "unsupported manifold '" + value + "'");
      }
      manifold_text = value;
    } else if (key == "order") {
      cfg.order = static_cast<int>(parse_integer(key, value));
      have_order = true;
    } else if (key == "init") {
      if (value == "identity") cfg.init = InitKind::Identity;
      else if (value == "random") cfg.init = InitKind::Random;
      else if (value == "file") cfg.init = InitKind::File;
      else fail(ErrorKind::InvalidInput, "init must be identity, random or file");
    } else if (key == "amplitude") {
      cfg.amplitude = parse_double(key, value);
    } else if (key == "seed") {
      const long long s = parse_integer(key, value);
      if (s < 0) fail(ErrorKind::InvalidInput, "seed must be non-negative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "init_file") {
      cfg.init_file = resolve(base_dir, value);
    } else if (key == "tol") {
      cfg.tol = parse_double(key, value);
    } else if (key == "spread_max") {
      cfg.spread_max = parse_double(key, value);
    } else if (key == "max_iter") {
      cfg.max_iter = static_cast<int>(parse_integer(key, value));
    } else if (key == "deterministic") {
      if (value != "true" && value != "false") {
        fail(ErrorKind::InvalidInput, "deterministic must be true or false");
      }
      cfg.deterministic = value == "true";
    } else if (key == "trace_csv") {
      cfg.trace_csv = resolve(base_dir, value);
    } else if (key == "result_json") {
      cfg.result_json = resolve(base_dir, value);
    } else {
      fail(ErrorKind::InvalidInput, "unknown key '" + key + "'");
    }
  }

  if (!have_bundle) fail(ErrorKind::InvalidInput, "missing required key 'bundle'");
  if (!have_order) fail(ErrorKind::InvalidInput, "missing required key 'order'");
  cfg.manifold = cfg.bundle.manifold();
  if (!manifold_text.empty() && manifold_text != to_string(cfg.manifold)) {
    fail(ErrorKind::InvalidInput, cfg.bundle.to_string() + " does not live on " + manifold_text);
  }
  if (cfg.order < 2) fail(ErrorKind::InvalidInput, "order must be >= 2");
  if (!(cfg.tol > 0.0)) fail(ErrorKind::InvalidInput, "tol must be positive");
  if (!(cfg.spread_max > 1.0)) fail(ErrorKind::InvalidInput, "spread_max must exceed 1");
  if (cfg.max_iter < 1) fail(ErrorKind::InvalidInput, "max_iter must be >= 1");
  if (!(cfg.amplitude > 0.0) || !(cfg.amplitude < 1.0)) {
    fail(ErrorKind::InvalidInput, "amplitude must lie in (0, 1)");
  }
  if (cfg.init == InitKind::File && cfg.init_file.empty()) {
    fail(ErrorKind::InvalidInput, "init = file requires init_file");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidInput, "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

HermitianForm random_initial_gram(int dim, double amplitude, std::uint64_t seed) {
  if (dim < 1) fail(ErrorKind::InvalidInput, "dimension must be >= 1");
  if (!(amplitude > 0.0) || !(amplitude < 1.0)) {
    fail(ErrorKind::InvalidInput, "amplitude must lie in (0, 1)");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  }
  Matrix x = hermitian_part(a);
  const double norm = Eigen::SelfAdjointEigenSolver<Matrix>(x, Eigen::EigenvaluesOnly)
                          .eigenvalues()
                          .cwiseAbs()
                          .maxCoeff();
  if (norm > 0.0) x /= norm;
  const Matrix l = Matrix::Identity(dim, dim) + amplitude * x;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(l * l.adjoint()));
  Eigen::VectorXd ev = eig.eigenvalues();
  const double floor = 1e-12 * ev.maxCoeff();
  ev = ev.cwiseMax(floor);
  return HermitianForm(
      hermitian_part(eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().adjoint()));
}

}  // namespace balanced
