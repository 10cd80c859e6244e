#include "balanced/driver.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "balanced/core.hpp"
#include "balanced/errors.hpp"
#include "balanced/gieseker.hpp"
#include "balanced/oracle.hpp"

namespace balanced {

int exit_code_for(Classification c) {
  switch (c) {
    case Classification::Converged: return kExitConverged;
    case Classification::MaxIterations: return kExitMaxIterations;
    case Classification::Diverged: return kExitDiverged;
    case Classification::NumericalFailure: return kExitNumericalFailure;
  }
  return kExitNumericalFailure;
}

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json step_to_json(const IterationStep& s) {
  return {{"step", s.step},           {"z_tilde", s.z_tilde}, {"log_det", s.log_det},
          {"det_ratio", s.det_ratio}, {"trace_residual", s.trace_residual},
          {"spread", s.spread},       {"delta", s.delta}};
}

HermitianForm initial_gram(const RunConfig& cfg, int dim) {
  switch (cfg.init) {
    case InitKind::Identity: return HermitianForm::identity(dim);
    case InitKind::Random: return random_initial_gram(dim, cfg.amplitude, cfg.seed);
    case InitKind::File: {
      std::ifstream in(cfg.init_file);
      if (!in) fail(ErrorKind::InvalidInput, "cannot read init_file " + cfg.init_file.string());
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidInput, std::string("init_file is not valid JSON: ") + e.what());
      }
      HermitianForm h = gram_from_json(j.contains("final_gram") ? j["final_gram"] : j);
      if (h.dim() != dim) fail(ErrorKind::InvalidInput, "init_file Gram has the wrong dimension");
      return h;
    }
  }
  return HermitianForm::identity(dim);
}

}  // namespace

void write_trace_csv(const IterationTrace& trace, std::ostream& out) {
  out << "step,z_tilde,log_det,det_ratio,trace_residual,spread,delta\n";
  for (const auto& s : trace) {
    out << s.step << ',' << g17(s.z_tilde) << ',' << g17(s.log_det) << ',' << g17(s.det_ratio)
        << ',' << g17(s.trace_residual) << ',' << g17(s.spread) << ',' << g17(s.delta) << '\n';
  }
}

nlohmann::json gram_to_json(const HermitianForm& h) {
  nlohmann::json entries = nlohmann::json::array();
  for (int i = 0; i < h.dim(); ++i) {
    for (int j = 0; j < h.dim(); ++j) {
      entries.push_back({h.gram()(i, j).real(), h.gram()(i, j).imag()});
    }
  }
  return {{"dim", h.dim()}, {"entries", entries}};
}

HermitianForm gram_from_json(const nlohmann::json& j) {
  try {
    const int dim = j.at("dim").get<int>();
    const auto& entries = j.at("entries");
    if (dim < 1 || entries.size() != static_cast<std::size_t>(dim) * dim) {
      fail(ErrorKind::InvalidInput, "Gram JSON has inconsistent size");
    }
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int k = 0; k < dim; ++k) {
        const auto& e = entries.at(static_cast<std::size_t>(i) * dim + k);
        g(i, k) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
      }
    }
    return HermitianForm(std::move(g));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("malformed Gram JSON: ") + e.what());
  }
}

nlohmann::json result_to_json(const RunConfig& cfg, const RunResult& result,
                              const QuadratureScheme& q) {
  nlohmann::json j;
  j["classification"] = to_string(result.classification);
  j["exit_code"] = exit_code_for(result.classification);
  j["bundle"] = cfg.bundle.to_string();
  j["iterations"] = result.iterations;
  j["final_gram"] = gram_to_json(result.final_gram);
  if (std::isfinite(result.bergman_sup_residual)) {
    j["bergman_sup_residual"] = result.bergman_sup_residual;
  } else {
    j["bergman_sup_residual"] = nullptr;
  }
  j["final_diagnostics"] = result.last_step ? step_to_json(*result.last_step) : nlohmann::json();
  j["quadrature"] = {{"manifold", to_string(q.manifold())},
                     {"order", q.order()},
                     {"node_count", q.size()},
                     {"eps_quad", q.eps_quad()}};
  j["thresholds"] = {{"tol", cfg.tol}, {"spread_max", cfg.spread_max}, {"max_iter", cfg.max_iter}};
  j["deterministic"] = cfg.deterministic;
  if (result.classification == Classification::NumericalFailure) {
    j["failure"] = {{"step", result.failure_step}, {"message", result.failure}};
  }
  return j;
}

int run_command(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }

  try {
    const QuadratureScheme q = build_quadrature(cfg.manifold, cfg.order);
    const SectionBasis basis = build_sections(cfg.bundle, q);
    const HermitianForm h0 = initial_gram(cfg, basis.dim());
    const auto [result, trace] =
        run(h0, basis, q, {cfg.tol, cfg.spread_max, cfg.max_iter});

    std::ofstream csv(cfg.trace_csv, std::ios::binary);
    std::ofstream js(cfg.result_json, std::ios::binary);
    if (!csv || !js) {
      err << "error: cannot open output paths " << cfg.trace_csv << ", " << cfg.result_json << '\n';
      return kExitInvalidInput;
    }
    write_trace_csv(trace, csv);
    js << result_to_json(cfg, result, q).dump(2) << '\n';

    out << cfg.bundle.to_string() << ": " << to_string(result.classification) << " after "
        << result.iterations << " steps\n";
    if (result.classification == Classification::NumericalFailure) {
      err << "numerical failure at step " << result.failure_step << ": " << result.failure << '\n';
    }
    return exit_code_for(result.classification);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidInput ? kExitInvalidInput : kExitNumericalFailure;
  }
}

namespace {

Matrix random_traceless_direction(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  }
  Matrix x = hermitian_part(a);
  x -= (x.trace() / static_cast<double>(dim)) * Matrix::Identity(dim, dim);
  return hermitian_part(x);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

CheckOutcome upper_check(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value <= threshold, value, threshold, std::move(detail)};
}

}  // namespace

std::vector<CheckOutcome> verify_checks(const RunConfig& cfg) {
  const QuadratureScheme q = build_quadrature(cfg.manifold, cfg.order);
  const SectionBasis basis = build_sections(cfg.bundle, q);
  const int n = basis.dim();
  const double eps = q.eps_quad();
  std::vector<CheckOutcome> checks;

  const double margin = basis.min_generation_margin();
  checks.push_back({"global_generation", margin > 0.0, margin, 0.0, "min sigma_r(S(x)) > 0"});

  constexpr int kSamples = 10;
  double worst_trace = 0.0, worst_z = -1e300, worst_logdet = -1e300, worst_zt = -1e300;
  double worst_scale = 0.0;
  for (int s = 0; s < kSamples; ++s) {
    const HermitianForm h = random_initial_gram(n, 0.5, cfg.seed + 1000 + s);
    const HermitianForm th = t_operator(h, basis, q);
    worst_trace = std::max(worst_trace, trace_identity_residual(h, th));
    worst_z = std::max(worst_z, z_functional(th, basis, q) - z_functional(h, basis, q));
    worst_logdet = std::max(worst_logdet, th.log_det() - h.log_det());
    const double zt = z_tilde(h, basis, q);
    worst_zt = std::max(worst_zt, z_tilde(th, basis, q) - zt);
    for (double c : {1e-3, 1e3}) {
      worst_scale = std::max(worst_scale, std::abs(z_tilde(h.scaled(c), basis, q) - zt));
    }
  }
  checks.push_back(upper_check("trace_identity", worst_trace, 100 * eps,
                               "max |Tr(T(H)H^-1) - N| over random H, eps_quad = " +
                                   format_double(eps)));
  checks.push_back(upper_check("monotone_Z", worst_z, 100 * eps, "max Z(T(H)) - Z(H)"));
  checks.push_back(upper_check("monotone_log_det", worst_logdet, 100 * eps,
                               "max log det T(H) - log det H"));
  checks.push_back(upper_check("monotone_z_tilde", worst_zt, 100 * eps,
                               "max z_tilde(T(H)) - z_tilde(H)"));
  checks.push_back(upper_check("scale_invariance", worst_scale, 1e-10,
                               "max |z_tilde(cH) - z_tilde(H)|, c in {1e-3, 1e3}"));

  double worst_convex = 1e300;
  for (int s = 0; s < 5; ++s) {
    const GeodesicSpec geo(random_initial_gram(n, 0.5, cfg.seed + 2000 + 2 * s),
                           random_initial_gram(n, 0.5, cfg.seed + 2001 + 2 * s));
    std::vector<double> z;
    for (int i = 0; i <= 8; ++i) z.push_back(z_functional(geo.at(i / 8.0), basis, q));
    for (int i = 1; i < 8; ++i) worst_convex = std::min(worst_convex, z[i - 1] - 2 * z[i] + z[i + 1]);
  }
  checks.push_back({"geodesic_convexity", worst_convex >= -10 * eps, worst_convex, -10 * eps,
                    "min second difference of Z along 9-point geodesic grids"});

  const GiesekerPoint gp = gieseker_point(basis);
  const int rank = gp.matrix_rank();
  checks.push_back({"gieseker_surjective", rank == gp.matrix.rows(), static_cast<double>(rank),
                    static_cast<double>(gp.matrix.rows()),
                    "rank of T(E) onto H0(" + gp.determinant.to_string() + ")"});

  std::mt19937_64 rng(cfg.seed + 3000);
  std::vector<double> ts;
  for (int i = 0; i <= 12; ++i) ts.push_back(-3.0 + 0.5 * i);
  double worst_kn = 1e300;
  double kn_floor = 0.0;
  for (int s = 0; s < 5; ++s) {
    const auto f = kempf_ness_profile(gp, random_traceless_direction(n, rng), ts);
    double scale = 1.0;
    for (double v : f) scale = std::max(scale, std::abs(v));
    kn_floor = std::min(kn_floor, -1e-12 * scale);
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
      worst_kn = std::min(worst_kn, f[i - 1] - 2 * f[i] + f[i + 1]);
    }
  }
  checks.push_back({"kempf_ness_convexity", worst_kn >= kn_floor, worst_kn, kn_floor,
                    "min second difference of log ||exp(tL).T(E)||^2"});

  if (cfg.bundle.kind == BundleId::Kind::LineP1 || cfg.bundle.kind == BundleId::Kind::LineP2) {
    const HermitianForm star = cfg.bundle.kind == BundleId::Kind::LineP1
                                   ? oracle::balanced_gram_line_p1(cfg.bundle.a)
                                   : oracle::balanced_gram_line_p2(cfg.bundle.a);
    const double d = operator_norm(t_operator(star, basis, q).gram() - star.gram());
    const bool exact = cfg.bundle.a <= q.exactness_degree();
    checks.push_back({"closed_form_fixed_point", !exact || d <= 1e-10, d, 1e-10,
                      exact ? "||T(H*) - H*||_op" : "order below the bundle degree: reported only"});
  }
  return checks;
}

int verify_command(const std::filesystem::path& config_path, std::ostream& out,
                   std::ostream& err) {
  RunConfig cfg;
  std::vector<CheckOutcome> checks;
  try {
    cfg = load_config(config_path);
    checks = verify_checks(cfg);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidInput ? kExitInvalidInput : kExitNumericalFailure;
  }
  bool all = true;
  out << std::left << std::setw(8) << "result" << std::setw(26) << "check" << std::setw(24)
      << "value" << std::setw(24) << "threshold" << "detail\n";
  for (const auto& c : checks) {
    all = all && c.passed;
    out << std::setw(8) << (c.passed ? "PASS" : "FAIL") << std::setw(26) << c.name
        << std::setw(24) << g17(c.value) << std::setw(24) << g17(c.threshold) << c.detail << '\n';
  }
  out << (all ? "all checks passed" : "some checks FAILED") << '\n';
  return all ? 0 : 1;
}

}  // namespace balanced
