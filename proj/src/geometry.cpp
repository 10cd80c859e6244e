#include "balanced/geometry.hpp"

#include <cfloat>
#include <cmath>
#include <numbers>
#include <string>

#include <gsl/gsl_integration.h>

#include "balanced/errors.hpp"
#include "balanced/oracle.hpp"

namespace balanced {

namespace {

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Legendre on (0, 1).
Rule gauss_legendre_unit(int n) {
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(n);
  if (table == nullptr) fail(ErrorKind::InvalidInput, "cannot build Gauss-Legendre rule");
  Rule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < n; ++i) {
    gsl_integration_glfixed_point(0.0, 1.0, i, &rule.x[i], &rule.w[i], table);
  }
  gsl_integration_glfixed_table_free(table);
  return rule;
}

std::vector<Complex> unit_phases(int count) {
  std::vector<Complex> out(count);
  for (int m = 0; m < count; ++m) {
    const double phi = 2.0 * std::numbers::pi * m / count;
    out[m] = Complex(std::cos(phi), std::sin(phi));
  }
  return out;
}

double pairwise_sum_range(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_range(v, half) + pairwise_sum_range(v + half, n - half);
}

double moment_integrand(const QuadratureScheme& q, const ChartPoint& x,
                        const std::vector<int>& exps, int k) {
  const double u1 = std::norm(x.z1);
  if (q.manifold() == Manifold::P1) {
    return std::pow(u1, exps[0]) * std::pow(1.0 + u1, -k);
  }
  const double u2 = std::norm(x.z2);
  return std::pow(u1, exps[0]) * std::pow(u2, exps[1]) * std::pow(1.0 + u1 + u2, -k);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_range(values.data(), values.size());
}

QuadratureScheme build_quadrature(Manifold manifold, int order) {
  if (manifold != Manifold::P1 && manifold != Manifold::P2) {
    fail(ErrorKind::InvalidInput, "unsupported manifold");
  }
  if (order < 2) fail(ErrorKind::InvalidInput, "quadrature order must be >= 2");

  QuadratureScheme q;
  q.manifold_ = manifold;
  q.order_ = order;
  const Rule gl = gauss_legendre_unit(order);
  const int n_phi = 2 * order + 1;
  const std::vector<Complex> phases = unit_phases(n_phi);

  if (manifold == Manifold::P1) {
    // p = |z|^2/(1+|z|^2) is uniform on (0,1).
    for (int i = 0; i < order; ++i) {
      const double p = gl.x[i];
      const double radius = std::sqrt(p / (1.0 - p));
      for (int m = 0; m < n_phi; ++m) {
        q.nodes_.push_back({radius * phases[m], Complex(0.0, 0.0)});
        q.weights_.push_back(gl.w[i] / n_phi);
      }
    }
    q.exactness_degree_ = 2 * order - 1;
  } else {
    // (p1, p2) uniform on the simplex with density 2; collapsed
    // coordinates p1 = u, p2 = (1-u) v with Jacobian (1-u).
    for (int i = 0; i < order; ++i) {
      const double u = gl.x[i];
      for (int j = 0; j < order; ++j) {
        const double v = gl.x[j];
        const double p1 = u;
        const double p2 = (1.0 - u) * v;
        const double p0 = (1.0 - u) * (1.0 - v);
        const double r1 = std::sqrt(p1 / p0);
        const double r2 = std::sqrt(p2 / p0);
        const double w = 2.0 * gl.w[i] * gl.w[j] * (1.0 - u) / (n_phi * n_phi);
        for (int m1 = 0; m1 < n_phi; ++m1) {
          for (int m2 = 0; m2 < n_phi; ++m2) {
            q.nodes_.push_back({r1 * phases[m1], r2 * phases[m2]});
            q.weights_.push_back(w);
          }
        }
      }
    }
    q.exactness_degree_ = 2 * order - 2;
  }
  q.total_mass_ = pairwise_sum(q.weights_);

  const int budget = std::min(q.exactness_degree_, QuadratureScheme::kMomentBudgetDegree);
  double worst = 0.0;
  std::vector<double> vals(q.size());
  for (const auto& [key, exact] : oracle::moment_table(manifold, budget)) {
    for (std::size_t n = 0; n < q.size(); ++n) {
      vals[n] = q.weights_[n] * moment_integrand(q, q.nodes_[n], key.exponents, key.weight_degree);
    }
    worst = std::max(worst, std::abs(pairwise_sum(vals) - exact.value()));
  }
  q.measured_moment_error_ = worst;
  q.eps_quad_ = std::max(worst, static_cast<double>(q.size()) * DBL_EPSILON);
  return q;
}

Complex integrate(const QuadratureScheme& q, std::span<const Complex> f) {
  if (f.size() != q.size()) {
    fail(ErrorKind::InvalidInput, "integrand size " + std::to_string(f.size()) +
                                      " does not match node count " + std::to_string(q.size()));
  }
  std::vector<double> re(f.size()), im(f.size());
  for (std::size_t n = 0; n < f.size(); ++n) {
    if (!std::isfinite(f[n].real()) || !std::isfinite(f[n].imag())) {
      fail(ErrorKind::NumericalDomain, "non-finite integrand value at node " + std::to_string(n));
    }
    re[n] = q.weights()[n] * f[n].real();
    im[n] = q.weights()[n] * f[n].imag();
  }
  return {pairwise_sum(re), pairwise_sum(im)};
}

double integrate(const QuadratureScheme& q, std::span<const double> f) {
  if (f.size() != q.size()) {
    fail(ErrorKind::InvalidInput, "integrand size " + std::to_string(f.size()) +
                                      " does not match node count " + std::to_string(q.size()));
  }
  std::vector<double> v(f.size());
  for (std::size_t n = 0; n < f.size(); ++n) {
    if (!std::isfinite(f[n])) {
      fail(ErrorKind::NumericalDomain, "non-finite integrand value at node " + std::to_string(n));
    }
    v[n] = q.weights()[n] * f[n];
  }
  return pairwise_sum(v);
}

Complex integrate(const QuadratureScheme& q, const std::function<Complex(const ChartPoint&)>& f) {
  std::vector<Complex> vals;
  vals.reserve(q.size());
  for (const auto& x : q.nodes()) vals.push_back(f(x));
  return integrate(q, std::span<const Complex>(vals));
}

}  // namespace balanced
