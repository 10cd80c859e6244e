#include "balanced/sections.hpp"

#include <cmath>
#include <regex>

#include "balanced/errors.hpp"

namespace balanced {

BundleId BundleId::parse(const std::string& text) {
  static const std::regex line_re(R"(^\s*(LineP1|LineP2)\(\s*(-?\d+)\s*\)\s*$)");
  static const std::regex sum_re(R"(^\s*Sum\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*$)");
  static const std::regex tan_re(R"(^\s*TangentP2\s*$)");
  std::smatch m;
  BundleId id;
  if (std::regex_match(text, m, line_re)) {
    id = m[1] == "LineP1" ? line_p1(std::stoi(m[2])) : line_p2(std::stoi(m[2]));
  } else if (std::regex_match(text, m, sum_re)) {
    id = sum(std::stoi(m[1]), std::stoi(m[2]));
  } else if (std::regex_match(text, tan_re)) {
    id = tangent_p2();
  } else {
    fail(ErrorKind::InvalidInput, "unknown bundle '" + text + "'");
  }
  id.validate();
  return id;
}

std::string BundleId::to_string() const {
  switch (kind) {
    case Kind::LineP1: return "LineP1(" + std::to_string(a) + ")";
    case Kind::LineP2: return "LineP2(" + std::to_string(a) + ")";
    case Kind::Sum: return "Sum(" + std::to_string(a) + "," + std::to_string(b) + ")";
    case Kind::TangentP2: return "TangentP2";
  }
  return "?";
}

Manifold BundleId::manifold() const {
  return (kind == Kind::LineP2 || kind == Kind::TangentP2) ? Manifold::P2 : Manifold::P1;
}

int BundleId::rank() const { return (kind == Kind::Sum || kind == Kind::TangentP2) ? 2 : 1; }

int BundleId::dim() const {
  switch (kind) {
    case Kind::LineP1: return a + 1;
    case Kind::LineP2: return (a + 1) * (a + 2) / 2;
    case Kind::Sum: return (a + 1) + (b + 1);
    case Kind::TangentP2: return 8;
  }
  return 0;
}

BundleId BundleId::determinant() const {
  switch (kind) {
    case Kind::LineP1:
    case Kind::LineP2: return *this;
    case Kind::Sum: return line_p1(a + b);
    case Kind::TangentP2: return line_p2(3);  // anticanonical bundle
  }
  return *this;
}

void BundleId::validate() const {
  if ((kind == Kind::LineP1 || kind == Kind::LineP2) && a < 1) {
    fail(ErrorKind::InvalidInput, "line bundle degree must be >= 1, got " + std::to_string(a));
  }
  if (kind == Kind::Sum && (a < 1 || b < 1)) {
    fail(ErrorKind::InvalidInput, "Sum(a,b) needs a, b >= 1");
  }
}

namespace {

int projective_dim(const BundleId& bundle) { return complex_dimension(bundle.manifold()); }

void check_point(const BundleId& bundle, const Vector& x, int chart) {
  const int n = projective_dim(bundle);
  if (x.size() != n + 1) fail(ErrorKind::InvalidInput, "homogeneous point has wrong length");
  if (chart < 0 || chart > n) fail(ErrorKind::InvalidInput, "chart index out of range");
  if (x(chart) == Complex(0.0, 0.0)) {
    fail(ErrorKind::InvalidInput, "point lies outside chart " + std::to_string(chart));
  }
}

// Homogeneous exponents of the monomial basis of O(k) in basis order.
std::vector<std::vector<int>> line_exponents(Manifold m, int k) {
  std::vector<std::vector<int>> out;
  if (m == Manifold::P1) {
    for (int j = 0; j <= k; ++j) out.push_back({k - j, j});
  } else {
    for (int d = 0; d <= k; ++d) {
      for (int p = d; p >= 0; --p) out.push_back({k - d, p, d - p});
    }
  }
  return out;
}

// Row of O(k) section values in the frame X_chart^k.
Eigen::RowVectorXcd line_row(Manifold m, int k, const Vector& x, int chart) {
  const auto exps = line_exponents(m, k);
  Eigen::RowVectorXcd row(exps.size());
  const Vector y = x / x(chart);
  for (std::size_t i = 0; i < exps.size(); ++i) {
    Complex v(1.0, 0.0);
    for (int c = 0; c < y.size(); ++c) v *= std::pow(y(c), exps[i][c]);
    row(i) = v;
  }
  return row;
}

std::vector<int> chart_coordinates(int chart) {
  std::vector<int> out;
  for (int i = 0; i < 3; ++i) {
    if (i != chart) out.push_back(i);
  }
  return out;
}

Matrix tangent_fields(const Vector& x, int chart) {
  const Vector y = x / x(chart);
  const auto coords = chart_coordinates(chart);
  Matrix s(2, 8);
  int col = 0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a == 0 && b == 0) continue;
      // A = E_ab: (A y)_i = delta_ia y_b; ydot_i = (A y)_i - y_i (A y)_chart
      const Complex ay_chart = (a == chart) ? y(b) : Complex(0.0, 0.0);
      for (int row = 0; row < 2; ++row) {
        const int i = coords[row];
        const Complex ay_i = (a == i) ? y(b) : Complex(0.0, 0.0);
        s(row, col) = ay_i - y(i) * ay_chart;
      }
      ++col;
    }
  }
  return s;
}

}  // namespace

Vector homogeneous_of(Manifold manifold, const ChartPoint& x) {
  if (manifold == Manifold::P1) {
    Vector v(2);
    v << Complex(1.0, 0.0), x.z1;
    return v;
  }
  Vector v(3);
  v << Complex(1.0, 0.0), x.z1, x.z2;
  return v;
}

Matrix evaluate_in_chart(const BundleId& bundle, const Vector& homogeneous, int chart) {
  bundle.validate();
  check_point(bundle, homogeneous, chart);
  switch (bundle.kind) {
    case BundleId::Kind::LineP1:
    case BundleId::Kind::LineP2:
      return line_row(bundle.manifold(), bundle.a, homogeneous, chart);
    case BundleId::Kind::Sum: {
      Matrix s = Matrix::Zero(2, bundle.dim());
      s.block(0, 0, 1, bundle.a + 1) = line_row(Manifold::P1, bundle.a, homogeneous, chart);
      s.block(1, bundle.a + 1, 1, bundle.b + 1) =
          line_row(Manifold::P1, bundle.b, homogeneous, chart);
      return s;
    }
    case BundleId::Kind::TangentP2: return tangent_fields(homogeneous, chart);
  }
  return {};
}

Matrix chart_transition(const BundleId& bundle, const Vector& x, int from, int to) {
  check_point(bundle, x, from);
  check_point(bundle, x, to);
  const Complex ratio = x(from) / x(to);
  switch (bundle.kind) {
    case BundleId::Kind::LineP1:
    case BundleId::Kind::LineP2: {
      Matrix g(1, 1);
      g(0, 0) = std::pow(ratio, bundle.a);
      return g;
    }
    case BundleId::Kind::Sum: {
      Matrix g = Matrix::Zero(2, 2);
      g(0, 0) = std::pow(ratio, bundle.a);
      g(1, 1) = std::pow(ratio, bundle.b);
      return g;
    }
    case BundleId::Kind::TangentP2: {
      // Jacobian of (X_i / X_to) with respect to the from-chart coordinates.
      const Vector y = x / x(from);
      const auto rows = chart_coordinates(to);
      const auto cols = chart_coordinates(from);
      Matrix g(2, 2);
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
          const int i = rows[r], j = cols[c];
          Complex v = (i == j) ? 1.0 / y(to) : Complex(0.0, 0.0);
          if (j == to) v -= y(i) / (y(to) * y(to));
          g(r, c) = v;
        }
      }
      return g;
    }
  }
  return {};
}

Matrix background_metric_at(const BundleId& bundle, const ChartPoint& x) {
  const double u = bundle.manifold() == Manifold::P1 ? std::norm(x.z1)
                                                     : std::norm(x.z1) + std::norm(x.z2);
  switch (bundle.kind) {
    case BundleId::Kind::LineP1:
    case BundleId::Kind::LineP2: {
      Matrix h(1, 1);
      h(0, 0) = std::pow(1.0 + u, -bundle.a);
      return h;
    }
    case BundleId::Kind::Sum: {
      Matrix h = Matrix::Zero(2, 2);
      h(0, 0) = std::pow(1.0 + u, -bundle.a);
      h(1, 1) = std::pow(1.0 + u, -bundle.b);
      return h;
    }
    case BundleId::Kind::TangentP2: {
      // ((1+|z|^2) I - z z^dagger) / (1+|z|^2)^2
      Vector z(2);
      z << x.z1, x.z2;
      Matrix h = (1.0 + u) * Matrix::Identity(2, 2) - z * z.adjoint();
      return h / ((1.0 + u) * (1.0 + u));
    }
  }
  return {};
}

SectionBasis build_sections(const BundleId& bundle, const QuadratureScheme& q) {
  bundle.validate();
  if (bundle.manifold() != q.manifold()) {
    fail(ErrorKind::InvalidInput, bundle.to_string() + " does not live on " +
                                      std::string(to_string(q.manifold())));
  }
  SectionBasis basis;
  basis.bundle_ = bundle;
  basis.manifold_ = q.manifold();
  basis.rank_ = bundle.rank();
  basis.dim_ = bundle.dim();
  basis.points_ = q.nodes();
  basis.evals_.reserve(q.size());
  basis.frame_weight_.reserve(q.size());
  for (const auto& x : q.nodes()) {
    basis.evals_.push_back(evaluate_in_chart(bundle, homogeneous_of(q.manifold(), x), 0));
    basis.frame_weight_.push_back(background_metric_at(bundle, x));
  }
  return basis;
}

SectionBasis SectionBasis::from_evaluations(const BundleId& bundle,
                                           std::vector<ChartPoint> points,
                                           std::vector<Matrix> evals,
                                           std::vector<Matrix> frame_weight) {
  if (points.size() != evals.size() || points.size() != frame_weight.size()) {
    fail(ErrorKind::InvalidInput, "per-node arrays differ in length");
  }
  for (std::size_t q = 0; q < evals.size(); ++q) {
    if (evals[q].rows() != bundle.rank() || evals[q].cols() != bundle.dim() ||
        frame_weight[q].rows() != bundle.rank() || frame_weight[q].cols() != bundle.rank()) {
      fail(ErrorKind::InvalidInput, "evaluation has wrong shape at node " + std::to_string(q));
    }
  }
  SectionBasis basis;
  basis.bundle_ = bundle;
  basis.manifold_ = bundle.manifold();
  basis.rank_ = bundle.rank();
  basis.dim_ = bundle.dim();
  basis.points_ = std::move(points);
  basis.evals_ = std::move(evals);
  basis.frame_weight_ = std::move(frame_weight);
  return basis;
}

SectionBasis SectionBasis::transformed(const Matrix& a) const {
  if (a.rows() != dim_ || a.cols() != dim_) {
    fail(ErrorKind::InvalidInput, "basis change must be N x N");
  }
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) fail(ErrorKind::InvalidInput, "basis change is singular");
  SectionBasis out = *this;
  for (auto& s : out.evals_) s = s * a;
  return out;
}

double SectionBasis::min_generation_margin() const {
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& s : evals_) {
    Eigen::JacobiSVD<Matrix> svd(s);
    margin = std::min(margin, svd.singularValues()(rank_ - 1));
  }
  return margin;
}

FiberMetricField background_metric(const SectionBasis& basis) {
  std::vector<Matrix> values;
  values.reserve(basis.size());
  for (std::size_t q = 0; q < basis.size(); ++q) values.push_back(basis.frame_weight(q));
  return FiberMetricField(basis.rank(), std::move(values));
}

}  // namespace balanced
