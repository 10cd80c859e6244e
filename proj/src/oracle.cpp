#include "balanced/oracle.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include "balanced/errors.hpp"

namespace balanced::oracle {

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) fail(ErrorKind::InvalidInput, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

std::int64_t trinomial(int k, int a, int b) {
  return binomial(k, a) * binomial(k - a, b);
}

Rational monomial_moment_p1(int j, int k) {
  if (j < 0 || k < 0 || j > k) {
    fail(ErrorKind::InvalidInput, "monomial_moment_p1 needs 0 <= j <= k");
  }
  return make_rational(1, (k + 1) * binomial(k, j));
}

Rational monomial_moment_p2(int a, int b, int k) {
  if (a < 0 || b < 0 || a + b > k) {
    fail(ErrorKind::InvalidInput, "monomial_moment_p2 needs a, b >= 0 and a + b <= k");
  }
  // 2 a! b! c! / (k+2)! = 2 / ((k+1)(k+2) * k!/(a! b! c!))
  return make_rational(2, static_cast<std::int64_t>(k + 1) * (k + 2) * trinomial(k, a, b));
}

HermitianForm balanced_gram_line_p1(int k) {
  if (k < 1) fail(ErrorKind::InvalidInput, "line bundle degree must be >= 1");
  std::vector<double> d;
  for (int j = 0; j <= k; ++j) d.push_back(1.0 / static_cast<double>(binomial(k, j)));
  return HermitianForm::diagonal(d);
}

HermitianForm balanced_gram_line_p2(int k) {
  if (k < 1) fail(ErrorKind::InvalidInput, "line bundle degree must be >= 1");
  std::vector<double> d;
  // graded order: total degree d, then z1 exponent descending
  for (int deg = 0; deg <= k; ++deg) {
    for (int p = deg; p >= 0; --p) {
      d.push_back(1.0 / static_cast<double>(trinomial(k, p, deg - p)));
    }
  }
  return HermitianForm::diagonal(d);
}

MomentTable moment_table(Manifold manifold, int max_k) {
  MomentTable table;
  for (int k = 0; k <= max_k; ++k) {
    if (manifold == Manifold::P1) {
      for (int j = 0; j <= k; ++j) table[{manifold, {j}, k}] = monomial_moment_p1(j, k);
    } else {
      for (int a = 0; a <= k; ++a) {
        for (int b = 0; a + b <= k; ++b) {
          table[{manifold, {a, b}, k}] = monomial_moment_p2(a, b, k);
        }
      }
    }
  }
  return table;
}

MomentTable read_moment_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidInput, "cannot open moment corpus " + path.string());
  MomentTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    MomentKey key{};
    std::int64_t num = 0, den = 0;
    bool ok = false;
    if (tag == "P1") {
      int j = 0;
      ok = static_cast<bool>(ls >> j >> key.weight_degree >> num >> den);
      key.manifold = Manifold::P1;
      key.exponents = {j};
    } else if (tag == "P2") {
      int a = 0, b = 0;
      ok = static_cast<bool>(ls >> a >> b >> key.weight_degree >> num >> den);
      key.manifold = Manifold::P2;
      key.exponents = {a, b};
    }
    if (!ok) {
      fail(ErrorKind::InvalidInput,
           "malformed moment corpus line " + std::to_string(lineno) + ": " + line);
    }
    table[key] = make_rational(num, den);
  }
  return table;
}

}  // namespace balanced::oracle
