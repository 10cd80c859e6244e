#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "balanced/types.hpp"

namespace balanced::oracle {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Reduced fraction; `den` must be nonzero.
Rational make_rational(std::int64_t num, std::int64_t den);

std::int64_t binomial(int n, int k);
/// k! / (a! b! (k-a-b)!)
std::int64_t trinomial(int k, int a, int b);

/// Integral over P1 (unit volume) of |z|^{2j} (1+|z|^2)^{-k}.
/// Equals 1 / ((k+1) C(k,j)). Requires 0 <= j <= k.
Rational monomial_moment_p1(int j, int k);

/// Integral over P2 (unit volume) of |z1|^{2a} |z2|^{2b} (1+|z|^2)^{-k}.
/// Equals 2 a! b! (k-a-b)! / (k+2)!. Requires a, b >= 0 and a + b <= k.
Rational monomial_moment_p2(int a, int b, int k);

/// Fixed point of T for O(k) -> P1 in the monomial basis: diag(1/C(k,j)).
HermitianForm balanced_gram_line_p1(int k);

/// Fixed point of T for O(k) -> P2 in the graded monomial basis used by
/// the sections module: diag(1/multinomial).
HermitianForm balanced_gram_line_p2(int k);

struct MomentKey {
  Manifold manifold;
  std::vector<int> exponents;  // {j} on P1, {a, b} on P2
  int weight_degree;

  friend auto operator<=>(const MomentKey&, const MomentKey&) = default;
};

using MomentTable = std::map<MomentKey, Rational>;

/// Every moment with weight degree <= max_k.
MomentTable moment_table(Manifold manifold, int max_k);

/// Reads the plain-text corpus: one entry per line,
/// `P1 j k num den` or `P2 a b k num den`; `#` starts a comment.
MomentTable read_moment_corpus(const std::filesystem::path& path);

}  // namespace balanced::oracle
