#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "nodehilb/errors.hpp"
#include "nodehilb/ring/poly.hpp"

namespace nodehilb {

using Matrix = std::vector<std::vector<Poly>>;

namespace detail {

inline ContextPtr check_square(const Matrix& m) {
  if (m.empty()) return nullptr;
  ContextPtr ctx;
  for (const auto& row : m) {
    if (row.size() != m.size()) throw NonSquare("matrix is not square");
    for (const auto& e : row) {
      if (!ctx) ctx = e.context();
      else if (!e.context()->same_as(*ctx)) throw ContextMismatch("matrix entries in different contexts");
    }
  }
  return ctx;
}

}  // namespace detail

/// Laplace expansion along rows, memoized on the set of used columns.
inline Poly det_cofactor(const Matrix& m) {
  ContextPtr ctx = detail::check_square(m);
  if (!ctx) throw NonSquare("empty matrix has no context");
  const int n = static_cast<int>(m.size());
  if (n > 20) throw NonSquare("cofactor expansion limited to 20 columns");
  std::unordered_map<std::uint32_t, Poly> memo;
  // minor(row, cols) = det of rows row..n-1 restricted to the columns in mask
  auto rec = [&](auto&& self, int row, std::uint32_t mask) -> Poly {
    if (row == n) return Poly::constant(ctx, 1);
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    Poly acc(ctx);
    int sign_pos = 0;
    for (int c = 0; c < n; ++c) {
      if (!(mask & (1u << c))) continue;
      if (!m[row][c].is_zero()) {
        Poly term = m[row][c] * self(self, row + 1, mask & ~(1u << c));
        acc = (sign_pos % 2 == 0) ? acc + term : acc - term;
      }
      ++sign_pos;
    }
    memo.emplace(mask, acc);
    return acc;
  };
  return rec(rec, 0, (n == 32) ? ~0u : ((1u << n) - 1));
}

/// Fraction-free elimination; every division is exact.
inline Poly det_bareiss(Matrix a) {
  ContextPtr ctx = detail::check_square(a);
  if (!ctx) throw NonSquare("empty matrix has no context");
  const std::size_t n = a.size();
  Poly prev = Poly::constant(ctx, 1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k].is_zero()) {
      std::size_t p = k + 1;
      while (p < n && a[p][k].is_zero()) ++p;
      if (p == n) return Poly(ctx);
      std::swap(a[k], a[p]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Poly num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        a[i][j] = num.exact_div(prev);
      }
    }
    prev = a[k][k];
  }
  Poly d = a[n - 1][n - 1];
  return negate ? -d : d;
}

inline Poly det(const Matrix& m) {
  return m.size() < 5 ? det_cofactor(m) : det_bareiss(m);
}

}  // namespace nodehilb
