#include "detail/smith.hpp"

#include <cstdlib>
#include <utility>

#include "smallsum/error.hpp"

namespace smallsum::detail {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("integer overflow in Smith normal form");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw Error("integer overflow in Smith normal form");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("integer overflow in Smith normal form");
  return r;
}

IntMatrix identity(std::size_t n) {
  IntMatrix m(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

// row_i -= q * row_j
void row_axpy(IntMatrix& m, std::size_t i, std::size_t j, std::int64_t q) {
  for (std::size_t c = 0; c < m[i].size(); ++c) m[i][c] = checked_sub(m[i][c], checked_mul(q, m[j][c]));
}

// col_i -= q * col_j
void col_axpy(IntMatrix& m, std::size_t i, std::size_t j, std::int64_t q) {
  for (auto& row : m) row[i] = checked_sub(row[i], checked_mul(q, row[j]));
}

void swap_cols(IntMatrix& m, std::size_t i, std::size_t j) {
  for (auto& row : m) std::swap(row[i], row[j]);
}

}  // namespace

SmithForm smith_normal_form(IntMatrix a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  IntMatrix u = identity(rows);
  IntMatrix v = identity(cols);

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    while (true) {
      // Smallest nonzero pivot in the trailing block.
      std::size_t pr = rows, pc = cols;
      std::int64_t best = 0;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (best == 0 || std::llabs(a[i][j]) < best)) {
            best = std::llabs(a[i][j]);
            pr = i;
            pc = j;
          }
      if (best == 0) return {std::move(u), std::move(a), std::move(v)};
      std::swap(a[t], a[pr]);
      std::swap(u[t], u[pr]);
      swap_cols(a, t, pc);
      swap_cols(v, t, pc);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        const std::int64_t q = a[i][t] / a[t][t];
        row_axpy(a, i, t, q);
        row_axpy(u, i, t, q);
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        const std::int64_t q = a[t][j] / a[t][t];
        col_axpy(a, j, t, q);
        col_axpy(v, j, t, q);
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;

      // Divisibility: fold an offending row into row t and go again.
      bool divisible = true;
      for (std::size_t i = t + 1; i < rows && divisible; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            for (std::size_t c = 0; c < cols; ++c) a[t][c] = checked_add(a[t][c], a[i][c]);
            for (std::size_t c = 0; c < rows; ++c) u[t][c] = checked_add(u[t][c], u[i][c]);
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (a[t][t] < 0) {
      for (auto& x : a[t]) x = -x;
      for (auto& x : u[t]) x = -x;
    }
  }
  return {std::move(u), std::move(a), std::move(v)};
}

}  // namespace smallsum::detail
