#include "srn/exact.hpp"

#include <numeric>

namespace srn {
namespace {

using Wide = __int128;

Wide gcd_wide(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

int integer_rank(const std::vector<std::vector<Count>>& rows) {
  if (rows.empty()) return 0;
  std::size_t m = rows.size();
  std::size_t n = rows[0].size();
  std::vector<std::vector<Wide>> a(m, std::vector<Wide>(n));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = rows[i][j];
  }
  // Bareiss fraction-free elimination; divisions are exact.
  int rank = 0;
  Wide prev = 1;
  std::size_t col = 0;
  for (std::size_t r = 0; r < m && col < n; ++col) {
    std::size_t piv = r;
    while (piv < m && a[piv][col] == 0) ++piv;
    if (piv == m) continue;
    std::swap(a[r], a[piv]);
    for (std::size_t i = r + 1; i < m; ++i) {
      for (std::size_t j = col + 1; j < n; ++j) {
        a[i][j] = (a[r][col] * a[i][j] - a[i][col] * a[r][j]) / prev;
      }
      a[i][col] = 0;
    }
    prev = a[r][col];
    ++r;
    rank = static_cast<int>(r);
  }
  return rank;
}

std::vector<std::vector<Count>> integer_null_space(
    const std::vector<std::vector<Count>>& rows, std::size_t n_cols) {
  std::size_t m = rows.size();
  std::size_t n = n_cols;
  // Reduce to row echelon form with exact rational-free pivoting, tracking
  // pivot columns; then back-substitute unit vectors for the free columns.
  std::vector<std::vector<Wide>> a(m, std::vector<Wide>(n, 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n && j < rows[i].size(); ++j) a[i][j] = rows[i][j];
  }
  std::vector<int> pivot_col;
  std::size_t r = 0;
  Wide prev = 1;
  for (std::size_t col = 0; col < n && r < m; ++col) {
    std::size_t piv = r;
    while (piv < m && a[piv][col] == 0) ++piv;
    if (piv == m) continue;
    std::swap(a[r], a[piv]);
    for (std::size_t i = r + 1; i < m; ++i) {
      for (std::size_t j = col + 1; j < n; ++j) {
        a[i][j] = (a[r][col] * a[i][j] - a[i][col] * a[r][j]) / prev;
      }
      a[i][col] = 0;
    }
    prev = a[r][col];
    pivot_col.push_back(static_cast<int>(col));
    ++r;
  }
  std::size_t rank = pivot_col.size();

  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;

  std::vector<std::vector<Count>> basis;
  for (std::size_t free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[free_col]) continue;
    // Solve for w with w[free_col] = t (a common denominator cleared later),
    // w[other free cols] = 0, back-substituting through the echelon rows.
    std::vector<Wide> num(n, 0);
    std::vector<Wide> den(n, 1);
    num[free_col] = 1;
    for (std::size_t k = rank; k-- > 0;) {
      std::size_t pc = static_cast<std::size_t>(pivot_col[k]);
      // a[k][pc] * w[pc] = -sum_{j>pc} a[k][j] * w[j]
      Wide snum = 0;
      Wide sden = 1;
      for (std::size_t j = pc + 1; j < n; ++j) {
        if (a[k][j] == 0 || num[j] == 0) continue;
        Wide tn = a[k][j] * num[j];
        Wide td = den[j];
        // snum/sden += tn/td
        snum = snum * td + tn * sden;
        sden = sden * td;
        Wide g = gcd_wide(snum, sden);
        if (g > 1) {
          snum /= g;
          sden /= g;
        }
      }
      num[pc] = -snum;
      den[pc] = sden * a[k][pc];
      if (den[pc] < 0) {
        den[pc] = -den[pc];
        num[pc] = -num[pc];
      }
      Wide g = gcd_wide(num[pc], den[pc]);
      if (g > 1) {
        num[pc] /= g;
        den[pc] /= g;
      }
    }
    Wide lcm = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (num[j] == 0) continue;
      Wide g = gcd_wide(lcm, den[j]);
      lcm = lcm / g * den[j];
    }
    std::vector<Wide> w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = num[j] * (lcm / den[j]);
    Wide g = 0;
    for (Wide v : w) g = gcd_wide(g, v);
    if (g > 1) {
      for (Wide& v : w) v /= g;
    }
    for (Wide v : w) {
      if (v != 0) {
        if (v < 0) {
          for (Wide& u : w) u = -u;
        }
        break;
      }
    }
    std::vector<Count> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = static_cast<Count>(w[j]);
    basis.push_back(std::move(out));
  }
  return basis;
}

}  // namespace srn
