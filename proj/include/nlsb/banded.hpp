#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "nlsb/errors.hpp"

namespace nlsb {

// General real banded matrix with kl sub- and ku superdiagonals, stored in
// LAPACK band layout with kl extra rows for pivoting fill: entry (i, j) lives
// at ab[(kl + ku + i - j) + j * ldab], ldab = 2*kl + ku + 1. The implicit
// Schrodinger step produces such systems (interleaved real/imaginary
// unknowns, bandwidth 2), and partial pivoting keeps the factorization
// stable where the rows are far from diagonally dominant.
struct BandedMatrix {
  std::size_t n = 0;
  int kl = 0;
  int ku = 0;
  std::vector<double> ab;

  BandedMatrix() = default;
  BandedMatrix(std::size_t n_, int kl_, int ku_)
      : n(n_), kl(kl_), ku(ku_), ab((2 * kl_ + ku_ + 1) * n_, 0.0) {
    if (kl_ < 0 || ku_ < 0) throw dimension_error("banded: negative bandwidth");
  }

  int ldab() const { return 2 * kl + ku + 1; }

  bool in_band(std::size_t i, std::size_t j) const {
    const long d = static_cast<long>(i) - static_cast<long>(j);
    return d <= kl && -d <= ku;
  }

  // No bounds check beyond the band; callers index only structurally
  // admissible entries.
  double& at(std::size_t i, std::size_t j) {
    return ab[static_cast<std::size_t>(kl + ku + static_cast<long>(i) - static_cast<long>(j)) +
              j * static_cast<std::size_t>(ldab())];
  }
  double at(std::size_t i, std::size_t j) const {
    return ab[static_cast<std::size_t>(kl + ku + static_cast<long>(i) - static_cast<long>(j)) +
              j * static_cast<std::size_t>(ldab())];
  }
};

// In-place LU with partial pivoting (unblocked LAPACK gbtrf layout). After
// the call the multipliers sit below the diagonal and U occupies the upper
// kl + ku bands. pivots[j] records the row swapped into position j.
inline void banded_factor(BandedMatrix& m, std::vector<int>& pivots) {
  const std::size_t n = m.n;
  pivots.assign(n, 0);
  const int kl = m.kl, ku = m.ku;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t last_row = std::min(n - 1, j + static_cast<std::size_t>(kl));
    std::size_t p = j;
    double best = std::abs(m.at(j, j));
    for (std::size_t i = j + 1; i <= last_row; ++i) {
      const double a = std::abs(m.at(i, j));
      if (a > best) {
        best = a;
        p = i;
      }
    }
    pivots[j] = static_cast<int>(p);
    if (best == 0.0) throw numeric_error("banded: singular matrix");
    const std::size_t last_col = std::min(n - 1, j + static_cast<std::size_t>(ku + kl));
    if (p != j)
      for (std::size_t c = j; c <= last_col; ++c) std::swap(m.at(j, c), m.at(p, c));
    const double piv = m.at(j, j);
    for (std::size_t i = j + 1; i <= last_row; ++i) {
      const double l = m.at(i, j) / piv;
      m.at(i, j) = l;
      for (std::size_t c = j + 1; c <= last_col; ++c) m.at(i, c) -= l * m.at(j, c);
    }
  }
}

inline void banded_solve(const BandedMatrix& m, const std::vector<int>& pivots,
                         std::vector<double>& rhs) {
  const std::size_t n = m.n;
  if (rhs.size() != n || pivots.size() != n)
    throw dimension_error("banded: rhs/pivot size mismatch");
  const int kl = m.kl, ku = m.ku;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const std::size_t p = static_cast<std::size_t>(pivots[j]);
    if (p != j) std::swap(rhs[j], rhs[p]);
    const std::size_t last_row = std::min(n - 1, j + static_cast<std::size_t>(kl));
    for (std::size_t i = j + 1; i <= last_row; ++i) rhs[i] -= m.at(i, j) * rhs[j];
  }
  for (std::size_t j = n; j-- > 0;) {
    const std::size_t first = j > static_cast<std::size_t>(kl + ku)
                                  ? j - static_cast<std::size_t>(kl + ku)
                                  : 0;
    rhs[j] /= m.at(j, j);
    for (std::size_t i = first; i < j; ++i) rhs[i] -= m.at(i, j) * rhs[j];
  }
}

}  // namespace nlsb
