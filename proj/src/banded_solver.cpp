#include "wilflow/banded_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wilflow {

BandLU::BandLU(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), width_(2 * kl + ku + 1), a_(n * width_, 0.0),
      lower_factors_(n * kl, 0.0), pivots_(n, 0) {}

void BandLU::factor(double pivot_tol) {
  double scale = 0.0;
  for (double v : a_) scale = std::max(scale, std::abs(v));
  const double tiny = pivot_tol * scale;
  const std::size_t ku_fill = kl_ + ku_;

  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t last_row = std::min(n_ - 1, k + kl_);
    const std::size_t last_col = std::min(n_ - 1, k + ku_fill);

    std::size_t p = k;
    double best = std::abs(at(k, k));
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      if (std::abs(at(i, k)) > best) {
        best = std::abs(at(i, k));
        p = i;
      }
    }
    if (!(best > tiny))
      throw SingularSystem("band LU: zero pivot in column " + std::to_string(k));
    pivots_[k] = p;
    if (p != k)
      for (std::size_t j = k; j <= last_col; ++j) std::swap(at(k, j), at(p, j));

    const double pivot = at(k, k);
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      const double l = at(i, k) / pivot;
      lower_factors_[i * kl_ + (i - k - 1)] = l;
      at(i, k) = 0.0;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j <= last_col; ++j) at(i, j) -= l * at(k, j);
    }
  }
  factored_ = true;
}

void BandLU::solve(std::span<double> b) const {
  const std::size_t ku_fill = kl_ + ku_;
  for (std::size_t k = 0; k < n_; ++k) {
    if (pivots_[k] != k) std::swap(b[k], b[pivots_[k]]);
    const std::size_t last_row = std::min(n_ - 1, k + kl_);
    for (std::size_t i = k + 1; i <= last_row; ++i)
      b[i] -= lower_factors_[i * kl_ + (i - k - 1)] * b[k];
  }
  for (std::size_t k = n_; k-- > 0;) {
    const std::size_t last_col = std::min(n_ - 1, k + ku_fill);
    double s = b[k];
    for (std::size_t j = k + 1; j <= last_col; ++j) s -= at(k, j) * b[j];
    b[k] = s / at(k, k);
  }
}

BorderedBandMatrix::BorderedBandMatrix(std::size_t n, std::size_t kl, std::size_t ku,
                                       std::size_t border)
    : n_(n), m_(n - border), k_(border), band_original_(n - border, kl, ku),
      c_(m_ * k_, 0.0), r_(k_ * m_, 0.0), d_(k_ * k_, 0.0) {
  if (border > n) throw std::invalid_argument("BorderedBandMatrix: border larger than matrix");
}

void BorderedBandMatrix::add(std::size_t i, std::size_t j, double v) {
  if (i >= n_ || j >= n_) throw std::out_of_range("BorderedBandMatrix: index out of range");
  factored_ = false;
  if (i < m_ && j < m_) {
    if (!band_original_.in_band(i, j))
      throw std::out_of_range("BorderedBandMatrix: entry (" + std::to_string(i) + ", " +
                              std::to_string(j) + ") outside band");
    band_original_.at(i, j) += v;
  } else if (i < m_) {
    c_[i * k_ + (j - m_)] += v;
  } else if (j < m_) {
    r_[(i - m_) * m_ + j] += v;
  } else {
    d_[(i - m_) * k_ + (j - m_)] += v;
  }
}

double BorderedBandMatrix::get(std::size_t i, std::size_t j) const {
  if (i < m_ && j < m_) return band_original_.in_band(i, j) ? band_original_.at(i, j) : 0.0;
  if (i < m_) return c_[i * k_ + (j - m_)];
  if (j < m_) return r_[(i - m_) * m_ + j];
  return d_[(i - m_) * k_ + (j - m_)];
}

void BorderedBandMatrix::factor(double pivot_tol) {
  band_ = band_original_;
  if (m_ > 0) band_.factor(pivot_tol);
  if (k_ == 0) {
    factored_ = true;
    return;
  }

  // B^{-1} C, column by column
  binv_c_.assign(m_ * k_, 0.0);
  std::vector<double> col(m_);
  for (std::size_t c = 0; c < k_; ++c) {
    for (std::size_t i = 0; i < m_; ++i) col[i] = c_[i * k_ + c];
    if (m_ > 0) band_.solve(col);
    for (std::size_t i = 0; i < m_; ++i) binv_c_[i * k_ + c] = col[i];
  }
  // S = D - R B^{-1} C, then dense LU with partial pivoting
  schur_ = d_;
  double scale = 0.0;
  for (std::size_t a = 0; a < k_; ++a)
    for (std::size_t b = 0; b < k_; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < m_; ++i) s += r_[a * m_ + i] * binv_c_[i * k_ + b];
      schur_[a * k_ + b] -= s;
      scale = std::max({scale, std::abs(schur_[a * k_ + b]), std::abs(d_[a * k_ + b])});
    }
  schur_piv_.assign(k_, 0);
  for (std::size_t c = 0; c < k_; ++c) {
    std::size_t p = c;
    for (std::size_t i = c + 1; i < k_; ++i)
      if (std::abs(schur_[i * k_ + c]) > std::abs(schur_[p * k_ + c])) p = i;
    if (!(std::abs(schur_[p * k_ + c]) > pivot_tol * scale))
      throw SingularSystem("bordered solve: singular Schur complement");
    schur_piv_[c] = p;
    if (p != c)
      for (std::size_t j = 0; j < k_; ++j) std::swap(schur_[c * k_ + j], schur_[p * k_ + j]);
    for (std::size_t i = c + 1; i < k_; ++i) {
      const double l = schur_[i * k_ + c] / schur_[c * k_ + c];
      schur_[i * k_ + c] = l;
      for (std::size_t j = c + 1; j < k_; ++j) schur_[i * k_ + j] -= l * schur_[c * k_ + j];
    }
  }
  factored_ = true;
}

BorderedBandMatrix::Solution BorderedBandMatrix::solve(std::span<const double> b) const {
  if (!factored_) throw std::logic_error("BorderedBandMatrix::solve before factor");
  if (b.size() != n_) throw std::invalid_argument("BorderedBandMatrix::solve: size mismatch");
  Solution sol;
  sol.x.assign(b.begin(), b.end());
  std::span<double> x1(sol.x.data(), m_);
  if (m_ > 0) band_.solve(x1);

  if (k_ > 0) {
    // border unknowns: S x2 = b2 - R B^{-1} b1
    std::vector<double> x2(k_);
    for (std::size_t a = 0; a < k_; ++a) {
      double s = b[m_ + a];
      for (std::size_t i = 0; i < m_; ++i) s -= r_[a * m_ + i] * x1[i];
      x2[a] = s;
    }
    for (std::size_t c = 0; c < k_; ++c) {
      if (schur_piv_[c] != c) std::swap(x2[c], x2[schur_piv_[c]]);
      for (std::size_t i = c + 1; i < k_; ++i) x2[i] -= schur_[i * k_ + c] * x2[c];
    }
    for (std::size_t c = k_; c-- > 0;) {
      double s = x2[c];
      for (std::size_t j = c + 1; j < k_; ++j) s -= schur_[c * k_ + j] * x2[j];
      x2[c] = s / schur_[c * k_ + c];
    }
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t c = 0; c < k_; ++c) x1[i] -= binv_c_[i * k_ + c] * x2[c];
    for (std::size_t a = 0; a < k_; ++a) sol.x[m_ + a] = x2[a];
  }

  const auto ax = multiply(sol.x);
  double rr = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    rr += (ax[i] - b[i]) * (ax[i] - b[i]);
    bb += b[i] * b[i];
  }
  sol.residual = std::sqrt(rr) / std::max(1.0, std::sqrt(bb));
  return sol;
}

std::vector<double> BorderedBandMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  const std::size_t kl = band_original_.lower(), ku = band_original_.upper();
  for (std::size_t i = 0; i < m_; ++i) {
    const std::size_t j0 = i >= kl ? i - kl : 0;
    const std::size_t j1 = std::min(m_ - 1, i + ku);
    double s = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) s += band_original_.at(i, j) * x[j];
    for (std::size_t c = 0; c < k_; ++c) s += c_[i * k_ + c] * x[m_ + c];
    y[i] = s;
  }
  for (std::size_t a = 0; a < k_; ++a) {
    double s = 0.0;
    for (std::size_t j = 0; j < m_; ++j) s += r_[a * m_ + j] * x[j];
    for (std::size_t c = 0; c < k_; ++c) s += d_[a * k_ + c] * x[m_ + c];
    y[m_ + a] = s;
  }
  return y;
}

}  // namespace wilflow
