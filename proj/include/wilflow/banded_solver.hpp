#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace wilflow {

class SingularSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// LU factorization of a general band matrix with partial pivoting.
/// Storage follows the LAPACK gbtrf layout: each row keeps kl extra
/// super-diagonals for the fill created by row interchanges.
class BandLU {
 public:
  BandLU() = default;
  BandLU(std::size_t n, std::size_t kl, std::size_t ku);

  std::size_t size() const { return n_; }
  std::size_t lower() const { return kl_; }
  std::size_t upper() const { return ku_; }

  bool in_band(std::size_t i, std::size_t j) const {
    return j + kl_ >= i && j <= i + ku_;
  }
  double &at(std::size_t i, std::size_t j) { return a_[i * width_ + (j + kl_ - i)]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * width_ + (j + kl_ - i)]; }

  /// Factorizes in place. Throws SingularSystem when a pivot is below
  /// pivot_tol times the largest entry.
  void factor(double pivot_tol = 1e-14);
  /// Solves in place with the factorization.
  void solve(std::span<double> b) const;

  bool factored() const { return factored_; }

 private:
  std::size_t n_ = 0, kl_ = 0, ku_ = 0, width_ = 0;
  std::vector<double> a_;
  std::vector<double> lower_factors_;  // n x kl multipliers
  std::vector<std::size_t> pivots_;
  bool factored_ = false;
};

/// Band matrix bordered by `border` dense trailing rows and columns:
///
///   [ B  C ]   B: (n-k) x (n-k) band, C: (n-k) x k, R: k x (n-k), D: k x k
///   [ R  D ]
///
/// Periodic (cyclic) nearest-neighbour couplings are expressed by moving one
/// node's unknowns to the border. Solved by block elimination (Schur
/// complement on the border), which stays valid whenever B is nonsingular.
class BorderedBandMatrix {
 public:
  struct Solution {
    std::vector<double> x;
    double residual = 0.0;  ///< ||Ax - b|| / max(1, ||b||), 2-norms
  };

  BorderedBandMatrix(std::size_t n, std::size_t kl, std::size_t ku, std::size_t border = 0);

  std::size_t size() const { return n_; }
  std::size_t border() const { return k_; }

  /// A(i, j) += v. Throws std::out_of_range for entries outside the band
  /// and border blocks.
  void add(std::size_t i, std::size_t j, double v);
  double get(std::size_t i, std::size_t j) const;

  void factor(double pivot_tol = 1e-14);
  Solution solve(std::span<const double> b) const;
  /// y = A x with the assembled (unfactored) entries.
  std::vector<double> multiply(std::span<const double> x) const;

 private:
  std::size_t n_, m_, k_;
  BandLU band_;           // factored copy
  BandLU band_original_;  // assembled entries
  std::vector<double> c_, r_, d_;
  // after factor(): B^{-1} C and the LU of the Schur complement
  std::vector<double> binv_c_, schur_;
  std::vector<std::size_t> schur_piv_;
  bool factored_ = false;
};

}  // namespace wilflow
