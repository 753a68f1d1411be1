#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace thermoplast {

/// Compressed-row sparse matrix. Column indices are sorted within each row.
struct CsrMatrix {
  int rows = 0;
  std::vector<int> row_start;  // size rows + 1
  std::vector<int> col;
  std::vector<double> val;

  /// Entry (i, j) or 0 when it is not stored.
  double at(int i, int j) const;
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> diagonal() const;
  /// max |A - A^T| over stored entries.
  double asymmetry() const;
};

/// Accumulates (row, col, value) contributions; duplicates are summed in a
/// fixed order so the result is bitwise reproducible.
class TripletBuilder {
 public:
  explicit TripletBuilder(int n) : n_(n) {}
  void add(int i, int j, double v) { entries_.push_back({i, j, v}); }
  CsrMatrix build() const;

 private:
  struct Entry {
    int i;
    int j;
    double v;
  };
  int n_;
  std::vector<Entry> entries_;
};

/// Symmetric operator plus the mask of eliminated (homogeneous Dirichlet)
/// degrees of freedom. Eliminated rows and columns hold the identity.
struct LinearOperator {
  CsrMatrix matrix;
  std::vector<char> dirichlet;  // empty when nothing is eliminated

  int size() const { return matrix.rows; }
  std::vector<double> apply(std::span<const double> x) const;
  double quadratic_form(std::span<const double> x) const;
  /// Zeroes the eliminated entries of a right-hand side.
  void constrain(std::span<double> rhs) const;
  /// Returns s A + t B for operators with identical sparsity and mask.
  static LinearOperator combine(double s, const LinearOperator& a, double t, const LinearOperator& b);
};

/// Eliminates the flagged dofs: rows and columns are zeroed, diagonal set to 1.
LinearOperator eliminate_dirichlet(CsrMatrix m, std::vector<char> mask);

struct SolveOptions {
  double tol = 1e-10;
  int maxit = 10000;
  bool jacobi = false;
};

struct SolveResult {
  std::vector<double> x;
  int iterations = 0;
  double residual = 0.0;  // |A x - b|
};

/// Conjugate gradient failure; carries the final residual.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Conjugate gradients until |A x - b| <= tol |b|. `guess` may be empty.
/// Throws SolverError after `maxit` iterations.
SolveResult solve_spd(const LinearOperator& a, std::span<const double> b, const SolveOptions& opts,
                      std::span<const double> guess = {});

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace thermoplast
