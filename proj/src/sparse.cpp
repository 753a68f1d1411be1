#include "thermoplast/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace thermoplast {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double CsrMatrix::at(int i, int j) const {
  const auto first = col.begin() + row_start[i];
  const auto last = col.begin() + row_start[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return val[static_cast<std::size_t>(it - col.begin())];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    for (int p = row_start[i]; p < row_start[i + 1]; ++p) s += val[p] * x[col[p]];
    y[i] = s;
  }
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(rows, 0.0);
  for (int i = 0; i < rows; ++i) d[i] = at(i, i);
  return d;
}

double CsrMatrix::asymmetry() const {
  double worst = 0.0;
  for (int i = 0; i < rows; ++i) {
    for (int p = row_start[i]; p < row_start[i + 1]; ++p) {
      worst = std::max(worst, std::abs(val[p] - at(col[p], i)));
    }
  }
  return worst;
}

CsrMatrix TripletBuilder::build() const {
  std::vector<std::size_t> order(entries_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Entry& x = entries_[a];
    const Entry& y = entries_[b];
    return x.i != y.i ? x.i < y.i : x.j < y.j;
  });
  CsrMatrix m;
  m.rows = n_;
  m.row_start.assign(n_ + 1, 0);
  int last_i = -1;
  int last_j = -1;
  for (std::size_t k : order) {
    const Entry& e = entries_[k];
    if (e.i == last_i && e.j == last_j) {
      m.val.back() += e.v;
      continue;
    }
    m.col.push_back(e.j);
    m.val.push_back(e.v);
    m.row_start[e.i + 1] += 1;
    last_i = e.i;
    last_j = e.j;
  }
  for (int i = 0; i < n_; ++i) m.row_start[i + 1] += m.row_start[i];
  return m;
}

std::vector<double> LinearOperator::apply(std::span<const double> x) const {
  std::vector<double> y(size());
  matrix.multiply(x, y);
  return y;
}

double LinearOperator::quadratic_form(std::span<const double> x) const {
  const auto y = apply(x);
  return dot(x, y);
}

void LinearOperator::constrain(std::span<double> rhs) const {
  if (dirichlet.empty()) return;
  for (int i = 0; i < size(); ++i) {
    if (dirichlet[i]) rhs[i] = 0.0;
  }
}

LinearOperator LinearOperator::combine(double s, const LinearOperator& a, double t, const LinearOperator& b) {
  if (a.matrix.col != b.matrix.col || a.matrix.row_start != b.matrix.row_start) {
    throw std::invalid_argument("LinearOperator::combine: sparsity patterns differ");
  }
  LinearOperator out = a;
  for (std::size_t p = 0; p < out.matrix.val.size(); ++p) {
    out.matrix.val[p] = s * a.matrix.val[p] + t * b.matrix.val[p];
  }
  // Eliminated rows keep the identity.
  if (!out.dirichlet.empty()) {
    for (int i = 0; i < out.size(); ++i) {
      if (!out.dirichlet[i]) continue;
      for (int p = out.matrix.row_start[i]; p < out.matrix.row_start[i + 1]; ++p) {
        out.matrix.val[p] = out.matrix.col[p] == i ? 1.0 : 0.0;
      }
    }
  }
  return out;
}

LinearOperator eliminate_dirichlet(CsrMatrix m, std::vector<char> mask) {
  for (int i = 0; i < m.rows; ++i) {
    for (int p = m.row_start[i]; p < m.row_start[i + 1]; ++p) {
      const int j = m.col[p];
      if (mask[i] || mask[j]) m.val[p] = (i == j) ? 1.0 : 0.0;
    }
  }
  return {std::move(m), std::move(mask)};
}

SolveResult solve_spd(const LinearOperator& a, std::span<const double> b, const SolveOptions& opts,
                      std::span<const double> guess) {
  const int n = a.size();
  SolveResult out;
  out.x.assign(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return out;
  if (!guess.empty()) std::copy(guess.begin(), guess.end(), out.x.begin());

  std::vector<double> r(n);
  a.matrix.multiply(out.x, r);
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  double rnorm = norm2(r);
  const double target = opts.tol * bnorm;
  if (rnorm <= target) {
    out.residual = rnorm;
    return out;
  }

  std::vector<double> inv_diag;
  if (opts.jacobi) {
    inv_diag = a.matrix.diagonal();
    for (double& d : inv_diag) d = d != 0.0 ? 1.0 / d : 1.0;
  }
  auto precondition = [&](const std::vector<double>& in, std::vector<double>& z) {
    if (inv_diag.empty()) {
      z = in;
    } else {
      for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * in[i];
    }
  };

  std::vector<double> z(n);
  std::vector<double> p(n);
  std::vector<double> ap(n);
  precondition(r, z);
  p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= opts.maxit; ++it) {
    a.matrix.multiply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) {
      throw SolverError("conjugate gradient breakdown (operator not positive definite)", rnorm, it);
    }
    const double alpha = rz / pap;
    for (int i = 0; i < n; ++i) {
      out.x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    rnorm = norm2(r);
    if (rnorm <= target) {
      // Recompute the true residual to guard against drift of the recursion.
      std::vector<double> check(n);
      a.matrix.multiply(out.x, check);
      for (int i = 0; i < n; ++i) check[i] = b[i] - check[i];
      const double true_norm = norm2(check);
      if (true_norm <= target) {
        out.iterations = it;
        out.residual = true_norm;
        return out;
      }
      // Restart from the true residual.
      r = check;
      rnorm = true_norm;
      precondition(r, z);
      p = z;
      rz = dot(r, z);
      continue;
    }
    precondition(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolverError("conjugate gradient did not converge in " + std::to_string(opts.maxit) +
                        " iterations (residual " + std::to_string(rnorm / bnorm) + " relative)",
                    rnorm, opts.maxit);
}

}  // namespace thermoplast
