#pragma once

// Reference computations used only by tests. They deliberately avoid the
// library's code paths: plain loops, long double accumulation, Gaussian
// elimination instead of orthogonal factorizations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracle {

inline long double sum_sq_residual(const std::vector<double>& a, const std::vector<double>& p) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double r = static_cast<long double>(a[i]) - p[i];
    s += r * r;
  }
  return s;
}

inline double mse(const std::vector<double>& a, const std::vector<double>& p) {
  return static_cast<double>(sum_sq_residual(a, p) / a.size());
}

inline double rmse(const std::vector<double>& a, const std::vector<double>& p) {
  return static_cast<double>(std::sqrt(sum_sq_residual(a, p) / a.size()));
}

inline double mae(const std::vector<double>& a, const std::vector<double>& p) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(static_cast<long double>(a[i]) - p[i]);
  return static_cast<double>(s / a.size());
}

inline double r_paper(const std::vector<double>& a, const std::vector<double>& p) {
  long double sa = 0.0L;
  for (double x : a) sa += static_cast<long double>(x) * x;
  return static_cast<double>(std::sqrt(1.0L - sum_sq_residual(a, p) / sa));
}

/// Covariance over the product of standard deviations, two-pass.
inline double pearson(const std::vector<double>& a, const std::vector<double>& p) {
  const std::size_t n = a.size();
  long double ma = 0.0L, mp = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mp += p[i];
  }
  ma /= n;
  mp /= n;
  long double cov = 0.0L, va = 0.0L, vp = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (a[i] - ma) * (p[i] - mp);
    va += (a[i] - ma) * (a[i] - ma);
    vp += (p[i] - mp) * (p[i] - mp);
  }
  const long double sd_a = std::sqrt(va / (n - 1));
  const long double sd_p = std::sqrt(vp / (n - 1));
  return static_cast<double>((cov / (n - 1)) / (sd_a * sd_p));
}

using Matrix = std::vector<std::vector<double>>;

/// Solves M x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> gauss_solve(Matrix m, std::vector<double> b) {
  const std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    if (m[piv][col] == 0.0) throw std::runtime_error("singular");
    std::swap(m[piv], m[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= m[i][c] * x[c];
    x[i] = s / m[i][i];
  }
  return x;
}

/// Ridge normal equations (Phi^T Phi + lambda I') beta = Phi^T t where I'
/// leaves the trailing bias column unpenalized.
inline std::vector<double> ridge_normal_equations(const Matrix& phi, const std::vector<double>& t,
                                                  double lambda) {
  const std::size_t cols = phi.front().size();
  Matrix gram(cols, std::vector<double>(cols, 0.0));
  std::vector<double> rhs(cols, 0.0);
  for (std::size_t r = 0; r < phi.size(); ++r)
    for (std::size_t i = 0; i < cols; ++i) {
      rhs[i] += phi[r][i] * t[r];
      for (std::size_t j = 0; j < cols; ++j) gram[i][j] += phi[r][i] * phi[r][j];
    }
  for (std::size_t i = 0; i + 1 < cols; ++i) gram[i][i] += lambda;
  return gauss_solve(gram, rhs);
}

/// Central differences of f around x with step h.
inline std::vector<double> central_difference(const std::function<double(const std::vector<double>&)>& f,
                                              std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

/// Exhaustive best 2-partition (minimum within-cluster sum of squares) of up
/// to ~16 points; returns the label of each point (0/1).
template <typename Point>
std::vector<int> best_two_partition(const std::vector<Point>& pts) {
  const std::size_t n = pts.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_labels(n, 0);
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    double cost = 0.0;
    for (int side = 0; side < 2; ++side) {
      Point mean{};
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (((mask >> i) & 1u) == static_cast<unsigned>(side)) {
          for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += pts[i][d];
          ++count;
        }
      for (auto& m : mean) m /= static_cast<double>(count);
      for (std::size_t i = 0; i < n; ++i)
        if (((mask >> i) & 1u) == static_cast<unsigned>(side))
          for (std::size_t d = 0; d < mean.size(); ++d)
            cost += (pts[i][d] - mean[d]) * (pts[i][d] - mean[d]);
    }
    if (cost < best) {
      best = cost;
      for (std::size_t i = 0; i < n; ++i) best_labels[i] = static_cast<int>((mask >> i) & 1u);
    }
  }
  return best_labels;
}

/// Relative difference with a floor on the magnitude used for scaling.
inline double rel_diff(double a, double b, double floor = 0.0) {
  const double scale = std::max({std::fabs(a), std::fabs(b), floor});
  return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

}  // namespace oracle
