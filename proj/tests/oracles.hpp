#pragma once

// Independent reference computations used by the tests. Nothing here calls the
// library's operators: matrices are built from closed-form entries and linear
// systems are solved by plain Gaussian elimination.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Matrix = std::vector<double>;   // row-major n*n

inline std::vector<cplx> random_field(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<cplx> v(n);
  for (auto& z : v) z = {g(rng), g(rng)};
  return v;
}

inline std::vector<double> random_real(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

/// Fourier differentiation matrix on n equispaced nodes of a period `length`:
/// entry (j, l) = 1/2 (-1)^(j+l) mu cot(mu (x_j - x_l) / 2), zero on the diagonal.
inline Matrix cot_d1(std::size_t n, double length) {
  const double mu = 2.0 * std::numbers::pi / length;
  const double h = length / static_cast<double>(n);
  Matrix d(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < n; ++l) {
      if (j == l) continue;
      const double sign = ((j + l) % 2 == 0) ? 1.0 : -1.0;
      const double dx = (static_cast<double>(j) - static_cast<double>(l)) * h;
      d[j * n + l] = 0.5 * sign * mu / std::tan(mu * dx / 2.0);
    }
  }
  return d;
}

inline Matrix matmul(const Matrix& a, const Matrix& b, std::size_t n) {
  Matrix c(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += a[i * n + k] * b[k * n + j];
  return c;
}

inline std::vector<cplx> matvec(const Matrix& a, const std::vector<cplx>& v) {
  const std::size_t n = v.size();
  std::vector<cplx> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i] += a[i * n + j] * v[j];
  return out;
}

/// A V along the x index (slow) of an n*n row-major field.
inline std::vector<cplx> apply_x(const Matrix& a, const std::vector<cplx>& v, std::size_t n) {
  std::vector<cplx> out(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t k = 0; k < n; ++k) out[j * n + k] += a[j * n + l] * v[l * n + k];
  return out;
}

/// V A^T, i.e. A applied along the y index (fast).
inline std::vector<cplx> apply_y(const Matrix& a, const std::vector<cplx>& v, std::size_t n) {
  std::vector<cplx> out(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) out[j * n + k] += v[j * n + l] * a[k * n + l];
  return out;
}

inline double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Solves the dense real system M x = y by Gaussian elimination with partial pivoting.
inline std::vector<double> gauss_solve(Matrix m, std::vector<double> y) {
  const std::size_t n = y.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r * n + col]) > std::abs(m[piv * n + col])) piv = r;
    if (m[piv * n + col] == 0.0) throw std::runtime_error("singular system");
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m[col * n + c], m[piv * n + c]);
      std::swap(y[col], y[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = m[r * n + col] / m[col * n + col];
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) m[r * n + c] -= factor * m[col * n + c];
      y[r] -= factor * y[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = y[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= m[i * n + c] * x[c];
    x[i] = s / m[i * n + i];
  }
  return x;
}

inline double norm_inf(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Damped Newton iteration for F(x) = 0 with a central-difference Jacobian and
/// step halving on the max-norm of the residual.
inline std::vector<double> damped_newton(
    const std::function<std::vector<double>(const std::vector<double>&)>& F,
    std::vector<double> x, double tol = 1e-15, int max_iters = 60) {
  const std::size_t n = x.size();
  std::vector<double> fx = F(x);
  for (int it = 0; it < max_iters && norm_inf(fx) > tol; ++it) {
    Matrix jac(n * n);
    for (std::size_t c = 0; c < n; ++c) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[c]));
      auto xp = x, xm = x;
      xp[c] += h;
      xm[c] -= h;
      const auto fp = F(xp), fm = F(xm);
      for (std::size_t r = 0; r < n; ++r) jac[r * n + c] = (fp[r] - fm[r]) / (2.0 * h);
    }
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -fx[i];
    const auto dx = gauss_solve(jac, rhs);
    double lambda = 1.0;
    for (int k = 0; k < 30; ++k, lambda /= 2.0) {
      auto trial = x;
      for (std::size_t i = 0; i < n; ++i) trial[i] += lambda * dx[i];
      const auto ft = F(trial);
      if (norm_inf(ft) < norm_inf(fx) || k == 29) {
        x = trial;
        fx = ft;
        break;
      }
    }
  }
  return x;
}

/// Root of the implicit-midpoint-type stage equations
///   U = un + tau (i D^2 U + i beta R U),  R = rn + tau (conj(U) f + U conj(f))
/// on n periodic nodes of period `length`, found by damped Newton on the 3n real
/// unknowns (Re U, Im U, R). D is the cotangent matrix above.
inline std::pair<std::vector<cplx>, std::vector<double>> newton_stage(
    std::size_t n, double length, double beta, double tau, const std::vector<cplx>& un,
    const std::vector<double>& rn) {
  const auto d = cot_d1(n, length);
  const auto d2 = matmul(d, d, n);
  const cplx I(0.0, 1.0);

  auto unpack = [n](const std::vector<double>& x) {
    std::vector<cplx> u(n);
    for (std::size_t j = 0; j < n; ++j) u[j] = {x[j], x[n + j]};
    return u;
  };
  auto residual = [&](const std::vector<double>& x) {
    const auto u = unpack(x);
    const auto lu = matvec(d2, u);
    std::vector<double> out(3 * n);
    for (std::size_t j = 0; j < n; ++j) {
      const double r = x[2 * n + j];
      const cplx f = I * lu[j] + I * beta * r * u[j];
      const cplx fu = u[j] - un[j] - tau * f;
      const cplx g = std::conj(u[j]) * f + u[j] * std::conj(f);
      out[j] = fu.real();
      out[n + j] = fu.imag();
      out[2 * n + j] = r - rn[j] - tau * g.real();
    }
    return out;
  };

  std::vector<double> x0(3 * n);
  for (std::size_t j = 0; j < n; ++j) {
    x0[j] = un[j].real();
    x0[n + j] = un[j].imag();
    x0[2 * n + j] = rn[j];
  }
  const auto x = damped_newton(residual, x0);
  return {unpack(x), std::vector<double>(x.begin() + 2 * n, x.end())};
}

}  // namespace oracle
