#include "ieqnls/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "ieqnls/errors.hpp"

namespace ieqnls {

namespace detail {

// FFTW planning is not thread-safe; execution with the new-array interface is.
class FftPlan {
public:
  FftPlan(int dim, int n) : count_(static_cast<std::size_t>(dim == 1 ? n : n * n)) {
    static std::mutex planner_mutex;
    std::lock_guard<std::mutex> lock(planner_mutex);
    auto* buf = fftw_alloc_complex(count_);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (dim == 1) {
      forward_ = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, flags);
      backward_ = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, flags);
    } else {
      forward_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, flags);
      backward_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, flags);
    }
    fftw_free(buf);
  }

  ~FftPlan() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  void forward(Complex* data) const { run(forward_, data); }

  // Unnormalized; callers divide by count().
  void backward(Complex* data) const { run(backward_, data); }

  std::size_t count() const noexcept { return count_; }

private:
  static void run(fftw_plan plan, Complex* data) {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, p, p);
  }

  std::size_t count_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace detail

Grid1D build_grid_1d(double a, double b, std::size_t n) {
  if (n < 4 || n % 2 != 0) {
    throw ConfigError("grid node count must be even and >= 4, got " + std::to_string(n));
  }
  if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ConfigError("grid requires finite endpoints with b > a");
  }
  Grid1D g;
  g.a = a;
  g.b = b;
  g.n = n;
  g.length = b - a;
  g.h = g.length / static_cast<double>(n);
  g.mu = 2.0 * std::numbers::pi / g.length;
  g.nodes.resize(n);
  g.wavenumbers.resize(n);
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  for (std::size_t j = 0; j < n; ++j) {
    g.nodes[j] = a + static_cast<double>(j) * g.h;
    auto k = static_cast<std::ptrdiff_t>(j);
    if (k > half) k -= static_cast<std::ptrdiff_t>(n);
    if (k == half) k = 0;  // Nyquist
    g.wavenumbers[j] = g.mu * static_cast<double>(k);
  }
  return g;
}

Grid2D build_grid_2d(double ax, double bx, double ay, double by, std::size_t n) {
  return Grid2D{build_grid_1d(ax, bx, n), build_grid_1d(ay, by, n)};
}

std::vector<double> dense_d1(const Grid1D& grid) {
  const std::size_t n = grid.n;
  std::vector<double> d(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = j + 1; l < n; ++l) {
      const double sign = ((j + l) % 2 == 0) ? 1.0 : -1.0;
      const double dx = grid.nodes[j] - grid.nodes[l];
      const double v = 0.5 * sign * grid.mu / std::tan(grid.mu * dx / 2.0);
      d[j * n + l] = v;
      d[l * n + j] = -v;
    }
  }
  return d;
}

SpectralSpace::SpectralSpace(Grid1D grid)
    : dim_(1), size_(grid.n), weight_(grid.h) {
  laplacian_symbol_.resize(size_);
  for (std::size_t j = 0; j < size_; ++j) {
    laplacian_symbol_[j] = -grid.wavenumbers[j] * grid.wavenumbers[j];
  }
  plan_ = std::make_shared<const detail::FftPlan>(1, static_cast<int>(grid.n));
  axes_.push_back(std::move(grid));
}

SpectralSpace::SpectralSpace(Grid2D grid)
    : dim_(2), size_(grid.x.n * grid.y.n), weight_(grid.x.h * grid.y.h) {
  if (grid.x.n != grid.y.n) {
    throw ConfigError("2D grid requires equal node counts on both axes");
  }
  const std::size_t n = grid.x.n;
  laplacian_symbol_.resize(size_);
  for (std::size_t j = 0; j < n; ++j) {
    const double kx = grid.x.wavenumbers[j];
    for (std::size_t k = 0; k < n; ++k) {
      const double ky = grid.y.wavenumbers[k];
      laplacian_symbol_[j * n + k] = -(kx * kx + ky * ky);
    }
  }
  plan_ = std::make_shared<const detail::FftPlan>(2, static_cast<int>(n));
  axes_.push_back(std::move(grid.x));
  axes_.push_back(std::move(grid.y));
}

void SpectralSpace::check_size(std::size_t n, const char* what) const {
  if (n != size_) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(size_) +
                         " values, got " + std::to_string(n));
  }
}

template <class Multiplier>
ComplexField SpectralSpace::apply_diagonal(std::span<const Complex> v, Multiplier&& m) const {
  ComplexField w(v.begin(), v.end());
  plan_->forward(w.data());
  const double scale = 1.0 / static_cast<double>(size_);
  for (std::size_t i = 0; i < size_; ++i) w[i] *= m(i) * scale;
  plan_->backward(w.data());
  return w;
}

ComplexField SpectralSpace::derivative(std::span<const Complex> v, int axis) const {
  check_size(v.size(), "derivative");
  if (axis < 0 || axis >= dim_) throw DimensionError("derivative axis out of range");
  const std::size_t n = points_per_axis();
  const auto& kappa = axes_[static_cast<std::size_t>(axis)].wavenumbers;
  if (dim_ == 1) {
    return apply_diagonal(v, [&](std::size_t i) { return Complex(0.0, kappa[i]); });
  }
  if (axis == 0) {
    return apply_diagonal(v, [&](std::size_t i) { return Complex(0.0, kappa[i / n]); });
  }
  return apply_diagonal(v, [&](std::size_t i) { return Complex(0.0, kappa[i % n]); });
}

ComplexField SpectralSpace::laplacian(std::span<const Complex> v) const {
  check_size(v.size(), "laplacian");
  return apply_diagonal(v, [&](std::size_t i) { return Complex(laplacian_symbol_[i], 0.0); });
}

ComplexField SpectralSpace::solve_shifted(std::span<const Complex> rhs, double tau) const {
  check_size(rhs.size(), "solve_shifted");
  // symbol of I - i*tau*L is 1 - i*tau*(-k^2) = 1 + i*tau*k^2, never zero
  return apply_diagonal(rhs, [&](std::size_t i) {
    return 1.0 / Complex(1.0, -tau * laplacian_symbol_[i]);
  });
}

Complex SpectralSpace::inner(std::span<const Complex> u, std::span<const Complex> v) const {
  check_size(u.size(), "inner");
  check_size(v.size(), "inner");
  Complex s = 0.0;
  for (std::size_t i = 0; i < size_; ++i) s += u[i] * std::conj(v[i]);
  return weight_ * s;
}

double SpectralSpace::norm2(std::span<const Complex> u) const {
  check_size(u.size(), "norm2");
  double s = 0.0;
  for (const auto& z : u) s += std::norm(z);
  return weight_ * s;
}

double SpectralSpace::inner(std::span<const double> u, std::span<const double> v) const {
  check_size(u.size(), "inner");
  check_size(v.size(), "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < size_; ++i) s += u[i] * v[i];
  return weight_ * s;
}

}  // namespace ieqnls
