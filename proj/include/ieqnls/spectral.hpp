#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace ieqnls {

using Complex = std::complex<double>;
using ComplexField = std::vector<Complex>;
using RealField = std::vector<double>;

/// Periodic uniform mesh on [a, b). The node x = b is identified with x = a.
struct Grid1D {
  double a = 0.0;
  double b = 0.0;
  std::size_t n = 0;
  double h = 0.0;
  double length = 0.0;
  double mu = 0.0;                   ///< fundamental wavenumber 2*pi/length
  std::vector<double> nodes;         ///< x_j = a + j*h, j = 0..n-1
  std::vector<double> wavenumbers;   ///< FFT ordering, Nyquist entry is zero
};

/// Tensor-product periodic mesh. Fields are stored row-major with the x index
/// slowest: V[j * n + k] lives at (x_j, y_k).
struct Grid2D {
  Grid1D x;
  Grid1D y;
};

/// Throws ConfigError for odd n, n < 4 or b <= a.
Grid1D build_grid_1d(double a, double b, std::size_t n);

/// Both axes share the node count n.
Grid2D build_grid_2d(double ax, double bx, double ay, double by, std::size_t n);

/// Dense Fourier differentiation matrix from the cotangent formula, row-major
/// n*n. Intended as an oracle for small n.
std::vector<double> dense_d1(const Grid1D& grid);

namespace detail {
class FftPlan;
}

/// Fourier pseudospectral operators on a 1D or 2D periodic grid.
///
/// All operators are diagonal in Fourier space. The first-derivative
/// multiplier of the Nyquist mode is zero, which makes the transform-based D1
/// identical to the cotangent matrix; D1^2 uses the squared first-derivative
/// multipliers. Instances are immutable after construction and may be shared
/// between threads.
class SpectralSpace {
public:
  explicit SpectralSpace(Grid1D grid);
  explicit SpectralSpace(Grid2D grid);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return size_; }
  std::size_t points_per_axis() const noexcept { return axes_[0].n; }
  /// Quadrature weight h (1D) or hx*hy (2D).
  double weight() const noexcept { return weight_; }
  const Grid1D& axis(int i) const { return axes_.at(static_cast<std::size_t>(i)); }

  /// D1 applied along `axis` (0 = x, 1 = y).
  ComplexField derivative(std::span<const Complex> v, int axis = 0) const;

  /// D1^2 v in 1D, D1^2 V + V (D1^2)^T in 2D.
  ComplexField laplacian(std::span<const Complex> v) const;

  /// Solves (I - i*tau*L) x = rhs where L is `laplacian`.
  ComplexField solve_shifted(std::span<const Complex> rhs, double tau) const;

  /// weight * sum u_i conj(v_i)
  Complex inner(std::span<const Complex> u, std::span<const Complex> v) const;
  double norm2(std::span<const Complex> u) const;
  /// weight * sum u_i v_i for real fields
  double inner(std::span<const double> u, std::span<const double> v) const;

  void check_size(std::size_t n, const char* what) const;

private:
  template <class Multiplier>
  ComplexField apply_diagonal(std::span<const Complex> v, Multiplier&& m) const;

  int dim_;
  std::size_t size_;
  double weight_;
  std::vector<Grid1D> axes_;
  std::vector<double> laplacian_symbol_;   ///< -(kx^2 + ky^2), FFT ordering
  std::shared_ptr<const detail::FftPlan> plan_;
};

}  // namespace ieqnls
