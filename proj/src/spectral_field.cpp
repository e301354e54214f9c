#include "qdnls/spectral_field.hpp"

#include <algorithm>

#include "qdnls/error.hpp"

namespace qdnls {
namespace {

// (-1)^(i1+i2) accounts for the box starting at -L instead of 0.
double checker(int i1, int i2) { return ((i1 + i2) & 1) ? -1.0 : 1.0; }

void require_same_grid(const Grid2D& a, const Grid2D& b) {
  if (!(a == b)) throw ValidationError("fields live on different grids");
}

}  // namespace

SobolevIndex::SobolevIndex(double value) : s(value) {
  if (!std::isfinite(value)) throw ValidationError("Sobolev index must be finite");
}

SpectralField::SpectralField(const Grid2D& grid) : grid_(grid), c_(grid.size()) {}

SpectralField SpectralField::from_coefficients(const Grid2D& grid, std::vector<Complex> c) {
  if (c.size() != grid.size()) throw ValidationError("coefficient array has wrong size");
  SpectralField f(grid);
  f.c_ = std::move(c);
  f.clear_nyquist();
  return f;
}

SpectralField SpectralField::from_physical(const Grid2D& grid, std::vector<Complex> values) {
  if (values.size() != grid.size()) throw ValidationError("sample array has wrong size");
  const int n = grid.points();
  Fft({n, n}).forward(values.data());
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      values[static_cast<std::size_t>(i1) * n + i2] *= scale * checker(i1, i2);
    }
  }
  return from_coefficients(grid, std::move(values));
}

SpectralField SpectralField::sample(const Grid2D& grid,
                                    const std::function<Complex(double, double)>& f) {
  const int n = grid.points();
  std::vector<Complex> values(grid.size());
  for (int j1 = 0; j1 < n; ++j1) {
    for (int j2 = 0; j2 < n; ++j2) {
      values[static_cast<std::size_t>(j1) * n + j2] = f(grid.x(j1), grid.x(j2));
    }
  }
  return from_physical(grid, std::move(values));
}

SpectralField SpectralField::mode(const Grid2D& grid, int k1, int k2, Complex amplitude) {
  const int half = grid.points() / 2;
  if (std::abs(k1) >= half || std::abs(k2) >= half) {
    throw ValidationError("mode lies outside the resolved lattice");
  }
  SpectralField f(grid);
  f.c_[grid.index(k1, k2)] = amplitude;
  return f;
}

std::vector<Complex> SpectralField::physical() const {
  const int n = grid_.points();
  std::vector<Complex> values(c_);
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) values[static_cast<std::size_t>(i1) * n + i2] *= checker(i1, i2);
  }
  Fft({n, n}).backward(values.data());
  return values;
}

double SpectralField::l2_norm() const {
  double sum = 0.0;
  for (const auto& c : c_) sum += std::norm(c);
  return std::sqrt(grid_.area() * sum);
}

double SpectralField::physical_l2_norm() const {
  double sum = 0.0;
  for (const auto& u : physical()) sum += std::norm(u);
  const double h = grid_.spacing();
  return std::sqrt(sum * h * h);
}

double SpectralField::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& c : c_) m = std::max(m, std::abs(c));
  return m;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= other.c_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(Complex scale) {
  for (auto& c : c_) c *= scale;
  return *this;
}

void SpectralField::clear_nyquist() {
  const int n = grid_.points();
  const int q = n / 2;
  for (int i = 0; i < n; ++i) {
    c_[static_cast<std::size_t>(q) * n + i] = 0.0;
    c_[static_cast<std::size_t>(i) * n + q] = 0.0;
  }
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(Complex scale, SpectralField a) { return a *= scale; }

VectorField::VectorField(SpectralField first, SpectralField second)
    : components{std::move(first), std::move(second)} {
  require_same_grid(components[0].grid(), components[1].grid());
}

VectorField::VectorField(const Grid2D& grid) : components{SpectralField(grid), SpectralField(grid)} {}

double VectorField::l2_norm() const {
  return std::hypot(components[0].l2_norm(), components[1].l2_norm());
}

SpectralField dft_roundtrip(const SpectralField& field) {
  return SpectralField::from_physical(field.grid(), field.physical());
}

namespace {

template <class Weight>
double weighted_norm(const SpectralField& field, Weight weight) {
  const Grid2D& g = field.grid();
  const int n = g.points();
  double sum = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      const Complex c = field.coefficients()[static_cast<std::size_t>(i1) * n + i2];
      if (c == Complex{}) continue;
      const double r2 = g.xi(i1) * g.xi(i1) + g.xi(i2) * g.xi(i2);
      sum += weight(r2) * std::norm(c);
    }
  }
  return std::sqrt(g.area() * sum);
}

}  // namespace

double sobolev_norm(const SpectralField& field, SobolevIndex s) {
  return weighted_norm(field, [s](double r2) { return std::pow(1.0 + r2, s.s); });
}

double sobolev_norm(const VectorField& field, SobolevIndex s) {
  return std::hypot(sobolev_norm(field[0], s), sobolev_norm(field[1], s));
}

double homogeneous_norm(const SpectralField& field, SobolevIndex s) {
  return weighted_norm(field, [s](double r2) { return r2 > 0.0 ? std::pow(r2, s.s) : 0.0; });
}

SpectralField free_propagator(const SpectralField& field, double sigma, double t) {
  if (sigma == 0.0 || t == 0.0) return field;
  return field.multiplied([sigma, t](double a, double b) {
    return std::polar(1.0, -t * sigma * (a * a + b * b));
  });
}

VectorField free_propagator(const VectorField& field, double sigma, double t) {
  return {free_propagator(field[0], sigma, t), free_propagator(field[1], sigma, t)};
}

SpectralField partial(const SpectralField& field, int axis) {
  if (axis != 0 && axis != 1) throw ValidationError("axis must be 0 or 1");
  return field.multiplied([axis](double a, double b) { return Complex(0.0, axis == 0 ? a : b); });
}

VectorField gradient(const SpectralField& field) { return {partial(field, 0), partial(field, 1)}; }

SpectralField divergence(const VectorField& field) {
  return partial(field[0], 0) + partial(field[1], 1);
}

SpectralField laplacian(const SpectralField& field) {
  return field.multiplied([](double a, double b) { return -(a * a + b * b); });
}

SpectralField conjugate(const SpectralField& field) {
  const Grid2D& g = field.grid();
  const int n = g.points();
  std::vector<Complex> out(g.size());
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      if (g.is_nyquist(i1) || g.is_nyquist(i2)) continue;
      const int k1 = g.wavenumber(i1), k2 = g.wavenumber(i2);
      out[static_cast<std::size_t>(i1) * n + i2] = std::conj(field.coefficient(-k1, -k2));
    }
  }
  return SpectralField::from_coefficients(g, std::move(out));
}

namespace {

// Shell averages indexed by |k|^2.
std::vector<Complex> shell_means(const SpectralField& field) {
  const Grid2D& g = field.grid();
  const int n = g.points();
  const std::size_t shells = static_cast<std::size_t>(n) * n / 2 + 1;
  std::vector<Complex> sum(shells);
  std::vector<int> count(shells, 0);
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      if (g.is_nyquist(i1) || g.is_nyquist(i2)) continue;
      const int k1 = g.wavenumber(i1), k2 = g.wavenumber(i2);
      const std::size_t r2 = static_cast<std::size_t>(k1 * k1 + k2 * k2);
      sum[r2] += field.coefficients()[static_cast<std::size_t>(i1) * n + i2];
      ++count[r2];
    }
  }
  for (std::size_t r = 0; r < shells; ++r) {
    if (count[r] > 0) sum[r] /= static_cast<double>(count[r]);
  }
  return sum;
}

}  // namespace

double radial_defect(const SpectralField& field) {
  const double peak = field.max_abs_coefficient();
  if (peak == 0.0) return 0.0;
  const Grid2D& g = field.grid();
  const int n = g.points();
  const auto mean = shell_means(field);
  double worst = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      if (g.is_nyquist(i1) || g.is_nyquist(i2)) continue;
      const int k1 = g.wavenumber(i1), k2 = g.wavenumber(i2);
      const Complex c = field.coefficients()[static_cast<std::size_t>(i1) * n + i2];
      worst = std::max(worst, std::abs(c - mean[static_cast<std::size_t>(k1 * k1 + k2 * k2)]));
    }
  }
  return worst / peak;
}

bool is_radial(const SpectralField& field, double tol) { return radial_defect(field) <= tol; }

SpectralField radialize(const SpectralField& field) {
  const Grid2D& g = field.grid();
  const int n = g.points();
  const auto mean = shell_means(field);
  std::vector<Complex> out(g.size());
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      const int k1 = g.wavenumber(i1), k2 = g.wavenumber(i2);
      out[static_cast<std::size_t>(i1) * n + i2] = mean[static_cast<std::size_t>(k1 * k1 + k2 * k2)];
    }
  }
  return SpectralField::from_coefficients(g, std::move(out));
}

bool in_dealias_band(const Grid2D& grid, int k1, int k2) {
  const long n = grid.points();
  return 9L * (static_cast<long>(k1) * k1 + static_cast<long>(k2) * k2) <= n * n;
}

SpectralField dealias(const SpectralField& field) {
  const Grid2D& g = field.grid();
  const int n = g.points();
  std::vector<Complex> out(field.coefficients());
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      if (!in_dealias_band(g, g.wavenumber(i1), g.wavenumber(i2))) {
        out[static_cast<std::size_t>(i1) * n + i2] = 0.0;
      }
    }
  }
  return SpectralField::from_coefficients(g, std::move(out));
}

double max_difference(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid(), b.grid());
  double m = 0.0;
  for (std::size_t i = 0; i < a.coefficients().size(); ++i) {
    m = std::max(m, std::abs(a.coefficients()[i] - b.coefficients()[i]));
  }
  return m;
}

}  // namespace qdnls
