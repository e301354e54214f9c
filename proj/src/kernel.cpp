#include "kernel.hpp"

#include <algorithm>

#include "qdnls/error.hpp"
#include "qdnls/fft.hpp"

namespace qdnls::detail {

Kernel::Kernel(const Grid2D& grid, const SystemCoefficients& c, Form form, bool dealias)
    : grid_(grid), fft_({grid.points(), grid.points()}), coeffs_(c), form_(form), scratch_(6, std::vector<Complex>(grid.size())) {
  const int n = grid.points();
  xi2_.resize(grid.size());
  k2_.resize(grid.size());
  xi1_.resize(grid.size());
  xi2dir_.resize(grid.size());
  band_.resize(grid.size());
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      const std::size_t at = static_cast<std::size_t>(i1) * n + i2;
      const int k1 = grid.wavenumber(i1), kk2 = grid.wavenumber(i2);
      xi1_[at] = grid.xi(i1);
      xi2dir_[at] = grid.xi(i2);
      xi2_[at] = xi1_[at] * xi1_[at] + xi2dir_[at] * xi2dir_[at];
      k2_[at] = k1 * k1 + kk2 * kk2;
      const bool nyquist = grid.is_nyquist(i1) || grid.is_nyquist(i2);
      band_[at] = !nyquist && (!dealias || in_dealias_band(grid, k1, kk2));
    }
  }
}

double Kernel::sigma(int component) const {
  if (component < 2) return coeffs_.alpha();
  if (component < 4) return coeffs_.beta();
  return coeffs_.gamma();
}

double Kernel::max_xi2() const {
  double m = 0.0;
  for (std::size_t i = 0; i < xi2_.size(); ++i) {
    if (band_[i]) m = std::max(m, xi2_[i]);
  }
  return m;
}

Packed Kernel::zeros() const {
  return Packed(components(), std::vector<Complex>(grid_.size()));
}

Packed Kernel::pack(const SystemState& s) const {
  if (!(s.grid() == grid_)) throw ValidationError("state grid does not match the kernel grid");
  Packed p;
  for (const auto* f : {&s.u[0], &s.u[1], &s.v[0], &s.v[1]}) p.push_back(f->coefficients());
  if (form_ == Form::cartesian) {
    if (!s.w) throw ValidationError("expected a Cartesian-form state");
    p.push_back((*s.w)[0].coefficients());
    p.push_back((*s.w)[1].coefficients());
  } else {
    if (!s.W) throw ValidationError("expected a radial-form state");
    p.push_back(s.W->coefficients());
  }
  return p;
}

SystemState Kernel::unpack(const Packed& p, double time) const {
  auto field = [&](int i) { return SpectralField::from_coefficients(grid_, p[i]); };
  SystemState s{VectorField(field(0), field(1)), VectorField(field(2), field(3)), std::nullopt,
                std::nullopt, time};
  if (form_ == Form::cartesian) {
    s.w = VectorField(field(4), field(5));
  } else {
    s.W = field(4);
  }
  return s;
}

void Kernel::to_physical(const std::vector<Complex>& c, std::vector<Complex>& out) const {
  // Without the (-1)^(k1+k2) factor these are samples at x = j h rather than
  // -L + j h; products commute with that shift, so it cancels on the way back.
  out = c;
  fft_.backward(out.data());
}

void Kernel::to_coefficients(std::vector<Complex>& values) const {
  fft_.forward(values.data());
  const double scale = 1.0 / static_cast<double>(grid_.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = band_[i] ? values[i] * scale : 0.0;
}

void Kernel::nonlinear(const Packed& in, Packed& out) const {
  const std::size_t size = grid_.size();
  auto& u1 = scratch_[0];
  auto& u2 = scratch_[1];
  auto& v1 = scratch_[2];
  auto& v2 = scratch_[3];
  auto& d = scratch_[4];
  auto& r = scratch_[5];
  to_physical(in[0], u1);
  to_physical(in[1], u2);
  to_physical(in[2], v1);
  to_physical(in[3], v2);

  // div w in coefficient space.
  d.resize(size);
  if (form_ == Form::cartesian) {
    for (std::size_t i = 0; i < size; ++i) {
      d[i] = Complex(0.0, 1.0) * (xi1_[i] * in[4][i] + xi2dir_[i] * in[5][i]);
    }
  } else {
    for (std::size_t i = 0; i < size; ++i) d[i] = -xi2_[i] * in[4][i];
  }
  fft_.backward(d.data());

  out.resize(components());
  for (auto& o : out) o.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    out[0][i] = d[i] * v1[i];
    out[1][i] = d[i] * v2[i];
    out[2][i] = std::conj(d[i]) * u1[i];
    out[3][i] = std::conj(d[i]) * u2[i];
    r[i] = u1[i] * std::conj(v1[i]) + u2[i] * std::conj(v2[i]);
  }
  const Complex I(0.0, 1.0);
  for (int k = 0; k < 4; ++k) {
    to_coefficients(out[k]);
    for (auto& z : out[k]) z *= I;
  }
  to_coefficients(r);
  if (form_ == Form::cartesian) {
    // -i grad(R) has coefficients -i (i xi) R^ = xi R^.
    for (std::size_t i = 0; i < size; ++i) {
      out[4][i] = xi1_[i] * r[i];
      out[5][i] = xi2dir_[i] * r[i];
    }
  } else {
    for (std::size_t i = 0; i < size; ++i) out[4][i] = -I * r[i];
    out[4][0] = 0.0;  // frozen gauge mode
  }
}

std::vector<Complex> Kernel::product_uv(const Packed& in) const {
  auto& u1 = scratch_[0];
  auto& u2 = scratch_[1];
  auto& v1 = scratch_[2];
  auto& v2 = scratch_[3];
  to_physical(in[0], u1);
  to_physical(in[1], u2);
  to_physical(in[2], v1);
  to_physical(in[3], v2);
  std::vector<Complex> r(grid_.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = u1[i] * std::conj(v1[i]) + u2[i] * std::conj(v2[i]);
  }
  to_coefficients(r);
  return r;
}

void Kernel::propagate(Packed& p, double t) const {
  if (t == 0.0) return;
  for (int c = 0; c < components(); ++c) {
    const double s = sigma(c);
    for (std::size_t i = 0; i < p[c].size(); ++i) p[c][i] *= std::polar(1.0, -t * s * xi2_[i]);
  }
}

void Kernel::project(Packed& p) const {
  for (auto& comp : p) {
    for (std::size_t i = 0; i < comp.size(); ++i) {
      if (!band_[i]) comp[i] = 0.0;
    }
  }
}

}  // namespace qdnls::detail
