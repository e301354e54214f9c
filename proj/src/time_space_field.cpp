#include "qdnls/time_space_field.hpp"

#include <cmath>
#include <numbers>

#include "qdnls/cutoffs.hpp"
#include "qdnls/error.hpp"

namespace qdnls {
namespace {

double checker(int i1, int i2) { return ((i1 + i2) & 1) ? -1.0 : 1.0; }

}  // namespace

double time_window(double t, double T) {
  const double ramp = 0.1 * T;
  return smooth_step(t / ramp) * smooth_step((T - t) / ramp);
}

TimeSpaceField::TimeSpaceField(double T, int nt, const Grid2D& grid)
    : T_(T), nt_(nt), grid_(grid), c_(static_cast<std::size_t>(nt) * grid.size()) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("time window must be positive");
  if (nt < 4 || nt % 2 != 0) throw ValidationError("time samples must be even and >= 4");
}

TimeSpaceField TimeSpaceField::from_coefficients(double T, int nt, const Grid2D& grid,
                                                 std::vector<Complex> c) {
  TimeSpaceField f(T, nt, grid);
  if (c.size() != f.c_.size()) throw ValidationError("coefficient array has wrong size");
  f.c_ = std::move(c);
  f.clear_nyquist();
  return f;
}

TimeSpaceField TimeSpaceField::from_samples(double T, int nt, const Grid2D& grid,
                                            std::vector<Complex> values) {
  TimeSpaceField f(T, nt, grid);
  if (values.size() != f.c_.size()) throw ValidationError("sample array has wrong size");
  const int n = grid.points();
  Fft({nt, n, n}).forward(values.data());
  const double scale = 1.0 / static_cast<double>(values.size());
  std::size_t at = 0;
  for (int it = 0; it < nt; ++it) {
    for (int i1 = 0; i1 < n; ++i1) {
      for (int i2 = 0; i2 < n; ++i2, ++at) values[at] *= scale * checker(i1, i2);
    }
  }
  f.c_ = std::move(values);
  f.clear_nyquist();
  return f;
}

TimeSpaceField TimeSpaceField::sample(double T, int nt, const Grid2D& grid,
                                      const std::function<Complex(double, double, double)>& fn,
                                      bool windowed) {
  const int n = grid.points();
  std::vector<Complex> values(static_cast<std::size_t>(nt) * grid.size());
  std::size_t at = 0;
  for (int m = 0; m < nt; ++m) {
    const double t = T * m / nt;
    const double w = windowed ? time_window(t, T) : 1.0;
    for (int j1 = 0; j1 < n; ++j1) {
      for (int j2 = 0; j2 < n; ++j2, ++at) values[at] = w * fn(t, grid.x(j1), grid.x(j2));
    }
  }
  return from_samples(T, nt, grid, std::move(values));
}

double TimeSpaceField::tau(int slot) const {
  const int m = slot < nt_ / 2 ? slot : slot - nt_;
  return 2.0 * std::numbers::pi * m / T_;
}

std::vector<Complex> TimeSpaceField::values() const {
  const int n = grid_.points();
  std::vector<Complex> v(c_);
  std::size_t at = 0;
  for (int it = 0; it < nt_; ++it) {
    for (int i1 = 0; i1 < n; ++i1) {
      for (int i2 = 0; i2 < n; ++i2, ++at) v[at] *= checker(i1, i2);
    }
  }
  Fft({nt_, n, n}).backward(v.data());
  return v;
}

double TimeSpaceField::l2_norm() const {
  double sum = 0.0;
  for (const auto& c : c_) sum += std::norm(c);
  return std::sqrt(T_ * grid_.area() * sum);
}

double TimeSpaceField::sample_l2_norm() const {
  double sum = 0.0;
  for (const auto& v : values()) sum += std::norm(v);
  const double h = grid_.spacing();
  return std::sqrt(sum * h * h * T_ / nt_);
}

TimeSpaceField& TimeSpaceField::operator+=(const TimeSpaceField& other) {
  if (!(grid_ == other.grid_) || nt_ != other.nt_ || T_ != other.T_) {
    throw ValidationError("time-space fields live on different lattices");
  }
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
  return *this;
}

TimeSpaceField& TimeSpaceField::operator-=(const TimeSpaceField& other) {
  if (!(grid_ == other.grid_) || nt_ != other.nt_ || T_ != other.T_) {
    throw ValidationError("time-space fields live on different lattices");
  }
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= other.c_[i];
  return *this;
}

void TimeSpaceField::clear_nyquist() {
  const int n = grid_.points();
  std::size_t at = 0;
  for (int it = 0; it < nt_; ++it) {
    for (int i1 = 0; i1 < n; ++i1) {
      for (int i2 = 0; i2 < n; ++i2, ++at) {
        if (it == nt_ / 2 || grid_.is_nyquist(i1) || grid_.is_nyquist(i2)) c_[at] = 0.0;
      }
    }
  }
}

namespace {

// Slot of -m in a symmetric range of extent n (Nyquist maps to itself).
int negate_slot(int slot, int n) { return slot == 0 ? 0 : n - slot; }

template <class Op>
Complex paired_sum(const TimeSpaceField& f, const TimeSpaceField& g, Op op) {
  if (!(f.grid() == g.grid()) || f.time_points() != g.time_points() || f.period() != g.period()) {
    throw ValidationError("time-space fields live on different lattices");
  }
  const int nt = f.time_points(), n = f.grid().points();
  Complex sum = 0.0;
  for (int it = 0; it < nt; ++it) {
    for (int i1 = 0; i1 < n; ++i1) {
      for (int i2 = 0; i2 < n; ++i2) sum += op(it, i1, i2, nt, n);
    }
  }
  return sum * f.period() * f.grid().area();
}

}  // namespace

Complex pairing(const TimeSpaceField& f, const TimeSpaceField& g) {
  const auto& a = f.coefficients();
  const auto& b = g.coefficients();
  return paired_sum(f, g, [&](int it, int i1, int i2, int nt, int n) {
    const std::size_t here = (static_cast<std::size_t>(it) * n + i1) * n + i2;
    const std::size_t there =
        (static_cast<std::size_t>(negate_slot(it, nt)) * n + negate_slot(i1, n)) * n +
        negate_slot(i2, n);
    return a[here] * b[there];
  });
}

Complex inner(const TimeSpaceField& f, const TimeSpaceField& g) {
  const auto& a = f.coefficients();
  const auto& b = g.coefficients();
  return paired_sum(f, g, [&](int it, int i1, int i2, int, int n) {
    const std::size_t here = (static_cast<std::size_t>(it) * n + i1) * n + i2;
    return a[here] * std::conj(b[here]);
  });
}

TimeSpaceField conjugate(const TimeSpaceField& f) {
  const int nt = f.time_points(), n = f.grid().points();
  std::vector<Complex> out(f.coefficients().size());
  const auto& a = f.coefficients();
  std::size_t at = 0;
  for (int it = 0; it < nt; ++it) {
    for (int i1 = 0; i1 < n; ++i1) {
      for (int i2 = 0; i2 < n; ++i2, ++at) {
        const std::size_t there =
            (static_cast<std::size_t>(negate_slot(it, nt)) * n + negate_slot(i1, n)) * n +
            negate_slot(i2, n);
        out[at] = std::conj(a[there]);
      }
    }
  }
  return TimeSpaceField::from_coefficients(f.period(), nt, f.grid(), std::move(out));
}

}  // namespace qdnls
