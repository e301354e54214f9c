#include "qdnls/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>

#include "qdnls/error.hpp"

namespace qdnls {
namespace {

constexpr char kMagic[8] = {'Q', 'D', 'N', 'L', 'S', 'F', 'L', 'D'};
constexpr std::uint64_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "field container I/O assumes a little-endian host");

void put_u64(std::ostream& out, std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); }
void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& in) {
  std::uint64_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), 8)) throw ValidationError("truncated field container");
  return v;
}
double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

void write_fields(const std::filesystem::path& path, const std::vector<SpectralField>& fields) {
  if (fields.empty()) throw ValidationError("no fields to write");
  const Grid2D& g = fields.front().grid();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  out.write(kMagic, 8);
  put_u64(out, kVersion);
  put_u64(out, static_cast<std::uint64_t>(g.points()));
  put_f64(out, g.half_width());
  put_u64(out, fields.size());
  for (const auto& f : fields) {
    if (!(f.grid() == g)) throw ValidationError("fields in one container must share a grid");
    for (const Complex& z : f.physical()) {
      put_f64(out, z.real());
      put_f64(out, z.imag());
    }
  }
}

std::vector<SpectralField> read_fields(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
    throw ValidationError(path.string() + " is not a field container");
  }
  if (get_u64(in) != kVersion) throw ValidationError("unsupported field container version");
  const auto points = get_u64(in);
  const double half_width = get_f64(in);
  const auto count = get_u64(in);
  if (points > (1u << 14) || count == 0 || count > 64) {
    throw ValidationError("implausible field container header");
  }
  const Grid2D grid(half_width, static_cast<int>(points));
  std::vector<SpectralField> fields;
  for (std::uint64_t c = 0; c < count; ++c) {
    std::vector<Complex> values(grid.size());
    for (auto& z : values) {
      const double re = get_f64(in);
      z = {re, get_f64(in)};
    }
    fields.push_back(SpectralField::from_physical(grid, std::move(values)));
  }
  return fields;
}

void write_coefficients_csv(const std::filesystem::path& path, const SpectralField& field) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  const Grid2D& g = field.grid();
  const int half = g.points() / 2;
  out << "k1,k2,re,im\n" << std::setprecision(17);
  for (int k1 = -half + 1; k1 < half; ++k1) {
    for (int k2 = -half + 1; k2 < half; ++k2) {
      const Complex c = field.coefficient(k1, k2);
      out << k1 << ',' << k2 << ',' << c.real() << ',' << c.imag() << '\n';
    }
  }
}

}  // namespace qdnls
