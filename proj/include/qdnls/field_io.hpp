#pragma once

#include <filesystem>
#include <vector>

#include "qdnls/spectral_field.hpp"

namespace qdnls {

// Binary container: 8-byte magic "QDNLSFLD", then little-endian 64-bit
// version, points, half_width (IEEE double) and component count, then each
// component's physical samples as row-major (re, im) doubles.
void write_fields(const std::filesystem::path& path, const std::vector<SpectralField>& fields);
std::vector<SpectralField> read_fields(const std::filesystem::path& path);

// One row per lattice wavenumber: k1,k2,re,im (Nyquist omitted).
void write_coefficients_csv(const std::filesystem::path& path, const SpectralField& field);

}  // namespace qdnls
