#pragma once

#include <filesystem>
#include <string>

#include "snslab/spectral_field.hpp"

namespace snslab {

/// Shortest round-trip decimal form ("%.17g"), so CSVs reproduce bit-identical values.
std::string format_double(double x);

void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Field snapshot: CSV rows (k_x, k_y, Re u1, Im u1, Re u2, Im u2) over the
/// half plane k_y > 0 or (k_y = 0, k_x > 0), skipping zero modes, plus a JSON
/// header {N, time, scenario_id} written next to it.
void write_field_snapshot(const std::filesystem::path& csv_path, const std::filesystem::path& json_path,
                          const SpectralField& u, double time, const std::string& scenario_id);
SpectralField read_field_snapshot(const std::filesystem::path& csv_path, int n);

}  // namespace snslab
