#pragma once

// Field snapshots on disk.
//
// CSV: header "x,re,im", one row per node, values in %.17g.
// Binary (little-endian): "STWV", u32 version = 1, u64 N, f64 L, then N pairs
// of f64 (re, im).

#include <filesystem>
#include <string>

#include "stratwave/spectral.hpp"

namespace stratwave {

std::string field_to_csv(const Field& f);
void write_field_csv(const Field& f, const std::filesystem::path& path);
/// Reconstructs the grid from the x column (uniform spacing, x_0 = -L).
Field read_field_csv(const std::filesystem::path& path);
Field parse_field_csv(const std::string& text);

void write_field_binary(const Field& f, const std::filesystem::path& path);
Field read_field_binary(const std::filesystem::path& path);

}  // namespace stratwave
