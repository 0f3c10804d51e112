#include "stratwave/field_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include "stratwave/error.hpp"
#include "stratwave/manifest.hpp"

namespace stratwave {

static_assert(std::endian::native == std::endian::little, "binary snapshot format assumes a little-endian host");

std::string field_to_csv(const Field& f) {
  std::string out = "x,re,im\n";
  out.reserve(out.size() + f.values.size() * 72);
  char buf[96];
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    const int n = std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.grid.x(k), f.values[k].real(),
                                f.values[k].imag());
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

void write_field_csv(const Field& f, const std::filesystem::path& path) { write_file_atomic(path, field_to_csv(f)); }

Field parse_field_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,re,im", 0) != 0) {
    throw Error(ErrorCode::Io, "snapshot CSV must start with header x,re,im");
  }
  std::vector<double> xs;
  std::vector<cplx> vals;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const char* p = line.c_str();
    char* end = nullptr;
    double v[3];
    for (int c = 0; c < 3; ++c) {
      v[c] = std::strtod(p, &end);
      if (end == p) throw Error(ErrorCode::Io, "bad number in CSV row " + std::to_string(row));
      p = end;
      if (c < 2) {
        if (*p != ',') throw Error(ErrorCode::Io, "expected 3 columns in CSV row " + std::to_string(row));
        ++p;
      }
    }
    xs.push_back(v[0]);
    vals.emplace_back(v[1], v[2]);
  }
  if (xs.size() < 2) throw Error(ErrorCode::Io, "snapshot CSV holds fewer than two rows");
  const double L = -xs.front();
  Grid g(xs.size(), L);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (std::abs(xs[k] - g.x(k)) > 1e-9 * L) {
      throw Error(ErrorCode::GridMismatch, "x column is not the uniform grid starting at -L (row " +
                                               std::to_string(k + 2) + ")");
    }
  }
  bool real = true;
  for (const auto& v : vals) real = real && v.imag() == 0.0;
  return Field(g, std::move(vals), real);
}

Field read_field_csv(const std::filesystem::path& path) { return parse_field_csv(read_file(path)); }

void write_field_binary(const Field& f, const std::filesystem::path& path) {
  std::string out;
  const std::uint32_t version = 1;
  const std::uint64_t n = f.values.size();
  const double L = f.grid.half_length();
  out.append("STWV", 4);
  out.append(reinterpret_cast<const char*>(&version), 4);
  out.append(reinterpret_cast<const char*>(&n), 8);
  out.append(reinterpret_cast<const char*>(&L), 8);
  out.append(reinterpret_cast<const char*>(f.values.data()), n * sizeof(cplx));
  write_file_atomic(path, out);
}

Field read_field_binary(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  if (data.size() < 24 || data.compare(0, 4, "STWV") != 0) throw Error(ErrorCode::Io, "not a STWV snapshot");
  std::uint32_t version = 0;
  std::uint64_t n = 0;
  double L = 0.0;
  std::memcpy(&version, data.data() + 4, 4);
  std::memcpy(&n, data.data() + 8, 8);
  std::memcpy(&L, data.data() + 16, 8);
  if (version != 1) throw Error(ErrorCode::Io, "unsupported STWV version " + std::to_string(version));
  if (data.size() != 24 + n * sizeof(cplx)) throw Error(ErrorCode::Io, "STWV payload size mismatch");
  Grid g(n, L);
  std::vector<cplx> vals(n);
  std::memcpy(vals.data(), data.data() + 24, n * sizeof(cplx));
  bool real = true;
  for (const auto& v : vals) real = real && v.imag() == 0.0;
  return Field(g, std::move(vals), real);
}

}  // namespace stratwave
