#include "conevort/field_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "conevort/errors.hpp"

namespace conevort {

namespace {

constexpr std::array<char, 4> kMagic = {'C', 'V', 'F', '1'};

template <typename U>
void put_le(std::ostream& os, U value) {
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xffu);
  }
  os.write(bytes.data(), bytes.size());
}

template <typename U>
U get_le(std::istream& is) {
  std::array<unsigned char, sizeof(U)> bytes{};
  is.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!is) throw InputError("truncated CVF1 stream");
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

void put_f64(std::ostream& os, double v) { put_le(os, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_le<std::uint64_t>(is)); }

}  // namespace

void write_field(std::ostream& os, const VectorField3& field) {
  os.write(kMagic.data(), kMagic.size());
  put_le(os, static_cast<std::uint32_t>(field.grid().n()));
  put_f64(os, field.grid().half_extent());
  put_f64(os, field.time_label());
  put_le(os, std::uint32_t{3});
  for (int c = 0; c < 3; ++c) {
    for (double v : field.component(c)) put_f64(os, v);
  }
  if (!os) throw InputError("failed writing CVF1 stream");
}

VectorField3 read_field(std::istream& is) {
  std::array<char, 4> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw InputError("not a CVF1 field dump");
  const auto n = get_le<std::uint32_t>(is);
  const double half_extent = get_f64(is);
  const double time_label = get_f64(is);
  const auto components = get_le<std::uint32_t>(is);
  if (components != 3) throw InputError("CVF1 dump must hold 3 components");
  VectorField3 field(Grid3(half_extent, static_cast<int>(n)), time_label);
  for (int c = 0; c < 3; ++c) {
    for (double& v : field.component(c)) v = get_f64(is);
  }
  return field;
}

void write_field(const std::filesystem::path& path, const VectorField3& field) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot open " + path.string() + " for writing");
  write_field(os, field);
}

VectorField3 read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open " + path.string());
  return read_field(is);
}

void write_slice_csv(const std::filesystem::path& path, const VectorField3& field) {
  std::ofstream os(path);
  if (!os) throw InputError("cannot open " + path.string() + " for writing");
  const Grid3& g = field.grid();
  os << "y1,u1,u2,u3\n";
  char line[160];
  for (int i = 0; i < g.n(); ++i) {
    const std::size_t idx = g.index(i, g.center(), g.center());
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", g.coord(i), field.at(0, idx),
                  field.at(1, idx), field.at(2, idx));
    os << line;
  }
}

}  // namespace conevort
