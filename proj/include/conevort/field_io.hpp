#pragma once

// Binary field dump ("CVF1"), all little-endian:
//
//   offset  size  content
//   0       4     magic "CVF1"
//   4       4     uint32 N (points per axis)
//   8       8     float64 L (half extent)
//   16      8     float64 time label
//   24      4     uint32 component count (always 3)
//   28      ...   float64 values, component-major, nodes in Grid3::index order
//
// CSV slices run along axis 1 through the origin with columns y1,u1,u2,u3.

#include <filesystem>
#include <iosfwd>

#include "conevort/fields.hpp"

namespace conevort {

void write_field(std::ostream& os, const VectorField3& field);
VectorField3 read_field(std::istream& is);

void write_field(const std::filesystem::path& path, const VectorField3& field);
VectorField3 read_field(const std::filesystem::path& path);

void write_slice_csv(const std::filesystem::path& path, const VectorField3& field);

}  // namespace conevort
