#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "conevort/errors.hpp"
#include "conevort/field_io.hpp"
#include "conevort/fields.hpp"

using namespace conevort;

namespace {

template <typename F>
VectorField3 sample(const Grid3& g, F f) {
  VectorField3 out(g);
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      for (int k = 0; k < g.n(); ++k) {
        const Vec3 v = f(g.node(i, j, k));
        for (int c = 0; c < 3; ++c) out.at(c, g.index(i, j, k)) = v[static_cast<std::size_t>(c)];
      }
    }
  }
  return out;
}

double max_error(const VectorField3& a, const VectorField3& b) { return sup_norm(a - b); }

}  // namespace

TEST(Grid, Geometry) {
  const Grid3 g(1.0, 9);
  EXPECT_EQ(g.center(), 4);
  EXPECT_DOUBLE_EQ(g.spacing(), 0.25);
  EXPECT_EQ(g.coord(4), 0.0);
  EXPECT_DOUBLE_EQ(g.coord(0), -1.0);
  EXPECT_DOUBLE_EQ(g.coord(8), 1.0);
  EXPECT_EQ(g.size(), 729u);
  EXPECT_EQ(g.index(1, 2, 3), (1u * 9 + 2) * 9 + 3);
}

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(Grid3(1.0, 7), ConfigError);
  EXPECT_THROW(Grid3(1.0, 10), ConfigError);
  EXPECT_THROW(Grid3(0.0, 9), ConfigError);
}

TEST(Derivative, QuadraticsAreExactEverywhere) {
  const Grid3 g(1.0, 11);
  const auto f = sample(g, [](const Vec3& y) {
    return Vec3{y[0] * y[0] + 3.0 * y[1], y[1] * y[2], -2.0 * y[2] * y[2]};
  });
  const auto d1 = derivative(f, 1, 1);
  const auto d1_exact = sample(g, [](const Vec3& y) { return Vec3{2.0 * y[0], 0.0, 0.0}; });
  EXPECT_LT(max_error(d1, d1_exact), 1e-12);
  const auto d3 = derivative(f, 3, 1);
  const auto d3_exact = sample(g, [](const Vec3& y) { return Vec3{0.0, y[1], -4.0 * y[2]}; });
  EXPECT_LT(max_error(d3, d3_exact), 1e-12);
  const auto d11 = derivative(f, 1, 2);
  const auto d11_exact = sample(g, [](const Vec3&) { return Vec3{2.0, 0.0, 0.0}; });
  EXPECT_LT(max_error(d11, d11_exact), 1e-10);
}

TEST(Derivative, InteriorFourthOrder) {
  // error at the centre node shrinks by ~2^4 per halving of the spacing
  auto err_at_center = [](int n) {
    const Grid3 g(1.0, n);
    const auto f = sample(g, [](const Vec3& y) { return Vec3{std::sin(2.0 * y[1] + 0.3), 0, 0}; });
    const auto d = derivative(f, 2, 1);
    return std::abs(d.at(0, g.origin_index()) - 2.0 * std::cos(0.3));
  };
  const double e1 = err_at_center(17);
  const double e2 = err_at_center(33);
  EXPECT_GT(e1 / e2, 12.0);
  EXPECT_LT(e1 / e2, 20.0);
}

TEST(Norms, ConstantField) {
  const Grid3 g(1.0, 9);
  const auto f = sample(g, [](const Vec3&) { return Vec3{1.0, 0.0, 0.0}; });
  const NormReport r = norms(f, 2);
  const double l2 = std::sqrt(729.0 * std::pow(0.25, 3));
  EXPECT_DOUBLE_EQ(r.sup_norm, 1.0);
  EXPECT_NEAR(r.l2_norm, l2, 1e-14);
  EXPECT_NEAR(r.hm_norm, l2, 1e-12);
  EXPECT_NEAR(r.cm_norm, 1.0, 1e-12);
}

TEST(Norms, LinearFieldH1) {
  // f = (y1, 0, 0): ||f||_2^2 = h^3 sum y1^2, ||d1 f||_2 = sqrt(h^3 n^3), others vanish
  const Grid3 g(1.0, 9);
  const auto f = sample(g, [](const Vec3& y) { return Vec3{y[0], 0.0, 0.0}; });
  double sum_sq = 0.0;
  for (int i = 0; i < 9; ++i) sum_sq += 81.0 * g.coord(i) * g.coord(i);
  const double cell = std::pow(g.spacing(), 3);
  const double l2 = std::sqrt(sum_sq * cell);
  const double d1 = std::sqrt(729.0 * cell);
  const NormReport r1 = norms(f, 1);
  EXPECT_NEAR(r1.l2_norm, l2, 1e-13);
  EXPECT_NEAR(r1.hm_norm, l2 + d1, 1e-12);
  EXPECT_NEAR(r1.cm_norm, 1.0, 1e-12);
  EXPECT_THROW(norms(f, 4), InputError);
}

TEST(Norms, InvariantUnderZeroPadding) {
  // same, exactly representable spacing so both grids sample identical values
  const Grid3 small(1.0, 17);
  const Grid3 big(1.5, 25);
  ASSERT_EQ(small.spacing(), 0.125);
  ASSERT_EQ(big.spacing(), 0.125);
  auto bump = [](const Vec3& y) {
    const double r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    const double v = r2 < 0.25 ? std::pow(0.25 - r2, 4) : 0.0;
    return Vec3{v, -2.0 * v * y[0], v * y[1]};
  };
  const NormReport a = norms(sample(small, bump), 2);
  const NormReport b = norms(sample(big, bump), 2);
  EXPECT_EQ(a.sup_norm, b.sup_norm);
  EXPECT_EQ(a.l2_norm, b.l2_norm);
  EXPECT_EQ(a.hm_norm, b.hm_norm);
  EXPECT_EQ(a.cm_norm, b.cm_norm);
}

TEST(Fields, CurlOfGradientVanishes) {
  const Grid3 g(1.0, 13);
  // gradient of phi = y1^2 y2 + y3^2 (quadratic derivatives, so exact stencils)
  const auto grad = sample(g, [](const Vec3& y) {
    return Vec3{2.0 * y[0] * y[1], y[0] * y[0], 2.0 * y[2]};
  });
  EXPECT_LT(sup_norm(curl(grad)), 1e-12);
}

TEST(Fields, DivergenceOfRotation) {
  const Grid3 g(1.0, 13);
  const auto rot = sample(g, [](const Vec3& y) { return Vec3{-y[1], y[0], 0.0}; });
  for (double d : divergence(rot)) EXPECT_NEAR(d, 0.0, 1e-12);
  const auto w = curl(rot);
  EXPECT_NEAR(w.at(2, g.origin_index()), 2.0, 1e-12);
}

TEST(Fields, RestrictToCone) {
  const Grid3 g(1.0, 9);
  const ConeChart chart(1.0);
  const auto ones = sample(g, [](const Vec3&) { return Vec3{1.0, 1.0, 1.0}; });
  const auto r = restrict_to_cone(ones, chart, 0.5);
  EXPECT_TRUE(r.cone_supported());
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) {
      for (int k = 0; k < 9; ++k) {
        const bool inside = std::abs(g.coord(i)) < 0.5 && std::abs(g.coord(j)) < 0.5 &&
                            std::abs(g.coord(k)) < 0.5;
        EXPECT_EQ(r.at(1, g.index(i, j, k)), inside ? 1.0 : 0.0);
      }
    }
  }
}

TEST(Fields, ArithmeticAndPredicates) {
  const Grid3 g(1.0, 9);
  VectorField3 a(g);
  EXPECT_TRUE(a.is_zero());
  a.at(0, 5) = 2.0;
  VectorField3 b = 3.0 * a;
  b.add_scaled(a, -1.0);
  EXPECT_EQ(b.at(0, 5), 4.0);
  EXPECT_TRUE(b.all_finite());
  b.at(2, 0) = NAN;
  EXPECT_FALSE(b.all_finite());
  EXPECT_THROW(a += VectorField3(Grid3(1.0, 11)), InputError);
}

TEST(FieldIo, BinaryRoundtripIsBitExact) {
  const Grid3 g(0.05, 9);
  auto f = sample(g, [](const Vec3& y) {
    return Vec3{std::sin(40 * y[0]), 1.0 / 3.0 + y[1], std::exp(y[2])};
  });
  f.set_time_label(0.0123);
  std::stringstream ss;
  write_field(ss, f);
  const std::string bytes = ss.str();
  ASSERT_EQ(bytes.size(), 28u + 3u * 729u * 8u);
  EXPECT_EQ(bytes.substr(0, 4), "CVF1");
  std::uint32_t n = 0;
  std::memcpy(&n, bytes.data() + 4, 4);
  EXPECT_EQ(n, 9u);
  double half = 0.0;
  std::memcpy(&half, bytes.data() + 8, 8);
  EXPECT_EQ(half, 0.05);
  double first = 0.0;
  std::memcpy(&first, bytes.data() + 28, 8);
  EXPECT_EQ(first, f.at(0, 0));

  const VectorField3 back = read_field(ss);
  EXPECT_EQ(back.grid(), g);
  EXPECT_EQ(back.time_label(), 0.0123);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(back.at(c, i), f.at(c, i));
  }
}

TEST(FieldIo, RejectsForeignData) {
  std::stringstream ss("NOPE and some more bytes to read past the header");
  EXPECT_THROW(read_field(ss), InputError);
}

TEST(FieldIo, SliceCsv) {
  const Grid3 g(1.0, 9);
  const auto f = sample(g, [](const Vec3& y) { return Vec3{y[0], y[1], 7.0}; });
  const auto path = std::filesystem::temp_directory_path() / "conevort_slice_test.csv";
  write_slice_csv(path, f);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "y1,u1,u2,u3");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 9);
  std::filesystem::remove(path);
}
