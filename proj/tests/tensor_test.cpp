#include "locnoise/tensor.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <gtest/gtest.h>

#include "locnoise/errors.hpp"
#include "locnoise/tensor_io.hpp"
#include "test_support.hpp"

namespace locnoise {
namespace {

Tensor row(std::vector<float> v) {
  const std::size_t n = v.size();
  return Tensor(Shape{1, n, 1}, std::move(v));
}

TEST(TensorTest, ConstructionChecksLengthAndFiniteness) {
  EXPECT_THROW(Tensor(Shape{2, 2, 1}, {1.0f, 2.0f}), ArgumentError);
  EXPECT_THROW(row({1.0f, std::numeric_limits<float>::quiet_NaN()}), ArgumentError);
  EXPECT_THROW(row({std::numeric_limits<float>::infinity()}), ArgumentError);
  const Tensor t(Shape{2, 3, 4});
  EXPECT_EQ(t.size(), 24u);
  EXPECT_EQ(t.index(1, 2, 3), 23u);
}

TEST(TensorTest, SignOfMixedValues) {
  EXPECT_EQ(sign(row({-2.5f, 0.0f, 3.1f})), row({-1.0f, 0.0f, 1.0f}));
}

TEST(TensorTest, SignOfZerosIsZeros) {
  const Tensor z(Shape{3, 3, 2});
  EXPECT_EQ(sign(z), z);
}

TEST(TensorTest, SignOfTinyMagnitudes) {
  // 1e-30 is a normal float; the denormal below checks subnormal handling too.
  EXPECT_EQ(sign(row({1e-30f, -1e-30f, 1e-45f, -1e-45f})), row({1.0f, -1.0f, 1.0f, -1.0f}));
}

TEST(TensorTest, SignIsIdempotent) {
  const Tensor t = testing::random_image(Shape{5, 5, 3}, 11, -1.0f, 1.0f);
  EXPECT_TRUE(bit_equal(sign(sign(t)), sign(t)));
}

TEST(TensorTest, ClampToUnitInterval) {
  EXPECT_EQ(clamp(row({-0.1f, 0.5f, 1.2f}), 0.0f, 1.0f), row({0.0f, 0.5f, 1.0f}));
}

TEST(TensorTest, ClampLeavesInRangeValuesBitExact) {
  const Tensor x = testing::random_image(Shape{8, 8, 3}, 3);
  EXPECT_TRUE(bit_equal(clamp(x, 0.0f, 1.0f), x));
}

TEST(TensorTest, ClampToEpsilonBall) {
  EXPECT_EQ(clamp(row({0.03f}), -0.02f, 0.02f), row({0.02f}));
}

TEST(TensorTest, ClampRejectsInvertedBounds) {
  EXPECT_THROW(clamp(row({0.0f}), 1.0f, 0.0f), ArgumentError);
}

TEST(TensorTest, ClampIsIdempotentAndOrderPreserving) {
  const Tensor t = testing::random_image(Shape{4, 4, 4}, 5, -2.0f, 2.0f);
  const Tensor once = clamp(t, -0.5f, 0.7f);
  EXPECT_TRUE(bit_equal(clamp(once, -0.5f, 0.7f), once));
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (t[i] <= t[j]) ASSERT_LE(once[i], once[j]);
    }
  }
}

TEST(TensorTest, Reductions) {
  EXPECT_FLOAT_EQ(reduce(row({0.1f, -0.1f, 0.0f, 0.0f}), ReduceKind::kMean), 0.0f);
  const Tensor pair = row({-0.02f, 0.05f});
  EXPECT_NEAR(reduce(pair, ReduceKind::kMax) - reduce(pair, ReduceKind::kMin), 0.07f, 1e-7f);
  EXPECT_EQ(reduce(Tensor(Shape{3, 3, 3}), ReduceKind::kSum), 0.0f);
  EXPECT_FLOAT_EQ(reduce(row({1.0f, 2.0f, 3.0f, 4.0f}), ReduceKind::kSum), 10.0f);
  EXPECT_THROW(reduce(Tensor(), ReduceKind::kSum), ArgumentError);
}

TEST(TensorTest, MeanIsHomogeneous) {
  const Tensor t = testing::random_image(Shape{32, 32, 3}, 17, -1.0f, 1.0f);
  for (float c : {-3.0f, 0.5f, 7.25f}) {
    Tensor scaled = t;
    for (float& v : scaled.data()) v *= c;
    const double base = reduce(t, ReduceKind::kMean);
    EXPECT_NEAR(reduce(scaled, ReduceKind::kMean), c * base, 1e-6 * std::fabs(c * base) + 1e-9);
  }
}

TEST(TensorIoTest, RoundTrip) {
  const auto dir = testing::scratch_dir("tensor_io");
  const Tensor t = testing::random_image(Shape{3, 5, 2}, 9, -4.0f, 4.0f);
  write_tensor(t, dir / "t.ltns");
  EXPECT_TRUE(bit_equal(read_tensor(dir / "t.ltns"), t));
}

TEST(TensorIoTest, LayoutIsLittleEndianWithHeader) {
  const auto dir = testing::scratch_dir("tensor_layout");
  write_tensor(Tensor(Shape{1, 2, 1}, {1.0f, -2.0f}), dir / "t.ltns");
  std::ifstream in(dir / "t.ltns", std::ios::binary);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), {});
  const std::vector<unsigned char> expected = {'L', 'T', 'N', 'S', 1, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0,
                                               0x00, 0x00, 0x80, 0x3f, 0x00, 0x00, 0x00, 0xc0};
  EXPECT_EQ(bytes, expected);
}

TEST(TensorIoTest, RejectsBadMagicAndTruncation) {
  const auto dir = testing::scratch_dir("tensor_bad");
  {
    std::ofstream out(dir / "bad.ltns", std::ios::binary);
    out << "XXXX";
  }
  EXPECT_THROW(read_tensor(dir / "bad.ltns"), FormatError);
  write_tensor(Tensor(Shape{4, 4, 1}), dir / "full.ltns");
  std::filesystem::resize_file(dir / "full.ltns", 30);
  EXPECT_THROW(read_tensor(dir / "full.ltns"), IoError);
  EXPECT_THROW(read_tensor(dir / "missing.ltns"), IoError);
}

}  // namespace
}  // namespace locnoise
