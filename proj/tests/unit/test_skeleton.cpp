#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <set>

#include "scrnn/error.hpp"
#include "scrnn/skeleton.hpp"

using namespace scrnn;

namespace {

SkeletonSequence counting(int joints, int frames) {
  std::vector<std::vector<double>> f;
  for (int t = 0; t < frames; ++t) {
    std::vector<double> row;
    for (int r = 0; r < 3 * joints; ++r) row.push_back(100.0 * (t + 1) + r);
    f.push_back(row);
  }
  return SkeletonSequence(joints, f);
}

}  // namespace

TEST(SkeletonSequence, Validation) {
  EXPECT_THROW(SkeletonSequence(1, {{0, 0, 0}}), DataError);
  EXPECT_THROW(SkeletonSequence(2, {}), DataError);
  EXPECT_THROW(SkeletonSequence(2, {{0, 0, 0, 0, 0}}), DataError);
  EXPECT_THROW(SkeletonSequence(2, {{0, 0, 0, 0, 0, std::numeric_limits<double>::infinity()}}), DataError);
  EXPECT_THROW(SkeletonSequence(2, {{0, 0, 0, 0, 0, 0}}, 0.0), DataError);
}

TEST(SkeletonSequence, OneBasedAccessAndSlice) {
  auto s = counting(2, 5);
  EXPECT_EQ(s.dim(), 6u);
  EXPECT_EQ(s.frame(1)[0], 100.0);
  EXPECT_THROW(s.frame(0), ArgumentError);
  EXPECT_THROW(s.frame(6), ArgumentError);
  auto sl = s.slice(2, 3);
  EXPECT_EQ(sl.length(), 3u);
  EXPECT_EQ(sl.frame(1), s.frame(2));
  EXPECT_THROW(s.slice(4, 3), ArgumentError);
}

TEST(FeatureMap, ColumnsAreFramesAndRowsJointMajor) {
  auto s = counting(3, 6);
  FeatureMap F = build_feature_map(s, 2, 5);
  ASSERT_EQ(F.matrix.rows(), 9u);
  ASSERT_EQ(F.matrix.cols(), 4u);
  EXPECT_EQ(F.matrix(4, 0), 204.0);  // joint 2, coordinate y, frame 2
  EXPECT_EQ(F.column_times.front(), (ColumnTime{false, 2}));
  EXPECT_EQ(F.joints(), 3);
  EXPECT_THROW(build_feature_map(s, 5, 7), ArgumentError);

  Matrix j2 = joint_rows(F, 2);
  EXPECT_EQ(j2.rows(), 3u);
  EXPECT_EQ(j2(0, 3), 503.0);
  EXPECT_THROW(joint_rows(F, 4), ArgumentError);
}

TEST(FeatureMap, AppendState) {
  auto s = counting(2, 3);
  FeatureMap F = build_feature_map(s);
  FeatureMap G = append_state(F, Matrix(6, 1, 7.0), 1);
  EXPECT_EQ(G.cols(), 4u);
  EXPECT_EQ(G.matrix(5, 3), 7.0);
  EXPECT_EQ(G.column_times.back(), (ColumnTime{true, 1}));
  EXPECT_THROW(append_state(F, Matrix(5, 1), 1), ShapeError);
}

TEST(Traversal, IdForAnyK) {
  auto t = builtin_traversal("id", 4);
  EXPECT_EQ(t.order, (std::vector<int>{1, 2, 3, 4}));
  EXPECT_NO_THROW(t.validate(4));
}

TEST(Traversal, BuiltinsAre33LongAndCoverEveryJoint) {
  for (const char* name : {"traveling", "surrounding", "traveling_fixed"}) {
    auto t = builtin_traversal(name);
    EXPECT_EQ(t.order.size(), 33u) << name;
    std::set<int> seen(t.order.begin(), t.order.end());
    EXPECT_EQ(seen.size(), 17u) << name;
    EXPECT_NO_THROW(t.validate(17));
  }
}

TEST(Traversal, VerbatimRepeatAndFixedVariant) {
  auto tr = builtin_traversal("traveling");
  EXPECT_EQ(tr.order[21], 15);
  EXPECT_EQ(tr.order[22], 15);
  auto fx = builtin_traversal("traveling_fixed");
  EXPECT_EQ(fx.order[22], 16);
  auto diff = 0;
  for (std::size_t i = 0; i < 33; ++i) diff += tr.order[i] != fx.order[i];
  EXPECT_EQ(diff, 1);
}

TEST(Traversal, Errors) {
  EXPECT_THROW(builtin_traversal("zigzag"), ConfigError);
  EXPECT_THROW(builtin_traversal("traveling", 4), DataError);
  EXPECT_THROW(custom_traversal({1, 2, 2}, 3), DataError);  // never visits 3
  EXPECT_THROW(custom_traversal({1, 2, 4}, 3), DataError);  // out of range
  EXPECT_THROW(custom_traversal({}, 3), DataError);
  auto ok = custom_traversal({2, 1, 3, 1}, 3);
  EXPECT_EQ(ok.kind, TraversalKind::custom);
}
