#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "orbkit/statesum.hpp"

using namespace orbkit;

namespace {
const FieldTag Q{1};
const FieldTag Q2{2};
const FieldTag Q5{5};

FusionData vec_z2() { return fusion_vec_zn(2, 2, NFE::rational(Rat(1, 2), Q2)); }
FusionData vec_z3() { return fusion_vec_zn(3, 3, NFE::rational(Rat(1, 3), FieldTag{3})); }
FusionData vec_z4() { return fusion_vec_zn(4, 1, NFE::rational(Rat(1, 4), Q)); }

}  // namespace

TEST_CASE("dijkgraaf-witten oracle values") {
  CHECK(dw_partition(tri_s3_two_tet(), 2) == Rat(1, 2));
  CHECK(dw_partition(tri_s3_boundary_4simplex(), 2) == Rat(1, 2));
  CHECK(dw_partition(tri_s2xs1(), 2) == Rat(1));
  CHECK(dw_partition(tri_t3_cube(), 2) == Rat(4));
  CHECK(dw_partition(tri_s3_two_tet(), 3) == Rat(1, 3));
  CHECK(dw_partition(tri_s3_two_tet(), 4) == Rat(1, 4));
}

TEST_CASE("tv matches the counting oracle for Vec_ZN") {
  // cross-checked against dw_partition before freezing the goldens
  for (const OrderedTriangulation& t : {tri_s3_two_tet(), tri_s3_boundary_4simplex()}) {
    CHECK(tv_evaluate(t, vec_z2()).value == NFE::rational(dw_partition(t, 2), Q2));
    CHECK(tv_evaluate(t, vec_z3()).value == NFE::rational(dw_partition(t, 3), FieldTag{3}));
    CHECK(tv_evaluate(t, vec_z4()).value == NFE::rational(dw_partition(t, 4), Q));
  }
  CHECK(tv_evaluate(tri_s2xs1(), vec_z2()).value == NFE::rational(dw_partition(tri_s2xs1(), 2), Q2));
  CHECK(tv_evaluate(tri_t3_cube(), vec_z2()).value == NFE::rational(dw_partition(tri_t3_cube(), 2), Q2));
}

TEST_CASE("tv goldens") {
  CHECK(tv_evaluate(tri_s3_two_tet(), vec_z2()).value == NFE::rational(Rat(1, 2), Q2));
  CHECK(tv_evaluate(tri_s2xs1(), vec_z2()).value == NFE::one(Q2));
  CHECK(tv_evaluate(tri_t3_cube(), vec_z2()).value == NFE::rational(4, Q2));
}

TEST_CASE("tv of S3 with Fibonacci is the inverse global dimension") {
  FusionData fib = fusion_fibonacci();
  // 2/(5+sqrt5) = (5-sqrt5)/10
  NFE expect = NFE::rational(Rat(1, 2), Q5) - NFE::rational(Rat(1, 10), Q5) * NFE::sqrt_gen(Q5);
  CHECK(expect * fib.global_dim() == NFE::one(Q5));
  CHECK(tv_evaluate(tri_s3_two_tet(), fib).value == expect);
  CHECK(tv_evaluate(tri_s3_boundary_4simplex(), fib).value == expect);
}

TEST_CASE("tv of S3 with the twisted Z2 cocycle") {
  FusionData tz2 = fusion_vec_z2_twisted(NFE::rational(Rat(1, 2), Q));
  CHECK(tv_evaluate(tri_s3_two_tet(), tz2).value == NFE::rational(Rat(1, 2), Q));
  CHECK(tv_evaluate(tri_s3_boundary_4simplex(), tz2).value == NFE::rational(Rat(1, 2), Q));
}

TEST_CASE("single 23 and 14 moves preserve the Fibonacci value") {
  FusionData fib = fusion_fibonacci();
  OrderedTriangulation t = tri_s3_boundary_4simplex();
  NFE ref = tv_evaluate(t, fib).value;
  t = apply_move(t, {"14", 0});
  REQUIRE(tv_evaluate(t, fib).value == ref);
  auto m23 = legal_moves(t, "23");
  REQUIRE(!m23.empty());
  CHECK(tv_evaluate(apply_move(t, m23[0]), fib).value == ref);
  auto m14 = legal_moves(t, "14");
  REQUIRE(!m14.empty());
  CHECK(tv_evaluate(apply_move(t, m14[0]), fib).value == ref);
}

TEST_CASE("pachner suite 3d: Fibonacci on S3") {
  auto suite = pachner_suite_tv(tri_s3_boundary_4simplex(), fusion_fibonacci(), 50, 424242);
  CHECK(suite.ok);
  CHECK(suite.applied == 50);
  if (!suite.ok) MESSAGE(suite.witness);
}

TEST_CASE("pachner suite 3d: Vec_Z3 on S3") {
  auto suite = pachner_suite_tv(tri_s3_boundary_4simplex(), vec_z3(), 50, 777);
  CHECK(suite.ok);
  if (!suite.ok) MESSAGE(suite.witness);
}

TEST_CASE("pachner suite 3d: twisted Z2 on S3") {
  auto suite = pachner_suite_tv(tri_s3_two_tet(), fusion_vec_z2_twisted(NFE::rational(Rat(1, 2), Q)), 50, 5150);
  CHECK(suite.ok);
  if (!suite.ok) MESSAGE(suite.witness);
}

TEST_CASE("vertex reordering leaves tv unchanged") {
  std::mt19937_64 rng(123);
  FusionData fib = fusion_fibonacci();
  OrderedTriangulation t = tri_s3_boundary_4simplex();
  NFE ref = tv_evaluate(t, fib).value;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<int> perm(t.vertices);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(tv_evaluate(relabel(t, perm), fib).value == ref);
  }
}

TEST_CASE("disjoint union multiplies") {
  FusionData fib = fusion_fibonacci();
  NFE v = tv_evaluate(tri_s3_two_tet(), fib).value;
  OrderedTriangulation t = disjoint_union(tri_s3_two_tet(), tri_s3_two_tet());
  CHECK(tv_evaluate(t, fib).value == v * v);
}

TEST_CASE("missing euler datum is rejected") {
  FusionData f = vec_z2();
  f.vertex_weight.reset();
  CHECK_THROWS_AS(tv_evaluate(tri_s3_two_tet(), f), Error);
}
