#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "orbkit/statesum.hpp"

using namespace orbkit;

namespace {
const FieldTag Q{1};

FrobeniusStructure lambda_alg(const Rat& lam, FieldTag f = Q) {
  return FrobeniusStructure::make(product_field_algebra(1, f), {NFE::rational(lam, f)});
}

FrobeniusStructure z2_alg(FieldTag f = Q) {
  return FrobeniusStructure::make(group_algebra_z2(f), {NFE::one(f), NFE::zero(f)});
}

FrobeniusStructure mat2_alg(FieldTag f = Q) {
  Algebra a = matrix_algebra(2, f);
  Vec tr(4, NFE::zero(f));
  tr[0] = tr[3] = NFE::one(f);
  return FrobeniusStructure::make(a, tr);
}

}  // namespace

TEST_CASE("euler theory: sphere, torus, genus 2 give lambda^{2g-2}") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> num(1, 30), den(1, 9);
  for (int trial = 0; trial < 20; ++trial) {
    Rat lam(num(rng), den(rng));
    if (trial % 3 == 0) lam = -lam;
    FrobeniusStructure F = lambda_alg(lam);
    NFE l = NFE::rational(lam, Q);
    CHECK(fhk_evaluate(tri_sphere_2d(), F).value == l.pow(-2));
    CHECK(fhk_evaluate(tri_torus_2d(), F).value == NFE::one(Q));
    CHECK(fhk_evaluate(tri_genus2_2d(), F).value == l.pow(2));
  }
}

TEST_CASE("torus value equals the center dimension, on two triangulations") {
  FrobeniusStructure F = z2_alg();
  // independent oracle: dim Z(A)
  auto center = center_basis(F.algebra());
  NFE expect = NFE::rational(static_cast<long>(center.size()), Q);
  OrderedTriangulation t1 = tri_torus_2d();
  CHECK(fhk_evaluate(t1, F).value == expect);
  OrderedTriangulation t2 = apply_move(t1, {"13", 0});
  t2 = apply_move(t2, {"13", 1});
  CHECK(fhk_evaluate(t2, F).value == expect);

  // Mat2 has a 1-dimensional center
  FrobeniusStructure M = mat2_alg();
  CHECK(fhk_evaluate(t1, M).value == NFE::one(Q));
}

TEST_CASE("non-closed input is rejected") {
  OrderedTriangulation t;
  t.dim = 2;
  t.vertices = 3;
  t.simplices = {{0, 1, 2}};
  t.orient = {1};
  CHECK_THROWS_AS(fhk_evaluate(t, z2_alg()), Error);
}

TEST_CASE("pachner invariance 2d: one 13 move (trivial by theorem, exact check)") {
  FrobeniusStructure F = z2_alg();
  OrderedTriangulation t = tri_torus_2d();
  NFE ref = fhk_evaluate(t, F).value;
  CHECK(fhk_evaluate(apply_move(t, {"13", 1}), F).value == ref);
}

TEST_CASE("pachner suite 2d: 50 random moves on the torus with Q[Z/2]") {
  auto suite = pachner_suite_fhk(tri_torus_2d(), z2_alg(), 50, 20250809);
  CHECK(suite.ok);
  CHECK(suite.applied == 50);
  if (!suite.ok) MESSAGE(suite.witness);
}

TEST_CASE("pachner suite 2d: 50 random moves on the sphere with Mat2") {
  auto suite = pachner_suite_fhk(tri_sphere_2d(), mat2_alg(), 50, 31);
  CHECK(suite.ok);
  if (!suite.ok) MESSAGE(suite.witness);
}

TEST_CASE("pachner suite 2d: genus 2 with the euler theory") {
  auto suite = pachner_suite_fhk(tri_genus2_2d(), lambda_alg(Rat(3, 2)), 50, 7);
  CHECK(suite.ok);
  if (!suite.ok) MESSAGE(suite.witness);
}

TEST_CASE("disjoint union multiplies") {
  FrobeniusStructure F = z2_alg();
  OrderedTriangulation t = disjoint_union(tri_torus_2d(), tri_sphere_2d());
  NFE v1 = fhk_evaluate(tri_torus_2d(), F).value;
  NFE v2 = fhk_evaluate(tri_sphere_2d(), F).value;
  CHECK(fhk_evaluate(t, F).value == v1 * v2);
}

TEST_CASE("vertex reordering leaves the value unchanged") {
  std::mt19937_64 rng(99);
  FrobeniusStructure F = mat2_alg();
  OrderedTriangulation t = tri_sphere_2d();
  t = apply_move(t, {"13", 2});
  NFE ref = fhk_evaluate(t, F).value;
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<int> perm(t.vertices);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(fhk_evaluate(relabel(t, perm), F).value == ref);
  }
}
