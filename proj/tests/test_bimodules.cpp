#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "orbkit/bimodules.hpp"

using namespace orbkit;

namespace {

const FieldTag Q{1};

FrobeniusStructure trivial_alg(FieldTag f = Q) {
  return FrobeniusStructure::make(product_field_algebra(1, f), {NFE::one(f)});
}

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

// K^2 as the column module over Mat2, trivial right action of K
Bimodule mat2_column(FieldTag f = Q) {
  Bimodule X;
  X.left = mat2_alg(f);
  X.right = trivial_alg(f);
  X.m = 2;
  X.lact.assign(4 * 2 * 2, NFE::zero(f));
  X.ract.assign(2 * 1 * 2, NFE::zero(f));
  auto idx = [](int i, int j) { return i * 2 + j; };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) X.lc(idx(i, j), j, i) = NFE::one(f);  // E_ij e_j = e_i
  for (int x = 0; x < 2; ++x) X.rc(x, 0, x) = NFE::one(f);
  X.validate();
  return X;
}

// K as a (KxK, K)-bimodule via the first projection
Bimodule qq_first_projection(FieldTag f = Q) {
  Bimodule X;
  X.left = FrobeniusStructure::make(product_field_algebra(2, f), {NFE::one(f), NFE::one(f)});
  X.right = trivial_alg(f);
  X.m = 1;
  X.lact.assign(2, NFE::zero(f));
  X.ract.assign(1, NFE::zero(f));
  X.lc(0, 0, 0) = NFE::one(f);
  X.rc(0, 0, 0) = NFE::one(f);
  X.validate();
  return X;
}

// module over the lambda-algebra: K with the tautological left action
Bimodule lambda_module(const Rat& lam, FieldTag f = Q) {
  Bimodule X;
  X.left = lambda_alg(lam, f);
  X.right = trivial_alg(f);
  X.m = 1;
  X.lact.assign(1, NFE::one(f));
  X.ract.assign(1, NFE::one(f));
  X.validate();
  return X;
}

}  // namespace

TEST_CASE("relative tensor of regular bimodules") {
  for (const auto& F : {trivial_alg(), z2_alg(), mat2_alg()}) {
    Bimodule X = regular_bimodule(F);
    auto rt = relative_tensor(X, X);
    CHECK(rt.product.m == F.dim());
    CHECK(rt.split.p * rt.split.p == rt.split.p);
    CHECK(rt.split.pi * rt.split.iota == Matrix::identity(rt.product.m, Q));
  }
}

TEST_CASE("relative tensor rank examples") {
  // X = Q as (QxQ)-Q bimodule via first projection: X^v (x)_{QxQ} X is 1-dim
  Bimodule X = qq_first_projection();
  Adjunction ad = adjoint(X);
  CHECK(ad.dual_x.image_dim == 1);

  // Q[Z/2] (x)_{Q[Z/2]} Q[Z/2] has dimension 2 (Gamma-normalized internally)
  Bimodule R = regular_bimodule(z2_alg());
  auto rt = relative_tensor(R, R);
  CHECK(rt.product.m == 2);
}

TEST_CASE("middle algebra mismatch is rejected") {
  Bimodule X = regular_bimodule(z2_alg());
  Bimodule Y = regular_bimodule(trivial_alg());
  CHECK_THROWS_AS(relative_tensor(X, Y), Error);
}

TEST_CASE("zorro moves hold exactly") {
  CHECK(zorro_check(regular_bimodule(trivial_alg())));
  CHECK(zorro_check(regular_bimodule(z2_alg())));
  CHECK(zorro_check(regular_bimodule(mat2_alg())));
  CHECK(zorro_check(mat2_column()));
  CHECK(zorro_check(qq_first_projection()));
  CHECK(zorro_check(lambda_module(Rat(7, 3))));
  CHECK(zorro_check(regular_bimodule(z2_alg().euler_gamma())));
}

TEST_CASE("corrupted coevaluation fails zorro with a witness") {
  Bimodule X = regular_bimodule(z2_alg());
  Adjunction ad = adjoint(X);
  ad.coev = ad.coev.scaled(NFE::rational(2, Q));
  std::string witness;
  CHECK_FALSE(zorro_check_with(X, ad, &witness));
  CHECK_FALSE(witness.empty());
}

TEST_CASE("quantum dimensions of the regular bimodule are the unit") {
  for (const auto& F : {trivial_alg(), z2_alg(), mat2_alg(), lambda_alg(Rat(5, 2))}) {
    Bimodule X = regular_bimodule(F);
    auto t = quantum_dims(X);
    CHECK(t.tr_left == F.algebra().unit);
    CHECK(t.tr_right == F.algebra().unit);
  }
}

TEST_CASE("module over K_lambda: right trace obeys the lambda^2 law") {
  for (Rat lam : {Rat(1), Rat(2), Rat(7, 3), Rat(-5, 4)}) {
    Bimodule X = lambda_module(lam);
    auto t = quantum_dims(X);
    CHECK(t.tr_right == Vec{NFE::rational(lam * lam, Q)});
    CHECK(t.tr_left == Vec{NFE::rational(Rat(1) / (lam * lam), Q)});
  }
}

TEST_CASE("Mat2 column module dimensions") {
  Bimodule X = mat2_column();
  auto t = quantum_dims(X);
  // independent oracle: Tr_M(psi^{-2}) with psi = 2 on the 2-dim carrier
  CHECK(t.tr_right == Vec{NFE::rational(Rat(1, 2), Q)});
  CHECK(t.tr_left == Vec{NFE::rational(2, Q), NFE::zero(Q), NFE::zero(Q), NFE::rational(2, Q)});
  // dim_l . dim_r = 4 . (psi-normalization scalar 1/4) = 1
  CHECK(t.tr_left[0] * t.tr_right[0] == NFE::one(Q));
}

TEST_CASE("nilpotent endomorphism has zero traces") {
  Bimodule X;
  X.left = trivial_alg();
  X.right = trivial_alg();
  X.m = 2;
  X.lact.assign(1 * 2 * 2, NFE::zero(Q));
  X.ract.assign(2 * 1 * 2, NFE::zero(Q));
  X.lc(0, 0, 0) = X.lc(0, 1, 1) = NFE::one(Q);
  X.rc(0, 0, 0) = X.rc(1, 0, 1) = NFE::one(Q);
  X.validate();
  Matrix chi(2, 2, Q);
  chi.at(0, 1) = NFE::one(Q);
  auto t = trace_and_qdim(X, chi);
  CHECK(t.tr_left == Vec{NFE::zero(Q)});
  CHECK(t.tr_right == Vec{NFE::zero(Q)});
}

TEST_CASE("double dual is canonically the identity matrix") {
  for (const Bimodule& X : {regular_bimodule(z2_alg()), mat2_column(), qq_first_projection()}) {
    Adjunction ad = adjoint(X);
    Adjunction add = adjoint(ad.dual);
    CHECK(is_bimodule_map(X, add.dual, Matrix::identity(X.m, Q)));
  }
}

TEST_CASE("pivotality: the two duals of a 2-morphism coincide") {
  FrobeniusStructure F = z2_alg();
  Bimodule X = regular_bimodule(F);
  Vec z = {NFE::rational(3, Q), NFE::rational(5, Q)};
  Matrix chi = F.algebra().right_mult(z);
  REQUIRE(is_bimodule_map(X, X, chi));
  CHECK(dual_map_via_right(X, X, chi) == dual_map_via_left(X, X, chi));

  Bimodule C = mat2_column();
  Matrix s = Matrix::identity(2, Q).scaled(NFE::rational(Rat(7, 2), Q));
  REQUIRE(is_bimodule_map(C, C, s));
  CHECK(dual_map_via_right(C, C, s) == dual_map_via_left(C, C, s));
}

TEST_CASE("associativity of relative products with invertible comparison") {
  FrobeniusStructure F = z2_alg();
  Bimodule X = regular_bimodule(F), Y = regular_bimodule(F), Z = regular_bimodule(F);
  auto xy = relative_tensor(X, Y);
  auto left = relative_tensor(xy.product, Z);
  auto yz = relative_tensor(Y, Z);
  auto right = relative_tensor(X, yz.product);
  CHECK(left.product.m == right.product.m);

  const int mx = X.m, my = Y.m, mz = Z.m;
  FieldTag K = Q;
  Matrix incl_left(mx * my * mz, left.product.m, K);
  for (int col = 0; col < left.product.m; ++col)
    for (int u = 0; u < xy.product.m; ++u)
      for (int z = 0; z < mz; ++z) {
        const NFE& c = left.split.iota.at(u * mz + z, col);
        if (c.is_zero()) continue;
        for (int xyi = 0; xyi < mx * my; ++xyi) {
          const NFE& d = xy.split.iota.at(xyi, u);
          if (!d.is_zero()) incl_left.at(xyi * mz + z, col) += c * d;
        }
      }
  Matrix proj_right(right.product.m, mx * my * mz, K);
  for (int row = 0; row < right.product.m; ++row)
    for (int x = 0; x < mx; ++x)
      for (int v = 0; v < yz.product.m; ++v) {
        const NFE& c = right.split.pi.at(row, x * yz.product.m + v);
        if (c.is_zero()) continue;
        for (int yzi = 0; yzi < my * mz; ++yzi) {
          const NFE& d = yz.split.pi.at(v, yzi);
          if (!d.is_zero()) proj_right.at(row, x * my * mz + yzi) += c * d;
        }
      }
  Matrix cmp = proj_right * incl_left;
  CHECK(cmp.invertible());
  CHECK(is_bimodule_map(left.product, right.product, cmp));
}

TEST_CASE("qdim of a relative product multiplies (scalar case)") {
  Bimodule X;
  X.left = trivial_alg();
  X.right = trivial_alg();
  X.m = 2;
  X.lact.assign(4, NFE::zero(Q));
  X.ract.assign(4, NFE::zero(Q));
  X.lc(0, 0, 0) = X.lc(0, 1, 1) = NFE::one(Q);
  X.rc(0, 0, 0) = X.rc(1, 0, 1) = NFE::one(Q);
  X.validate();
  auto t1 = quantum_dims(X);
  auto rt = relative_tensor(X, X);
  auto t2 = quantum_dims(rt.product);
  CHECK(t2.tr_right[0] == t1.tr_right[0] * t1.tr_right[0]);
}

TEST_CASE("split_orbifold_datum") {
  auto s1 = split_orbifold_datum(z2_alg());
  CHECK(s1.split.image_dim == 2);
  CHECK(s1.iso.invertible());

  auto s2 = split_orbifold_datum(mat2_alg());
  CHECK(s2.split.image_dim == 4);
  CHECK(s2.iso.invertible());

  auto s3 = split_orbifold_datum(trivial_alg());
  CHECK(s3.split.image_dim == 1);
  CHECK(s3.iso.at(0, 0) == NFE::one(Q));

  FrobeniusStructure bad = FrobeniusStructure::make(dual_numbers(Q), {NFE::zero(Q), NFE::one(Q)});
  CHECK_THROWS_AS(split_orbifold_datum(bad), Error);
  try {
    split_orbifold_datum(bad);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAnOrbifoldDatum);
  }
}
