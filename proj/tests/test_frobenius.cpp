#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "orbkit/frobenius.hpp"

using namespace orbkit;

namespace {

const FieldTag Q{1};

Vec ql(std::initializer_list<long> xs, FieldTag f = Q) {
  Vec v;
  for (long x : xs) v.push_back(NFE::rational(x, f));
  return v;
}

FrobeniusStructure z2_standard(FieldTag f = Q) {
  // Q[Z/2] with eps(e) = 1, eps(g) = 0
  return FrobeniusStructure::make(group_algebra_z2(f), {NFE::one(f), NFE::zero(f)});
}

FrobeniusStructure mat2_trace(FieldTag f = Q) {
  Algebra a = matrix_algebra(2, f);
  Vec tr(4, NFE::zero(f));
  tr[0] = tr[3] = NFE::one(f);  // E00, E11
  return FrobeniusStructure::make(a, tr);
}

// independent oracle: 4-index tensors of (mu (x) id)(id (x) Delta) etc.
std::vector<NFE> frobenius_tensor_left(const FrobeniusStructure& F) {
  // T[a,b -> i,j] of Delta . mu
  const Algebra& A = F.algebra();
  int n = A.n;
  std::vector<NFE> T(static_cast<size_t>(n) * n * n * n, NFE::zero(F.field()));
  Matrix delta = F.comultiplication();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Vec ea(n, NFE::zero(F.field())), eb(n, NFE::zero(F.field()));
      ea[a] = eb[b] = NFE::one(F.field());
      Vec ab = A.multiply(ea, eb);
      for (int x = 0; x < n; ++x) {
        if (ab[x].is_zero()) continue;
        for (int ij = 0; ij < n * n; ++ij)
          T[(static_cast<size_t>(a) * n + b) * n * n + ij] += ab[x] * delta.at(ij, x);
      }
    }
  return T;
}

}  // namespace

TEST_CASE("check_frobenius on Q[Z/2]") {
  auto rep = check_frobenius(group_algebra_z2(Q), ql({1, 0}));
  CHECK(rep.frobenius);
  CHECK(rep.symmetric);
  CHECK(rep.separable);
  CHECK_FALSE(rep.delta_separable);
  CHECK(rep.window == ql({2, 0}));  // mu Delta(1) = 2*1
}

TEST_CASE("check_frobenius on dual numbers") {
  // Q[x]/(x^2), eps(1)=0, eps(x)=1: frobenius, symmetric, not separable
  auto rep = check_frobenius(dual_numbers(Q), ql({0, 1}));
  CHECK(rep.frobenius);
  CHECK(rep.symmetric);
  CHECK_FALSE(rep.separable);
  CHECK(rep.window == ql({0, 2}));  // omega = 2x, nilpotent
}

TEST_CASE("dual numbers with the unit counit are not Frobenius") {
  auto rep = check_frobenius(dual_numbers(Q), ql({1, 0}));
  CHECK_FALSE(rep.frobenius);
  REQUIRE(rep.kernel_witness.has_value());
  // witness really kills the pairing: eps((a+bx) * x) = 0 for all inputs
  CHECK_FALSE(rep.kernel_witness->at(1).is_zero());
}

TEST_CASE("check_frobenius on Mat2 with trace") {
  auto f = mat2_trace();
  auto rep = check_frobenius(f.algebra(), f.counit());
  CHECK(rep.frobenius);
  CHECK(rep.symmetric);
  CHECK(rep.separable);
  CHECK_FALSE(rep.delta_separable);
  CHECK(rep.window == ql({2, 0, 0, 2}));  // sum E_ij E_ji = 2*1
}

TEST_CASE("window element examples") {
  // one-dimensional K with eps(1) = lambda: omega = 1/lambda
  for (long lam : {1L, 2L, 5L, -3L}) {
    Algebra a = product_field_algebra(1, Q);
    auto F = FrobeniusStructure::make(a, {NFE::rational(lam, Q)});
    CHECK(F.window() == Vec{NFE::rational(Rat(1, lam), Q)});
  }
  // delta-separable structure has omega = 1
  Algebra a = product_field_algebra(2, Q);
  auto F = FrobeniusStructure::make(a, ql({1, 1}));
  CHECK(F.is_delta_separable());
  CHECK(F.window() == a.unit);
}

TEST_CASE("euler_gamma") {
  auto F = z2_standard();
  auto G = F.euler_gamma();
  CHECK(G.is_delta_separable());
  CHECK(G.is_symmetric());
  CHECK(G.psi() == ql({2, 0}));
  // applying gamma twice: second psi = 1
  auto G2 = G.euler_gamma();
  CHECK(G2.psi() == G.algebra().unit);
  CHECK(G2.counit() == G.counit());

  auto M = mat2_trace().euler_gamma();
  CHECK(M.is_delta_separable());
  CHECK(M.psi() == ql({2, 0, 0, 2}));
  CHECK(M.counit()[0] == NFE::rational(2, Q));  // eps'(E00) = 2

  CHECK_THROWS_AS(FrobeniusStructure::make(dual_numbers(Q), ql({0, 1})).euler_gamma(), Error);
}

TEST_CASE("comultiplication compatibilities as 4-index tensors") {
  for (const auto& F : {z2_standard(), mat2_trace(), z2_standard().euler_gamma(), mat2_trace().euler_gamma()}) {
    const Algebra& A = F.algebra();
    int n = A.n;
    Matrix delta = F.comultiplication();
    auto T = frobenius_tensor_left(F);
    // (id (x) mu)(Delta (x) id) == Delta . mu == (mu (x) id)(id (x) Delta)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Vec ea(n, NFE::zero(F.field())), eb(n, NFE::zero(F.field()));
        ea[a] = eb[b] = NFE::one(F.field());
        // left route: Delta(a) then multiply second leg by b
        Vec lhs(static_cast<size_t>(n) * n, NFE::zero(F.field()));
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            NFE co = delta.at(i * n + j, a);
            if (co.is_zero()) continue;
            Vec ej(n, NFE::zero(F.field()));
            ej[j] = NFE::one(F.field());
            Vec jb = A.multiply(ej, eb);
            for (int k = 0; k < n; ++k) lhs[static_cast<size_t>(i) * n + k] += co * jb[k];
          }
        // right route: Delta(b) then multiply first leg by a on the left
        Vec rhs(static_cast<size_t>(n) * n, NFE::zero(F.field()));
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            NFE co = delta.at(i * n + j, b);
            if (co.is_zero()) continue;
            Vec ei(n, NFE::zero(F.field()));
            ei[i] = NFE::one(F.field());
            Vec ai = A.multiply(ea, ei);
            for (int k = 0; k < n; ++k) rhs[static_cast<size_t>(k) * n + j] += co * ai[k];
          }
        for (int ij = 0; ij < n * n; ++ij) {
          CHECK(lhs[ij] == T[(static_cast<size_t>(a) * n + b) * n * n + ij]);
          CHECK(rhs[ij] == T[(static_cast<size_t>(a) * n + b) * n * n + ij]);
        }
      }
  }
}

TEST_CASE("symmetry report agrees with brute force") {
  auto F = z2_standard();
  const Algebra& A = F.algebra();
  bool brute = true;
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) {
      Vec ei(A.n, NFE::zero(Q)), ej(A.n, NFE::zero(Q));
      ei[i] = ej[j] = NFE::one(Q);
      if (!(F.eps(A.multiply(ei, ej)) == F.eps(A.multiply(ej, ei)))) brute = false;
    }
  CHECK(brute == F.is_symmetric());
}

TEST_CASE("central idempotents") {
  auto idems = central_primitive_idempotents(group_algebra_z2(Q));
  REQUIRE(idems.size() == 2);
  // e_pm = (1 pm g)/2
  CHECK(idems[0] == Vec{NFE::rational(Rat(1, 2), Q), NFE::rational(Rat(1, 2), Q)});
  CHECK(idems[1] == Vec{NFE::rational(Rat(1, 2), Q), NFE::rational(Rat(-1, 2), Q)});

  auto m2 = central_primitive_idempotents(matrix_algebra(2, Q));
  CHECK(m2.size() == 1);

  auto p3 = central_primitive_idempotents(product_field_algebra(3, Q));
  CHECK(p3.size() == 3);
}

TEST_CASE("window sqrt") {
  // Q[Z/2]: omega = 2, no root over Q; over Q(sqrt2) the root is sqrt(2)*1
  CHECK_THROWS_AS(z2_standard().window_sqrt(), Error);
  FieldTag Q2{2};
  auto F2 = z2_standard(Q2);
  Vec s = F2.window_sqrt();
  CHECK(s == Vec{NFE::sqrt_gen(Q2), NFE::zero(Q2)});

  // delta-separable: omega = 1 -> s = 1
  auto G = z2_standard().euler_gamma();
  CHECK(G.window_sqrt() == G.algebra().unit);

  // Q x Q with omega = (4, 9) -> s = (2, 3); counit (1/4, 1/9) gives that window
  Algebra a = product_field_algebra(2, Q);
  auto F = FrobeniusStructure::make(a, {NFE::rational(Rat(1, 4), Q), NFE::rational(Rat(1, 9), Q)});
  CHECK(F.window() == ql({4, 9}));
  CHECK(F.window_sqrt() == ql({2, 3}));
  CHECK(a.multiply(F.window_sqrt(), F.window_sqrt()) == F.window());
}

TEST_CASE("window sqrt needs a split center") {
  // Q[Z/3] over Q: center = whole algebra, splits as Q x Q(zeta3): not split
  FieldTag f = Q;
  Algebra a;
  a.n = 3;
  a.field = f;
  a.unit = ql({1, 0, 0});
  a.mul.assign(27, NFE::zero(f));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a.c(i, j, (i + j) % 3) = NFE::one(f);
  CHECK_THROWS_AS(central_primitive_idempotents(a), Error);
}
