#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "orbkit/fusion.hpp"

using namespace orbkit;

namespace {
const FieldTag Q{1};
const FieldTag Q5{5};

FusionData vec_z2() {
  // shipped with the Euler weight over Q(sqrt2): phi^2 = 1/2
  return fusion_vec_zn(2, 2, NFE::rational(Rat(1, 2), FieldTag{2}));
}

}  // namespace

TEST_CASE("check_fusion on Vec_Z2") {
  FusionData f = vec_z2();
  auto rep = check_fusion(f);
  CHECK(rep.shape);
  CHECK(rep.unit);
  CHECK(rep.pentagon);
  CHECK(rep.spherical);
  CHECK(rep.globaldim == NFE::rational(2, FieldTag{2}));
}

TEST_CASE("check_fusion on Vec_Z3 and Vec_Z4") {
  FusionData z3 = fusion_vec_zn(3, 3, NFE::rational(Rat(1, 3), FieldTag{3}));
  CHECK(check_fusion(z3).all());
  FusionData z4 = fusion_vec_zn(4, 1, NFE::rational(Rat(1, 4), Q));
  CHECK(check_fusion(z4).all());
}

TEST_CASE("check_fusion on the twisted Z2 cocycle") {
  FusionData f = fusion_vec_z2_twisted(NFE::rational(Rat(1, 2), Q));
  auto rep = check_fusion(f);
  CHECK(rep.pentagon);
  CHECK(rep.all());
}

TEST_CASE("check_fusion on Fibonacci") {
  FusionData f = fusion_fibonacci();
  auto rep = check_fusion(f);
  CHECK(rep.shape);
  CHECK(rep.unit);
  CHECK(rep.pentagon);
  CHECK(rep.spherical);
  // D^2 = 1 + phi^2 = (5+sqrt5)/2
  NFE expect = NFE::rational(Rat(5, 2), Q5) + NFE::rational(Rat(1, 2), Q5) * NFE::sqrt_gen(Q5);
  CHECK(rep.globaldim == expect);
  CHECK(*f.vertex_weight * rep.globaldim == NFE::one(Q5));
}

TEST_CASE("single F-entry corruption breaks the pentagon") {
  FusionData ref = fusion_fibonacci();
  for (auto& [k, v] : ref.sys.F) {
    FusionData g = fusion_fibonacci();
    g.sys.F[k] = v + NFE::one(Q5);
    auto rep = check_fusion(g);
    bool pentagon_or_unit_broken = !rep.pentagon || !rep.unit;
    CHECK(pentagon_or_unit_broken);
  }
  // negating the Fibonacci mixing entry fails with a witness tuple
  FusionData g = fusion_fibonacci();
  g.sys.F[LabelSystem::key(1, 1, 1, 1, 0, 1)] = -g.sys.F[LabelSystem::key(1, 1, 1, 1, 0, 1)];
  auto rep = check_fusion(g);
  CHECK_FALSE(rep.pentagon);
  CHECK(rep.witness.find("pentagon fails") != std::string::npos);
}

TEST_CASE("rigidity via strong lax structure") {
  CHECK(check_rigidity_strong(vec_z2()));
  CHECK(check_rigidity_strong(fusion_fibonacci()));
  CHECK(check_rigidity_strong(fusion_vec_z2_twisted(NFE::rational(Rat(1, 2), Q))));

  // truncated multiplication (dropping duals) already fails the unit checks
  FusionData broken = vec_z2();
  broken.sys.set_n(1, 1, 0, false);
  auto rep = check_fusion(broken);
  CHECK_FALSE(rep.unit);
}

TEST_CASE("pivotal equivalence of CY data") {
  CYData c{2, {NFE::rational(3, Q), NFE::rational(5, Q)}, Q};
  CYData same = c;
  CHECK(check_pivotal_equivalence(c, same, {0, 1}));

  CYData doubled{2, {NFE::rational(6, Q), NFE::rational(10, Q)}, Q};
  CHECK_FALSE(check_pivotal_equivalence(c, doubled, {0, 1}));

  CYData swapped{2, {NFE::rational(5, Q), NFE::rational(3, Q)}, Q};
  CHECK(check_pivotal_equivalence(c, swapped, {1, 0}));
  CHECK_FALSE(check_pivotal_equivalence(c, swapped, {0, 1}));

  CHECK_THROWS_AS(check_pivotal_equivalence(c, CYData{1, {NFE::one(Q)}, Q}, {0, 0}), Error);
}

namespace {

AdjunctionComponents identity_adjunction(int simples, FieldTag K) {
  AdjunctionComponents right;
  for (int i = 0; i < simples; ++i) {
    SSMor eta, eps;
    for (int s = 0; s < simples; ++s) {
      eta.blocks.push_back(Matrix(s == i ? 1 : 0, s == i ? 1 : 0, K));
      eps.blocks.push_back(Matrix(s == i ? 1 : 0, s == i ? 1 : 0, K));
    }
    eta.blocks[i].at(0, 0) = NFE::one(K);
    eps.blocks[i].at(0, 0) = NFE::one(K);
    right.unit.push_back(eta);
    right.counit.push_back(eps);
  }
  return right;
}

}  // namespace

TEST_CASE("left adjoint from trace: identity equivalence") {
  CYData c{2, {NFE::rational(3, Q), NFE::rational(7, Q)}, Q};
  SSFunctor F{2, 2, {{1, 0}, {0, 1}}};
  auto res = left_adjoint_from_trace(c, c, F, identity_adjunction(2, Q));
  CHECK(res.zorro);
  for (int i = 0; i < 2; ++i) {
    CHECK(res.left.counit[i].blocks[i].at(0, 0) == NFE::one(Q));
    CHECK(res.left.unit[i].blocks[i].at(0, 0) == NFE::one(Q));
  }
}

TEST_CASE("left adjoint from trace: scaled equivalence gives lambda ratios") {
  CYData c{2, {NFE::rational(3, Q), NFE::rational(7, Q)}, Q};
  CYData cp{2, {NFE::rational(4, Q), NFE::rational(21, Q)}, Q};
  SSFunctor F{2, 2, {{1, 0}, {0, 1}}};
  auto res = left_adjoint_from_trace(c, cp, F, identity_adjunction(2, Q));
  CHECK(res.zorro);
  // eps^L_i = lambda'_i / lambda_i, eta^L_i = lambda_i / lambda'_i
  CHECK(res.left.counit[0].blocks[0].at(0, 0) == NFE::rational(Rat(4, 3), Q));
  CHECK(res.left.counit[1].blocks[1].at(0, 0) == NFE::rational(3, Q));
  CHECK(res.left.unit[0].blocks[0].at(0, 0) == NFE::rational(Rat(3, 4), Q));
  CHECK(res.left.unit[1].blocks[1].at(0, 0) == NFE::rational(Rat(1, 3), Q));
}

TEST_CASE("left adjoint from trace: folding functor") {
  CYData c{2, {NFE::one(Q), NFE::one(Q)}, Q};
  CYData cp{1, {NFE::one(Q)}, Q};
  SSFunctor F{2, 1, {{1, 1}}};
  AdjunctionComponents right;
  for (int i = 0; i < 2; ++i) {
    SSMor eta;
    eta.blocks.push_back(Matrix(1, i == 0 ? 1 : 0, Q));
    eta.blocks.push_back(Matrix(1, i == 1 ? 1 : 0, Q));
    eta.blocks[i].at(0, 0) = NFE::one(Q);
    right.unit.push_back(eta);
  }
  {
    SSMor eps;
    eps.blocks.push_back(Matrix(1, 2, Q));
    eps.blocks[0].at(0, 0) = NFE::one(Q);
    eps.blocks[0].at(0, 1) = NFE::one(Q);
    right.counit.push_back(eps);
  }
  REQUIRE(check_right_adjunction(c, cp, F, right));
  auto res = left_adjoint_from_trace(c, cp, F, right);
  CHECK(res.zorro);
  for (int i = 0; i < 2; ++i) CHECK(res.left.counit[i].blocks[i].at(0, 0) == NFE::one(Q));
}

TEST_CASE("degenerate trace pairing is rejected") {
  CYData c{1, {NFE::zero(Q)}, Q};
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("module trace: regular modules pass") {
  for (const FusionData& f : {vec_z2(), fusion_fibonacci(), fusion_vec_z2_twisted(NFE::rational(Rat(1, 2), Q))}) {
    ModuleData m = ModuleData::regular(f);
    auto rep = check_module_trace(m);
    CHECK(rep.pentagon);
    CHECK(rep.compatible);
  }
}

TEST_CASE("module trace: Vec over Vec_Z2 passes for any trace scalar") {
  FusionData base = vec_z2();
  FieldTag K = base.sys.field;
  for (Rat lam : {Rat(1), Rat(3), Rat(-7, 2)}) {
    ModuleData m;
    m.base = base;
    m.simples = 1;
    m.actL.assign(2 * 1 * 1, 1);
    m.actR.assign(1 * 1 * 1, 1);
    for (int c1 = 1; c1 < 2; ++c1)
      for (int c2 = 1; c2 < 2; ++c2) m.FL[LabelSystem::key(c1, c2, 0, 0, (c1 + c2) % 2, 0)] = NFE::one(K);
    m.rbase = fusion_vec_zn(1, K.d, NFE::one(K));
    m.traces = {NFE::rational(lam, K)};
    auto rep = check_module_trace(m);
    CHECK(rep.pentagon);
    CHECK(rep.compatible);
  }
}

TEST_CASE("module trace: scaled trace on a 2-simple module fails with witness") {
  FusionData base = vec_z2();
  FieldTag K = base.sys.field;
  ModuleData m;
  m.base = base;
  m.simples = 2;
  m.actL.assign(2 * 2 * 2, 0);
  auto setL = [&](int c, int x, int y) { m.actL[(static_cast<size_t>(c) * 2 + x) * 2 + y] = 1; };
  setL(0, 0, 0);
  setL(0, 1, 1);
  setL(1, 0, 1);  // g |> m0 = m1
  setL(1, 1, 0);
  m.actR.assign(2 * 1 * 2, 0);
  m.actR[0 * 2 + 0] = 1;
  m.actR[1 * 2 + 1] = 1;
  for (int mm = 0; mm < 2; ++mm) m.FL[LabelSystem::key(1, 1, mm, mm, 0, 1 - mm)] = NFE::one(K);
  m.rbase = fusion_vec_zn(1, K.d, NFE::one(K));

  m.traces = {NFE::one(K), NFE::one(K)};
  CHECK(check_module_trace(m).compatible);

  m.traces = {NFE::one(K), NFE::rational(2, K)};
  auto rep = check_module_trace(m);
  CHECK(rep.pentagon);
  CHECK_FALSE(rep.compatible);
  CHECK(rep.witness.find("trace compatibility fails") != std::string::npos);
}

TEST_CASE("phi squared times global dimension is one for shipped fixtures") {
  for (const FusionData& f : {vec_z2(), fusion_vec_zn(3, 3, NFE::rational(Rat(1, 3), FieldTag{3})),
                              fusion_vec_zn(4, 1, NFE::rational(Rat(1, 4), Q)), fusion_fibonacci()}) {
    REQUIRE(f.vertex_weight.has_value());
    CHECK(*f.vertex_weight * f.global_dim() == NFE::one(f.sys.field));
  }
}

TEST_CASE("pivotal equivalence is relabeling invariant") {
  std::mt19937_64 rng(5);
  CYData c{3, {NFE::rational(2, Q), NFE::rational(3, Q), NFE::rational(2, Q)}, Q};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> perm{0, 1, 2};
    std::shuffle(perm.begin(), perm.end(), rng);
    CYData cp{3, {NFE::zero(Q), NFE::zero(Q), NFE::zero(Q)}, Q};
    for (int i = 0; i < 3; ++i) cp.traces[perm[i]] = c.traces[i];
    CHECK(check_pivotal_equivalence(c, cp, perm));
  }
}
