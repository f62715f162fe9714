#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "orbkit/scalars.hpp"

using namespace orbkit;

namespace {

const FieldTag Q{1};
const FieldTag Q5{5};

NFE q(long n, long d = 1) { return NFE::rational(Rat(n, d), Q); }

NFE random_element(std::mt19937_64& rng, FieldTag f) {
  std::uniform_int_distribution<long> num(-12, 12), den(1, 9);
  NFE x = NFE::rational(Rat(num(rng), den(rng)), f);
  if (f.d > 1) x += NFE::rational(Rat(num(rng), den(rng)), f) * NFE::sqrt_gen(f);
  return x;
}

}  // namespace

TEST_CASE("rational arithmetic") {
  CHECK(q(1, 2) + q(1, 3) == q(5, 6));
  CHECK(q(1, 2) * q(2, 3) == q(1, 3));
  CHECK(q(7) - q(9) == q(-2));
  CHECK(q(3, 4) / q(3, 2) == q(1, 2));
  CHECK_THROWS_AS(q(1) / q(0), Error);
}

TEST_CASE("golden ratio identities in Q(sqrt 5)") {
  NFE half = NFE::rational(Rat(1, 2), Q5);
  NFE phi = half + half * NFE::sqrt_gen(Q5);
  CHECK(phi * phi == phi + NFE::one(Q5));  // x^2 = x + 1
  NFE num = NFE::rational(Rat(5, 2), Q5) + half * NFE::sqrt_gen(Q5);  // (5+sqrt5)/2
  CHECK(num * num.inverse() == NFE::one(Q5));
  CHECK(num.inverse() == NFE::one(Q5) / num);
}

TEST_CASE("mixed fields never combine") {
  NFE a = NFE::one(Q5);
  NFE b = NFE::one(FieldTag{2});
  CHECK_THROWS_AS(a + b, Error);
  CHECK_THROWS_AS(a * b, Error);
  CHECK_THROWS_AS(NFE::one(Q) + a, Error);
}

TEST_CASE("square roots") {
  CHECK(q(4).sqrt() == q(2));
  CHECK(q(9, 16).sqrt() == q(3, 4));
  CHECK_THROWS_AS(q(2).sqrt(), Error);
  CHECK_THROWS_AS(q(-1).sqrt(), Error);

  NFE five = NFE::rational(5, Q5);
  CHECK(five.sqrt() == NFE::sqrt_gen(Q5));

  // sqrt with nonzero radical part: (3 + sqrt5)^2 = 14 + 6 sqrt5
  NFE x = NFE::rational(14, Q5) + NFE::rational(6, Q5) * NFE::sqrt_gen(Q5);
  NFE r = x.sqrt();
  CHECK(r * r == x);
  CHECK(r.sign() > 0);

  // phi^2 = phi + 1 has the positive root phi
  NFE half = NFE::rational(Rat(1, 2), Q5);
  NFE phi = half + half * NFE::sqrt_gen(Q5);
  CHECK((phi * phi).sqrt() == phi);
}

TEST_CASE("sqrt positive branch is deterministic") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    NFE x = random_element(rng, Q5);
    NFE sq = x * x;
    NFE r = sq.sqrt();
    CHECK(r * r == sq);
    CHECK(r.sign() >= 0);
  }
}

TEST_CASE("field axioms hold exactly (randomized)") {
  std::mt19937_64 rng(42);
  for (FieldTag f : {Q, Q5, FieldTag{2}, FieldTag{3}}) {
    for (int i = 0; i < 100; ++i) {
      NFE x = random_element(rng, f), y = random_element(rng, f), z = random_element(rng, f);
      CHECK((x + y) + z == x + (y + z));
      CHECK((x * y) * z == x * (y * z));
      CHECK(x * y == y * x);
      CHECK(x * (y + z) == x * y + x * z);
      if (!x.is_zero()) CHECK(x * x.inverse() == NFE::one(f));
    }
  }
}

TEST_CASE("canonical form and parsing round-trip") {
  CHECK(NFE::parse("5/6", Q).str() == "5/6");
  CHECK(NFE::parse("-3", Q).str() == "-3");
  CHECK(NFE::parse("10/4", Q).str() == "5/2");
  CHECK(NFE::parse("1/2+1/2*sqrt(5)", Q5).str() == "1/2+1/2*sqrt(5)");
  CHECK(NFE::parse("0-1*sqrt(2)", FieldTag{2}).str() == "0-1*sqrt(2)");
  CHECK(NFE::parse("3", Q5) == NFE::rational(3, Q5));
  CHECK_THROWS_AS(NFE::parse("1+1*sqrt(2)", Q5), Error);
  CHECK_THROWS_AS(NFE::parse("", Q), Error);
  CHECK_THROWS_AS(NFE::parse("1//2", Q), Error);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    NFE x = random_element(rng, Q5);
    CHECK(NFE::parse(x.str(), Q5) == x);
    CHECK(NFE::parse(x.str(), Q5).str() == x.str());
  }
}

TEST_CASE("sign under the positive embedding") {
  // 3 - sqrt5 > 0, 2 - sqrt5 < 0
  NFE a = NFE::rational(3, Q5) - NFE::sqrt_gen(Q5);
  NFE b = NFE::rational(2, Q5) - NFE::sqrt_gen(Q5);
  CHECK(a.sign() > 0);
  CHECK(b.sign() < 0);
  CHECK(NFE::zero(Q5).sign() == 0);
}
