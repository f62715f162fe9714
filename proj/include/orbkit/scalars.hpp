#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>

#include "orbkit/errors.hpp"

namespace orbkit {

using Rat = mpq_class;

// Ambient coefficient field: Q when d == 1, otherwise the real quadratic
// extension Q(sqrt(d)) with d squarefree and > 1.
struct FieldTag {
  long d = 1;
  bool operator==(const FieldTag&) const = default;
};

bool is_squarefree(long d);

// Element a + b*sqrt(d). Elements of different fields never combine; use
// NumberFieldElement::rational(r, field) to lift rational constants into an
// ambient field. Values are immutable in spirit: every operation returns a
// fresh canonical element.
class NumberFieldElement {
 public:
  NumberFieldElement() : a_(0), b_(0), d_(1) {}
  NumberFieldElement(Rat a, Rat b, long d);

  static NumberFieldElement rational(const Rat& r, FieldTag f = {});
  static NumberFieldElement zero(FieldTag f) { return rational(0, f); }
  static NumberFieldElement one(FieldTag f) { return rational(1, f); }
  static NumberFieldElement sqrt_gen(FieldTag f);  // sqrt(d) itself

  const Rat& rational_part() const { return a_; }
  const Rat& radical_part() const { return b_; }
  long d() const { return d_; }
  FieldTag field() const { return {d_}; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_rational() const { return b_ == 0; }
  // sign under the embedding sqrt(d) > 0
  int sign() const;

  NumberFieldElement operator+(const NumberFieldElement& o) const;
  NumberFieldElement operator-(const NumberFieldElement& o) const;
  NumberFieldElement operator*(const NumberFieldElement& o) const;
  NumberFieldElement operator/(const NumberFieldElement& o) const;
  NumberFieldElement operator-() const;
  NumberFieldElement& operator+=(const NumberFieldElement& o) { return *this = *this + o; }
  NumberFieldElement& operator-=(const NumberFieldElement& o) { return *this = *this - o; }
  NumberFieldElement& operator*=(const NumberFieldElement& o) { return *this = *this * o; }
  NumberFieldElement& operator/=(const NumberFieldElement& o) { return *this = *this / o; }

  bool operator==(const NumberFieldElement& o) const;
  bool operator!=(const NumberFieldElement& o) const { return !(*this == o); }

  NumberFieldElement inverse() const;
  NumberFieldElement conjugate() const;  // a - b*sqrt(d)
  NumberFieldElement pow(long e) const;

  // Exact square root in the tagged field; positive embedding branch.
  // Throws NoSquareRootInField when none exists.
  NumberFieldElement sqrt() const;
  bool has_sqrt() const;

  // Text form "a/b" or "a/b+c/e*sqrt(d)"; used verbatim in fixture files.
  std::string str() const;
  static NumberFieldElement parse(const std::string& text, FieldTag ambient);

 private:
  void check_same_field(const NumberFieldElement& o) const;
  Rat a_, b_;
  long d_;
};

using NFE = NumberFieldElement;

std::ostream& operator<<(std::ostream& os, const NumberFieldElement& x);

// sqrt of a nonnegative rational if it is a perfect square
bool rational_sqrt(const Rat& r, Rat& out);

}  // namespace orbkit
