#include "orbkit/scalars.hpp"

#include <cstdlib>
#include <ostream>
#include <sstream>

namespace orbkit {

bool is_squarefree(long d) {
  if (d < 1) return false;
  for (long p = 2; p * p <= d; ++p) {
    if (d % (p * p) == 0) return false;
  }
  return true;
}

NumberFieldElement::NumberFieldElement(Rat a, Rat b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
  if (!is_squarefree(d_)) fail(ErrorCode::ParseError, "field tag " + std::to_string(d_) + " is not squarefree >= 1");
  if (a_.get_den() == 0 || b_.get_den() == 0) fail(ErrorCode::DivisionByZero, "zero denominator");
  a_.canonicalize();
  b_.canonicalize();
  if (d_ == 1 && b_ != 0) {
    a_ += b_;
    b_ = 0;
  }
}

NumberFieldElement NumberFieldElement::rational(const Rat& r, FieldTag f) { return NumberFieldElement(r, 0, f.d); }

NumberFieldElement NumberFieldElement::sqrt_gen(FieldTag f) {
  if (f.d == 1) return one(f);
  return NumberFieldElement(0, 1, f.d);
}

void NumberFieldElement::check_same_field(const NumberFieldElement& o) const {
  if (d_ != o.d_)
    fail(ErrorCode::MixedFields,
         "cannot combine sqrt(" + std::to_string(d_) + ") with sqrt(" + std::to_string(o.d_) + ") values");
}

int NumberFieldElement::sign() const {
  int sa = sgn(a_), sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // opposite signs: compare |a|^2 with d*|b|^2
  Rat lhs = a_ * a_, rhs = Rat(d_) * b_ * b_;
  int c = cmp(lhs, rhs);
  if (c == 0) return 0;  // cannot happen for d squarefree > 1 with b != 0
  return c > 0 ? sa : sb;
}

NumberFieldElement NumberFieldElement::operator+(const NumberFieldElement& o) const {
  check_same_field(o);
  return NumberFieldElement(a_ + o.a_, b_ + o.b_, d_);
}

NumberFieldElement NumberFieldElement::operator-(const NumberFieldElement& o) const {
  check_same_field(o);
  return NumberFieldElement(a_ - o.a_, b_ - o.b_, d_);
}

NumberFieldElement NumberFieldElement::operator*(const NumberFieldElement& o) const {
  check_same_field(o);
  return NumberFieldElement(a_ * o.a_ + Rat(d_) * b_ * o.b_, a_ * o.b_ + b_ * o.a_, d_);
}

NumberFieldElement NumberFieldElement::inverse() const {
  if (is_zero()) fail(ErrorCode::DivisionByZero, "inverse of zero");
  Rat n = a_ * a_ - Rat(d_) * b_ * b_;
  if (n == 0) fail(ErrorCode::Internal, "zero norm for nonzero element");
  return NumberFieldElement(a_ / n, -b_ / n, d_);
}

NumberFieldElement NumberFieldElement::operator/(const NumberFieldElement& o) const {
  check_same_field(o);
  if (o.is_zero()) fail(ErrorCode::DivisionByZero, "division by zero");
  return *this * o.inverse();
}

NumberFieldElement NumberFieldElement::operator-() const { return NumberFieldElement(-a_, -b_, d_); }

bool NumberFieldElement::operator==(const NumberFieldElement& o) const {
  return d_ == o.d_ && a_ == o.a_ && b_ == o.b_;
}

NumberFieldElement NumberFieldElement::conjugate() const { return NumberFieldElement(a_, -b_, d_); }

NumberFieldElement NumberFieldElement::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  NumberFieldElement r = one(field());
  NumberFieldElement base = *this;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

bool rational_sqrt(const Rat& r, Rat& out) {
  if (r < 0) return false;
  mpz_class num = r.get_num(), den = r.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return false;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
  out = Rat(sn, sd);
  out.canonicalize();
  return true;
}

bool NumberFieldElement::has_sqrt() const {
  try {
    (void)sqrt();
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoSquareRootInField) return false;
    throw;
  }
}

NumberFieldElement NumberFieldElement::sqrt() const {
  if (is_zero()) return zero(field());
  if (sign() < 0) fail(ErrorCode::NoSquareRootInField, "negative element " + str() + " has no real square root");
  if (b_ == 0) {
    Rat s;
    if (rational_sqrt(a_, s)) return NumberFieldElement(s, 0, d_);
    if (d_ > 1) {
      Rat t2 = a_ / Rat(d_);
      Rat t;
      if (rational_sqrt(t2, t)) return NumberFieldElement(0, t, d_);
    }
    fail(ErrorCode::NoSquareRootInField, "no square root of " + str() + " in the tagged field");
  }
  // (s + t*sqrt(d))^2 = a + b*sqrt(d): s^2 + d t^2 = a, 2 s t = b
  Rat disc = a_ * a_ - Rat(d_) * b_ * b_;
  Rat r;
  if (rational_sqrt(disc, r)) {
    for (const Rat& s2 : {Rat((a_ + r) / 2), Rat((a_ - r) / 2)}) {
      Rat s;
      if (rational_sqrt(s2, s) && s != 0) {
        Rat t = b_ / (2 * s);
        NumberFieldElement cand(s, t, d_);
        if (cand * cand == *this) return cand.sign() >= 0 ? cand : -cand;
      }
    }
  }
  fail(ErrorCode::NoSquareRootInField, "no square root of " + str() + " in the tagged field");
}

static std::string rat_str(const Rat& r) {
  std::ostringstream os;
  os << r.get_num();
  if (r.get_den() != 1) os << "/" << r.get_den();
  return os.str();
}

std::string NumberFieldElement::str() const {
  if (b_ == 0) return rat_str(a_);
  std::string out = rat_str(a_);
  if (sgn(b_) >= 0)
    out += "+" + rat_str(b_);
  else
    out += "-" + rat_str(-b_);
  out += "*sqrt(" + std::to_string(d_) + ")";
  return out;
}

std::ostream& operator<<(std::ostream& os, const NumberFieldElement& x) { return os << x.str(); }

namespace {

// grammar: rat ::= ['-'] digits ['/' digits]
//          elem ::= rat | rat ('+'|'-') urat '*sqrt(' digits ')'
struct Cursor {
  const std::string& s;
  size_t i = 0;
  bool done() const { return i >= s.size(); }
  char peek() const { return done() ? '\0' : s[i]; }
  void expect(char c, const std::string& what) {
    if (peek() != c) fail(ErrorCode::ParseError, "expected '" + std::string(1, c) + "' in " + what);
    ++i;
  }
};

mpz_class parse_digits(Cursor& c, const std::string& ctx) {
  size_t start = c.i;
  while (!c.done() && isdigit(static_cast<unsigned char>(c.peek()))) ++c.i;
  if (c.i == start) fail(ErrorCode::ParseError, "expected digits in scalar '" + ctx + "'");
  return mpz_class(c.s.substr(start, c.i - start));
}

Rat parse_rat(Cursor& c, bool allow_sign, const std::string& ctx) {
  bool neg = false;
  if (allow_sign && (c.peek() == '-' || c.peek() == '+')) {
    neg = c.peek() == '-';
    ++c.i;
  }
  mpz_class num = parse_digits(c, ctx);
  mpz_class den = 1;
  if (c.peek() == '/') {
    ++c.i;
    den = parse_digits(c, ctx);
    if (den == 0) fail(ErrorCode::ParseError, "zero denominator in '" + ctx + "'");
  }
  Rat r(num, den);
  r.canonicalize();
  return neg ? Rat(-r) : r;
}

}  // namespace

NumberFieldElement NumberFieldElement::parse(const std::string& text, FieldTag ambient) {
  std::string s;
  for (char ch : text)
    if (!isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) fail(ErrorCode::ParseError, "empty scalar");
  Cursor c{s};
  Rat a = parse_rat(c, true, text);
  if (c.done()) return rational(a, ambient);
  char op = c.peek();
  if (op != '+' && op != '-') fail(ErrorCode::ParseError, "bad scalar '" + text + "'");
  ++c.i;
  Rat b = parse_rat(c, false, text);
  if (op == '-') b = -b;
  c.expect('*', text);
  static const std::string kSqrt = "sqrt(";
  if (c.s.compare(c.i, kSqrt.size(), kSqrt) != 0) fail(ErrorCode::ParseError, "bad scalar '" + text + "'");
  c.i += kSqrt.size();
  mpz_class d = parse_digits(c, text);
  c.expect(')', text);
  if (!c.done()) fail(ErrorCode::ParseError, "trailing characters in scalar '" + text + "'");
  long dl = d.get_si();
  if (dl != ambient.d)
    fail(ErrorCode::MixedFields,
         "scalar '" + text + "' lives in sqrt(" + std::to_string(dl) + ") but the ambient field is sqrt(" +
             std::to_string(ambient.d) + ")");
  return NumberFieldElement(a, b, ambient.d);
}

}  // namespace orbkit
