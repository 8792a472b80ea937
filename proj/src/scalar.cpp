#include "loccert/scalar.hpp"

#include <cctype>

namespace loccert {

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  const std::string num = text.substr(0, slash);
  if (!is_integer_token(num)) {
    throw ParseError("malformed rational '" + text + "'");
  }
  BigInt n(num);
  if (slash == std::string::npos) return Rational(n);

  const std::string den = text.substr(slash + 1);
  if (!is_integer_token(den) || den[0] == '-' || den[0] == '+') {
    throw ParseError("malformed rational '" + text + "'");
  }
  BigInt d(den);
  if (d == 0) {
    throw ParseError("zero denominator in rational '" + text + "'");
  }
  Rational r(n);
  r /= Rational(d);
  return r;
}

std::string rational_to_string(const Rational& q) { return q.str(); }

BigInt ceil_rational(const Rational& q) {
  BigInt num = numerator(q);
  BigInt den = denominator(q);  // positive by canonical form
  BigInt quot = num / den;      // truncates toward zero
  if (num > 0 && quot * den != num) ++quot;
  return quot;
}

}  // namespace loccert
