#include "vtg/rational.hpp"

#include "vtg/errors.hpp"

#include <cctype>
#include <cmath>

namespace vtg {

namespace {

BigInt parse_integer(std::string_view text) {
  if (text.empty()) throw InputError("empty integer");
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  if (pos == text.size()) throw InputError("malformed integer: " + std::string(text));
  BigInt value = 0;
  for (; pos < text.size(); ++pos) {
    if (!std::isdigit(static_cast<unsigned char>(text[pos])))
      throw InputError("malformed integer: " + std::string(text));
    value = value * 10 + (text[pos] - '0');
  }
  return negative ? BigInt(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw InputError("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash));
    BigInt den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator: " + std::string(text));
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) whole.remove_prefix(1);
    BigInt int_part = whole.empty() ? BigInt(0) : parse_integer(whole);
    BigInt frac_part = frac.empty() ? BigInt(0) : parse_integer(frac);
    if (!frac.empty() && (frac[0] == '-' || frac[0] == '+'))
      throw InputError("malformed decimal: " + std::string(text));
    BigInt scale = pow(BigInt(10), frac.size());
    Rational q = Rational(int_part) + Rational(frac_part, scale);
    return negative ? Rational(-q) : q;
  }
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

std::string to_string(const BigInt& z) { return z.str(); }

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational pow(const Rational& base, std::uint64_t exponent) {
  return Rational(pow(numerator(base), exponent), pow(denominator(base), exponent));
}

BigInt pow(const BigInt& base, std::uint64_t exponent) {
  BigInt result = 1;
  BigInt b = base;
  while (exponent > 0) {
    if (exponent & 1u) result *= b;
    exponent >>= 1u;
    if (exponent > 0) b *= b;
  }
  return result;
}

BigInt integer_root_floor(const BigInt& a, std::uint64_t k) {
  if (a < 0) throw InputError("integer_root_floor of a negative number");
  if (k == 0) throw InputError("integer_root_floor with k = 0");
  if (a < 2 || k == 1) return a;
  BigInt lo = 1;
  BigInt hi = 1;
  while (pow(hi, k) <= a) hi *= 2;
  // invariant: lo^k <= a < hi^k
  while (hi - lo > 1) {
    BigInt mid = (lo + hi) / 2;
    if (pow(mid, k) <= a)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

BigInt floor(const Rational& q) {
  BigInt n = numerator(q);
  BigInt d = denominator(q);
  BigInt quotient = n / d;  // truncates toward zero
  if (n < 0 && quotient * d != n) quotient -= 1;
  return quotient;
}

BigInt ceil(const Rational& q) { return -floor(Rational(-q)); }

bool is_integer(const Rational& q) { return denominator(q) == 1; }

int compare_rational_power(const Rational& a, const Rational& x, const Rational& b) {
  if (a <= 0 || b <= 0) throw InputError("compare_rational_power needs positive operands");
  BigInt p = numerator(x);
  BigInt q = denominator(x);
  Rational base = a;
  if (p < 0) {
    base = Rational(1) / a;
    p = -p;
  }
  // a^(p/q) vs b  <=>  a^p vs b^q
  Rational lhs = pow(base, p.convert_to<std::uint64_t>());
  Rational rhs = pow(b, q.convert_to<std::uint64_t>());
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

Rational round_up(double value, int digits) {
  if (!std::isfinite(value)) throw InputError("round_up of a non-finite value");
  long double scaled = static_cast<long double>(value) * std::pow(10.0L, digits);
  while (digits > 0 && std::fabs(scaled) > 1e17L) {
    --digits;
    scaled = static_cast<long double>(value) * std::pow(10.0L, digits);
  }
  if (std::fabs(scaled) > 1e17L) throw ResourceError("round_up: value too large");
  BigInt scale = pow(BigInt(10), static_cast<std::uint64_t>(digits));
  BigInt n(static_cast<long long>(std::ceil(scaled)) + 1);
  return Rational(n, scale);
}

}  // namespace vtg
