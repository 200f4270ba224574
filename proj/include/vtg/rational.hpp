#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace vtg {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "3", "-7/4" or a finite decimal such as "0.25" into an exact
// rational. Throws InputError on anything else.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

// Nearest double; used for reporting only.
double to_double(const Rational& q);

Rational pow(const Rational& base, std::uint64_t exponent);
BigInt pow(const BigInt& base, std::uint64_t exponent);

// Largest integer r with r^k <= a, for a >= 0 and k >= 1.
BigInt integer_root_floor(const BigInt& a, std::uint64_t k);

BigInt floor(const Rational& q);
BigInt ceil(const Rational& q);

bool is_integer(const Rational& q);

// Exact comparison of a^x against b where x = p/q > 0 is rational and
// a, b > 0 are rationals: returns the sign of a^x - b.
int compare_rational_power(const Rational& a, const Rational& x, const Rational& b);

// Smallest rational with denominator 10^digits that is >= value. Used to
// turn a floating estimate into a candidate exact bound.
Rational round_up(double value, int digits = 12);

}  // namespace vtg
