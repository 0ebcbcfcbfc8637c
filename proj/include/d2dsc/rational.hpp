#pragma once

// Exact rational arithmetic for rate/memory bookkeeping. All bound and
// envelope verdicts are computed over these; floating point appears only in
// rendered output.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace d2dsc {

using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

bigint binomial(unsigned n, unsigned k);

// "a/b" in lowest terms; integers render without the "/1".
std::string fraction_string(const rational& r);

// Decimal rendering with up to `sig` significant digits.
std::string decimal_string(const rational& r, int sig = 12);

double to_double(const rational& r);

// Accepts "11/2", "5.5", "-3", "4.". Throws std::invalid_argument on junk.
rational parse_rational(std::string_view text);

}  // namespace d2dsc
