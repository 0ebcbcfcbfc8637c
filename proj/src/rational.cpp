#include "d2dsc/rational.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace d2dsc {

bigint binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  bigint acc = 1;
  for (unsigned i = 1; i <= k; ++i) {
    acc *= (n - k + i);
    acc /= i;  // exact at every step: acc is C(n-k+i, i)
  }
  return acc;
}

std::string fraction_string(const rational& r) {
  const bigint num = boost::multiprecision::numerator(r);
  const bigint den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string decimal_string(const rational& r, int sig) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", sig, to_double(r));
  return buf;
}

double to_double(const rational& r) { return r.convert_to<double>(); }

rational parse_rational(std::string_view text) {
  auto fail = [&] {
    throw std::invalid_argument("not a rational literal: '" + std::string(text) + "'");
  };
  if (text.empty()) fail();

  const auto slash = text.find('/');
  const auto dot = text.find('.');
  if (slash != std::string_view::npos && dot != std::string_view::npos) fail();

  auto parse_int = [&](std::string_view s) -> bigint {
    if (s.empty()) fail();
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
      neg = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) fail();
    bigint v = 0;
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) fail();
      v = v * 10 + (s[i] - '0');
    }
    return neg ? -v : v;
  };

  if (slash != std::string_view::npos) {
    const bigint num = parse_int(text.substr(0, slash));
    const bigint den = parse_int(text.substr(slash + 1));
    if (den == 0) fail();
    return rational(num, den);
  }
  if (dot != std::string_view::npos) {
    std::string_view head = text.substr(0, dot);
    std::string_view tail = text.substr(dot + 1);
    bool neg = false;
    if (!head.empty() && (head[0] == '+' || head[0] == '-')) {
      neg = head[0] == '-';
      head.remove_prefix(1);
    }
    if (head.empty() && tail.empty()) fail();
    bigint num = head.empty() ? bigint(0) : parse_int(head);
    bigint den = 1;
    for (char c : tail) {
      if (!std::isdigit(static_cast<unsigned char>(c))) fail();
      num = num * 10 + (c - '0');
      den *= 10;
    }
    rational r(num, den);
    return neg ? -r : r;
  }
  return rational(parse_int(text));
}

}  // namespace d2dsc
