#include "d2dsc/field.hpp"

#include <array>
#include <stdexcept>

namespace d2dsc {
namespace {

// Index w-2 holds the default reduction polynomial for GF(2^w).
constexpr std::array<std::uint32_t, 15> kDefaultPoly = {
    0x7,     // w=2:  x^2+x+1
    0xB,     // w=3:  x^3+x+1
    0x13,    // w=4:  x^4+x+1
    0x25,    // w=5:  x^5+x^2+1
    0x43,    // w=6:  x^6+x+1
    0x89,    // w=7:  x^7+x^3+1
    0x11B,   // w=8:  x^8+x^4+x^3+x+1
    0x211,   // w=9:  x^9+x^4+1
    0x409,   // w=10: x^10+x^3+1
    0x805,   // w=11: x^11+x^2+1
    0x1053,  // w=12: x^12+x^6+x^4+x+1
    0x201B,  // w=13: x^13+x^4+x^3+x+1
    0x4443,  // w=14: x^14+x^10+x^6+x+1
    0x8003,  // w=15: x^15+x+1
    0x1100B  // w=16: x^16+x^12+x^3+x+1
};

}  // namespace

field_spec field::default_spec(unsigned bits) {
  if (bits < 2 || bits > 16) throw field_error("field width must be in [2,16]");
  return {bits, kDefaultPoly[bits - 2]};
}

field::field(field_spec spec) : spec_(spec) {
  if (spec_.bits < 2 || spec_.bits > 16) throw field_error("field width must be in [2,16]");
  q_ = std::uint32_t{1} << spec_.bits;
  if (spec_.poly < q_ || spec_.poly >= (q_ << 1)) {
    throw field_error("reduction polynomial degree does not match field width");
  }

  log_.assign(q_, 0);
  exp_.assign(2 * (q_ - 1), 0);

  // A generator of order q-1 exists iff the polynomial is irreducible, so the
  // search below doubles as validation of the spec.
  for (std::uint32_t g = 2; g < q_; ++g) {
    std::uint32_t x = 1;
    std::uint32_t steps = 0;
    bool ok = true;
    do {
      if (steps >= q_ - 1) {
        ok = false;  // cycle longer than the full group: poly is reducible
        break;
      }
      exp_[steps] = static_cast<std::uint16_t>(x);
      x = mul_ref(static_cast<symbol>(x), static_cast<symbol>(g));
      ++steps;
    } while (x != 1);
    if (ok && steps == q_ - 1) {
      gen_ = static_cast<symbol>(g);
      for (std::uint32_t i = 0; i < q_ - 1; ++i) {
        log_[exp_[i]] = static_cast<std::uint16_t>(i);
        exp_[i + (q_ - 1)] = exp_[i];
      }
      return;
    }
    if (!ok) break;  // reducible: mul_ref is not a group on nonzero elements
  }
  throw field_error("reduction polynomial is not irreducible over GF(2)");
}

symbol field::mul_ref(symbol a, symbol b) const noexcept {
  std::uint32_t acc = 0;
  std::uint32_t aa = a;
  for (std::uint32_t bb = b; bb != 0; bb >>= 1) {
    if (bb & 1u) acc ^= aa;
    aa <<= 1;
    if (aa & q_) aa ^= spec_.poly;
  }
  return static_cast<symbol>(acc);
}

symbol field::pow(symbol a, std::uint64_t e) const noexcept {
  if (e == 0) return 1;
  if (a == 0) return 0;
  const std::uint64_t le = (static_cast<std::uint64_t>(log_[a]) * (e % (q_ - 1))) % (q_ - 1);
  return exp_[le];
}

symbol field::eval_poly(std::span<const symbol> coeffs, symbol x) const {
  if (coeffs.empty()) throw field_error("eval_poly on empty coefficient list");
  symbol acc = coeffs.back();
  for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
    acc = static_cast<symbol>(mul(acc, x) ^ coeffs[i]);
  }
  return acc;
}

}  // namespace d2dsc
