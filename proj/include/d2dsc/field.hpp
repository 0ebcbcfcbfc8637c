#pragma once

// Binary extension field GF(2^w), 2 <= w <= 16. Addition is XOR.
// Multiplication has two independent paths: log/antilog tables (the fast
// path) and carry-less shift-reduce (the reference path used to build the
// tables and to cross-check them in tests). Table construction searches for
// a multiplicative generator; finding one of order 2^w - 1 certifies the
// reduction polynomial at the same time.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace d2dsc {

using symbol = std::uint16_t;

struct field_spec {
  unsigned bits = 16;
  std::uint32_t poly = 0x1100B;  // includes the leading x^bits term

  friend bool operator==(const field_spec&, const field_spec&) = default;
};

class field_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class field {
 public:
  explicit field(field_spec spec);

  // Lowest-weight primitive polynomial for each supported width.
  static field_spec default_spec(unsigned bits);

  unsigned bits() const noexcept { return spec_.bits; }
  std::uint32_t poly() const noexcept { return spec_.poly; }
  std::uint32_t order() const noexcept { return q_; }
  symbol generator() const noexcept { return gen_; }

  static symbol add(symbol a, symbol b) noexcept { return a ^ b; }

  symbol mul(symbol a, symbol b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }

  symbol mul_ref(symbol a, symbol b) const noexcept;  // carry-less reference

  symbol inv(symbol a) const {
    if (a == 0) throw field_error("inverse of zero");
    return exp_[q_ - 1 - log_[a]];
  }

  symbol pow(symbol a, std::uint64_t e) const noexcept;

  // Evaluates sum_i coeffs[i] * x^i by Horner's rule. coeffs must be nonempty.
  symbol eval_poly(std::span<const symbol> coeffs, symbol x) const;

  void check_element(symbol a) const {
    if (a >= q_) throw field_error("symbol out of field range");
  }

 private:
  field_spec spec_;
  std::uint32_t q_ = 0;
  symbol gen_ = 0;
  std::vector<std::uint16_t> log_;  // index 0 unused
  std::vector<std::uint16_t> exp_;  // doubled so mul never reduces mod q-1
};

}  // namespace d2dsc
