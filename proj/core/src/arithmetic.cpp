#include "realrays/arithmetic.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace realrays {

namespace {

constexpr std::uint64_t kSignBit = std::uint64_t{1} << 63;

}  // namespace

PrecisionContext::PrecisionContext(int bits) : bits_(bits) {
  if (bits < 2 || bits > 53) {
    throw std::invalid_argument("precision bits must lie in [2, 53], got " +
                                std::to_string(bits));
  }
  unit_ = std::ldexp(1.0, -bits);
}

namespace detail {

bool is_midpoint(double s, int bits) noexcept {
  if (bits >= 53 || s == 0.0 || !std::isfinite(s)) return false;
  const auto raw = std::bit_cast<std::uint64_t>(s);
  const int drop = 53 - bits;
  const std::uint64_t mask = (std::uint64_t{1} << drop) - 1;
  const std::uint64_t half = std::uint64_t{1} << (drop - 1);
  return (raw & mask) == half;
}

double round_significand(double s, int bits, int tail_sign) noexcept {
  if (bits >= 53 || s == 0.0 || !std::isfinite(s)) return s;
  const auto raw = std::bit_cast<std::uint64_t>(s);
  const int drop = 53 - bits;
  const std::uint64_t mask = (std::uint64_t{1} << drop) - 1;
  const std::uint64_t half = std::uint64_t{1} << (drop - 1);
  const std::uint64_t low = raw & mask;
  const std::uint64_t truncated = raw & ~mask;

  bool up;  // away from zero
  if (low > half) {
    up = true;
  } else if (low < half) {
    up = false;
  } else if (tail_sign != 0) {
    // The exact value lies beyond s in the direction of tail_sign.
    const bool negative = (raw & kSignBit) != 0;
    up = negative ? tail_sign < 0 : tail_sign > 0;
  } else {
    up = ((raw >> drop) & 1U) != 0;
  }
  // Sign-magnitude encoding: a carry out of the significand bumps the
  // exponent, which is exactly the next representable magnitude.
  const std::uint64_t result = up ? truncated + (std::uint64_t{1} << drop) : truncated;
  return std::bit_cast<double>(result);
}

}  // namespace detail

double round_value(const PrecisionContext& ctx, double x) noexcept {
  return detail::round_significand(x, ctx.bits(), 0);
}

std::string_view to_string(Op op) noexcept {
  switch (op) {
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    case Op::Sqrt: return "sqrt";
    case Op::Acos: return "acos";
  }
  return "?";
}

double rounded_op(const PrecisionContext& ctx, Op op, double a, double b) {
  const RoundedArithmetic arith(ctx);
  switch (op) {
    case Op::Add: return arith.add(a, b);
    case Op::Sub: return arith.sub(a, b);
    case Op::Mul: return arith.mul(a, b);
    case Op::Div:
      if (b == 0.0) throw std::domain_error("rounded_op: division by zero");
      return arith.div(a, b);
    case Op::Sqrt:
      if (a < 0.0) throw std::domain_error("rounded_op: sqrt of negative value");
      return arith.sqrt(a);
    case Op::Acos:
      if (!(a >= -1.0 - kAcosClampTolerance && a <= 1.0 + kAcosClampTolerance)) {
        throw std::domain_error("rounded_op: arccos argument outside [-1, 1]");
      }
      return arith.acos(a);
  }
  throw std::invalid_argument("rounded_op: unknown operation");
}

double required_precision(int n, int max_degree, int max_terms, double kappa, double C) {
  if (n < 1 || max_degree < 1 || max_terms < 1) {
    throw std::invalid_argument("required_precision: n, D, S must be positive");
  }
  if (!(kappa >= 1.0) || !(C > 0.0)) {
    throw std::invalid_argument("required_precision: need kappa >= 1 and C > 0");
  }
  if (std::isinf(kappa)) return 0.0;
  const double dn = n;
  const double d2 = static_cast<double>(max_degree) * max_degree;
  const double k2 = kappa * kappa;
  const double log_s = std::log2(static_cast<double>(max_terms));
  const double denom = C * d2 * std::pow(dn, 2.5) * k2 * kappa * (log_s + std::pow(dn, 1.5) * d2 * k2);
  return 1.0 / denom;
}

}  // namespace realrays
