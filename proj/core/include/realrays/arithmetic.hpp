#pragma once

// Arithmetic providers for the counting pipeline.
//
// Every numeric kernel that participates in a certification decision is a
// template over an arithmetic provider.  `HostArithmetic` is plain IEEE
// double.  `RoundedArithmetic` emulates a floating-point system whose
// significand has `bits` bits: each elementary result is the host result
// rounded to nearest (ties to even) on that significand, so that
//
//     fl(a op b) = (a op b)(1 + delta),  |delta| <= u = 2^-bits.
//
// The exponent range is the host's; there is no emulation of overflow,
// underflow or gradual underflow.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace realrays {

class PrecisionContext {
 public:
  /// Significand width in bits, 2 <= bits <= 53.
  explicit PrecisionContext(int bits);

  int bits() const noexcept { return bits_; }
  /// Round-off unit u = 2^-bits.
  double unit() const noexcept { return unit_; }

 private:
  int bits_;
  double unit_;
};

/// Rounds `x` to the context's significand width, nearest-even.
double round_value(const PrecisionContext& ctx, double x) noexcept;

enum class Op { Add, Sub, Mul, Div, Sqrt, Acos };

std::string_view to_string(Op op) noexcept;

/// r(a op b).  Unary ops ignore `b`.  Throws std::domain_error on division
/// by zero, sqrt of a negative number, or an arccos argument outside [-1, 1]
/// by more than the clamping tolerance.
double rounded_op(const PrecisionContext& ctx, Op op, double a, double b = 0.0);

/// Advisory precision bound u_max = 1 / (C D^2 n^{5/2} kappa^3 (log2 S + n^{3/2} D^2 kappa^2)).
/// The multiplicative constant C is not fixed by the underlying analysis.
double required_precision(int n, int max_degree, int max_terms, double kappa, double C = 1.0);

/// Arccos arguments within this distance of [-1, 1] are clamped instead of rejected.
inline constexpr double kAcosClampTolerance = 1e-6;

namespace detail {

// Rounds the 53-bit value `s` to `bits` bits.  `tail_sign` is the sign of
// the exact remainder (true result minus s); it breaks ties that exist only
// because s itself was already rounded.
double round_significand(double s, int bits, int tail_sign) noexcept;

bool is_midpoint(double s, int bits) noexcept;

}  // namespace detail

struct HostArithmetic {
  static constexpr bool kRounded = false;

  double round(double x) const noexcept { return x; }
  double add(double a, double b) const noexcept { return a + b; }
  double sub(double a, double b) const noexcept { return a - b; }
  double mul(double a, double b) const noexcept { return a * b; }
  double div(double a, double b) const noexcept { return a / b; }
  double sqrt(double a) const noexcept { return std::sqrt(a); }
  double acos(double a) const noexcept {
    return std::acos(a < -1.0 ? -1.0 : (a > 1.0 ? 1.0 : a));
  }
};

class RoundedArithmetic {
 public:
  static constexpr bool kRounded = true;

  explicit RoundedArithmetic(PrecisionContext ctx) noexcept : ctx_(ctx) {}

  const PrecisionContext& context() const noexcept { return ctx_; }

  double round(double x) const noexcept {
    return ctx_.bits() >= 53 ? x : detail::round_significand(x, ctx_.bits(), 0);
  }

  double add(double a, double b) const noexcept {
    const double s = a + b;
    if (ctx_.bits() >= 53) return s;
    int tail = 0;
    if (detail::is_midpoint(s, ctx_.bits())) {
      // TwoSum remainder.
      const double bb = s - a;
      const double err = (a - (s - bb)) + (b - bb);
      tail = (err > 0) - (err < 0);
    }
    return detail::round_significand(s, ctx_.bits(), tail);
  }

  double sub(double a, double b) const noexcept { return add(a, -b); }

  double mul(double a, double b) const noexcept {
    const double p = a * b;
    if (ctx_.bits() >= 53) return p;
    int tail = 0;
    if (detail::is_midpoint(p, ctx_.bits())) {
      const double err = std::fma(a, b, -p);
      tail = (err > 0) - (err < 0);
    }
    return detail::round_significand(p, ctx_.bits(), tail);
  }

  double div(double a, double b) const noexcept {
    const double q = a / b;
    if (ctx_.bits() >= 53 || !std::isfinite(q)) return q;
    int tail = 0;
    if (detail::is_midpoint(q, ctx_.bits())) {
      // sign(a/b - q) = sign((a - q b) / b)
      const double rem = std::fma(-q, b, a);
      const double err = b > 0 ? rem : -rem;
      tail = (err > 0) - (err < 0);
    }
    return detail::round_significand(q, ctx_.bits(), tail);
  }

  double sqrt(double a) const noexcept {
    const double r = std::sqrt(a);
    if (ctx_.bits() >= 53) return r;
    int tail = 0;
    if (detail::is_midpoint(r, ctx_.bits())) {
      const double err = std::fma(-r, r, a);
      tail = (err > 0) - (err < 0);
    }
    return detail::round_significand(r, ctx_.bits(), tail);
  }

  // Host-precision arccos, rounded once.
  double acos(double a) const noexcept {
    return round(std::acos(a < -1.0 ? -1.0 : (a > 1.0 ? 1.0 : a)));
  }

 private:
  PrecisionContext ctx_;
};

}  // namespace realrays
