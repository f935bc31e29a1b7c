#pragma once

// The fast-growing functions F_m, F_{m,n} over a base d and the
// interpretation I of ground terms they induce. Values are exact; anything
// whose bit length would exceed the budget is reported as overflow.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "plpo/precedence.hpp"
#include "plpo/term.hpp"

namespace plpo {

using BigNat = boost::multiprecision::cpp_int;

/// std::nullopt is the overflow outcome.
using Bounded = std::optional<BigNat>;

struct EvalBudget {
  std::size_t max_bits = 1'000'000;
};

inline std::size_t bit_length(const BigNat& x) {
  return x == 0 ? 0 : static_cast<std::size_t>(boost::multiprecision::msb(x)) + 1;
}

namespace detail {

inline void check_base(std::uint64_t d) {
  if (d < 2)
    throw Error("base d must be at least 2, got " + std::to_string(d));
}

/// base^exponent, or overflow when the result exceeds the budget.
inline Bounded bounded_pow(std::uint64_t base, const BigNat& exponent, const EvalBudget& budget) {
  if (bit_length(exponent) > 63)
    return std::nullopt;
  auto e = static_cast<std::uint64_t>(exponent);
  const std::size_t base_bits = bit_length(BigNat(base));
  // base^e has at least e*(bits(base)-1)+1 bits.
  if (e > 0 && e > budget.max_bits / (base_bits - 1))
    return std::nullopt;
  BigNat r = boost::multiprecision::pow(BigNat(base), static_cast<unsigned>(e));
  if (bit_length(r) > budget.max_bits)
    return std::nullopt;
  return r;
}

}  // namespace detail

inline Bounded f_m(std::uint64_t m, const BigNat& x, std::uint64_t d, const EvalBudget& budget = {});

/// F_m iterated `count` times on x.
inline Bounded iterate_f_m(std::uint64_t m, const BigNat& count, BigNat x, std::uint64_t d,
                           const EvalBudget& budget = {}) {
  detail::check_base(d);
  if (bit_length(count) > budget.max_bits)
    return std::nullopt;
  // F_m(x) >= 2^(x+1), so the loop overflows after a handful of rounds
  // whenever count is large.
  for (BigNat i = 0; i < count; ++i) {
    auto next = f_m(m, x, d, budget);
    if (!next)
      return std::nullopt;
    x = std::move(*next);
  }
  return x;
}

/// F_0(x) = d^(x+1); F_{m+1}(x) = F_m^{d(1+x)}(x).
inline Bounded f_m(std::uint64_t m, const BigNat& x, std::uint64_t d, const EvalBudget& budget) {
  detail::check_base(d);
  if (m == 0)
    return detail::bounded_pow(d, x + 1, budget);
  BigNat count = BigNat(d) * (x + 1);
  return iterate_f_m(m - 1, count, x, d, budget);
}

namespace detail {

// F_{m,n} without the k >= 1 precondition: k = 0 uses the k <= n branch with
// an empty sum throughout.
inline Bounded f_mn_any(std::uint64_t m, std::uint64_t n, std::span<const BigNat> xs,
                        std::uint64_t d, const EvalBudget& budget) {
  check_base(d);
  BigNat prev = 0;
  BigNat prefix = 0, total = 0;
  for (const auto& x : xs)
    total += x;
  for (std::uint64_t i = 0; i < n; ++i) {
    BigNat count;
    const BigNat* arg;
    if (i < xs.size()) {
      prefix += xs[i];
      count = prev + BigNat(d) * (1 + xs[i]);
      arg = &prefix;
    } else {
      count = prev + d;
      arg = &total;
    }
    auto next = iterate_f_m(m, count, *arg, d, budget);
    if (!next)
      return std::nullopt;
    prev = std::move(*next);
  }
  return prev;
}

}  // namespace detail

inline Bounded f_mn(std::uint64_t m, std::uint64_t n, std::span<const BigNat> xs, std::uint64_t d,
                    const EvalBudget& budget = {}) {
  if (xs.empty())
    throw Error("F_{m,n} needs at least one argument");
  return detail::f_mn_any(m, n, xs, d, budget);
}

struct InterpParams {
  std::uint64_t ell = 2;
  std::uint64_t d = 2;
  std::uint64_t K = 2;
  std::vector<int> rank;
};

/// Smallest parameters for which every rule step of an oriented system
/// strictly decreases the interpretation: ell covers every rhs size, K the
/// normal arities, and d all three bounds on the base.
inline InterpParams derive_params(const Trs& trs) {
  InterpParams p;
  std::uint64_t max_rhs = 0;
  for (const auto& r : trs.rules)
    max_rhs = std::max<std::uint64_t>(max_rhs, r.rhs.size());
  p.ell = std::max<std::uint64_t>(2, max_rhs);
  p.K = 2;
  std::uint64_t max_arity = 0;
  for (const auto& f : trs.signature.symbols()) {
    p.K = std::max<std::uint64_t>(p.K, f.normal_arity());
    max_arity = std::max<std::uint64_t>(max_arity, f.arity());
  }
  p.d = std::max({max_arity + 1, p.ell * (p.K + 2) + 2, max_rhs + 1});
  p.rank = canonical_ranks(trs.signature, trs.precedence);
  return p;
}

struct InterpretResult {
  Bounded value;
  std::optional<Term> overflow_at;  // innermost subterm whose value overflowed

  bool overflow() const { return !value.has_value(); }
};

namespace detail {

inline void check_interp_params(const InterpParams& p, std::size_t nsymbols) {
  if (p.ell < 2)
    throw Error("ell must be at least 2");
  if (p.K < 2)
    throw Error("K must be at least 2");
  check_base(p.d);
  if (p.rank.size() != nsymbols)
    throw Error("rank map does not match the signature");
}

/// d^(F_{level,K+1}(normal)) * (sum(safe) + 1).
inline Bounded combine(std::uint64_t level, std::uint64_t K, std::uint64_t d,
                       std::span<const BigNat> normal, std::span<const BigNat> safe,
                       const EvalBudget& budget) {
  auto j = f_mn_any(level, K + 1, normal, d, budget);
  if (!j)
    return std::nullopt;
  auto power = bounded_pow(d, *j, budget);
  if (!power)
    return std::nullopt;
  BigNat s = 1;
  for (const auto& v : safe)
    s += v;
  BigNat r = *power * s;
  if (bit_length(r) > budget.max_bits)
    return std::nullopt;
  return r;
}

inline InterpretResult interpret_rec(const Signature& sig, const Term& t, const InterpParams& p,
                                     const EvalBudget& budget) {
  std::vector<BigNat> normal, safe;
  for (auto pos : sig.normal_positions(t.symbol())) {
    auto r = interpret_rec(sig, t.arg(pos), p, budget);
    if (r.overflow())
      return r;
    normal.push_back(std::move(*r.value));
  }
  for (auto pos : sig.safe_positions(t.symbol())) {
    auto r = interpret_rec(sig, t.arg(pos), p, budget);
    if (r.overflow())
      return r;
    safe.push_back(std::move(*r.value));
  }
  auto level = static_cast<std::uint64_t>(p.rank[t.symbol()]) + p.ell;
  auto v = combine(level, p.K, p.d, normal, safe, budget);
  if (!v)
    return {std::nullopt, t};
  return {std::move(v), std::nullopt};
}

}  // namespace detail

inline InterpretResult interpret(const Signature& sig, const Term& t, const InterpParams& p,
                                 const EvalBudget& budget = {}) {
  if (!t.is_ground())
    throw Error("interpretation is defined on ground terms only");
  detail::check_interp_params(p, sig.size());
  return detail::interpret_rec(sig, t, p, budget);
}

/// J_n(t) = F_{rank(f)+ell, n}(I(t_1), ..., I(t_k)).
inline InterpretResult j_n(const Signature& sig, const Term& t, std::uint64_t n,
                           const InterpParams& p, const EvalBudget& budget = {}) {
  if (!t.is_ground())
    throw Error("interpretation is defined on ground terms only");
  detail::check_interp_params(p, sig.size());
  std::vector<BigNat> normal;
  for (auto pos : sig.normal_positions(t.symbol())) {
    auto r = detail::interpret_rec(sig, t.arg(pos), p, budget);
    if (r.overflow())
      return r;
    normal.push_back(std::move(*r.value));
  }
  auto level = static_cast<std::uint64_t>(p.rank[t.symbol()]) + p.ell;
  auto v = detail::f_mn_any(level, n, normal, p.d, budget);
  if (!v)
    return {std::nullopt, t};
  return {std::move(v), std::nullopt};
}

}  // namespace plpo
