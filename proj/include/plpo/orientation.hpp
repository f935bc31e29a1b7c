#pragma once

// Compatibility checks R ⊆ >_plpo and exhaustive search for an orienting
// parameterisation (ranks, lex set, argument separations).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "plpo/orders.hpp"
#include "plpo/term.hpp"

namespace plpo {

struct RuleOrientation {
  Rule rule;
  CertPtr certificate;  // null when the rule is not oriented
};

struct OrientationResult {
  bool oriented = false;
  std::vector<RuleOrientation> per_rule;
  Signature signature;  // carries the separation that was used
  OrderParams params;

  std::size_t oriented_count() const {
    return static_cast<std::size_t>(std::count_if(
        per_rule.begin(), per_rule.end(), [](const auto& r) { return r.certificate != nullptr; }));
  }
};

/// Violations of rank/precedence compatibility, D_lex ⊆ D and shape.
inline std::vector<std::string> validate_params(const Trs& trs, const OrderParams& p) {
  std::vector<std::string> out;
  const auto& sig = trs.signature;
  if (p.rank.size() != sig.size())
    out.push_back("rank map has " + std::to_string(p.rank.size()) + " entries for " +
                  std::to_string(sig.size()) + " symbols");
  if (p.lex.size() != sig.size())
    out.push_back("lex set has " + std::to_string(p.lex.size()) + " entries for " +
                  std::to_string(sig.size()) + " symbols");
  if (!out.empty())
    return out;
  for (SymbolId f = 0; f < sig.size(); ++f) {
    if (p.rank[f] < 0)
      out.push_back("negative rank for '" + sig[f].name + "'");
    if (p.lex[f] && !sig[f].is_defined())
      out.push_back("lex set contains constructor '" + sig[f].name + "'");
  }
  for (const auto& pr : trs.precedence) {
    auto a = sig.find(pr.greater), b = sig.find(pr.lesser);
    if (!a || !b) {
      out.push_back("precedence mentions undeclared symbol");
      continue;
    }
    if (pr.strict && p.rank[*a] <= p.rank[*b])
      out.push_back("rank(" + pr.greater + ") = " + std::to_string(p.rank[*a]) +
                    " does not exceed rank(" + pr.lesser + ") = " + std::to_string(p.rank[*b]));
    if (!pr.strict && p.rank[*a] != p.rank[*b])
      out.push_back("rank(" + pr.greater + ") differs from rank(" + pr.lesser + ")");
  }
  return out;
}

namespace detail {

// Rule indices in increasing rhs size (stable).
inline std::vector<std::size_t> rules_by_rhs_size(const std::vector<Rule>& rules) {
  std::vector<std::size_t> order(rules.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rules[a].rhs.size() < rules[b].rhs.size();
  });
  return order;
}

inline OrientationResult orient_all(const Signature& sig, const std::vector<Rule>& rules,
                                    const OrderParams& p) {
  OrientationResult r;
  r.signature = sig;
  r.params = p;
  Comparator cmp(r.signature, p);
  r.oriented = true;
  for (const auto& rule : rules) {
    auto c = cmp.plpo_gt(rule.lhs, rule.rhs);
    r.oriented = r.oriented && c != nullptr;
    r.per_rule.push_back({rule, c});
  }
  return r;
}

}  // namespace detail

inline OrientationResult check_trs(const Trs& trs, const OrderParams& p) {
  if (auto v = validate_params(trs, p); !v.empty())
    throw Error("inconsistent order parameters: " + v.front());
  return detail::orient_all(trs.signature, trs.rules, p);
}

inline OrientationResult check_trs(const Trs& trs) { return check_trs(trs, default_params(trs)); }

struct SearchSpace {
  int max_rank = 0;  // 0: number of symbols
  bool vary_rank = true;
  bool vary_lex = true;
  bool vary_separation = true;
  bool vary_constructor_separation = false;
  double timeout_seconds = 0;  // 0: no timeout
  bool lpo = false;            // search for an LPO orientation instead (ranks only)

  static SearchSpace full() {
    SearchSpace s;
    s.vary_constructor_separation = true;
    return s;
  }
};

enum class SearchStatus { found, exhausted, timeout };

struct SearchOutcome {
  SearchStatus status = SearchStatus::exhausted;
  std::optional<OrientationResult> result;
  std::size_t candidates = 0;
};

namespace detail {

/// Rank maps with values in [0, max_rank) in lexicographic order, keeping only
/// those whose value set is {0..r-1}. Every other map is order-isomorphic to a
/// kept one that is elementwise smaller, hence earlier, so the first orienting
/// map of the full enumeration is always kept.
inline std::vector<std::vector<int>> dense_rank_maps(std::size_t n, int max_rank) {
  std::vector<std::vector<int>> out;
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<int> cur(n, 0);
  while (true) {
    std::vector<bool> used(static_cast<std::size_t>(max_rank), false);
    for (int v : cur)
      used[static_cast<std::size_t>(v)] = true;
    auto first_gap = std::find(used.begin(), used.end(), false);
    if (std::all_of(first_gap, used.end(), [](bool b) { return !b; }))
      out.push_back(cur);
    std::size_t i = n;
    while (i > 0 && cur[i - 1] == max_rank - 1)
      cur[--i] = 0;
    if (i == 0)
      break;
    ++cur[i - 1];
  }
  return out;
}

struct Choice {
  SymbolId symbol;
  std::size_t width;  // bits
};

// Odometer over a list of bit-vectors, most significant choice first.
class BitOdometer {
public:
  explicit BitOdometer(std::vector<Choice> choices) : choices_(std::move(choices)) {
    for (const auto& c : choices_)
      bits_.emplace_back(c.width, false);
  }
  const std::vector<Choice>& choices() const { return choices_; }
  const std::vector<std::vector<bool>>& bits() const { return bits_; }
  bool next() {
    for (std::size_t ci = choices_.size(); ci-- > 0;) {
      auto& b = bits_[ci];
      for (std::size_t k = b.size(); k-- > 0;) {
        if (!b[k]) {
          b[k] = true;
          return true;
        }
        b[k] = false;
      }
    }
    return false;
  }
  void reset() {
    for (auto& b : bits_)
      std::fill(b.begin(), b.end(), false);
  }

private:
  std::vector<Choice> choices_;
  std::vector<std::vector<bool>> bits_;
};

inline void lhs_defined_symbols(const Signature& sig, const Term& t, std::vector<bool>& out) {
  if (t.is_var())
    return;
  if (sig[t.symbol()].is_defined())
    out[t.symbol()] = true;
  for (const auto& a : t.args())
    lhs_defined_symbols(sig, a, out);
}

}  // namespace detail

/// Deterministic enumeration: rank maps, then lex sets, then separations, each
/// lexicographic. Returns the first orienting candidate in that order.
inline SearchOutcome search_orientation(const Trs& trs, const SearchSpace& space) {
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();
  const auto& sig = trs.signature;
  const std::size_t n = sig.size();
  const auto declared = default_params(trs);

  std::vector<std::vector<int>> ranks;
  if (space.vary_rank) {
    int max_rank = space.max_rank > 0 ? space.max_rank : static_cast<int>(std::max<std::size_t>(n, 1));
    ranks = detail::dense_rank_maps(n, max_rank);
  } else {
    ranks.push_back(declared.rank);
  }

  // The lex flag of a symbol can only matter when it roots a subterm of some
  // left-hand side; all other flags stay off, which is also their first value.
  std::vector<bool> lex_relevant(n, false);
  for (const auto& r : trs.rules)
    detail::lhs_defined_symbols(sig, r.lhs, lex_relevant);
  std::vector<detail::Choice> lex_choices;
  if (space.vary_lex && !space.lpo)
    for (SymbolId f = 0; f < n; ++f)
      if (sig[f].is_defined() && lex_relevant[f])
        lex_choices.push_back({f, 1});

  std::vector<detail::Choice> sep_choices;
  if (!space.lpo)
    for (SymbolId f = 0; f < n; ++f) {
      bool vary = sig[f].is_defined() ? space.vary_separation : space.vary_constructor_separation;
      if (vary && sig[f].arity() > 0)
        sep_choices.push_back({f, sig[f].arity()});
    }

  const auto order = detail::rules_by_rhs_size(trs.rules);
  SearchOutcome outcome;
  detail::BitOdometer lex_odo(lex_choices), sep_odo(sep_choices);

  for (const auto& rank : ranks) {
    lex_odo.reset();
    do {
      OrderParams p;
      p.rank = rank;
      p.lex = space.vary_lex ? std::vector<bool>(n, false) : declared.lex;
      for (std::size_t i = 0; i < lex_choices.size(); ++i)
        p.lex[lex_choices[i].symbol] = lex_odo.bits()[i][0];
      sep_odo.reset();
      do {
        if (space.timeout_seconds > 0 && (outcome.candidates & 63) == 0) {
          std::chrono::duration<double> el = clock::now() - started;
          if (el.count() > space.timeout_seconds) {
            outcome.status = SearchStatus::timeout;
            return outcome;
          }
        }
        ++outcome.candidates;
        Signature cand = sig;
        // A set bit marks a normal position; all-safe comes first.
        for (std::size_t i = 0; i < sep_choices.size(); ++i)
          cand.set_separation(sep_choices[i].symbol, sep_odo.bits()[i]);
        for (SymbolId f = 0; f < n; ++f)
          if (cand[f].lex != p.lex[f])
            cand.set_lex(f, p.lex[f]);
        Comparator cmp(cand, p, false);
        bool ok = true;
        for (auto ri : order) {
          const auto& rule = trs.rules[ri];
          bool holds = space.lpo ? cmp.lpo_gt(rule.lhs, rule.rhs) != nullptr
                                 : cmp.plpo_gt(rule.lhs, rule.rhs) != nullptr;
          if (!holds) {
            ok = false;
            break;
          }
        }
        if (ok) {
          outcome.status = SearchStatus::found;
          OrientationResult r;
          r.signature = cand;
          r.params = p;
          r.oriented = true;
          Comparator full(r.signature, p);
          for (const auto& rule : trs.rules)
            r.per_rule.push_back({rule, space.lpo ? full.lpo_gt(rule.lhs, rule.rhs)
                                                  : full.plpo_gt(rule.lhs, rule.rhs)});
          outcome.result = std::move(r);
          return outcome;
        }
      } while (sep_odo.next());
    } while (lex_odo.next());
  }
  outcome.status = SearchStatus::exhausted;
  return outcome;
}

}  // namespace plpo
