#pragma once

// Full rewriting over ground terms: one-step successors, exact maximal
// derivation lengths over the finite reachable graph, desk-scale termination
// probes, and leftmost-innermost normalisation.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "plpo/parser.hpp"
#include "plpo/term.hpp"

namespace plpo {

using Position = std::vector<std::size_t>;

struct RewriteStep {
  Term source;
  Term target;
  std::size_t rule_index = 0;
  Position position;  // argument indices in declaration order
};

namespace detail {

inline bool match_into(const Term& pattern, const Term& t, std::map<std::string, Term>& binding) {
  if (pattern.is_var()) {
    auto [it, inserted] = binding.emplace(pattern.var_name(), t);
    return inserted || it->second == t;
  }
  if (t.is_var() || pattern.symbol() != t.symbol())
    return false;
  for (std::size_t i = 0; i < pattern.args().size(); ++i)
    if (!match_into(pattern.arg(i), t.arg(i), binding))
      return false;
  return true;
}

inline Term instantiate(const Term& t, const std::map<std::string, Term>& binding) {
  if (t.is_var())
    return binding.at(t.var_name());
  if (t.is_ground())
    return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args())
    args.push_back(instantiate(a, binding));
  return Term::app(t.symbol(), std::move(args));
}

inline Term replace_at(const Term& t, const Position& pos, std::size_t depth, const Term& by) {
  if (depth == pos.size())
    return by;
  std::vector<Term> args = t.args();
  args[pos[depth]] = replace_at(t.arg(pos[depth]), pos, depth + 1, by);
  return Term::app(t.symbol(), std::move(args));
}

inline void collect_steps(const Trs& trs, const Term& root, const Term& sub, Position& path,
                          std::vector<RewriteStep>& out) {
  if (sub.is_var())
    return;
  for (std::size_t ri = 0; ri < trs.rules.size(); ++ri) {
    std::map<std::string, Term> binding;
    if (match_into(trs.rules[ri].lhs, sub, binding)) {
      Term contractum = instantiate(trs.rules[ri].rhs, binding);
      out.push_back({root, replace_at(root, path, 0, contractum), ri, path});
    }
  }
  for (std::size_t i = 0; i < sub.args().size(); ++i) {
    path.push_back(i);
    collect_steps(trs, root, sub.arg(i), path, out);
    path.pop_back();
  }
}

}  // namespace detail

/// Syntactic matching; std::nullopt when `pattern` does not match `t`.
inline std::optional<std::map<std::string, Term>> match(const Term& pattern, const Term& t) {
  std::map<std::string, Term> binding;
  if (!detail::match_into(pattern, t, binding))
    return std::nullopt;
  return binding;
}

/// All one-step rewrites, ordered by position (pre-order) and then rule index.
inline std::vector<RewriteStep> successors(const Trs& trs, const Term& t) {
  if (!t.is_ground())
    throw Error("successors expects a ground term");
  std::vector<RewriteStep> out;
  Position path;
  detail::collect_steps(trs, t, t, path, out);
  return out;
}

namespace detail {

inline void count_vars(const Term& t, std::map<std::string, std::size_t>& out) {
  if (t.is_var()) {
    ++out[t.var_name()];
    return;
  }
  for (const auto& a : t.args())
    count_vars(a, out);
}

using Unifier = std::map<std::string, Term>;

inline Term walk(const Term& t, const Unifier& u) {
  Term cur = t;
  while (cur.is_var()) {
    auto it = u.find(cur.var_name());
    if (it == u.end())
      break;
    cur = it->second;
  }
  return cur;
}

inline bool occurs(const std::string& x, const Term& t, const Unifier& u) {
  Term w = walk(t, u);
  if (w.is_var())
    return w.var_name() == x;
  for (const auto& a : w.args())
    if (occurs(x, a, u))
      return true;
  return false;
}

inline bool unify(const Term& a, const Term& b, Unifier& u) {
  Term x = walk(a, u), y = walk(b, u);
  if (x.is_var() && y.is_var() && x.var_name() == y.var_name())
    return true;
  if (x.is_var() || y.is_var()) {
    const Term& v = x.is_var() ? x : y;
    const Term& o = x.is_var() ? y : x;
    if (occurs(v.var_name(), o, u))
      return false;
    u.emplace(v.var_name(), o);
    return true;
  }
  if (x.symbol() != y.symbol())
    return false;
  for (std::size_t i = 0; i < x.args().size(); ++i)
    if (!unify(x.arg(i), y.arg(i), u))
      return false;
  return true;
}

inline Term prefix_vars(const Term& t, const std::string& prefix) {
  if (t.is_var())
    return Term::var(prefix + t.var_name());
  std::vector<Term> args;
  for (const auto& a : t.args())
    args.push_back(prefix_vars(a, prefix));
  return Term::app(t.symbol(), std::move(args));
}

inline void non_var_subterms(const Term& t, bool root, std::vector<std::pair<Term, bool>>& out) {
  if (t.is_var())
    return;
  out.emplace_back(t, root);
  for (const auto& a : t.args())
    non_var_subterms(a, false, out);
}

// One charged step: the contracted redex is not below any other redex, and
// the instances of the variables its rule erases are kept so that their
// derivation lengths can be charged to the step.
struct OutermostStep {
  RewriteStep step;
  std::vector<Term> erased;
  std::vector<Position> erased_at;  // relative to the redex
};

inline OutermostStep contract(const Trs& trs, std::size_t ri, const Term& root, const Term& sub,
                              const Position& path, const std::map<std::string, Term>& binding) {
  OutermostStep st;
  st.step = {root, replace_at(root, path, 0, instantiate(trs.rules[ri].rhs, binding)), ri, path};
  std::map<std::string, std::size_t> kept;
  count_vars(trs.rules[ri].rhs, kept);
  Position rel;
  auto erased = [&](auto&& self, const Term& pat, const Term& t) -> void {
    if (pat.is_var()) {
      if (!kept.count(pat.var_name())) {
        st.erased.push_back(t);
        st.erased_at.push_back(rel);
      }
      return;
    }
    for (std::size_t i = 0; i < pat.args().size(); ++i) {
      rel.push_back(i);
      self(self, pat.arg(i), t.arg(i));
      rel.pop_back();
    }
  };
  erased(erased, trs.rules[ri].lhs, sub);
  return st;
}

// Root stability: a term whose root symbol heads no rule, or which clashes
// with every rule for its symbol at a stable position, is never contracted at
// the root.
class Stability {
public:
  explicit Stability(const Trs& trs) : trs_(trs) {
    for (const auto& r : trs_.rules)
      if (r.lhs.is_app())
        has_rules_.insert(r.lhs.symbol());
  }

  bool has_rules(SymbolId f) const { return has_rules_.count(f) > 0; }

  bool stable(const Term& u) const { return u.is_app() && (!has_rules(u.symbol()) || frozen(u)); }

  // Applicable to t's root: no stable clash with the lhs.
  bool alive(const Rule& r, const Term& t) const {
    if (r.lhs.symbol() != t.symbol())
      return false;
    for (std::size_t i = 0; i < t.args().size(); ++i)
      if (clashes(r.lhs.arg(i), t.arg(i)))
        return false;
    return true;
  }

  bool frozen(const Term& t) const {
    if (!t.is_app())
      return false;
    for (const auto& r : trs_.rules)
      if (alive(r, t))
        return false;
    return true;
  }

private:
  bool clashes(const Term& pat, const Term& u) const {
    if (pat.is_var() || !stable(u))
      return false;
    if (pat.symbol() != u.symbol())
      return true;
    for (std::size_t i = 0; i < u.args().size(); ++i)
      if (clashes(pat.arg(i), u.arg(i)))
        return true;
    return false;
  }

  const Trs& trs_;
  std::set<SymbolId> has_rules_;
};

// Steps of the postponing graph. A redex is contracted with its erased
// instances charged and nothing below it is entered. Below a term that is not
// a redex, only positions some still applicable rule inspects are entered.
inline void collect_needed(const Trs& trs, const Stability& st, const Term& root, const Term& sub,
                           Position& path, std::vector<OutermostStep>& out) {
  if (sub.is_var() || !st.has_rules(sub.symbol()))
    return;
  std::vector<const Term*> patterns;
  for (std::size_t ri = 0; ri < trs.rules.size(); ++ri) {
    const Rule& r = trs.rules[ri];
    if (r.lhs.symbol() != sub.symbol())
      continue;
    std::map<std::string, Term> binding;
    if (match_into(r.lhs, sub, binding)) {
      out.push_back(contract(trs, ri, root, sub, path, binding));
      return;
    }
    if (st.alive(r, sub))
      patterns.push_back(&r.lhs);
  }
  // Walk the positions inspected by the live patterns. A stable subterm is
  // looked through; an unstable one is collected as a term of its own.
  auto walk = [&](auto&& self, const Term& t, const std::vector<const Term*>& pats) -> void {
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      std::vector<const Term*> below;
      for (const Term* p : pats)
        if (!p->arg(i).is_var())
          below.push_back(&p->arg(i));
      if (below.empty())
        continue;
      path.push_back(i);
      const Term& u = t.arg(i);
      if (st.stable(u))
        self(self, u, below);
      else
        collect_needed(trs, st, root, u, path, out);
      path.pop_back();
    }
  };
  walk(walk, sub, patterns);
}

}  // namespace detail

/// Left-linear and free of critical pairs (root overlaps of a rule with
/// itself excluded).
inline bool is_orthogonal(const Trs& trs) {
  for (const auto& r : trs.rules) {
    std::map<std::string, std::size_t> n;
    detail::count_vars(r.lhs, n);
    for (const auto& [x, k] : n)
      if (k > 1)
        return false;
  }
  for (std::size_t i = 0; i < trs.rules.size(); ++i) {
    const Term outer = detail::prefix_vars(trs.rules[i].lhs, "1_");
    std::vector<std::pair<Term, bool>> subs;
    detail::non_var_subterms(outer, true, subs);
    for (std::size_t j = 0; j < trs.rules.size(); ++j) {
      const Term inner = detail::prefix_vars(trs.rules[j].lhs, "2_");
      for (const auto& [sub, at_root] : subs) {
        if (at_root && i == j)
          continue;
        detail::Unifier u;
        if (detail::unify(sub, inner, u))
          return false;
      }
    }
  }
  return true;
}

/// The steps explored by the derivation analysis on orthogonal systems:
/// contractions of redexes at positions that some applicable rule of every
/// enclosing term still inspects.
inline std::vector<RewriteStep> needed_successors(const Trs& trs, const Term& t) {
  detail::Stability st(trs);
  std::vector<detail::OutermostStep> steps;
  Position path;
  detail::collect_needed(trs, st, t, t, path, steps);
  std::vector<RewriteStep> out;
  for (auto& s : steps)
    out.push_back(std::move(s.step));
  return out;
}

struct DerivationLimits {
  std::size_t max_terms = 1'000'000;
  std::size_t max_depth = 100'000;
};

enum class DerivationStatus { exact, nonterminating, limit };

struct DerivationReport {
  Term start;
  DerivationStatus status = DerivationStatus::exact;
  std::size_t max_length = 0;
  // When nonterminating: a derivation t0 -> ... -> tk whose last term contains
  // t0. It is a literal cycle (tk == t0) unless t0 recurs inside a context.
  std::vector<Term> cycle;
  std::size_t explored = 0;
  std::string limit_reason;
};

/// Longest derivation lengths with a memo shared across start terms.
///
/// A term whose root can never be contracted (no rule for its symbol, or a
/// clash with every such rule at a position that never changes) has steps
/// only inside its arguments, and these commute, so its length is the sum of
/// the argument lengths. Such terms are decomposed instead of expanded.
///
/// On orthogonal systems steps are postponed while they cannot influence
/// which rule fires above them: inside a redex's variable instances, and
/// below positions that no applicable rule of an enclosing term inspects.
/// A kept instance is reduced later in every copy. An erased instance Z is
/// best reduced just before the erasure, so the contraction is charged
/// 1 + dl(Z) for each. Both preserve the maximum; lazy = false expands every
/// step instead.
class DerivationAnalyzer {
public:
  explicit DerivationAnalyzer(const Trs& trs, DerivationLimits limits = {}, bool lazy = true)
      : trs_(trs), limits_(limits), lazy_(lazy && is_orthogonal(trs)), stability_(trs) {}

  DerivationReport analyze(const Term& start) {
    DerivationReport rep;
    rep.start = start;
    const std::size_t before = memo_.size();
    if (auto it = memo_.find(start); it != memo_.end()) {
      rep.max_length = it->second.length;
      return rep;
    }
    std::vector<Frame> stack;
    std::unordered_map<Term, std::size_t, TermHash> on_stack;
    auto push_term = [&](const Term& t) {
      Frame f;
      f.term = t;
      if (stability_.frozen(t)) {
        f.kind = Frame::sum;
        f.next = t.args();
      } else {
        f.kind = Frame::expand;
        f.steps = steps(t);
      }
      on_stack.emplace(t, stack.size());
      stack.push_back(std::move(f));
    };
    auto stop = [&](DerivationStatus st, std::string why) {
      rep.status = st;
      rep.limit_reason = std::move(why);
      rep.explored = memo_.size() - before;
      return rep;
    };
    push_term(start);
    while (!stack.empty()) {
      Frame& top = stack.back();
      const Term* u = nullptr;
      if (top.kind == Frame::expand && top.cursor < top.steps.size()) {
        const auto& st = top.steps[top.cursor++];
        if (!st.erased.empty()) {
          Frame e;
          e.kind = Frame::edge;
          e.next = st.erased;
          e.next.push_back(st.step.target);
          e.redex = st.step.position;
          e.erased_at = st.erased_at;
          stack.push_back(std::move(e));
          continue;
        }
        u = &st.step.target;
      } else if (top.kind != Frame::expand && top.cursor < top.next.size()) {
        u = &top.next[top.cursor++];
      }
      if (u) {
        if (auto it = memo_.find(*u); it != memo_.end()) {
          credit(top, it->second.length);
          continue;
        }
        if (auto it = on_stack.find(*u); it != on_stack.end()) {
          rep.cycle = witness(stack, it->second, *u);
          return stop(DerivationStatus::nonterminating, "");
        }
        if (stack.size() >= limits_.max_depth)
          return stop(DerivationStatus::limit,
                      "depth limit " + std::to_string(limits_.max_depth) + " reached");
        if (memo_.size() + stack.size() >= limits_.max_terms)
          return stop(DerivationStatus::limit,
                      "term limit " + std::to_string(limits_.max_terms) + " reached");
        push_term(*u);
        continue;
      }
      const std::size_t len = top.best;
      if (top.kind != Frame::edge) {
        memo_.emplace(top.term, Entry{len, top.kind == Frame::sum});
        on_stack.erase(top.term);
      }
      stack.pop_back();
      if (!stack.empty())
        credit(stack.back(), len);
    }
    rep.max_length = memo_.at(start).length;
    rep.explored = memo_.size() - before;
    return rep;
  }

  std::optional<std::size_t> known_length(const Term& t) const {
    auto it = memo_.find(t);
    if (it == memo_.end())
      return std::nullopt;
    return it->second.length;
  }

  struct EdgeCheck {
    std::size_t edges = 0;
    std::size_t violations = 0;
  };

  /// Re-derives every explored edge out of every expanded term and checks
  /// that the longest derivation length strictly drops along it.
  EdgeCheck check_edges() const {
    EdgeCheck r;
    for (const auto& [t, e] : memo_) {
      if (e.decomposed)
        continue;
      for (const auto& st : steps(t)) {
        ++r.edges;
        auto it = memo_.find(st.step.target);
        if (it == memo_.end() || it->second.length >= e.length)
          ++r.violations;
      }
    }
    return r;
  }

  std::size_t explored() const { return memo_.size(); }
  bool lazy() const { return lazy_; }

private:
  struct Entry {
    std::size_t length;
    bool decomposed;
  };

  // expand: max over steps of 1 + value; sum: arguments of a frozen term;
  // edge: erased instances then the target of one charged step.
  struct Frame {
    enum Kind { expand, sum, edge } kind = expand;
    Term term;
    std::vector<detail::OutermostStep> steps;
    std::vector<Term> next;
    Position redex;
    std::vector<Position> erased_at;
    std::size_t cursor = 0;
    std::size_t best = 0;
  };

  static void credit(Frame& f, std::size_t len) {
    if (f.kind == Frame::expand)
      f.best = std::max(f.best, len + 1);
    else
      f.best += len;
  }

  std::vector<detail::OutermostStep> steps(const Term& t) const {
    std::vector<detail::OutermostStep> out;
    if (lazy_) {
      Position path;
      detail::collect_needed(trs_, stability_, t, t, path, out);
      return out;
    }
    for (auto& st : successors(trs_, t))
      out.push_back({std::move(st), {}, {}});
    return out;
  }

  // Rebuilds the derivation from stack[from] to the recurrence of `again`,
  // keeping the context that decomposition and erased instances descended into.
  static std::vector<Term> witness(const std::vector<Frame>& stack, std::size_t from,
                                   const Term& again) {
    Term full = stack[from].term;
    std::vector<Term> out{full};
    Position pos;
    for (std::size_t k = from; k < stack.size(); ++k) {
      const Frame& f = stack[k];
      const bool last = k + 1 == stack.size();
      const Term& next = last ? again : stack[k + 1].term;
      if (f.kind == Frame::sum) {
        pos.push_back(f.cursor - 1);
      } else if (f.kind == Frame::expand) {
        if (!last && stack[k + 1].kind == Frame::edge)
          continue;
        full = detail::replace_at(full, pos, 0, next);
        out.push_back(full);
      } else if (f.cursor - 1 < f.erased_at.size()) {
        pos.insert(pos.end(), f.redex.begin(), f.redex.end());
        const auto& rel = f.erased_at[f.cursor - 1];
        pos.insert(pos.end(), rel.begin(), rel.end());
      } else {
        full = detail::replace_at(full, pos, 0, next);
        out.push_back(full);
      }
    }
    return out;
  }

  const Trs& trs_;
  DerivationLimits limits_;
  bool lazy_;
  detail::Stability stability_;
  std::unordered_map<Term, Entry, TermHash> memo_;
};

inline DerivationReport derivation_length(const Trs& trs, const Term& t,
                                          DerivationLimits limits = {}, bool lazy = true) {
  if (!t.is_ground())
    throw Error("derivation_length expects a ground term");
  return DerivationAnalyzer(trs, limits, lazy).analyze(t);
}

/// All ground terms of exactly `size` nodes, sorted by printed form.
inline std::vector<std::vector<Term>> ground_terms_up_to(const Signature& sig, std::size_t max_size) {
  std::vector<std::vector<Term>> by_size(max_size + 1);
  for (std::size_t n = 1; n <= max_size; ++n) {
    auto& level = by_size[n];
    for (SymbolId f = 0; f < sig.size(); ++f) {
      const std::size_t a = sig[f].arity();
      if (a == 0) {
        if (n == 1)
          level.push_back(Term::app(f));
        continue;
      }
      if (n - 1 < a)
        continue;
      std::vector<Term> args;
      // Distribute n-1 nodes over a arguments, each at least one node.
      auto rec = [&](auto&& self, std::size_t i, std::size_t remaining) -> void {
        if (i + 1 == a) {
          for (const auto& t : by_size[remaining]) {
            args.push_back(t);
            level.push_back(Term::app(f, args));
            args.pop_back();
          }
          return;
        }
        for (std::size_t sz = 1; sz + (a - i - 1) <= remaining; ++sz)
          for (const auto& t : by_size[sz]) {
            args.push_back(t);
            self(self, i + 1, remaining - sz);
            args.pop_back();
          }
      };
      rec(rec, 0, n - 1);
    }
    std::vector<std::pair<std::string, Term>> keyed;
    keyed.reserve(level.size());
    for (auto& t : level)
      keyed.emplace_back(to_string(sig, t), t);
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < level.size(); ++i)
      level[i] = keyed[i].second;
  }
  return by_size;
}

struct ProbeReport {
  std::size_t terms_checked = 0;
  std::size_t explored = 0;
  std::size_t max_length = 0;
  std::optional<DerivationReport> nontermination;
  std::optional<DerivationReport> limit;
  DerivationAnalyzer::EdgeCheck edges;

  bool clean() const { return !nontermination && !limit && edges.violations == 0; }
};

/// Runs the derivation analysis on every ground term of size <= size_bound,
/// by size and then printed form. Stops at the first nontermination or limit.
inline ProbeReport termination_probe(const Trs& trs, std::size_t size_bound,
                                     DerivationLimits limits = {}, bool check_edges = true) {
  ProbeReport rep;
  DerivationAnalyzer an(trs, limits);
  auto levels = ground_terms_up_to(trs.signature, size_bound);
  for (std::size_t n = 1; n <= size_bound; ++n) {
    for (const auto& t : levels[n]) {
      auto r = an.analyze(t);
      ++rep.terms_checked;
      if (r.status == DerivationStatus::nonterminating) {
        rep.nontermination = std::move(r);
        rep.explored = an.explored();
        return rep;
      }
      if (r.status == DerivationStatus::limit) {
        rep.limit = std::move(r);
        rep.explored = an.explored();
        return rep;
      }
      rep.max_length = std::max(rep.max_length, r.max_length);
    }
  }
  rep.explored = an.explored();
  if (check_edges)
    rep.edges = an.check_edges();
  return rep;
}

struct NormalizeResult {
  std::optional<Term> normal_form;  // absent when the step limit was hit
  std::size_t steps = 0;
};

namespace detail {

struct StepLimitHit {};

inline Term innermost(const Trs& trs, const Term& t, std::size_t& steps, std::size_t max_steps) {
  Term cur = t;
  while (true) {
    if (cur.is_var())
      return cur;
    bool changed = false;
    std::vector<Term> args;
    args.reserve(cur.args().size());
    for (const auto& a : cur.args()) {
      Term n = innermost(trs, a, steps, max_steps);
      changed = changed || n.identity() != a.identity();
      args.push_back(std::move(n));
    }
    if (changed)
      cur = Term::app(cur.symbol(), std::move(args));
    bool rewritten = false;
    for (const auto& rule : trs.rules) {
      std::map<std::string, Term> binding;
      if (match_into(rule.lhs, cur, binding)) {
        if (steps >= max_steps)
          throw StepLimitHit{};
        ++steps;
        cur = instantiate(rule.rhs, binding);
        rewritten = true;
        break;
      }
    }
    if (!rewritten)
      return cur;
  }
}

}  // namespace detail

/// Leftmost-innermost reduction to normal form.
inline NormalizeResult normalize(const Trs& trs, const Term& t, std::size_t max_steps) {
  if (!t.is_ground())
    throw Error("normalize expects a ground term");
  NormalizeResult r;
  try {
    r.normal_form = detail::innermost(trs, t, r.steps, max_steps);
  } catch (const detail::StepLimitHit&) {
    r.normal_form.reset();
  }
  return r;
}

}  // namespace plpo
