#pragma once

// Terms over a signature whose argument positions are split into normal and
// safe positions, written f(t1,...,tk ; u1,...,ul).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace plpo {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using SymbolId = std::uint32_t;

enum class SymbolKind { constructor, defined };

/// A function symbol. Argument positions are numbered 0..arity-1 in the order
/// they were declared; `normal` marks which of them are normal positions.
struct FunctionSymbol {
  std::string name;
  SymbolKind kind = SymbolKind::defined;
  bool lex = false;
  std::vector<bool> normal;

  std::size_t arity() const { return normal.size(); }
  std::size_t normal_arity() const {
    return static_cast<std::size_t>(std::count(normal.begin(), normal.end(), true));
  }
  std::size_t safe_arity() const { return arity() - normal_arity(); }
  bool is_defined() const { return kind == SymbolKind::defined; }
  bool is_constructor() const { return kind == SymbolKind::constructor; }

  static FunctionSymbol make(std::string name, SymbolKind kind, std::size_t normal_arity,
                             std::size_t safe_arity, bool lex = false) {
    FunctionSymbol f;
    f.name = std::move(name);
    f.kind = kind;
    f.lex = lex;
    f.normal.assign(normal_arity + safe_arity, false);
    std::fill_n(f.normal.begin(), normal_arity, true);
    return f;
  }
};

class Signature {
public:
  SymbolId add(FunctionSymbol f) {
    if (f.lex && !f.is_defined())
      throw Error("symbol '" + f.name + "' is a constructor and cannot be lexicographic");
    if (index_.count(f.name))
      throw Error("duplicate symbol '" + f.name + "'");
    auto id = static_cast<SymbolId>(symbols_.size());
    index_.emplace(f.name, id);
    symbols_.push_back(std::move(f));
    layouts_.push_back(layout_of(symbols_.back()));
    return id;
  }

  std::optional<SymbolId> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
      return std::nullopt;
    return it->second;
  }

  SymbolId id(const std::string& name) const {
    auto f = find(name);
    if (!f)
      throw Error("unknown symbol '" + name + "'");
    return *f;
  }

  const FunctionSymbol& operator[](SymbolId id) const { return symbols_.at(id); }
  std::size_t size() const { return symbols_.size(); }
  const std::vector<FunctionSymbol>& symbols() const { return symbols_; }

  /// Positions (declaration indices) of the normal arguments, in order.
  std::span<const std::size_t> normal_positions(SymbolId id) const { return layouts_[id].normal; }
  std::span<const std::size_t> safe_positions(SymbolId id) const { return layouts_[id].safe; }

  void set_separation(SymbolId id, std::vector<bool> normal) {
    auto& f = symbols_.at(id);
    if (normal.size() != f.arity())
      throw Error("separation mask for '" + f.name + "' has wrong length");
    f.normal = std::move(normal);
    layouts_[id] = layout_of(f);
  }

  void set_lex(SymbolId id, bool lex) {
    auto& f = symbols_.at(id);
    if (lex && !f.is_defined())
      throw Error("symbol '" + f.name + "' is a constructor and cannot be lexicographic");
    f.lex = lex;
  }

  bool has_constant_constructor() const {
    return std::any_of(symbols_.begin(), symbols_.end(),
                       [](const FunctionSymbol& f) { return f.is_constructor() && f.arity() == 0; });
  }

private:
  struct Layout {
    std::vector<std::size_t> normal;
    std::vector<std::size_t> safe;
  };

  static Layout layout_of(const FunctionSymbol& f) {
    Layout l;
    for (std::size_t i = 0; i < f.arity(); ++i)
      (f.normal[i] ? l.normal : l.safe).push_back(i);
    return l;
  }

  std::vector<FunctionSymbol> symbols_;
  std::vector<Layout> layouts_;
  std::map<std::string, SymbolId> index_;
};

/// Immutable, structurally shared term. Copies are cheap.
class Term {
public:
  Term() = default;

  static Term var(std::string name) {
    auto n = std::make_shared<Node>();
    n->is_var = true;
    n->hash = std::hash<std::string>{}(name) * 0x9e3779b97f4a7c15ULL + 1;
    n->name = std::move(name);
    n->size = 1;
    n->ground = false;
    return Term(std::move(n));
  }

  static Term app(SymbolId f, std::vector<Term> args = {}) {
    auto n = std::make_shared<Node>();
    n->symbol = f;
    std::size_t h = 0xcbf29ce484222325ULL ^ (static_cast<std::size_t>(f) + 0x51);
    std::size_t size = 1;
    bool ground = true;
    for (const auto& a : args) {
      h = (h ^ a.hash()) * 0x100000001b3ULL;
      size += a.size();
      ground = ground && a.is_ground();
    }
    n->hash = h;
    n->size = size;
    n->ground = ground;
    n->args = std::move(args);
    return Term(std::move(n));
  }

  bool valid() const { return node_ != nullptr; }
  bool is_var() const { return node_->is_var; }
  bool is_app() const { return !node_->is_var; }
  const std::string& var_name() const { return node_->name; }
  SymbolId symbol() const { return node_->symbol; }
  /// Arguments in declaration order.
  const std::vector<Term>& args() const { return node_->args; }
  const Term& arg(std::size_t i) const { return node_->args[i]; }
  std::size_t size() const { return node_->size; }
  bool is_ground() const { return node_->ground; }
  std::size_t hash() const { return node_->hash; }
  const void* identity() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_)
      return true;
    if (a.hash() != b.hash() || a.size() != b.size() || a.is_var() != b.is_var())
      return false;
    if (a.is_var())
      return a.var_name() == b.var_name();
    if (a.symbol() != b.symbol() || a.args().size() != b.args().size())
      return false;
    for (std::size_t i = 0; i < a.args().size(); ++i)
      if (!(a.args()[i] == b.args()[i]))
        return false;
    return true;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

private:
  struct Node {
    bool is_var = false;
    bool ground = true;
    SymbolId symbol = 0;
    std::string name;
    std::vector<Term> args;
    std::size_t hash = 0;
    std::size_t size = 1;
  };

  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

inline std::size_t term_size(const Term& t) { return t.size(); }

/// Normal arguments of an application, in order.
inline std::vector<Term> normal_args(const Signature& sig, const Term& t) {
  std::vector<Term> out;
  for (auto p : sig.normal_positions(t.symbol()))
    out.push_back(t.arg(p));
  return out;
}

inline std::vector<Term> safe_args(const Signature& sig, const Term& t) {
  std::vector<Term> out;
  for (auto p : sig.safe_positions(t.symbol()))
    out.push_back(t.arg(p));
  return out;
}

/// Arguments listed normal-first, then safe: the order of f(t1..tk ; u1..ul).
inline std::vector<Term> split_args(const Signature& sig, const Term& t) {
  auto out = normal_args(sig, t);
  for (auto p : sig.safe_positions(t.symbol()))
    out.push_back(t.arg(p));
  return out;
}

/// Build f(normal ; safe) respecting the symbol's separation mask.
inline Term make_app(const Signature& sig, SymbolId f, std::vector<Term> normal,
                     std::vector<Term> safe) {
  auto np = sig.normal_positions(f);
  auto sp = sig.safe_positions(f);
  if (normal.size() != np.size() || safe.size() != sp.size())
    throw Error("arity mismatch for '" + sig[f].name + "': expected " +
                std::to_string(np.size()) + ";" + std::to_string(sp.size()) + ", got " +
                std::to_string(normal.size()) + ";" + std::to_string(safe.size()));
  std::vector<Term> args(sig[f].arity());
  for (std::size_t i = 0; i < np.size(); ++i)
    args[np[i]] = std::move(normal[i]);
  for (std::size_t i = 0; i < sp.size(); ++i)
    args[sp[i]] = std::move(safe[i]);
  return Term::app(f, std::move(args));
}

/// Term equivalence: same variable, or roots of equal rank with identical
/// normal/safe arities whose normal and safe arguments are pairwise equivalent.
inline bool equiv(const Signature& sig, std::span<const int> rank, const Term& s, const Term& t) {
  if (s.identity() == t.identity())
    return true;
  if (s.is_var() || t.is_var())
    return s.is_var() && t.is_var() && s.var_name() == t.var_name();
  if (s.size() != t.size())
    return false;
  SymbolId f = s.symbol(), g = t.symbol();
  if (rank[f] != rank[g])
    return false;
  auto fn = sig.normal_positions(f), gn = sig.normal_positions(g);
  auto fs = sig.safe_positions(f), gs = sig.safe_positions(g);
  if (fn.size() != gn.size() || fs.size() != gs.size())
    return false;
  for (std::size_t i = 0; i < fn.size(); ++i)
    if (!equiv(sig, rank, s.arg(fn[i]), t.arg(gn[i])))
      return false;
  for (std::size_t i = 0; i < fs.size(); ++i)
    if (!equiv(sig, rank, s.arg(fs[i]), t.arg(gs[i])))
      return false;
  return true;
}

inline void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.var_name()) == out.end())
      out.push_back(t.var_name());
    return;
  }
  for (const auto& a : t.args())
    collect_vars(a, out);
}

inline std::vector<std::string> variables(const Term& t) {
  std::vector<std::string> out;
  collect_vars(t, out);
  return out;
}

inline bool occurs(const std::string& x, const Term& t) {
  if (t.is_var())
    return t.var_name() == x;
  return std::any_of(t.args().begin(), t.args().end(),
                     [&](const Term& a) { return occurs(x, a); });
}

/// Ground substitution: every image is a ground term.
class Substitution {
public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<const std::string, Term>> init) {
    for (const auto& [x, t] : init)
      bind(x, t);
  }

  void bind(const std::string& x, Term t) {
    if (!t.is_ground())
      throw Error("substitution image for '" + x + "' is not ground");
    map_.insert_or_assign(x, std::move(t));
  }

  const Term* lookup(const std::string& x) const {
    auto it = map_.find(x);
    return it == map_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return map_.size(); }

private:
  std::map<std::string, Term> map_;
};

/// Simultaneous replacement. With `require_ground` an unmapped variable is an
/// error; otherwise it is left in place.
inline Term apply_subst(const Term& t, const Substitution& sigma, bool require_ground = true) {
  if (t.is_var()) {
    if (const Term* img = sigma.lookup(t.var_name()))
      return *img;
    if (require_ground)
      throw Error("unmapped variable '" + t.var_name() + "'");
    return t;
  }
  if (t.is_ground())
    return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args())
    args.push_back(apply_subst(a, sigma, require_ground));
  return Term::app(t.symbol(), std::move(args));
}

struct Rule {
  Term lhs;
  Term rhs;
};

struct PrecedencePair {
  std::string greater;
  std::string lesser;
  bool strict = true;
};

struct Trs {
  Signature signature;
  std::vector<PrecedencePair> precedence;
  std::vector<Rule> rules;
};

/// Enforces: lhs is an application with defined root, rhs variables occur in lhs.
inline void validate_rule(const Signature& sig, const Rule& r) {
  if (r.lhs.is_var())
    throw Error("left-hand side is a variable");
  if (!sig[r.lhs.symbol()].is_defined())
    throw Error("left-hand side root '" + sig[r.lhs.symbol()].name + "' is not a defined symbol");
  std::vector<std::string> lv = variables(r.lhs);
  for (const auto& x : variables(r.rhs))
    if (std::find(lv.begin(), lv.end(), x) == lv.end())
      throw Error("right-hand side variable '" + x + "' does not occur in the left-hand side");
}

}  // namespace plpo
