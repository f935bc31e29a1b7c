#pragma once

// Primitive recursive programs and their compilation into rewrite systems
// that the predicative lexicographic path order orients.
//
// Initial functions, composition and primitive recursion compile to systems
// whose symbols have safe positions only. The three recursion schemas
//   prp:  f(x+1, y)   = h(x, y, f(x, p(x, y)))
//   umr:  f(x+1, 0)   = g1(x, f(x, q(x)))
//         f(x+1, y+1) = h(x, y, f(x, p(x, y)), f(x+1, y))
//   snr:  f(x+1, y)   = h(x, y, f(x, p(x, y, f(x, y))))
// compile to a recursion symbol in the lex set with a normal/safe split, plus
// primed wrapper symbols that move arguments of the safe-only parameter
// systems into normal positions.

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "plpo/orders.hpp"
#include "plpo/parser.hpp"
#include "plpo/rewrite.hpp"
#include "plpo/term.hpp"

namespace plpo {

enum class SchemaKind { zero, succ, proj, comp, primrec, prp, umr, snr, stub };

struct PrProgram;
using ProgramPtr = std::shared_ptr<const PrProgram>;

struct PrProgram {
  SchemaKind kind = SchemaKind::zero;
  std::size_t k = 0;  // zero(k), proj(k, j), stub arity
  std::size_t j = 0;
  // comp: h, g1..gl; primrec: g, h; prp: g, h, p; umr: g0, g1, q, p, h; snr: g, h, p
  std::vector<ProgramPtr> parts;
  std::string name;  // definition name, empty for anonymous subprograms
};

namespace prog {

inline ProgramPtr make(SchemaKind kind, std::vector<ProgramPtr> parts = {}, std::size_t k = 0,
                       std::size_t j = 0) {
  auto p = std::make_shared<PrProgram>();
  p->kind = kind;
  p->parts = std::move(parts);
  p->k = k;
  p->j = j;
  return p;
}

inline ProgramPtr zero(std::size_t k) { return make(SchemaKind::zero, {}, k); }
inline ProgramPtr succ() { return make(SchemaKind::succ); }
inline ProgramPtr proj(std::size_t k, std::size_t j) { return make(SchemaKind::proj, {}, k, j); }
inline ProgramPtr comp(ProgramPtr h, std::vector<ProgramPtr> gs) {
  gs.insert(gs.begin(), std::move(h));
  return make(SchemaKind::comp, std::move(gs));
}
inline ProgramPtr primrec(ProgramPtr g, ProgramPtr h) { return make(SchemaKind::primrec, {g, h}); }
inline ProgramPtr prp(ProgramPtr g, ProgramPtr h, ProgramPtr p) {
  return make(SchemaKind::prp, {g, h, p});
}
inline ProgramPtr umr(ProgramPtr g0, ProgramPtr g1, ProgramPtr q, ProgramPtr p, ProgramPtr h) {
  return make(SchemaKind::umr, {g0, g1, q, p, h});
}
inline ProgramPtr snr(ProgramPtr g, ProgramPtr h, ProgramPtr p) {
  return make(SchemaKind::snr, {g, h, p});
}
/// Uninterpreted function of the given arity: a defined symbol with no rules.
inline ProgramPtr stub(std::size_t arity, std::string name = {}) {
  auto p = std::make_shared<PrProgram>();
  p->kind = SchemaKind::stub;
  p->k = arity;
  p->name = std::move(name);
  return p;
}
inline ProgramPtr named(std::string name, const ProgramPtr& p) {
  auto c = std::make_shared<PrProgram>(*p);
  c->name = std::move(name);
  return c;
}

}  // namespace prog

inline bool is_schema(SchemaKind k) {
  return k == SchemaKind::prp || k == SchemaKind::umr || k == SchemaKind::snr;
}

/// Arity of the program; throws on any arity inconsistency in the program tree.
inline std::size_t program_arity(const PrProgram& p) {
  auto need = [](const ProgramPtr& q, std::size_t want, const char* role) {
    std::size_t a = program_arity(*q);
    if (a != want)
      throw Error(std::string("arity mismatch: ") + role + " has arity " + std::to_string(a) +
                  ", expected " + std::to_string(want));
    if (is_schema(q->kind))
      throw Error(std::string("arity mismatch: ") + role +
                  " must be built from initial functions, composition and primitive recursion");
  };
  auto nonschema = [](const ProgramPtr& q, const char* role) {
    if (is_schema(q->kind))
      throw Error(std::string(role) +
                  " must be built from initial functions, composition and primitive recursion");
    return program_arity(*q);
  };
  switch (p.kind) {
  case SchemaKind::zero: return p.k;
  case SchemaKind::succ: return 1;
  case SchemaKind::stub: return p.k;
  case SchemaKind::proj:
    if (p.j < 1 || p.j > p.k)
      throw Error("arity mismatch: proj(" + std::to_string(p.k) + "," + std::to_string(p.j) + ")");
    return p.k;
  case SchemaKind::comp: {
    if (p.parts.size() < 2)
      throw Error("arity mismatch: composition needs at least one inner function");
    const std::size_t l = p.parts.size() - 1;
    need(p.parts[0], l, "outer function of composition");
    const std::size_t k = nonschema(p.parts[1], "inner function of composition");
    for (std::size_t i = 2; i < p.parts.size(); ++i)
      need(p.parts[i], k, "inner function of composition");
    return k;
  }
  case SchemaKind::primrec: {
    const std::size_t n = nonschema(p.parts[0], "base function of primitive recursion");
    need(p.parts[1], n + 2, "step function of primitive recursion");
    return n + 1;
  }
  case SchemaKind::prp:
    need(p.parts[0], 1, "g of prp");
    need(p.parts[1], 3, "h of prp");
    need(p.parts[2], 2, "p of prp");
    return 2;
  case SchemaKind::umr:
    need(p.parts[0], 1, "g0 of umr");
    need(p.parts[1], 2, "g1 of umr");
    need(p.parts[2], 1, "q of umr");
    need(p.parts[3], 2, "p of umr");
    need(p.parts[4], 4, "h of umr");
    return 2;
  case SchemaKind::snr:
    need(p.parts[0], 1, "g of snr");
    need(p.parts[1], 3, "h of snr");
    need(p.parts[2], 3, "p of snr");
    return 2;
  }
  return 0;
}

struct CompiledSystem {
  Trs trs;
  SymbolId main_symbol = 0;
  OrderParams params;
};

inline Term numeral(const Signature& sig, std::uint64_t m) {
  const SymbolId zero = sig.id("0"), s = sig.id("s");
  Term t = Term::app(zero);
  for (std::uint64_t i = 0; i < m; ++i)
    t = Term::app(s, {t});
  return t;
}

/// Value of a pure numeral s^m(0); throws on anything else.
inline std::uint64_t decode_numeral(const Signature& sig, const Term& t) {
  const SymbolId zero = sig.id("0"), s = sig.id("s");
  std::uint64_t m = 0;
  const Term* cur = &t;
  while (cur->is_app() && cur->symbol() == s) {
    ++m;
    cur = &cur->arg(0);
  }
  if (!cur->is_app() || cur->symbol() != zero)
    throw Error("normal form " + to_string(sig, t) + " is not a numeral");
  return m;
}

namespace detail {

class SchemaCompiler {
public:
  SchemaCompiler() {
    sig().add(FunctionSymbol::make("0", SymbolKind::constructor, 0, 0));
    sig().add(FunctionSymbol::make("s", SymbolKind::constructor, 0, 1));
  }

  CompiledSystem finish(const ProgramPtr& main) {
    program_arity(*main);
    SymbolId f = compile(main, main->name.empty() ? "f" : main->name);
    CompiledSystem out;
    out.trs = std::move(trs_);
    out.main_symbol = f;
    out.params = default_params(out.trs);
    return out;
  }

private:
  Signature& sig() { return trs_.signature; }

  std::string fresh(const std::string& base) {
    if (!sig().find(base))
      return base;
    for (int i = 1;; ++i) {
      std::string n = base + "_" + std::to_string(i);
      if (!sig().find(n))
        return n;
    }
  }

  SymbolId declare(const std::string& base, std::size_t normal, std::size_t safe,
                   bool lex = false) {
    return sig().add(FunctionSymbol::make(fresh(base), SymbolKind::defined, normal, safe, lex));
  }

  void above(SymbolId f, SymbolId g) {
    trs_.precedence.push_back({sig()[f].name, sig()[g].name, true});
  }

  void rule(Term lhs, Term rhs) {
    Rule r{std::move(lhs), std::move(rhs)};
    validate_rule(sig(), r);
    trs_.rules.push_back(std::move(r));
  }

  static std::vector<Term> vars(const char* prefix, std::size_t n) {
    std::vector<Term> v;
    for (std::size_t i = 1; i <= n; ++i)
      v.push_back(Term::var(std::string(prefix) + std::to_string(i)));
    return v;
  }

  Term safe_app(SymbolId f, std::vector<Term> args) { return make_app(sig(), f, {}, std::move(args)); }
  Term app(SymbolId f, std::vector<Term> normal, std::vector<Term> safe) {
    return make_app(sig(), f, std::move(normal), std::move(safe));
  }

  SymbolId compile(const ProgramPtr& p, const std::string& path) {
    if (auto it = done_.find(p.get()); it != done_.end())
      return it->second;
    const std::string base = p->name.empty() ? path : p->name;
    auto child = [&](std::size_t i) { return compile(p->parts[i], base + "_" + std::to_string(i)); };
    const SymbolId zero = sig().id("0"), s = sig().id("s");
    SymbolId f = 0;
    switch (p->kind) {
    case SchemaKind::zero: {
      f = declare(base, 0, p->k);
      rule(safe_app(f, vars("x", p->k)), Term::app(zero));
      above(f, zero);
      break;
    }
    case SchemaKind::succ: {
      f = declare(base, 0, 1);
      auto x = Term::var("x");
      rule(safe_app(f, {x}), Term::app(s, {x}));
      above(f, s);
      break;
    }
    case SchemaKind::proj: {
      f = declare(base, 0, p->k);
      auto xs = vars("x", p->k);
      rule(safe_app(f, xs), xs[p->j - 1]);
      break;
    }
    case SchemaKind::stub: {
      f = declare(base, 0, p->k);
      break;
    }
    case SchemaKind::comp: {
      SymbolId h = child(0);
      std::vector<SymbolId> gs;
      for (std::size_t i = 1; i < p->parts.size(); ++i)
        gs.push_back(child(i));
      const std::size_t k = program_arity(*p);
      f = declare(base, 0, k);
      auto xs = vars("x", k);
      std::vector<Term> inner;
      for (auto g : gs)
        inner.push_back(safe_app(g, xs));
      rule(safe_app(f, xs), safe_app(h, inner));
      above(f, h);
      for (auto g : gs)
        above(f, g);
      break;
    }
    case SchemaKind::primrec: {
      SymbolId g = child(0), h = child(1);
      const std::size_t n = program_arity(*p->parts[0]);
      f = declare(base, 0, n + 1);
      auto x = Term::var("x");
      auto ys = vars("y", n);
      std::vector<Term> lhs0{Term::app(zero)}, lhs1{Term::app(s, {x})}, rec{x}, step{x};
      lhs0.insert(lhs0.end(), ys.begin(), ys.end());
      lhs1.insert(lhs1.end(), ys.begin(), ys.end());
      rec.insert(rec.end(), ys.begin(), ys.end());
      step.insert(step.end(), ys.begin(), ys.end());
      step.push_back(safe_app(f, rec));
      rule(safe_app(f, lhs0), safe_app(g, ys));
      rule(safe_app(f, lhs1), safe_app(h, step));
      above(f, g);
      above(f, h);
      break;
    }
    case SchemaKind::prp: {
      SymbolId g = child(0), h = child(1), pp = child(2);
      f = declare(base, 1, 1, true);
      SymbolId pw = wrapper(pp, 1, 1), hw = wrapper(h, 1, 2);
      auto x = Term::var("x"), y = Term::var("y");
      rule(app(f, {Term::app(zero)}, {y}), safe_app(g, {y}));
      rule(app(f, {Term::app(s, {x})}, {y}),
           app(hw, {x}, {y, app(f, {x}, {app(pw, {x}, {y})})}));
      for (auto q : {g, pw, hw})
        above(f, q);
      break;
    }
    case SchemaKind::umr: {
      SymbolId g0 = child(0), g1 = child(1), q = child(2), pp = child(3), h = child(4);
      f = declare(base, 2, 0, true);
      SymbolId g0w = wrapper(g0, 1, 0), g1w = wrapper(g1, 1, 1), qw = wrapper(q, 1, 0),
               pw = wrapper(pp, 2, 0), hw = wrapper(h, 2, 2);
      auto x = Term::var("x"), y = Term::var("y");
      auto z0 = Term::app(zero);
      auto sx = Term::app(s, {x}), sy = Term::app(s, {y});
      rule(app(f, {z0, y}, {}), app(g0w, {y}, {}));
      rule(app(f, {sx, z0}, {}), app(g1w, {x}, {app(f, {x, app(qw, {x}, {})}, {})}));
      rule(app(f, {sx, sy}, {}),
           app(hw, {x, y}, {app(f, {x, app(pw, {x, y}, {})}, {}), app(f, {sx, y}, {})}));
      for (auto w : {g0w, g1w, qw, pw, hw})
        above(f, w);
      break;
    }
    case SchemaKind::snr: {
      SymbolId g = child(0), h = child(1), pp = child(2);
      f = declare(base, 1, 1, true);
      SymbolId pw = wrapper(pp, 1, 2), hw = wrapper(h, 1, 2);
      auto x = Term::var("x"), y = Term::var("y");
      rule(app(f, {Term::app(zero)}, {y}), safe_app(g, {y}));
      rule(app(f, {Term::app(s, {x})}, {y}),
           app(hw, {x}, {y, app(f, {x}, {app(pw, {x}, {y, app(f, {x}, {y})})})}));
      for (auto q : {g, pw, hw})
        above(f, q);
      break;
    }
    }
    done_.emplace(p.get(), f);
    return f;
  }

  // target'(x1..xk ; y1..yl) -> target(; x1..xk, y1..yl)
  SymbolId wrapper(SymbolId target, std::size_t normal, std::size_t safe) {
    SymbolId w = declare(sig()[target].name + "'", normal, safe);
    auto xs = vars("x", normal), ys = vars("y", safe);
    std::vector<Term> all = xs;
    all.insert(all.end(), ys.begin(), ys.end());
    rule(app(w, xs, ys), safe_app(target, all));
    above(w, target);
    return w;
  }

  Trs trs_;
  std::map<const PrProgram*, SymbolId> done_;
};

}  // namespace detail

inline CompiledSystem compile(const ProgramPtr& p) {
  return detail::SchemaCompiler().finish(p);
}

/// Direct evaluation of the schema equations. `max_calls` bounds the number
/// of recursive calls.
inline std::uint64_t eval_oracle(const ProgramPtr& p, const std::vector<std::uint64_t>& args,
                                 std::uint64_t max_calls = 50'000'000) {
  if (args.size() != program_arity(*p))
    throw Error("expected " + std::to_string(program_arity(*p)) + " arguments, got " +
                std::to_string(args.size()));
  std::uint64_t calls = 0;
  auto add = [](std::uint64_t a, std::uint64_t b) {
    if (a > UINT64_MAX - b)
      throw Error("value exceeds 64 bits");
    return a + b;
  };
  auto eval = [&](auto&& self, const PrProgram& q, const std::vector<std::uint64_t>& a) -> std::uint64_t {
    if (++calls > max_calls)
      throw Error("evaluation budget exceeded");
    switch (q.kind) {
    case SchemaKind::zero: return 0;
    case SchemaKind::succ: return add(a[0], 1);
    case SchemaKind::proj: return a[q.j - 1];
    case SchemaKind::stub: throw Error("cannot evaluate an abstract stub");
    case SchemaKind::comp: {
      std::vector<std::uint64_t> inner;
      for (std::size_t i = 1; i < q.parts.size(); ++i)
        inner.push_back(self(self, *q.parts[i], a));
      return self(self, *q.parts[0], inner);
    }
    case SchemaKind::primrec: {
      std::vector<std::uint64_t> ys(a.begin() + 1, a.end());
      std::uint64_t r = self(self, *q.parts[0], ys);
      for (std::uint64_t i = 0; i < a[0]; ++i) {
        std::vector<std::uint64_t> hargs{i};
        hargs.insert(hargs.end(), ys.begin(), ys.end());
        hargs.push_back(r);
        r = self(self, *q.parts[1], hargs);
      }
      return r;
    }
    case SchemaKind::prp: {
      const auto x = a[0], y = a[1];
      if (x == 0)
        return self(self, *q.parts[0], {y});
      auto py = self(self, *q.parts[2], {x - 1, y});
      auto rec = self(self, q, {x - 1, py});
      return self(self, *q.parts[1], {x - 1, y, rec});
    }
    case SchemaKind::umr: {
      const auto x = a[0], y = a[1];
      if (x == 0)
        return self(self, *q.parts[0], {y});
      if (y == 0) {
        auto qx = self(self, *q.parts[2], {x - 1});
        auto rec = self(self, q, {x - 1, qx});
        return self(self, *q.parts[1], {x - 1, rec});
      }
      auto pxy = self(self, *q.parts[3], {x - 1, y - 1});
      auto r1 = self(self, q, {x - 1, pxy});
      auto r2 = self(self, q, {x, y - 1});
      return self(self, *q.parts[4], {x - 1, y - 1, r1, r2});
    }
    case SchemaKind::snr: {
      const auto x = a[0], y = a[1];
      if (x == 0)
        return self(self, *q.parts[0], {y});
      auto inner = self(self, q, {x - 1, y});
      auto pv = self(self, *q.parts[2], {x - 1, y, inner});
      auto rec = self(self, q, {x - 1, pv});
      return self(self, *q.parts[1], {x - 1, y, rec});
    }
    }
    return 0;
  };
  return eval(eval, *p, args);
}

/// main(numerals) normalised by the compiled system, decoded as a numeral.
inline std::uint64_t eval_compiled(const CompiledSystem& cs, const std::vector<std::uint64_t>& args,
                                   std::size_t max_steps = 10'000'000) {
  const auto& sig = cs.trs.signature;
  if (args.size() != sig[cs.main_symbol].arity())
    throw Error("wrong number of arguments for " + sig[cs.main_symbol].name);
  std::vector<Term> nums;
  for (auto a : args)
    nums.push_back(numeral(sig, a));
  auto r = normalize(cs.trs, Term::app(cs.main_symbol, std::move(nums)), max_steps);
  if (!r.normal_form)
    throw Error("step limit of " + std::to_string(max_steps) + " reached");
  return decode_numeral(sig, *r.normal_form);
}

inline bool crosscheck(const CompiledSystem& cs, const ProgramPtr& p,
                       const std::vector<std::uint64_t>& args, std::size_t max_steps = 10'000'000) {
  return eval_compiled(cs, args, max_steps) == eval_oracle(p, args);
}

inline bool crosscheck(const ProgramPtr& p, const std::vector<std::uint64_t>& args,
                       std::size_t max_steps = 10'000'000) {
  return crosscheck(compile(p), p, args, max_steps);
}

/// Schema file: one `def name = <expr>` per line; the last definition is the
/// program. Expressions: zero(k), succ, proj(k,j), comp(h; g1,...,gl),
/// primrec(g, h), prp(g, h, p), umr(g0, g1, q, p, h), snr(g, h, p), stub(k),
/// or the name of an earlier definition.
struct SchemaFile {
  std::vector<std::pair<std::string, ProgramPtr>> defs;
  ProgramPtr main() const {
    if (defs.empty())
      throw Error("schema file has no definitions");
    return defs.back().second;
  }
};

namespace detail {

class SchemaReader {
public:
  SchemaReader(std::string_view text, std::size_t line, std::size_t col0,
               const std::map<std::string, ProgramPtr>& env)
      : text_(text), line_(line), col0_(col0), env_(env) {}

  ProgramPtr expr() {
    ws();
    std::size_t start = pos_;
    std::string id = ident();
    ws();
    if (id == "succ")
      return prog::succ();
    if (id == "zero") {
      open();
      auto k = number();
      close();
      return prog::zero(k);
    }
    if (id == "stub") {
      open();
      auto k = number();
      close();
      return prog::stub(k);
    }
    if (id == "proj") {
      open();
      auto k = number();
      comma();
      auto j = number();
      close();
      return prog::proj(k, j);
    }
    if (id == "comp") {
      open();
      auto h = expr();
      ws();
      expect(';');
      std::vector<ProgramPtr> gs{expr()};
      ws();
      while (peek(',')) {
        ++pos_;
        gs.push_back(expr());
        ws();
      }
      close();
      return prog::comp(h, gs);
    }
    if (id == "primrec" || id == "prp" || id == "umr" || id == "snr") {
      open();
      std::vector<ProgramPtr> ps{expr()};
      ws();
      while (peek(',')) {
        ++pos_;
        ps.push_back(expr());
        ws();
      }
      close();
      std::size_t want = id == "primrec" ? 2 : id == "umr" ? 5 : 3;
      if (ps.size() != want)
        fail(start, id + " expects " + std::to_string(want) + " arguments");
      if (id == "primrec")
        return prog::primrec(ps[0], ps[1]);
      if (id == "prp")
        return prog::prp(ps[0], ps[1], ps[2]);
      if (id == "snr")
        return prog::snr(ps[0], ps[1], ps[2]);
      return prog::umr(ps[0], ps[1], ps[2], ps[3], ps[4]);
    }
    auto it = env_.find(id);
    if (it == env_.end())
      fail(start, "unknown definition '" + id + "'");
    return it->second;
  }

  void end() {
    ws();
    if (pos_ != text_.size())
      fail(pos_, "unexpected trailing input");
  }

private:
  void ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }
  void expect(char c) {
    ws();
    if (!peek(c))
      fail(pos_, std::string("expected '") + c + "'");
    ++pos_;
  }
  void open() { expect('('); }
  void close() { expect(')'); }
  void comma() { expect(','); }
  std::string ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_]))
      ++pos_;
    if (start == pos_)
      fail(pos_, "expected an expression");
    return std::string(text_.substr(start, pos_ - start));
  }
  std::size_t number() {
    ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (start == pos_)
      fail(pos_, "expected a number");
    return std::stoul(std::string(text_.substr(start, pos_ - start)));
  }
  [[noreturn]] void fail(std::size_t at, const std::string& msg) const {
    throw ParseError(line_, col0_ + at + 1, msg);
  }

  std::string_view text_;
  std::size_t line_, col0_;
  const std::map<std::string, ProgramPtr>& env_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline SchemaFile parse_schema(std::string_view text) {
  SchemaFile file;
  std::map<std::string, ProgramPtr> env;
  std::size_t lineno = 0, start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos)
      end = text.size();
    std::string line(text.substr(start, end - start));
    start = end + 1;
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos)
      line.resize(h);
    if (detail::trim(line).empty())
      continue;
    std::string_view lv = line;
    auto first = lv.find_first_not_of(" \t");
    if (lv.substr(first, 4) != "def " && lv.substr(first, 4) != "def\t")
      throw ParseError(lineno, first + 1, "expected 'def name = expr'");
    auto eq = lv.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(lineno, first + 1, "expected '='");
    std::string name(detail::trim(lv.substr(first + 4, eq - first - 4)));
    if (name.empty() || !std::all_of(name.begin(), name.end(), detail::ident_char))
      throw ParseError(lineno, first + 5, "invalid definition name");
    if (env.count(name))
      throw ParseError(lineno, first + 5, "duplicate definition '" + name + "'");
    std::string body(lv.substr(eq + 1));
    detail::SchemaReader reader(body, lineno, eq + 1, env);
    ProgramPtr p = reader.expr();
    reader.end();
    p = prog::named(name, p);
    try {
      program_arity(*p);
    } catch (const Error& e) {
      throw ParseError(lineno, first + 1, e.what());
    }
    env.emplace(name, p);
    file.defs.emplace_back(name, p);
  }
  return file;
}

}  // namespace plpo
