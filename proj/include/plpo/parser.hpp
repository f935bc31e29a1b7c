#pragma once

// Line-oriented TRS file format:
//
//   signature
//     0 : constructor 0;0
//     s : constructor 0;1
//     f : defined lex 1;1
//   precedence
//     f > g, h
//     f = f2
//   rules
//     f(s(;x) ; y) -> h(x ; y, f(x ; p(x ; y)))
//
// '#' starts a comment. In terms, undeclared identifiers are variables.

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "plpo/precedence.hpp"
#include "plpo/term.hpp"

namespace plpo {

class ParseError : public Error {
public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_, column_;
};

namespace detail {

inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class TermReader {
public:
  TermReader(const Signature& sig, std::string_view text, std::size_t line, std::size_t col0)
      : sig_(sig), text_(text), line_(line), col0_(col0) {}

  Term read_term() {
    skip_ws();
    std::size_t start = pos_;
    std::string name = read_ident();
    skip_ws();
    auto f = sig_.find(name);
    if (!peek('(')) {
      if (!f)
        return Term::var(name);
      if (sig_[*f].arity() != 0)
        fail(start, "arity mismatch: '" + name + "' expects " + arity_str(*f) + " arguments");
      return Term::app(*f);
    }
    if (!f)
      fail(start, "undeclared symbol '" + name + "' used with arguments");
    ++pos_;
    std::vector<Term> before, after;
    bool semicolon = false;
    skip_ws();
    while (!peek(')')) {
      if (peek(';')) {
        if (semicolon)
          fail(pos_, "second ';' in argument list");
        semicolon = true;
        ++pos_;
        skip_ws();
        continue;
      }
      auto& list = semicolon ? after : before;
      list.push_back(read_term());
      skip_ws();
      if (peek(',')) {
        ++pos_;
        skip_ws();
        if (peek(')') || peek(';'))
          fail(pos_, "expected term after ','");
      } else if (!peek(')') && !peek(';')) {
        fail(pos_, "expected ',', ';' or ')'");
      }
    }
    ++pos_;
    const auto& sym = sig_[*f];
    if (semicolon) {
      if (before.size() != sym.normal_arity() || after.size() != sym.safe_arity())
        fail(start, "arity mismatch: '" + name + "' expects " + arity_str(*f) + ", got " +
                        std::to_string(before.size()) + ";" + std::to_string(after.size()));
      return make_app(sig_, *f, std::move(before), std::move(after));
    }
    if (before.size() != sym.arity())
      fail(start, "arity mismatch: '" + name + "' expects " + arity_str(*f) + ", got " +
                      std::to_string(before.size()) + " arguments");
    return Term::app(*f, std::move(before));
  }

  void expect_end() {
    skip_ws();
    if (pos_ != text_.size())
      fail(pos_, "unexpected trailing input");
  }

  std::size_t pos() const { return pos_; }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

private:
  std::string arity_str(SymbolId f) const {
    return std::to_string(sig_[f].normal_arity()) + ";" + std::to_string(sig_[f].safe_arity());
  }

  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  std::string read_ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_]))
      ++pos_;
    if (start == pos_)
      fail(pos_, pos_ < text_.size() ? std::string("unexpected '") + text_[pos_] + "'"
                                     : std::string("unexpected end of term"));
    return std::string(text_.substr(start, pos_ - start));
  }

  [[noreturn]] void fail(std::size_t at, const std::string& msg) const {
    throw ParseError(line_, col0_ + at + 1, msg);
  }

  const Signature& sig_;
  std::string_view text_;
  std::size_t line_, col0_;
  std::size_t pos_ = 0;
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;)
    out.push_back(w);
  return out;
}

}  // namespace detail

inline Term parse_term(const Signature& sig, std::string_view text) {
  detail::TermReader r(sig, text, 1, 0);
  Term t = r.read_term();
  r.expect_end();
  return t;
}

inline Trs parse_trs(std::string_view text) {
  enum class Section { none, signature, precedence, rules } section = Section::none;
  Trs trs;
  struct PendingRule {
    std::string text;
    std::size_t line, col;
  };
  struct PendingPrec {
    PrecedencePair pair;
    std::size_t line;
  };
  std::vector<PendingRule> pending_rules;
  std::vector<PendingPrec> pending_prec;

  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string_view::npos)
      raw = raw.substr(0, hash);
    std::string_view line = detail::trim(raw);
    if (line.empty()) {
      if (end == text.size())
        break;
      continue;
    }
    std::size_t col = static_cast<std::size_t>(line.data() - raw.data());

    if (line == "signature") {
      section = Section::signature;
    } else if (line == "precedence") {
      section = Section::precedence;
    } else if (line == "rules") {
      section = Section::rules;
    } else if (section == Section::signature) {
      auto colon = line.find(':');
      if (colon == std::string_view::npos)
        throw ParseError(lineno, col + 1, "expected 'name : kind k;l'");
      std::string name(detail::trim(line.substr(0, colon)));
      if (name.empty() || !std::all_of(name.begin(), name.end(), detail::ident_char))
        throw ParseError(lineno, col + 1, "invalid symbol name '" + name + "'");
      auto words = detail::split_ws(line.substr(colon + 1));
      std::size_t col_rest = col + colon + 2;
      if (words.size() < 2 || words.size() > 3)
        throw ParseError(lineno, col_rest, "expected 'constructor k;l' or 'defined [lex] k;l'");
      SymbolKind kind;
      if (words[0] == "constructor")
        kind = SymbolKind::constructor;
      else if (words[0] == "defined")
        kind = SymbolKind::defined;
      else
        throw ParseError(lineno, col_rest, "unknown symbol kind '" + words[0] + "'");
      bool lex = false;
      if (words.size() == 3) {
        if (words[1] != "lex")
          throw ParseError(lineno, col_rest, "expected 'lex', got '" + words[1] + "'");
        if (kind != SymbolKind::defined)
          throw ParseError(lineno, col_rest, "constructor '" + name + "' cannot be lex");
        lex = true;
      }
      const std::string& ar = words.back();
      auto semi = ar.find(';');
      std::size_t k = 0, l = 0;
      try {
        if (semi == std::string::npos)
          throw std::invalid_argument("no ';'");
        std::size_t used = 0;
        k = std::stoul(ar.substr(0, semi), &used);
        if (used != semi)
          throw std::invalid_argument("bad");
        l = std::stoul(ar.substr(semi + 1), &used);
        if (used != ar.size() - semi - 1)
          throw std::invalid_argument("bad");
      } catch (const std::exception&) {
        throw ParseError(lineno, col_rest, "expected arity 'k;l', got '" + ar + "'");
      }
      try {
        trs.signature.add(FunctionSymbol::make(name, kind, k, l, lex));
      } catch (const Error& e) {
        throw ParseError(lineno, col + 1, e.what());
      }
    } else if (section == Section::precedence) {
      auto op = line.find_first_of(">=");
      if (op == std::string_view::npos)
        throw ParseError(lineno, col + 1, "expected 'f > g' or 'f = g'");
      bool strict = line[op] == '>';
      std::string lhs(detail::trim(line.substr(0, op)));
      std::string rest(line.substr(op + 1));
      std::vector<std::string> rhs;
      std::istringstream in(rest);
      for (std::string item; std::getline(in, item, ',');) {
        std::string name(detail::trim(item));
        if (name.empty())
          throw ParseError(lineno, col + op + 2, "empty symbol in precedence");
        rhs.push_back(name);
      }
      if (lhs.empty() || rhs.empty())
        throw ParseError(lineno, col + 1, "expected 'f > g' or 'f = g'");
      for (auto& r : rhs)
        pending_prec.push_back({{lhs, r, strict}, lineno});
    } else if (section == Section::rules) {
      pending_rules.push_back({std::string(line), lineno, col});
    } else {
      throw ParseError(lineno, col + 1, "content outside of a section");
    }
    if (end == text.size())
      break;
  }

  if (!trs.signature.has_constant_constructor())
    throw ParseError(1, 1, "signature must contain a constructor constant");

  for (const auto& p : pending_prec) {
    for (const auto* n : {&p.pair.greater, &p.pair.lesser})
      if (!trs.signature.find(*n))
        throw ParseError(p.line, 1, "undeclared symbol '" + *n + "' in precedence");
    trs.precedence.push_back(p.pair);
  }
  try {
    canonical_ranks(trs.signature, trs.precedence);
  } catch (const Error& e) {
    throw ParseError(pending_prec.empty() ? 1 : pending_prec.front().line, 1, e.what());
  }

  for (const auto& pr : pending_rules) {
    auto arrow = pr.text.find("->");
    if (arrow == std::string::npos)
      throw ParseError(pr.line, pr.col + 1, "expected 'lhs -> rhs'");
    std::string_view all = pr.text;
    detail::TermReader lr(trs.signature, all.substr(0, arrow), pr.line, pr.col);
    Term lhs = lr.read_term();
    lr.expect_end();
    detail::TermReader rr(trs.signature, all.substr(arrow + 2), pr.line, pr.col + arrow + 2);
    Term rhs = rr.read_term();
    rr.expect_end();
    Rule rule{lhs, rhs};
    try {
      validate_rule(trs.signature, rule);
    } catch (const Error& e) {
      throw ParseError(pr.line, pr.col + 1, e.what());
    }
    trs.rules.push_back(std::move(rule));
  }
  return trs;
}

inline void print_term(std::ostream& out, const Signature& sig, const Term& t) {
  if (t.is_var()) {
    out << t.var_name();
    return;
  }
  const auto& f = sig[t.symbol()];
  out << f.name;
  if (f.arity() == 0)
    return;
  out << '(';
  bool first = true;
  for (auto p : sig.normal_positions(t.symbol())) {
    if (!first)
      out << ',';
    first = false;
    print_term(out, sig, t.arg(p));
  }
  out << ';';
  first = true;
  for (auto p : sig.safe_positions(t.symbol())) {
    if (!first)
      out << ',';
    first = false;
    print_term(out, sig, t.arg(p));
  }
  out << ')';
}

inline std::string to_string(const Signature& sig, const Term& t) {
  std::ostringstream out;
  print_term(out, sig, t);
  return out.str();
}

/// Prints in the file format. Arguments are written normal-first, so a
/// separation that is not a prefix mask is printed as the equivalent system
/// with positions reordered.
inline std::string print_trs(const Trs& trs) {
  std::ostringstream out;
  const auto& sig = trs.signature;
  out << "signature\n";
  for (const auto& f : sig.symbols()) {
    out << "  " << f.name << " : " << (f.is_constructor() ? "constructor" : "defined")
        << (f.lex ? " lex" : "") << ' ' << f.normal_arity() << ';' << f.safe_arity() << '\n';
  }
  if (!trs.precedence.empty()) {
    out << "precedence\n";
    for (const auto& p : trs.precedence)
      out << "  " << p.greater << (p.strict ? " > " : " = ") << p.lesser << '\n';
  }
  out << "rules\n";
  for (const auto& r : trs.rules) {
    out << "  ";
    print_term(out, sig, r.lhs);
    out << " -> ";
    print_term(out, sig, r.rhs);
    out << '\n';
  }
  return out.str();
}

}  // namespace plpo
