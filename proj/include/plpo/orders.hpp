#pragma once

// Decision procedures for the auxiliary relation (and its depth-bounded
// restriction), the predicative lexicographic path order, its bounded
// variant, and a reference lexicographic path order. Every positive answer
// carries a certificate naming the case that fired.
//
// Case labels:
//   Def1-Case1  constructor root, some argument covers t
//   Def1-Case2  defined root, some normal argument covers t
//   Def1-Case3  defined root above root(t), s covers every argument of t
//   Def2-Case1  s is auxiliary-greater than t
//   Def2-Case2  some argument of s is >= t
//   Def2-Case3  defined root above root(t); normal args via the auxiliary
//               relation, safe args via the order
//   Def2-Case4  equal rank, non-lex root; normal tuple >=, safe tuple >
//   Def2-Case4-perm(p1,...,pl)   as above with safe arguments of t permuted
//   Def2-Case5  equal rank, lex root; lexicographic descent on normal args
//   LPO-Sub, LPO-Prec, LPO-Lex   the three reference LPO cases
//   Equiv       term equivalence

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "plpo/certificate.hpp"
#include "plpo/precedence.hpp"
#include "plpo/term.hpp"

namespace plpo {

struct OrderParams {
  std::vector<int> rank;
  std::vector<bool> lex;
  bool permutation_extension = false;
};

/// Canonical ranks of the declared precedence and the declared lex flags.
inline OrderParams default_params(const Trs& trs) {
  OrderParams p;
  p.rank = canonical_ranks(trs.signature, trs.precedence);
  for (const auto& f : trs.signature.symbols())
    p.lex.push_back(f.lex);
  return p;
}

class Comparator {
public:
  static constexpr int unbounded = -1;

  /// With `certificates` false the comparator only decides; positive answers
  /// then share one placeholder certificate.
  Comparator(const Signature& sig, OrderParams params, bool certificates = true)
      : sig_(sig), p_(std::move(params)), certificates_(certificates) {
    if (p_.rank.size() != sig_.size() || p_.lex.size() != sig_.size())
      throw Error("order parameters do not match the signature");
    for (SymbolId f = 0; f < sig_.size(); ++f)
      if (p_.lex[f] && !sig_[f].is_defined())
        throw Error("lex set contains constructor '" + sig_[f].name + "'");
  }

  const Signature& signature() const { return sig_; }
  const OrderParams& params() const { return p_; }

  bool equiv(const Term& s, const Term& t) const { return plpo::equiv(sig_, p_.rank, s, t); }

  CertPtr aux_gt(const Term& s, const Term& t) { return aux(s, t, unbounded); }

  CertPtr aux_gt_bounded(const Term& s, const Term& t, int ell) {
    check_ell(ell);
    return aux(s, t, ell);
  }

  CertPtr plpo_gt(const Term& s, const Term& t) { return gt(s, t, unbounded); }

  CertPtr plpo_gt_bounded(const Term& s, const Term& t, int ell) {
    check_ell(ell);
    return gt(s, t, ell);
  }

  CertPtr lpo_gt(const Term& s, const Term& t) { return lpo(s, t); }

private:
  enum Kind : int { k_aux, k_gt, k_lpo };

  struct Key {
    int kind;
    int ell;
    Term s, t;
    bool operator==(const Key& o) const {
      return kind == o.kind && ell == o.ell && s.identity() == o.s.identity() &&
             t.identity() == o.t.identity();
    }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      auto h = std::hash<const void*>{}(k.s.identity());
      h = h * 31 + std::hash<const void*>{}(k.t.identity());
      return h * 31 + static_cast<std::size_t>(k.kind * 1009 + k.ell);
    }
  };

  static void check_ell(int ell) {
    if (ell < 2)
      throw Error("bound must be at least 2, got " + std::to_string(ell));
  }

  bool higher(SymbolId f, SymbolId g) const { return p_.rank[f] > p_.rank[g]; }
  bool same_rank(SymbolId f, SymbolId g) const { return p_.rank[f] == p_.rank[g]; }

  CertPtr make(Judgment j, int ell, const Term& s, const Term& t, std::string label,
               std::vector<CertPtr> children = {}) const {
    if (!certificates_) {
      static const CertPtr placeholder = std::make_shared<const Certificate>();
      return placeholder;
    }
    auto c = std::make_shared<Certificate>();
    c->judgment = j;
    c->ell = ell == unbounded ? 0 : ell;
    c->lhs = s;
    c->rhs = t;
    c->case_label = std::move(label);
    c->children = std::move(children);
    return c;
  }

  CertPtr equiv_cert(const Term& s, const Term& t) const {
    return make(Judgment::equiv, unbounded, s, t, "Equiv");
  }

  Judgment aux_judgment(int ell) const {
    return ell == unbounded ? Judgment::aux : Judgment::aux_bounded;
  }
  Judgment gt_judgment(int ell) const {
    return ell == unbounded ? Judgment::plpo : Judgment::plpo_bounded;
  }

  template <class F>
  CertPtr memoized(int kind, int ell, const Term& s, const Term& t, F&& compute) {
    Key key{kind, ell, s, t};
    if (auto it = memo_.find(key); it != memo_.end())
      return it->second;
    CertPtr r = compute();
    memo_.emplace(std::move(key), r);
    return r;
  }

  // s ⊐ t (ell == unbounded) or s ⊐^ell t. Budget 0 is the empty relation.
  CertPtr aux(const Term& s, const Term& t, int ell) {
    if (s.is_var() || ell == 0)
      return nullptr;
    return memoized(k_aux, ell, s, t, [&]() -> CertPtr {
      const SymbolId f = s.symbol();
      const auto& fs = sig_[f];
      if (fs.is_constructor()) {
        for (const auto& si : split_args(sig_, s))
          if (auto c = aux_ge(si, t, ell))
            return make(aux_judgment(ell), ell, s, t, "Def1-Case1", {c});
        return nullptr;
      }
      for (auto pos : sig_.normal_positions(f))
        if (auto c = aux_ge(s.arg(pos), t, ell))
          return make(aux_judgment(ell), ell, s, t, "Def1-Case2", {c});
      if (t.is_app() && higher(f, t.symbol())) {
        const int inner = ell == unbounded ? unbounded : ell - 1;
        std::vector<CertPtr> children;
        for (const auto& tj : split_args(sig_, t)) {
          auto c = aux(s, tj, inner);
          if (!c)
            return nullptr;
          children.push_back(c);
        }
        return make(aux_judgment(ell), ell, s, t, "Def1-Case3", std::move(children));
      }
      return nullptr;
    });
  }

  CertPtr aux_ge(const Term& s, const Term& t, int ell) {
    if (equiv(s, t))
      return equiv_cert(s, t);
    return aux(s, t, ell);
  }

  CertPtr ge(const Term& s, const Term& t, int ell) {
    if (equiv(s, t))
      return equiv_cert(s, t);
    return gt(s, t, ell);
  }

  // s >_plpo t, with every use of the auxiliary relation bounded by ell.
  CertPtr gt(const Term& s, const Term& t, int ell) {
    if (s.is_var())
      return nullptr;
    return memoized(k_gt, ell, s, t, [&]() -> CertPtr {
      const Judgment j = gt_judgment(ell);
      if (auto c = aux(s, t, ell))
        return make(j, ell, s, t, "Def2-Case1", {c});
      const auto sargs = split_args(sig_, s);
      for (const auto& si : sargs)
        if (auto c = ge(si, t, ell))
          return make(j, ell, s, t, "Def2-Case2", {c});
      if (t.is_var())
        return nullptr;

      const SymbolId f = s.symbol(), g = t.symbol();
      if (!sig_[f].is_defined())
        return nullptr;
      const auto tnormal = normal_args(sig_, t);
      const auto tsafe = safe_args(sig_, t);

      if (higher(f, g)) {
        std::vector<CertPtr> children;
        for (const auto& tj : tnormal) {
          auto c = aux(s, tj, ell);
          if (!c)
            return nullptr;
          children.push_back(c);
        }
        for (const auto& tj : tsafe) {
          auto c = gt(s, tj, ell);
          if (!c)
            return nullptr;
          children.push_back(c);
        }
        return make(j, ell, s, t, "Def2-Case3", std::move(children));
      }
      if (!same_rank(f, g))
        return nullptr;

      const auto snormal = normal_args(sig_, s);
      const auto ssafe = safe_args(sig_, s);
      if (!p_.lex[f])
        return case4(s, t, ell, snormal, ssafe, tnormal, tsafe);
      return case5(s, t, ell, snormal, tnormal, tsafe);
    });
  }

  CertPtr case4(const Term& s, const Term& t, int ell, const std::vector<Term>& snormal,
                const std::vector<Term>& ssafe, const std::vector<Term>& tnormal,
                const std::vector<Term>& tsafe) {
    if (snormal.size() != tnormal.size() || ssafe.size() != tsafe.size())
      return nullptr;
    std::vector<CertPtr> normal_children;
    for (std::size_t i = 0; i < snormal.size(); ++i) {
      auto c = ge(snormal[i], tnormal[i], ell);
      if (!c)
        return nullptr;
      normal_children.push_back(c);
    }
    std::vector<std::size_t> perm(ssafe.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<CertPtr> children = normal_children;
      bool strict = false, ok = true;
      for (std::size_t i = 0; i < ssafe.size() && ok; ++i) {
        const Term& ti = tsafe[perm[i]];
        if (equiv(ssafe[i], ti)) {
          children.push_back(equiv_cert(ssafe[i], ti));
        } else if (auto c = gt(ssafe[i], ti, ell)) {
          children.push_back(c);
          strict = true;
        } else {
          ok = false;
        }
      }
      if (ok && strict) {
        std::string label = "Def2-Case4";
        if (p_.permutation_extension) {
          label += "-perm(";
          for (std::size_t i = 0; i < perm.size(); ++i)
            label += (i ? "," : "") + std::to_string(perm[i]);
          label += ")";
        }
        return make(gt_judgment(ell), ell, s, t, label, std::move(children));
      }
    } while (p_.permutation_extension && std::next_permutation(perm.begin(), perm.end()));
    return nullptr;
  }

  CertPtr case5(const Term& s, const Term& t, int ell, const std::vector<Term>& snormal,
                const std::vector<Term>& tnormal, const std::vector<Term>& tsafe) {
    const std::size_t bound = std::min(snormal.size(), tnormal.size());
    std::vector<CertPtr> prefix;
    for (std::size_t i0 = 0; i0 < bound; ++i0) {
      if (auto pivot = gt(snormal[i0], tnormal[i0], ell)) {
        std::vector<CertPtr> children = prefix;
        children.push_back(pivot);
        bool ok = true;
        for (std::size_t jn = i0 + 1; jn < tnormal.size() && ok; ++jn) {
          if (auto c = aux(s, tnormal[jn], ell))
            children.push_back(c);
          else
            ok = false;
        }
        for (std::size_t js = 0; js < tsafe.size() && ok; ++js) {
          if (auto c = gt(s, tsafe[js], ell))
            children.push_back(c);
          else
            ok = false;
        }
        if (ok)
          return make(gt_judgment(ell), ell, s, t, "Def2-Case5", std::move(children));
      }
      if (!equiv(snormal[i0], tnormal[i0]))
        break;
      prefix.push_back(equiv_cert(snormal[i0], tnormal[i0]));
    }
    return nullptr;
  }

  // Reference LPO over the normal-then-safe argument order, same ranks.
  CertPtr lpo(const Term& s, const Term& t) {
    if (s.is_var())
      return nullptr;
    return memoized(k_lpo, 0, s, t, [&]() -> CertPtr {
      const auto sargs = split_args(sig_, s);
      for (const auto& si : sargs)
        if (auto c = lpo_ge(si, t))
          return make(Judgment::lpo, 0, s, t, "LPO-Sub", {c});
      if (t.is_var())
        return nullptr;
      const SymbolId f = s.symbol(), g = t.symbol();
      const auto targs = split_args(sig_, t);
      if (higher(f, g)) {
        std::vector<CertPtr> children;
        for (const auto& tj : targs) {
          auto c = lpo(s, tj);
          if (!c)
            return nullptr;
          children.push_back(c);
        }
        return make(Judgment::lpo, 0, s, t, "LPO-Prec", std::move(children));
      }
      if (!same_rank(f, g))
        return nullptr;
      const std::size_t bound = std::min(sargs.size(), targs.size());
      std::vector<CertPtr> prefix;
      for (std::size_t i0 = 0; i0 < bound; ++i0) {
        if (auto pivot = lpo(sargs[i0], targs[i0])) {
          std::vector<CertPtr> children = prefix;
          children.push_back(pivot);
          bool ok = true;
          for (std::size_t j = i0 + 1; j < targs.size() && ok; ++j) {
            if (auto c = lpo(s, targs[j]))
              children.push_back(c);
            else
              ok = false;
          }
          if (ok)
            return make(Judgment::lpo, 0, s, t, "LPO-Lex", std::move(children));
        }
        if (!equiv(sargs[i0], targs[i0]))
          break;
        prefix.push_back(equiv_cert(sargs[i0], targs[i0]));
      }
      return nullptr;
    });
  }

  CertPtr lpo_ge(const Term& s, const Term& t) {
    if (equiv(s, t))
      return equiv_cert(s, t);
    return lpo(s, t);
  }

  const Signature& sig_;
  OrderParams p_;
  bool certificates_;
  std::unordered_map<Key, CertPtr, KeyHash> memo_;
};

inline CertPtr aux_gt(const Signature& sig, const OrderParams& p, const Term& s, const Term& t) {
  return Comparator(sig, p).aux_gt(s, t);
}
inline CertPtr aux_gt_bounded(const Signature& sig, const OrderParams& p, const Term& s,
                              const Term& t, int ell) {
  return Comparator(sig, p).aux_gt_bounded(s, t, ell);
}
inline CertPtr plpo_gt(const Signature& sig, const OrderParams& p, const Term& s, const Term& t) {
  return Comparator(sig, p).plpo_gt(s, t);
}
inline CertPtr plpo_gt_bounded(const Signature& sig, const OrderParams& p, const Term& s,
                               const Term& t, int ell) {
  return Comparator(sig, p).plpo_gt_bounded(s, t, ell);
}
inline CertPtr lpo_gt(const Signature& sig, const OrderParams& p, const Term& s, const Term& t) {
  return Comparator(sig, p).lpo_gt(s, t);
}

}  // namespace plpo
