#pragma once

#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "plpo/parser.hpp"
#include "plpo/term.hpp"

namespace plpo {

enum class Judgment { aux, aux_bounded, plpo, plpo_bounded, lpo, equiv };

inline std::string judgment_name(Judgment j) {
  switch (j) {
  case Judgment::aux: return "AUX";
  case Judgment::aux_bounded: return "AUX_BOUNDED";
  case Judgment::plpo: return "PLPO";
  case Judgment::plpo_bounded: return "PLPO_BOUNDED";
  case Judgment::lpo: return "LPO";
  case Judgment::equiv: return "EQUIV";
  }
  return "?";
}

struct Certificate;
using CertPtr = std::shared_ptr<const Certificate>;

/// One node of a derivation of lhs (judgment) rhs. `ell` is the budget of the
/// bounded judgments and 0 otherwise.
struct Certificate {
  Judgment judgment = Judgment::plpo;
  int ell = 0;
  Term lhs;
  Term rhs;
  std::string case_label;
  std::vector<CertPtr> children;
};

inline std::string judgment_text(const Certificate& c) {
  std::string j = judgment_name(c.judgment);
  if (c.judgment == Judgment::aux_bounded || c.judgment == Judgment::plpo_bounded)
    j += "(" + std::to_string(c.ell) + ")";
  return j;
}

/// Nested text records, two spaces of indentation per level:
///   PLPO [Def2-Case3] f(;s(;x),y) > h(;x,y,f(;x,y))
inline void write_certificate(std::ostream& out, const Signature& sig, const Certificate& c,
                              int depth = 0) {
  out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << judgment_text(c) << " ["
      << c.case_label << "] " << to_string(sig, c.lhs)
      << (c.judgment == Judgment::equiv ? " ~ " : " > ") << to_string(sig, c.rhs) << '\n';
  for (const auto& ch : c.children)
    write_certificate(out, sig, *ch, depth + 1);
}

inline std::string certificate_text(const Signature& sig, const Certificate& c) {
  std::ostringstream out;
  write_certificate(out, sig, c);
  return out.str();
}

inline std::size_t certificate_nodes(const Certificate& c) {
  std::size_t n = 1;
  for (const auto& ch : c.children)
    n += certificate_nodes(*ch);
  return n;
}

}  // namespace plpo
