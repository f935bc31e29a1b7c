#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "plpo/plpo.hpp"

#ifndef PLPO_SOURCE_DIR
#error "PLPO_SOURCE_DIR must point at the source tree"
#endif

namespace plpo::test {

inline std::string source_path(const std::string& rel) { return std::string(PLPO_SOURCE_DIR) + "/" + rel; }

inline std::string slurp(const std::string& rel) {
  std::ifstream in(source_path(rel));
  if (!in)
    throw Error("missing fixture " + rel);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Trs load_trs(const std::string& name) { return parse_trs(slurp("problems/" + name + ".trs")); }

inline ProgramPtr load_schema(const std::string& name) {
  return parse_schema(slurp("problems/schemas/" + name + ".pr")).main();
}

inline Term term(const Trs& trs, const std::string& text) { return parse_term(trs.signature, text); }

inline Term numeral_term(const Signature& sig, std::size_t n) {
  Term t = Term::app(sig.id("0"));
  for (std::size_t i = 0; i < n; ++i)
    t = Term::app(sig.id("s"), {t});
  return t;
}

}  // namespace plpo::test
