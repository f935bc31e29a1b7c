#include <gtest/gtest.h>

#include "plpo/plpo.hpp"
#include "support/cert_replay.hpp"
#include "support/fixtures.hpp"

using namespace plpo;
using plpo::test::load_schema;

namespace {

ProgramPtr addition() { return prog::primrec(prog::proj(1, 1), prog::comp(prog::succ(), {prog::proj(3, 3)})); }

void expect_oriented(const CompiledSystem& cs) {
  auto r = check_trs(cs.trs, cs.params);
  EXPECT_TRUE(r.oriented) << print_trs(cs.trs);
  test::Replayer rep(r.signature, r.params);
  for (const auto& pr : r.per_rule)
    if (pr.certificate)
      EXPECT_TRUE(rep.valid(*pr.certificate)) << rep.error();
}

std::set<std::string> rule_texts(const Trs& trs) {
  std::set<std::string> out;
  for (const auto& r : trs.rules)
    out.insert(to_string(trs.signature, r.lhs) + " -> " + to_string(trs.signature, r.rhs));
  return out;
}

}  // namespace

TEST(Compile, Addition) {
  auto p = addition();
  auto cs = compile(p);
  expect_oriented(cs);
  EXPECT_EQ(eval_compiled(cs, {2, 3}), 5u);
  EXPECT_TRUE(crosscheck(cs, p, {2, 3}));
  for (const auto& f : cs.trs.signature.symbols())
    if (f.is_constructor())
      EXPECT_TRUE(f.name == "0" || f.name == "s");
}

TEST(Compile, ZeroFunction) {
  auto cs = compile(prog::zero(2));
  ASSERT_EQ(cs.trs.rules.size(), 1u);
  EXPECT_EQ(rule_texts(cs.trs), (std::set<std::string>{"f(;x1,x2) -> 0"}));
  expect_oriented(cs);
  auto r = check_trs(cs.trs, cs.params);
  EXPECT_EQ(r.per_rule[0].certificate->case_label, "Def2-Case1");
  EXPECT_EQ(eval_oracle(prog::zero(2), {9, 9}), 0u);
}

TEST(Compile, SimpleNestedRecursionRules) {
  auto p = prog::snr(prog::stub(1, "g"), prog::stub(3, "h"), prog::stub(3, "p"));
  auto cs = compile(p);
  expect_oriented(cs);
  EXPECT_EQ(rule_texts(cs.trs), (std::set<std::string>{
                                    "p'(x1;y1,y2) -> p(;x1,y1,y2)",
                                    "h'(x1;y1,y2) -> h(;x1,y1,y2)",
                                    "f(0;y) -> g(;y)",
                                    "f(s(;x);y) -> h'(x;y,f(x;p'(x;y,f(x;y))))",
                                }));
  const auto& sig = cs.trs.signature;
  EXPECT_TRUE(sig[sig.id("f")].lex);
  EXPECT_EQ(sig[sig.id("f")].normal_arity(), 1u);
}

TEST(Compile, ParameterSubstitutionAndMultipleRecursion) {
  auto prp = compile(prog::prp(prog::stub(1, "g"), prog::stub(3, "h"), prog::stub(2, "p")));
  expect_oriented(prp);
  auto umr = compile(prog::umr(prog::stub(1, "g0"), prog::stub(2, "g1"), prog::stub(1, "q"),
                               prog::stub(2, "p"), prog::stub(4, "h")));
  expect_oriented(umr);
  const auto& sig = umr.trs.signature;
  EXPECT_EQ(sig[sig.id("f")].normal_arity(), 2u);
  EXPECT_EQ(sig[sig.id("f")].safe_arity(), 0u);
}

TEST(Compile, ArityErrors) {
  EXPECT_THROW(compile(prog::primrec(prog::proj(1, 1), prog::proj(2, 1))), Error);
  EXPECT_THROW(compile(prog::proj(2, 3)), Error);
  EXPECT_THROW(compile(prog::comp(prog::succ(), {prog::proj(1, 1), prog::proj(1, 1)})), Error);
  auto inner = prog::prp(prog::proj(1, 1), prog::proj(3, 3), prog::proj(2, 2));
  EXPECT_THROW(compile(prog::comp(prog::succ(), {inner})), Error);
}

TEST(Oracle, Schemas) {
  EXPECT_EQ(eval_oracle(addition(), {2, 3}), 5u);
  auto count = prog::prp(prog::proj(1, 1), prog::comp(prog::succ(), {prog::proj(3, 3)}), prog::proj(2, 2));
  EXPECT_EQ(eval_oracle(count, {3, 4}), 7u);
  EXPECT_EQ(eval_oracle(load_schema("snr"), {3, 1}), 1u + 7u);
  EXPECT_EQ(eval_oracle(load_schema("prp"), {3, 1}), 7u);
  EXPECT_EQ(eval_oracle(load_schema("mult"), {4, 5}), 20u);
  EXPECT_THROW(eval_oracle(addition(), {1}), Error);
  EXPECT_THROW(eval_oracle(prog::stub(1), {1}), Error);
}

TEST(Crosscheck, Fixtures) {
  for (auto name : {"add", "mult", "prp", "umr", "snr"}) {
    auto p = load_schema(name);
    auto cs = compile(p);
    expect_oriented(cs);
    EXPECT_TRUE(crosscheck(cs, p, {0, 0})) << name;
    EXPECT_TRUE(crosscheck(cs, p, {2, 2})) << name;
  }
  auto umr = load_schema("umr");
  EXPECT_TRUE(crosscheck(umr, {2, 2}));
}

TEST(SchemaFile, ParseErrors) {
  EXPECT_THROW(parse_schema("def f = nope(1)\n"), Error);
  EXPECT_THROW(parse_schema("def f = proj(1,1\n"), Error);
  EXPECT_THROW(parse_schema("def f = g\n"), Error);
  EXPECT_THROW(parse_schema("# only a comment\n").main(), Error);
  auto file = parse_schema("def a = succ\n# comment\n\ndef b = comp(a; a)\n");
  EXPECT_EQ(file.defs.size(), 2u);
  EXPECT_EQ(eval_oracle(file.main(), {3}), 5u);
}

TEST(Numerals, Decode) {
  auto cs = compile(addition());
  const auto& sig = cs.trs.signature;
  EXPECT_EQ(decode_numeral(sig, numeral(sig, 4)), 4u);
  EXPECT_THROW(decode_numeral(sig, Term::app(cs.main_symbol, {numeral(sig, 0), numeral(sig, 0)})),
               Error);
}
