// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "plpo/plpo.hpp"
#include "support/cert_replay.hpp"
#include "support/fixtures.hpp"
#include "support/path_oracle.hpp"
#include "support/random_terms.hpp"
#include "support/seed.hpp"

using namespace plpo;
using plpo::test::load_schema;
using plpo::test::load_trs;

namespace {

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string secs(double s) {
  std::ostringstream o;
  o.precision(3);
  o << s << "s";
  return o.str();
}

// Problems seen while checking one criterion; the first few are printed.
struct Findings {
  std::vector<std::string> items;
  void add(std::string s) { items.push_back(std::move(s)); }
  bool empty() const { return items.empty(); }
};

int failures = 0;

void report(int id, const std::string& name, const Findings& f, const std::string& detail) {
  const bool ok = f.empty();
  if (!ok)
    ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << detail << '\n';
  for (std::size_t i = 0; i < f.items.size() && i < 5; ++i)
    std::cout << "    - " << f.items[i] << '\n';
  if (f.items.size() > 5)
    std::cout << "    - ... " << f.items.size() - 5 << " more\n";
  std::cout.flush();
}

// Every certificate produced during the run, with the setting it was made in.
struct Emitted {
  std::shared_ptr<const Signature> sig;
  OrderParams params;
  CertPtr cert;
};
std::vector<Emitted> corpus;

void keep(const std::shared_ptr<const Signature>& sig, const OrderParams& p, const CertPtr& c) {
  if (c)
    corpus.push_back({sig, p, c});
}

void keep_check(const OrientationResult& r) {
  auto sig = std::make_shared<const Signature>(r.signature);
  for (const auto& pr : r.per_rule)
    keep(sig, r.params, pr.certificate);
}

const CertPtr* node_at(const CertPtr& root, const std::vector<std::size_t>& path) {
  const CertPtr* cur = &root;
  for (auto i : path) {
    if (i >= (*cur)->children.size())
      return nullptr;
    cur = &(*cur)->children[i];
  }
  return cur;
}

// ---------------------------------------------------------------------------

void golden(Findings& f, std::string& detail) {
  struct Expect {
    std::size_t rule;
    std::vector<std::size_t> path;
    std::string label;
  };
  const std::vector<std::pair<std::string, std::vector<Expect>>> systems{
      {"r_pr", {{1, {}, "Def2-Case3"}, {1, {2}, "Def2-Case4"}}},
      {"r_prp", {{1, {}, "Def2-Case3"}, {1, {2}, "Def2-Case5"}, {1, {2, 1}, "Def2-Case3"}}},
      {"r_umr",
       {{1, {}, "Def2-Case3"}, {1, {1}, "Def2-Case5"}, {2, {}, "Def2-Case3"}, {2, {2}, "Def2-Case5"},
        {2, {3}, "Def2-Case5"}}},
      {"r_snr",
       {{1, {}, "Def2-Case3"}, {1, {2}, "Def2-Case5"}, {1, {2, 1}, "Def2-Case3"},
        {1, {2, 1, 2}, "Def2-Case5"}}},
  };
  Stopwatch sw;
  std::size_t labels = 0;
  for (const auto& [name, expects] : systems) {
    auto trs = load_trs(name);
    auto r = check_trs(trs);
    keep_check(r);
    if (!r.oriented)
      f.add(name + " not oriented");
    for (const auto& e : expects) {
      if (e.rule >= r.per_rule.size() || !r.per_rule[e.rule].certificate) {
        f.add(name + " rule " + std::to_string(e.rule + 1) + " has no certificate");
        continue;
      }
      const CertPtr* n = node_at(r.per_rule[e.rule].certificate, e.path);
      if (!n || (*n)->case_label != e.label)
        f.add(name + " rule " + std::to_string(e.rule + 1) + ": expected " + e.label);
      ++labels;
    }
  }
  const double t = sw.seconds();
  if (t >= 1.0)
    f.add("took " + secs(t));
  detail = "4 systems oriented, " + std::to_string(labels) + " case labels matched in " + secs(t);
}

void negatives(Findings& f, std::string& detail) {
  Stopwatch sw;
  std::ostringstream d;
  for (auto name : {"ackermann", "gsnr2", "gsnr1"}) {
    auto trs = load_trs(name);
    auto out = search_orientation(trs, SearchSpace::full());
    const bool want = std::string(name) == "gsnr1";
    if (out.status == SearchStatus::timeout)
      f.add(std::string(name) + ": search timed out");
    else if ((out.status == SearchStatus::found) != want)
      f.add(std::string(name) + (want ? ": no orientation found" : ": unexpectedly oriented"));
    if (out.result)
      keep_check(*out.result);
    d << name << (out.status == SearchStatus::found ? " found" : " exhausted") << " ("
      << out.candidates << "), ";
    SearchSpace lpo;
    lpo.lpo = true;
    auto l = search_orientation(trs, lpo);
    if (l.status != SearchStatus::found)
      f.add(std::string(name) + ": LPO search failed");
    else
      keep_check(*l.result);
  }
  const double t = sw.seconds();
  if (t >= 300)
    f.add("took " + secs(t));
  d << "LPO orients all three, " << secs(t);
  detail = d.str();
}

void inclusion(Findings& f, std::string& detail) {
  std::mt19937_64 rng(test::seed() + 101);
  const int signatures = 5, per_signature = 2400;
  std::size_t pairs = 0, aux = 0, gt = 0, lpo = 0, bounded = 0;
  for (int k = 0; k < signatures; ++k) {
    auto rs = test::random_setting(rng);
    auto sig = std::make_shared<const Signature>(rs.sig);
    Comparator cmp(*sig, rs.params);
    for (int i = 0; i < per_signature; ++i) {
      auto [s, t] = test::random_pair(rng, rs);
      ++pairs;
      auto a = cmp.aux_gt(s, t);
      auto g = cmp.plpo_gt(s, t);
      auto l = cmp.lpo_gt(s, t);
      aux += a != nullptr;
      gt += g != nullptr;
      lpo += l != nullptr;
      const std::string where = to_string(*sig, s) + " vs " + to_string(*sig, t);
      if (a && !g)
        f.add("aux without plpo: " + where);
      if (g && !l)
        f.add("plpo without lpo: " + where);
      if (g) {
        const int ell = std::max<int>(2, static_cast<int>(term_size(t)));
        auto b = cmp.plpo_gt_bounded(s, t, ell);
        if (!b)
          f.add("plpo without bounded plpo: " + where);
        bounded += b != nullptr;
        keep(sig, rs.params, b);
      }
      keep(sig, rs.params, a);
      keep(sig, rs.params, g);
      keep(sig, rs.params, l);
      if (a && i % 3 == 0)
        keep(sig, rs.params, cmp.aux_gt_bounded(s, t, std::max<int>(2, static_cast<int>(term_size(t)))));
    }
    // Same setting with the permutation extension, for its certificates.
    OrderParams perm = rs.params;
    perm.permutation_extension = true;
    Comparator pcmp(*sig, perm);
    for (int i = 0; i < 400; ++i) {
      auto [s, t] = test::random_pair(rng, rs);
      keep(sig, perm, pcmp.plpo_gt(s, t));
    }
  }
  if (gt < 1000)
    f.add("too few positive plpo pairs: " + std::to_string(gt));
  detail = std::to_string(pairs) + " pairs over " + std::to_string(signatures) + " signatures; aux " +
           std::to_string(aux) + ", plpo " + std::to_string(gt) + ", lpo " + std::to_string(lpo) +
           ", bounded " + std::to_string(bounded) + "; " + std::to_string(f.items.size()) +
           " violations";
}

std::string hex(const Bounded& v) {
  if (!v)
    return "overflow";
  std::ostringstream ss;
  ss << std::hex << *v;
  return ss.str();
}

void micro_oracles(Findings& f, std::string& detail) {
  const EvalBudget budget;  // 10^6 bits
  std::size_t checks = 0;
  for (std::uint64_t d : {2, 3})
    for (std::uint64_t x = 0; x <= 16; ++x) {
      auto v = f_m(0, BigNat(x), d, budget);
      if (!v || *v != boost::multiprecision::pow(BigNat(d), static_cast<unsigned>(x + 1)))
        f.add("F_0(" + std::to_string(x) + ") with d=" + std::to_string(d));
      ++checks;
    }
  for (std::uint64_t m = 0; m < 4; ++m)
    for (const auto& xs : std::vector<std::vector<BigNat>>{{0}, {3}, {1, 2}, {5, 0, 7}}) {
      auto v = f_mn(m, 0, xs, 2, budget);
      if (!v || *v != 0)
        f.add("F_{" + std::to_string(m) + ",0} is not 0");
      ++checks;
    }
  for (std::uint64_t d : {2, 3})
    for (std::uint64_t m = 0; m < 3; ++m)
      for (std::uint64_t x = 0; x < 20; ++x) {
        auto a = f_m(m, BigNat(x), d, budget), b = f_m(m, BigNat(x + 1), d, budget);
        if (a && b) {
          ++checks;
          if (!(*a < *b))
            f.add("F_" + std::to_string(m) + " not strictly monotone at " + std::to_string(x));
        }
        for (std::uint64_t y = 0; y < 6; ++y) {
          auto c = f_m(m, BigNat(x + y), d, budget);
          if (a && c) {
            ++checks;
            if (*a + y > *c)
              f.add("translation fails at m=" + std::to_string(m) + " x=" + std::to_string(x));
          }
        }
      }
  std::size_t lemma = 0;
  const std::vector<std::vector<std::uint64_t>> samples{{0}, {1}, {2}, {0, 0}, {1, 0}, {0, 1}, {1, 1}, {0, 0, 0}};
  for (std::uint64_t d : {2, 3})
    for (std::uint64_t m = 0; m < 3; ++m)
      for (std::uint64_t n = 1; n <= 4; ++n)
        for (const auto& raw : samples) {
          std::vector<BigNat> xs(raw.begin(), raw.end());
          BigNat sum = 0;
          for (auto x : raw)
            sum += x;
          auto lhs = f_mn(m, n, xs, d, budget);
          auto rhs = iterate_f_m(m + 1, BigNat(n), sum, d, budget);
          if (lhs && rhs) {
            ++lemma;
            if (*lhs > *rhs)
              f.add("F_{m,n} bound fails at m=" + std::to_string(m) + " n=" + std::to_string(n));
          }
        }
  std::ifstream in(test::source_path("tests/data/fast_growing.json"));
  std::size_t table = 0;
  if (!in) {
    f.add("missing tests/data/fast_growing.json");
  } else {
    auto j = nlohmann::json::parse(in);
    EvalBudget b{j["budget_bits"].get<std::size_t>()};
    for (const auto& e : j["f_m"]) {
      ++table;
      if (hex(f_m(e["m"], BigNat(e["x"].get<std::uint64_t>()), e["d"], b)) != e["value"])
        f.add("table mismatch " + e.dump());
    }
    for (const auto& e : j["f_mn"]) {
      ++table;
      std::vector<BigNat> xs;
      for (auto x : e["xs"])
        xs.push_back(BigNat(x.get<std::uint64_t>()));
      if (hex(f_mn(e["m"], e["n"], xs, e["d"], b)) != e["value"])
        f.add("table mismatch " + e.dump());
    }
    for (const auto& e : j["iterate"]) {
      ++table;
      if (hex(iterate_f_m(e["m"], BigNat(e["count"].get<std::uint64_t>()),
                          BigNat(e["x"].get<std::uint64_t>()), e["d"], b)) != e["value"])
        f.add("table mismatch " + e.dump());
    }
  }
  if (lemma == 0)
    f.add("no computable sample point for the F_{m,n} bound");
  detail = std::to_string(checks) + " pointwise checks, " + std::to_string(lemma) +
           " F_{m,n} bound points, " + std::to_string(table) + " oracle table entries";
}

void probes(Findings& f, std::string& detail) {
  Stopwatch sw;
  std::vector<std::pair<std::string, Trs>> systems;
  for (auto name : {"r_pr", "r_prp", "r_umr", "r_snr"})
    systems.emplace_back(name, load_trs(name));
  for (auto name : {"add", "mult", "prp", "umr", "snr", "snr_stub"})
    systems.emplace_back(std::string("schema ") + name, compile(load_schema(name)).trs);
  std::size_t terms = 0, edges = 0;
  for (const auto& [name, trs] : systems) {
    auto r = termination_probe(trs, 7);
    terms += r.terms_checked;
    edges += r.edges.edges;
    if (r.nontermination)
      f.add(name + ": nontermination from " + to_string(trs.signature, r.nontermination->start));
    if (r.limit)
      f.add(name + ": limit at " + to_string(trs.signature, r.limit->start));
    if (r.edges.violations)
      f.add(name + ": " + std::to_string(r.edges.violations) + " edges without a drop");
  }
  const double t = sw.seconds();
  if (t >= 120)
    f.add("took " + secs(t));
  detail = std::to_string(systems.size()) + " systems, " + std::to_string(terms) +
           " start terms of size <= 7, " + std::to_string(edges) + " edges checked in " + secs(t);
}

void derivation_oracle(Findings& f, std::string& detail) {
  auto trs = load_trs("r_pr");
  const auto& sig = trs.signature;
  for (std::size_t n = 0; n <= 6; ++n) {
    Term t = Term::app(sig.id("f"), {test::numeral_term(sig, n), test::numeral_term(sig, 0)});
    auto r = derivation_length(trs, t);
    std::size_t budget = 10'000'000;
    const std::size_t oracle = test::longest_path(trs, t, budget);
    if (r.status != DerivationStatus::exact || r.max_length != n + 1 || oracle != n + 1)
      f.add("n=" + std::to_string(n) + ": got " + std::to_string(r.max_length) + ", oracle " +
            std::to_string(oracle));
  }
  auto p = derive_params(trs);
  if (p.ell != 6 || p.K != 2 || p.d != 26)
    f.add("parameters ell=" + std::to_string(p.ell) + " K=" + std::to_string(p.K) +
          " d=" + std::to_string(p.d));
  detail = "dl = n+1 for n in 0..6 (path oracle agrees); ell=" + std::to_string(p.ell) +
           " K=" + std::to_string(p.K) + " d=" + std::to_string(p.d);
}

void schema_closure(Findings& f, std::string& detail) {
  Stopwatch sw;
  std::size_t tuples = 0;
  for (const auto& [name, bound] : std::vector<std::pair<std::string, std::uint64_t>>{
           {"add", 5}, {"mult", 5}, {"prp", 5}, {"umr", 5}, {"snr", 4}}) {
    auto p = load_schema(name);
    auto cs = compile(p);
    auto r = check_trs(cs.trs, cs.params);
    keep_check(r);
    if (!r.oriented)
      f.add(name + " is not oriented");
    const std::size_t arity = program_arity(*p);
    std::vector<std::uint64_t> args(arity, 0);
    while (true) {
      ++tuples;
      try {
        if (!crosscheck(cs, p, args))
          f.add(name + " disagrees at " + nlohmann::json(args).dump());
      } catch (const std::exception& e) {
        f.add(name + " at " + nlohmann::json(args).dump() + ": " + e.what());
      }
      std::size_t k = 0;
      while (k < arity && args[k] == bound)
        args[k++] = 0;
      if (k == arity)
        break;
      ++args[k];
    }
  }
  const double t = sw.seconds();
  if (t >= 120)
    f.add("took " + secs(t));
  detail = "5 schemas oriented, " + std::to_string(tuples) + " argument tuples agree in " + secs(t);
}

void replay(Findings& f, std::string& detail) {
  std::size_t nodes = 0;
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& e = corpus[i];
    test::Replayer rep(*e.sig, e.params);
    if (!rep.valid(*e.cert))
      f.add("rejected: " + certificate_text(*e.sig, *e.cert).substr(0, 120) + " (" + rep.error() + ")");
    std::vector<CertPtr> all;
    test::collect_nodes(e.cert, all);
    nodes += all.size();
    std::set<std::string> seen;
    for (const auto& n : all)
      seen.insert(test::cert_class(*n));
    for (const auto& c : seen)
      by_class[c].push_back(i);
  }
  const std::vector<std::string> required{
      "Def1-Case1", "Def1-Case2", "Def1-Case3", "Def2-Case1", "Def2-Case2", "Def2-Case3",
      "Def2-Case4", "Def2-Case4-perm", "Def2-Case5", "LPO-Sub", "LPO-Prec", "LPO-Lex", "Equiv",
      "bounded Def1-Case1", "bounded Def1-Case2", "bounded Def1-Case3", "bounded Def2-Case1",
      "bounded Def2-Case2", "bounded Def2-Case3", "bounded Def2-Case4", "bounded Def2-Case5"};
  std::mt19937_64 rng(test::seed() + 202);
  std::size_t probes = 0;
  for (const auto& cls : required) {
    auto it = by_class.find(cls);
    if (it == by_class.end()) {
      f.add("no certificate exercises " + cls);
      continue;
    }
    int made = 0;
    for (int attempt = 0; made < 20 && attempt < 400; ++attempt) {
      const auto& e = corpus[it->second[rng() % it->second.size()]];
      auto m = test::mutate_if(*e.sig, e.cert, [&](const Certificate& c) { return test::cert_class(c) == cls; },
                               rng);
      if (!m)
        continue;
      ++made;
      ++probes;
      test::Replayer rep(*e.sig, e.params);
      if (rep.valid(*m))
        f.add(cls + " mutation accepted:\n" + certificate_text(*e.sig, *m));
    }
    if (made < 20)
      f.add(cls + ": only " + std::to_string(made) + " mutations");
  }
  detail = std::to_string(corpus.size()) + " certificates (" + std::to_string(nodes) + " nodes) replayed, " +
           std::to_string(probes) + " mutations over " + std::to_string(required.size()) +
           " classes rejected";
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a.rfind("--seed=", 0) == 0)
      test::set_seed(std::stoull(a.substr(7)));
    else if (a == "--seed" && i + 1 < argc)
      test::set_seed(std::stoull(argv[++i]));
  }
  const std::vector<std::pair<std::string, void (*)(Findings&, std::string&)>> criteria{
      {"golden orientations", golden},
      {"negative results", negatives},
      {"inclusion properties", inclusion},
      {"interpretation micro-oracles", micro_oracles},
      {"termination probe", probes},
      {"derivation-length oracle", derivation_oracle},
      {"schema closure", schema_closure},
      {"certificate replay", replay},
  };
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Findings f;
    std::string detail;
    try {
      criteria[i].second(f, detail);
    } catch (const std::exception& e) {
      f.add(std::string("exception: ") + e.what());
    }
    report(static_cast<int>(i + 1), criteria[i].first, f, detail);
  }
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed") << '\n';
  return failures ? 1 : 0;
}
