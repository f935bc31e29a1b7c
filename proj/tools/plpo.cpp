// plpo: command-line front end.
//
//   plpo check   <file> [--certificate] [--json]
//   plpo search  <file> [--full | --vary rank,lex,sep,csep] [--max-rank N] [--timeout S]
//   plpo bound   <file> [--term T] [--budget-bits N]
//   plpo run     <file> --term T [--dl | --normalize] [--max-steps N] [--max-terms N]
//   plpo compile <schema-file> [-o out.trs]
//   plpo compare <file> [--timeout S]
//
// Exit codes: 0 holds / success, 1 does not hold / not found,
// 2 usage or input error, 3 resource limit.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "plpo/plpo.hpp"

using json = nlohmann::ordered_json;
using namespace plpo;

namespace {

enum Exit { ok = 0, no = 1, input_error = 2, resource_limit = 3 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json cert_json(const Signature& sig, const Certificate& c) {
  json j;
  j["judgment"] = judgment_name(c.judgment);
  if (c.judgment == Judgment::aux_bounded || c.judgment == Judgment::plpo_bounded)
    j["ell"] = c.ell;
  j["case"] = c.case_label;
  j["lhs"] = to_string(sig, c.lhs);
  j["rhs"] = to_string(sig, c.rhs);
  j["children"] = json::array();
  for (const auto& ch : c.children)
    j["children"].push_back(cert_json(sig, *ch));
  return j;
}

std::string rule_text(const Signature& sig, const Rule& r) {
  return to_string(sig, r.lhs) + " -> " + to_string(sig, r.rhs);
}

json rules_json(const OrientationResult& r, bool with_certs) {
  json arr = json::array();
  for (const auto& pr : r.per_rule) {
    json j;
    j["rule"] = rule_text(r.signature, pr.rule);
    j["oriented"] = pr.certificate != nullptr;
    if (with_certs)
      j["certificate"] = pr.certificate ? cert_json(r.signature, *pr.certificate) : json(nullptr);
    arr.push_back(j);
  }
  return arr;
}

std::string mask_text(const FunctionSymbol& f) {
  std::string m;
  for (bool b : f.normal)
    m += b ? 'N' : 'S';
  return m;
}

json params_json(const Signature& sig, const OrderParams& p) {
  json j;
  j["ranks"] = json::object();
  j["lex"] = json::array();
  j["separation"] = json::object();
  for (SymbolId f = 0; f < sig.size(); ++f) {
    j["ranks"][sig[f].name] = p.rank[f];
    if (p.lex[f])
      j["lex"].push_back(sig[f].name);
    j["separation"][sig[f].name] = mask_text(sig[f]);
  }
  return j;
}

void print_params(std::ostream& out, const Signature& sig, const OrderParams& p) {
  out << "ranks:";
  for (SymbolId f = 0; f < sig.size(); ++f)
    out << ' ' << sig[f].name << '=' << p.rank[f];
  out << "\nlex:";
  for (SymbolId f = 0; f < sig.size(); ++f)
    if (p.lex[f])
      out << ' ' << sig[f].name;
  out << "\nseparation:";
  for (SymbolId f = 0; f < sig.size(); ++f)
    if (sig[f].arity() > 0)
      out << ' ' << sig[f].name << '(' << sig[f].normal_arity() << ';' << sig[f].safe_arity()
          << (sig[f].normal_arity() && sig[f].safe_arity() ? "," + mask_text(sig[f]) : "") << ')';
  out << '\n';
}

const char* status_name(SearchStatus s) {
  switch (s) {
  case SearchStatus::found: return "found";
  case SearchStatus::exhausted: return "exhausted";
  case SearchStatus::timeout: return "timeout";
  }
  return "?";
}

struct Options {
  std::string file;
  bool certificate = false;
  bool json = false;
  bool full = false;
  std::string vary;
  int max_rank = 0;
  double timeout = 0;
  std::string term;
  std::size_t budget_bits = 1'000'000;
  bool dl = false;
  bool normalize = false;
  std::size_t max_steps = 1'000'000;
  std::size_t max_terms = 1'000'000;
  std::string output;
};

int cmd_check(const Options& o, std::ostream& out) {
  Trs trs = parse_trs(read_file(o.file));
  auto r = check_trs(trs);
  if (o.json) {
    json j;
    j["command"] = "check";
    j["file"] = o.file;
    j["oriented"] = r.oriented;
    j["rules_total"] = r.per_rule.size();
    j["rules_oriented"] = r.oriented_count();
    j["rules"] = rules_json(r, o.certificate);
    out << j.dump(2) << '\n';
  } else {
    out << "oriented: " << r.oriented_count() << '/' << r.per_rule.size() << " rules\n";
    for (const auto& pr : r.per_rule) {
      out << (pr.certificate ? "  [ok]   " : "  [fail] ") << rule_text(trs.signature, pr.rule)
          << '\n';
      if (o.certificate && pr.certificate) {
        std::istringstream lines(certificate_text(trs.signature, *pr.certificate));
        for (std::string line; std::getline(lines, line);)
          out << "    " << line << '\n';
      }
    }
  }
  return r.oriented ? ok : no;
}

SearchSpace space_from(const Options& o) {
  SearchSpace s;
  if (o.full) {
    s = SearchSpace::full();
  } else if (!o.vary.empty()) {
    s.vary_rank = s.vary_lex = s.vary_separation = s.vary_constructor_separation = false;
    std::istringstream in(o.vary);
    for (std::string item; std::getline(in, item, ',');) {
      if (item == "rank")
        s.vary_rank = true;
      else if (item == "lex")
        s.vary_lex = true;
      else if (item == "sep")
        s.vary_separation = true;
      else if (item == "csep")
        s.vary_constructor_separation = true;
      else
        throw CLI::ValidationError("--vary", "unknown dimension '" + item + "'");
    }
  }
  s.max_rank = o.max_rank;
  s.timeout_seconds = o.timeout;
  return s;
}

int cmd_search(const Options& o, std::ostream& out) {
  Trs trs = parse_trs(read_file(o.file));
  auto outcome = search_orientation(trs, space_from(o));
  if (o.json) {
    json j;
    j["command"] = "search";
    j["file"] = o.file;
    j["status"] = status_name(outcome.status);
    j["candidates"] = outcome.candidates;
    if (outcome.result) {
      j["params"] = params_json(outcome.result->signature, outcome.result->params);
      j["rules"] = rules_json(*outcome.result, o.certificate);
    }
    out << j.dump(2) << '\n';
  } else if (outcome.status == SearchStatus::found) {
    out << "orientation found after " << outcome.candidates << " candidates\n";
    print_params(out, outcome.result->signature, outcome.result->params);
    if (o.certificate)
      for (const auto& pr : outcome.result->per_rule)
        out << certificate_text(outcome.result->signature, *pr.certificate);
  } else if (outcome.status == SearchStatus::exhausted) {
    out << "search space exhausted (" << outcome.candidates << " candidates)\n";
  } else {
    out << "timeout after " << outcome.candidates << " candidates\n";
  }
  switch (outcome.status) {
  case SearchStatus::found: return ok;
  case SearchStatus::exhausted: return no;
  case SearchStatus::timeout: return resource_limit;
  }
  return no;
}

int cmd_bound(const Options& o, std::ostream& out) {
  Trs trs = parse_trs(read_file(o.file));
  const auto& sig = trs.signature;
  auto p = derive_params(trs);
  Term t;
  if (!o.term.empty()) {
    t = parse_term(sig, o.term);
    if (!t.is_ground())
      throw Error("--term must be ground");
  } else {
    for (SymbolId f = 0; f < sig.size(); ++f)
      if (sig[f].is_constructor() && sig[f].arity() == 0) {
        t = Term::app(f);
        break;
      }
  }
  EvalBudget budget{o.budget_bits};
  auto r = interpret(sig, t, p, budget);
  if (o.json) {
    json j;
    j["command"] = "bound";
    j["file"] = o.file;
    j["ell"] = p.ell;
    j["K"] = p.K;
    j["d"] = p.d;
    j["ranks"] = json::object();
    for (SymbolId f = 0; f < sig.size(); ++f)
      j["ranks"][sig[f].name] = p.rank[f];
    j["term"] = to_string(sig, t);
    j["budget_bits"] = o.budget_bits;
    if (r.overflow()) {
      j["outcome"] = "overflow";
      j["overflow_at"] = to_string(sig, *r.overflow_at);
    } else {
      j["outcome"] = "value";
      j["value_bits"] = bit_length(*r.value);
      j["value"] = r.value->str();
    }
    out << j.dump(2) << '\n';
  } else {
    out << "ell=" << p.ell << " K=" << p.K << " d=" << p.d << '\n';
    out << "ranks:";
    for (SymbolId f = 0; f < sig.size(); ++f)
      out << ' ' << sig[f].name << '=' << p.rank[f];
    out << '\n';
    out << "I(" << to_string(sig, t) << ") ";
    if (r.overflow())
      out << "exceeds " << o.budget_bits << "-bit budget (at subterm "
          << to_string(sig, *r.overflow_at) << ")\n";
    else
      out << "= " << *r.value << '\n';
  }
  return ok;
}

int cmd_run(const Options& o, std::ostream& out) {
  Trs trs = parse_trs(read_file(o.file));
  const auto& sig = trs.signature;
  Term t = parse_term(sig, o.term);
  if (!t.is_ground())
    throw Error("--term must be ground");
  if (o.normalize) {
    auto r = normalize(trs, t, o.max_steps);
    if (o.json) {
      json j;
      j["command"] = "run";
      j["file"] = o.file;
      j["mode"] = "normalize";
      j["term"] = to_string(sig, t);
      j["status"] = r.normal_form ? "normal" : "step_limit";
      j["steps"] = r.steps;
      if (r.normal_form)
        j["normal_form"] = to_string(sig, *r.normal_form);
      out << j.dump(2) << '\n';
    } else if (r.normal_form) {
      out << to_string(sig, *r.normal_form) << '\n' << "steps: " << r.steps << '\n';
    } else {
      out << "step limit " << o.max_steps << " reached\n";
    }
    return r.normal_form ? ok : resource_limit;
  }
  DerivationLimits limits;
  limits.max_terms = o.max_terms;
  limits.max_depth = o.max_steps;
  auto r = derivation_length(trs, t, limits);
  if (o.json) {
    json j;
    j["command"] = "run";
    j["file"] = o.file;
    j["mode"] = "dl";
    j["term"] = to_string(sig, t);
    j["status"] = r.status == DerivationStatus::exact            ? "exact"
                  : r.status == DerivationStatus::nonterminating ? "nonterminating"
                                                                 : "limit";
    j["explored"] = r.explored;
    if (r.status == DerivationStatus::exact)
      j["max_length"] = r.max_length;
    if (r.status == DerivationStatus::nonterminating) {
      j["cycle"] = json::array();
      for (const auto& c : r.cycle)
        j["cycle"].push_back(to_string(sig, c));
    }
    if (r.status == DerivationStatus::limit)
      j["limit"] = r.limit_reason;
    out << j.dump(2) << '\n';
  } else if (r.status == DerivationStatus::exact) {
    out << "derivation length: " << r.max_length << " (" << r.explored << " terms explored)\n";
  } else if (r.status == DerivationStatus::nonterminating) {
    const bool literal = r.cycle.back() == r.cycle.front();
    out << "nontermination: " << (literal ? "cycle " : "loop ");
    for (std::size_t i = 0; i < r.cycle.size(); ++i)
      out << (i ? " -> " : "") << to_string(sig, r.cycle[i]);
    out << '\n';
  } else {
    out << "limit: " << r.limit_reason << '\n';
  }
  switch (r.status) {
  case DerivationStatus::exact: return ok;
  case DerivationStatus::nonterminating: return no;
  case DerivationStatus::limit: return resource_limit;
  }
  return no;
}

int cmd_compile(const Options& o, std::ostream& out) {
  auto file = parse_schema(read_file(o.file));
  auto cs = compile(file.main());
  std::string text = print_trs(cs.trs);
  if (!o.output.empty()) {
    std::ofstream f(o.output);
    if (!f)
      throw Error("cannot write '" + o.output + "'");
    f << text;
  }
  if (o.json) {
    json j;
    j["command"] = "compile";
    j["file"] = o.file;
    j["main"] = cs.trs.signature[cs.main_symbol].name;
    j["rules"] = cs.trs.rules.size();
    j["trs"] = text;
    out << j.dump(2) << '\n';
  } else if (o.output.empty()) {
    out << text;
  } else {
    out << "wrote " << cs.trs.rules.size() << " rules to " << o.output << '\n';
  }
  return ok;
}

int cmd_compare(const Options& o, std::ostream& out) {
  Trs trs = parse_trs(read_file(o.file));
  auto declared = check_trs(trs);
  Comparator cmp(trs.signature, default_params(trs));
  bool lpo_declared = std::all_of(trs.rules.begin(), trs.rules.end(), [&](const Rule& r) {
    return cmp.lpo_gt(r.lhs, r.rhs) != nullptr;
  });
  SearchSpace plpo_space = SearchSpace::full();
  plpo_space.timeout_seconds = o.timeout;
  SearchSpace lpo_space;
  lpo_space.lpo = true;
  lpo_space.timeout_seconds = o.timeout;
  auto plpo_search = search_orientation(trs, plpo_space);
  auto lpo_search = search_orientation(trs, lpo_space);
  if (o.json) {
    json j;
    j["command"] = "compare";
    j["file"] = o.file;
    j["plpo"] = {{"declared", declared.oriented}, {"search", status_name(plpo_search.status)}};
    j["lpo"] = {{"declared", lpo_declared}, {"search", status_name(lpo_search.status)}};
    out << j.dump(2) << '\n';
  } else {
    out << "PLPO: declared parameters " << (declared.oriented ? "orient" : "do not orient")
        << "; search " << status_name(plpo_search.status) << '\n';
    out << "LPO:  declared precedence " << (lpo_declared ? "orients" : "does not orient")
        << "; search " << status_name(lpo_search.status) << '\n';
  }
  if (plpo_search.status == SearchStatus::timeout || lpo_search.status == SearchStatus::timeout)
    return resource_limit;
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predicative lexicographic path order toolkit"};
  app.require_subcommand(1);
  Options o;

  auto add_file = [&](CLI::App* sub) {
    sub->add_option("file", o.file, "input file")->required();
    sub->add_flag("--json", o.json, "emit one JSON document");
  };

  auto* check = app.add_subcommand("check", "check orientation under the declared parameters");
  add_file(check);
  check->add_flag("--certificate", o.certificate, "print certificates");

  auto* search = app.add_subcommand("search", "search for orienting parameters");
  add_file(search);
  auto* full = search->add_flag("--full", o.full, "vary ranks, lex set and all separations");
  search->add_option("--vary", o.vary, "comma list of rank,lex,sep,csep")->excludes(full);
  search->add_option("--max-rank", o.max_rank, "rank codomain size (default: |F|)");
  search->add_option("--timeout", o.timeout, "seconds");
  search->add_flag("--certificate", o.certificate, "print certificates");

  auto* bound = app.add_subcommand("bound", "derive interpretation parameters");
  add_file(bound);
  bound->add_option("--term", o.term, "ground term to interpret");
  bound->add_option("--budget-bits", o.budget_bits, "bit budget");

  auto* run = app.add_subcommand("run", "rewrite a ground term");
  add_file(run);
  run->add_option("--term", o.term, "ground start term")->required();
  auto* dl = run->add_flag("--dl", o.dl, "maximal derivation length (default)");
  run->add_flag("--normalize", o.normalize, "leftmost-innermost normal form")->excludes(dl);
  run->add_option("--max-steps", o.max_steps, "step / depth limit");
  run->add_option("--max-terms", o.max_terms, "distinct term limit");

  auto* comp = app.add_subcommand("compile", "compile a schema file to a TRS");
  add_file(comp);
  comp->add_option("-o", o.output, "output TRS file");

  auto* compare = app.add_subcommand("compare", "LPO vs PLPO orientability");
  add_file(compare);
  compare->add_option("--timeout", o.timeout, "seconds per search");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return input_error;
  }

  try {
    if (*check)
      return cmd_check(o, std::cout);
    if (*search)
      return cmd_search(o, std::cout);
    if (*bound)
      return cmd_bound(o, std::cout);
    if (*run)
      return cmd_run(o, std::cout);
    if (*comp)
      return cmd_compile(o, std::cout);
    if (*compare)
      return cmd_compare(o, std::cout);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return input_error;
  } catch (const Error& e) {
    if (o.json) {
      json j;
      j["command"] = app.get_subcommands().front()->get_name();
      j["error"] = e.what();
      std::cout << j.dump(2) << '\n';
    }
    std::cerr << "error: " << e.what() << '\n';
    return input_error;
  }
  return input_error;
}
