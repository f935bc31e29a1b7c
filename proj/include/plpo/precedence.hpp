#pragma once

// Canonical rank map of a declared precedence: equivalence classes of the
// generated quasi-order share a rank, and ranks are the minimal consecutive
// naturals that respect every strict edge.

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "plpo/term.hpp"

namespace plpo {

/// Ranks for every symbol of `sig`. Throws when the strict part is not
/// well-founded, i.e. some cycle of >= / = edges passes through a strict edge.
inline std::vector<int> canonical_ranks(const Signature& sig,
                                        const std::vector<PrecedencePair>& prec) {
  const std::size_t n = sig.size();
  std::vector<std::vector<std::size_t>> succ(n);
  for (const auto& p : prec) {
    auto a = sig.id(p.greater), b = sig.id(p.lesser);
    succ[a].push_back(b);
    if (!p.strict)
      succ[b].push_back(a);
  }

  // Tarjan SCC over the >= graph.
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  int counter = 0, ncomp = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (auto w : succ[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = ncomp;
      } while (w != v);
      ++ncomp;
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] < 0)
      visit(v);

  for (const auto& p : prec) {
    auto a = sig.id(p.greater), b = sig.id(p.lesser);
    if (p.strict && comp[a] == comp[b])
      throw Error("precedence cycle through strict edge " + p.greater + " > " + p.lesser);
  }

  // Tarjan numbers components in reverse topological order: successors first.
  std::vector<std::vector<std::size_t>> members(ncomp);
  for (std::size_t v = 0; v < n; ++v)
    members[comp[v]].push_back(v);
  std::vector<int> comp_rank(ncomp, 0);
  for (int c = 0; c < ncomp; ++c)
    for (auto v : members[c])
      for (auto w : succ[v])
        if (comp[w] != c)
          comp_rank[c] = std::max(comp_rank[c], comp_rank[comp[w]] + 1);

  std::vector<int> rank(n);
  for (std::size_t v = 0; v < n; ++v)
    rank[v] = comp_rank[comp[v]];
  return rank;
}

}  // namespace plpo
