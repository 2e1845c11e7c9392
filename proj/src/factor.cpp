#include "limid/factor.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <stdexcept>

namespace limid {

Factor Factor::scalar(double v) {
  Factor f;
  f.values.assign(1, v);
  return f;
}

Factor Factor::from_table(const std::vector<int>& table_vars,
                          const std::vector<int>& table_cards,
                          const std::vector<double>& table_values) {
  assert(table_vars.size() == table_cards.size());
  const int n = static_cast<int>(table_vars.size());

  Factor out;
  std::vector<int> perm(n);  // positions into table order, sorted by var id
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(),
            [&](int a, int b) { return table_vars[a] < table_vars[b]; });

  out.vars.resize(n);
  out.cards.resize(n);
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    out.vars[i] = table_vars[perm[i]];
    out.cards[i] = table_cards[perm[i]];
    total *= static_cast<std::size_t>(out.cards[i]);
  }
  for (int i = 1; i < n; ++i) {
    if (out.vars[i] == out.vars[i - 1])
      throw std::logic_error("factor with duplicate variable");
  }
  assert(table_values.size() == total);
  out.values.resize(total);

  // Stride of each (sorted) variable inside the original table.
  std::vector<std::size_t> tstride(n, 1);
  {
    std::vector<std::size_t> s(n, 1);
    for (int i = n - 2; i >= 0; --i)
      s[i] = s[i + 1] * static_cast<std::size_t>(table_cards[i + 1]);
    for (int i = 0; i < n; ++i) tstride[i] = s[perm[i]];
  }

  std::vector<int> digit(n, 0);
  std::size_t ti = 0;
  for (std::size_t o = 0; o < total; ++o) {
    out.values[o] = table_values[ti];
    for (int k = n - 1; k >= 0; --k) {
      ++digit[k];
      ti += tstride[k];
      if (digit[k] < out.cards[k]) break;
      ti -= tstride[k] * static_cast<std::size_t>(out.cards[k]);
      digit[k] = 0;
    }
  }
  return out;
}

Factor multiply(const Factor& a, const Factor& b) {
  Factor out;
  out.vars.reserve(a.vars.size() + b.vars.size());
  std::size_t ia = 0, ib = 0;
  while (ia < a.vars.size() || ib < b.vars.size()) {
    if (ib >= b.vars.size() || (ia < a.vars.size() && a.vars[ia] < b.vars[ib])) {
      out.vars.push_back(a.vars[ia]);
      out.cards.push_back(a.cards[ia]);
      ++ia;
    } else if (ia >= a.vars.size() || b.vars[ib] < a.vars[ia]) {
      out.vars.push_back(b.vars[ib]);
      out.cards.push_back(b.cards[ib]);
      ++ib;
    } else {
      assert(a.cards[ia] == b.cards[ib]);
      out.vars.push_back(a.vars[ia]);
      out.cards.push_back(a.cards[ia]);
      ++ia;
      ++ib;
    }
  }
  const int n = static_cast<int>(out.vars.size());
  std::size_t total = 1;
  for (int c : out.cards) total *= static_cast<std::size_t>(c);
  out.values.resize(total);

  // Per-output-variable strides into each operand (0 when absent).
  auto strides_of = [&](const Factor& f) {
    std::vector<std::size_t> fs(f.vars.size(), 1);
    for (int i = static_cast<int>(f.vars.size()) - 2; i >= 0; --i)
      fs[i] = fs[i + 1] * static_cast<std::size_t>(f.cards[i + 1]);
    std::vector<std::size_t> s(n, 0);
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
      if (k < f.vars.size() && f.vars[k] == out.vars[i]) s[i] = fs[k++];
    }
    return s;
  };
  const std::vector<std::size_t> sa = strides_of(a);
  const std::vector<std::size_t> sb = strides_of(b);

  std::vector<int> digit(n, 0);
  std::size_t pa = 0, pb = 0;
  for (std::size_t o = 0; o < total; ++o) {
    out.values[o] = a.values[pa] * b.values[pb];
    for (int k = n - 1; k >= 0; --k) {
      ++digit[k];
      pa += sa[k];
      pb += sb[k];
      if (digit[k] < out.cards[k]) break;
      pa -= sa[k] * static_cast<std::size_t>(out.cards[k]);
      pb -= sb[k] * static_cast<std::size_t>(out.cards[k]);
      digit[k] = 0;
    }
  }
  return out;
}

Factor sum_out(const Factor& a, int var) {
  const int n = static_cast<int>(a.vars.size());
  int pos = -1;
  for (int i = 0; i < n; ++i) {
    if (a.vars[i] == var) {
      pos = i;
      break;
    }
  }
  if (pos < 0) throw std::logic_error("sum_out: variable not in scope");

  Factor out;
  out.vars.reserve(n - 1);
  for (int i = 0; i < n; ++i) {
    if (i == pos) continue;
    out.vars.push_back(a.vars[i]);
    out.cards.push_back(a.cards[i]);
  }
  std::size_t total = 1;
  for (int c : out.cards) total *= static_cast<std::size_t>(c);
  out.values.assign(total, 0.0);

  // Stride of each input variable inside the output (0 for the summed one).
  std::vector<std::size_t> os(n, 0);
  {
    std::vector<std::size_t> s(out.vars.size(), 1);
    for (int i = static_cast<int>(out.vars.size()) - 2; i >= 0; --i)
      s[i] = s[i + 1] * static_cast<std::size_t>(out.cards[i + 1]);
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
      if (i == pos) continue;
      os[i] = s[k++];
    }
  }

  std::vector<int> digit(n, 0);
  std::size_t po = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    out.values[po] += a.values[i];
    for (int k = n - 1; k >= 0; --k) {
      ++digit[k];
      po += os[k];
      if (digit[k] < a.cards[k]) break;
      po -= os[k] * static_cast<std::size_t>(a.cards[k]);
      digit[k] = 0;
    }
  }
  return out;
}

double contract(std::vector<Factor> factors, const std::vector<int>& elim_order) {
  for (int v : elim_order) {
    std::vector<std::size_t> hit;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (std::binary_search(factors[i].vars.begin(), factors[i].vars.end(), v))
        hit.push_back(i);
    }
    if (hit.empty()) continue;
    Factor prod = std::move(factors[hit[0]]);
    for (std::size_t k = 1; k < hit.size(); ++k)
      prod = multiply(prod, factors[hit[k]]);
    Factor reduced = sum_out(prod, v);
    // Remove consumed factors (descending indices keep positions valid).
    for (std::size_t k = hit.size(); k-- > 0;)
      factors.erase(factors.begin() + static_cast<std::ptrdiff_t>(hit[k]));
    factors.push_back(std::move(reduced));
  }
  double result = 1.0;
  for (const Factor& f : factors) {
    if (!f.vars.empty())
      throw std::logic_error("contract: elimination order did not cover scope");
    result *= f.values[0];
  }
  return result;
}

std::vector<int> min_degree_order(const std::vector<std::vector<int>>& scopes,
                                  const std::vector<int>& keep) {
  std::set<int> keepset(keep.begin(), keep.end());
  std::map<int, std::set<int>> adj;
  for (const auto& scope : scopes) {
    for (int v : scope) adj[v];  // ensure singleton scopes appear
    for (std::size_t i = 0; i < scope.size(); ++i)
      for (std::size_t j = i + 1; j < scope.size(); ++j) {
        adj[scope[i]].insert(scope[j]);
        adj[scope[j]].insert(scope[i]);
      }
  }
  std::vector<int> order;
  std::set<int> alive;
  for (const auto& [v, _] : adj)
    if (!keepset.count(v)) alive.insert(v);

  while (!alive.empty()) {
    int best = -1;
    std::size_t best_deg = 0;
    for (int v : alive) {
      std::size_t deg = 0;
      for (int u : adj[v])
        if (alive.count(u) || keepset.count(u)) ++deg;
      if (best < 0 || deg < best_deg) {
        best = v;
        best_deg = deg;
      }
    }
    // Connect the eliminated variable's remaining neighbours.
    std::vector<int> nbrs;
    for (int u : adj[best])
      if (alive.count(u) || keepset.count(u)) nbrs.push_back(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i)
      for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
        adj[nbrs[i]].insert(nbrs[j]);
        adj[nbrs[j]].insert(nbrs[i]);
      }
    order.push_back(best);
    alive.erase(best);
  }
  return order;
}

}  // namespace limid
