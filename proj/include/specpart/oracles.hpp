#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "specpart/graph.hpp"

namespace specpart {

// The oracles enumerate with exact integer arithmetic whenever all weights
// admit a common power-of-two scaling with total scaled volume < 2^62; ratio
// comparisons are then done by 128-bit cross multiplication, so ties and
// argmins are bit-exact. Otherwise they fall back to plain doubles (still
// deterministic on a fixed platform).
struct ExactScale {
  bool exact = false;
  int shift = 0;  // weight * 2^shift is an integer for every edge
};

inline ExactScale find_exact_scale(const WeightedGraph& g) {
  for (int shift = 0; shift <= 52; ++shift) {
    double factor = std::ldexp(1.0, shift);
    bool ok = true;
    double scaled_volume = 0.0;
    for (const auto& e : g.edges()) {
      double s = e.w * factor;
      if (s != std::floor(s) || s >= 9e15) {
        ok = false;
        break;
      }
      scaled_volume += 2.0 * s;
    }
    if (ok && scaled_volume < 4.6e18) return ExactScale{true, shift};
  }
  return ExactScale{};
}

namespace detail {

// a1/b1 < a2/b2 for nonnegative numerators, positive denominators.
inline bool ratio_less(std::int64_t a1, std::int64_t b1, std::int64_t a2, std::int64_t b2) {
  return static_cast<__int128>(a1) * b2 < static_cast<__int128>(a2) * b1;
}
inline bool ratio_equal(std::int64_t a1, std::int64_t b1, std::int64_t a2, std::int64_t b2) {
  return static_cast<__int128>(a1) * b2 == static_cast<__int128>(a2) * b1;
}

// Lexicographic order on membership masks, vertex 0 most significant.
inline bool mask_lex_less(std::uint32_t a, std::uint32_t b, int n) {
  for (int v = 0; v < n; ++v) {
    bool av = (a >> v) & 1u, bv = (b >> v) & 1u;
    if (av != bv) return av > bv;  // "1" sorts before "0" at the first differing vertex
  }
  return false;
}

}  // namespace detail

struct PhiOracleResult {
  double phi = 0.0;
  VertexSet argmin;
  bool exact = false;
};

/// Exact minimum conductance over all proper subsets (Gray-code enumeration,
/// n <= 24). Ties resolved toward the lexicographically smallest membership
/// mask.
inline PhiOracleResult brute_force_phi(const WeightedGraph& g) {
  const int n = g.vertex_count();
  if (n > 24) throw capacity_error("brute_force_phi limited to n <= 24");
  if (n < 2) throw std::domain_error("brute_force_phi requires at least two vertices");

  ExactScale scale = find_exact_scale(g);
  const double factor = std::ldexp(1.0, scale.shift);

  std::vector<std::int64_t> ideg(n, 0);
  std::vector<std::vector<std::pair<int, std::int64_t>>> iadj(n);
  std::int64_t itotal = 0;
  if (scale.exact) {
    for (const auto& e : g.edges()) {
      auto w = static_cast<std::int64_t>(e.w * factor);
      ideg[e.u] += w;
      ideg[e.v] += w;
      iadj[e.u].push_back({e.v, w});
      iadj[e.v].push_back({e.u, w});
      itotal += 2 * w;
    }
  }
  std::vector<std::vector<std::pair<int, double>>> dadj(n);
  for (const auto& e : g.edges()) {
    dadj[e.u].push_back({e.v, e.w});
    dadj[e.v].push_back({e.u, e.w});
  }

  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1u);
  std::uint32_t mask = 0;
  std::int64_t icut = 0, ivol = 0;
  double dcut = 0.0, dvol = 0.0;

  bool have_best = false;
  std::int64_t best_icut = 0, best_imin = 1;
  double best_phi = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;

  const std::uint64_t count = (1ull << n);
  for (std::uint64_t s = 1; s < count; ++s) {
    int v = std::countr_zero(s);
    bool adding = !((mask >> v) & 1u);
    if (scale.exact) {
      for (auto [u, w] : iadj[v]) {
        bool inside = (mask >> u) & 1u;
        icut += (inside == adding) ? -w : w;
      }
      ivol += adding ? ideg[v] : -ideg[v];
    } else {
      for (auto [u, w] : dadj[v]) {
        bool inside = (mask >> u) & 1u;
        dcut += (inside == adding) ? -w : w;
      }
      dvol += adding ? g.degree(v) : -g.degree(v);
    }
    mask ^= (1u << v);
    if (mask == 0 || mask == full) continue;

    if (scale.exact) {
      std::int64_t m = std::min(ivol, itotal - ivol);
      if (m <= 0) continue;  // all volume on one side (possible with isolated vertices)
      if (!have_best || detail::ratio_less(icut, m, best_icut, best_imin) ||
          (detail::ratio_equal(icut, m, best_icut, best_imin) &&
           detail::mask_lex_less(mask, best_mask, n))) {
        have_best = true;
        best_icut = icut;
        best_imin = m;
        best_mask = mask;
      }
    } else {
      double m = std::min(dvol, g.total_volume() - dvol);
      if (!(m > 0)) continue;
      double phi = dcut / m;
      if (!have_best || phi < best_phi ||
          (phi == best_phi && detail::mask_lex_less(mask, best_mask, n))) {
        have_best = true;
        best_phi = phi;
        best_mask = mask;
      }
    }
  }
  if (!have_best) throw std::domain_error("no proper subset with positive volume");

  std::vector<uint8_t> member(n, 0);
  for (int v = 0; v < n; ++v) member[v] = (best_mask >> v) & 1u;
  PhiOracleResult out;
  out.argmin = make_vertex_set(g, member);
  out.exact = scale.exact;
  out.phi = scale.exact ? static_cast<double>(best_icut) / static_cast<double>(best_imin)
                        : best_phi;
  // Report the value through the shared conductance path so downstream
  // comparisons are bit-for-bit with conductance(G, S).
  out.phi = conductance(g, out.argmin);
  return out;
}

struct BetaOracleResult {
  double beta = 0.0;
  InducedCut argmin;
  bool exact = false;
};

/// Exact minimum bipartiteness ratio over all induced cuts (3^n assignments,
/// n <= 14). Ties resolved toward the lexicographically smallest assignment
/// string (state order: none < L < R per vertex).
inline BetaOracleResult brute_force_beta(const WeightedGraph& g) {
  const int n = g.vertex_count();
  if (n > 14) throw capacity_error("brute_force_beta limited to n <= 14");
  if (n < 1) throw std::domain_error("brute_force_beta requires at least one vertex");

  ExactScale scale = find_exact_scale(g);
  const double factor = std::ldexp(1.0, scale.shift);

  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& e : g.edges()) {
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }

  std::vector<int> state(n, 0);  // 0 none, 1 L, 2 R
  bool have_best = false;
  double best_beta = std::numeric_limits<double>::infinity();
  std::int64_t best_inum = 0, best_ivol = 1;
  std::vector<int> best_state;

  // DFS over assignments; numerator terms are accumulated as the later
  // endpoint of each edge gets its state.
  std::vector<double> dnum(n + 1, 0.0), dvol(n + 1, 0.0);
  std::vector<std::int64_t> inum(n + 1, 0), ivol(n + 1, 0);

  auto consider = [&]() {
    if (scale.exact) {
      if (ivol[n] == 0) return;
      if (!have_best || detail::ratio_less(inum[n], ivol[n], best_inum, best_ivol) ||
          (detail::ratio_equal(inum[n], ivol[n], best_inum, best_ivol) && state < best_state)) {
        have_best = true;
        best_inum = inum[n];
        best_ivol = ivol[n];
        best_state = state;
      }
    } else {
      if (!(dvol[n] > 0)) return;
      double beta = dnum[n] / dvol[n];
      if (!have_best || beta < best_beta || (beta == best_beta && state < best_state)) {
        have_best = true;
        best_beta = beta;
        best_state = state;
      }
    }
  };

  // Iterative DFS: depth d assigns vertex d.
  std::vector<int> branch(n + 1, 0);
  int depth = 0;
  while (depth >= 0) {
    if (depth == n) {
      consider();
      --depth;
      continue;
    }
    int b = branch[depth];
    if (b == 3) {
      branch[depth] = 0;
      --depth;
      continue;
    }
    ++branch[depth];
    state[depth] = b;
    double addn = 0.0, addv = 0.0;
    for (auto [u, w] : adj[depth]) {
      if (u >= depth) continue;
      int su = state[u];
      if (b == 0) {
        if (su != 0) addn += w;  // assigned--unassigned boundary
      } else {
        if (su == 0) addn += w;
        else if (su == b) addn += 2.0 * w;  // internal to L or to R
      }
    }
    if (b != 0) addv = g.degree(depth);
    dnum[depth + 1] = dnum[depth] + addn;
    dvol[depth + 1] = dvol[depth] + addv;
    if (scale.exact) {
      std::int64_t ian = 0;
      for (auto [u, w] : adj[depth]) {
        if (u >= depth) continue;
        int su = state[u];
        auto iw = static_cast<std::int64_t>(w * factor);
        if (b == 0) {
          if (su != 0) ian += iw;
        } else {
          if (su == 0) ian += iw;
          else if (su == b) ian += 2 * iw;
        }
      }
      inum[depth + 1] = inum[depth] + ian;
      ivol[depth + 1] = ivol[depth] + (b != 0 ? static_cast<std::int64_t>(g.degree(depth) * factor)
                                              : 0);
    }
    ++depth;
  }
  if (!have_best) throw std::domain_error("graph has no valid induced cut");

  std::vector<uint8_t> L(n, 0), R(n, 0);
  for (int v = 0; v < n; ++v) {
    if (best_state[v] == 1) L[v] = 1;
    if (best_state[v] == 2) R[v] = 1;
  }
  BetaOracleResult out;
  out.argmin = make_induced_cut(g, L, R);
  out.exact = scale.exact;
  out.beta = bipartiteness_ratio(g, out.argmin);
  return out;
}

struct MaxCutOracleResult {
  double cut_weight = 0.0;
  double fraction = 0.0;  // of total edge weight
  VertexSet side;
};

/// Exact maximum cut (Gray-code over 2^(n-1) bipartitions, n <= 14).
inline MaxCutOracleResult exhaustive_max_cut(const WeightedGraph& g) {
  const int n = g.vertex_count();
  if (n > 14) throw capacity_error("exhaustive_max_cut limited to n <= 14");
  if (g.edges().empty()) throw std::domain_error("max cut of an edgeless graph is undefined");

  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& e : g.edges()) {
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }
  std::uint32_t mask = 0;  // vertex n-1 pinned outside
  double cut = 0.0;
  double best = 0.0;
  std::uint32_t best_mask = 0;
  const std::uint64_t count = (n == 1) ? 1 : (1ull << (n - 1));
  for (std::uint64_t s = 1; s < count; ++s) {
    int v = std::countr_zero(s);
    bool adding = !((mask >> v) & 1u);
    for (auto [u, w] : adj[v]) {
      bool inside = (mask >> u) & 1u;
      cut += (inside == adding) ? -w : w;
    }
    mask ^= (1u << v);
    if (cut > best) {
      best = cut;
      best_mask = mask;
    }
  }
  std::vector<uint8_t> member(n, 0);
  for (int v = 0; v < n; ++v) member[v] = (best_mask >> v) & 1u;
  MaxCutOracleResult out;
  out.side = make_vertex_set(g, member);
  out.cut_weight = out.side.boundary_weight;
  out.fraction = out.cut_weight / g.total_edge_weight();
  return out;
}

}  // namespace specpart
