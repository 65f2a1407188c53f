#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "specpart/certificate.hpp"
#include "specpart/oracles.hpp"
#include "specpart/regions.hpp"
#include "specpart/spectrum.hpp"
#include "specpart/step_approx.hpp"
#include "specpart/sweep.hpp"

namespace specpart {

struct SeparatorIteration {
  int iteration = 0;
  std::string branch;  // "enlargement", "sweep", "isolated", "degenerate"
  double lambda2_h = 0.0;
  double sweep_phi = 0.0;           // phi_H of the sweep set when used
  std::vector<int> removed;         // parent-graph vertex ids
  double removed_union_phi = 0.0;   // phi_G of the union removed so far
};

struct SeparatorResult {
  VertexSet set;            // the returned complement union
  double conductance = 0.0;
  int iterations = 0;
  std::vector<SeparatorIteration> trace;
};

namespace detail {

// Vertices of U isolated inside the induced subgraph on U.
inline std::vector<int> isolated_in(const WeightedGraph& g, const std::vector<uint8_t>& in_u) {
  std::vector<double> deg(g.vertex_count(), 0.0);
  for (const auto& e : g.edges())
    if (in_u[e.u] && in_u[e.v]) {
      deg[e.u] += e.w;
      deg[e.v] += e.w;
    }
  std::vector<int> out;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (in_u[v] && deg[v] == 0.0) out.push_back(v);
  return out;
}

inline double volume_of(const WeightedGraph& g, const std::vector<uint8_t>& member) {
  double acc = 0.0;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (member[v]) acc += g.degree(v);
  return acc;
}

// w(E(S, A)) for disjoint S, A given as indicators.
inline double cut_between(const WeightedGraph& g, const std::vector<uint8_t>& s,
                          const std::vector<uint8_t>& a) {
  double acc = 0.0;
  for (const auto& e : g.edges()) {
    if ((s[e.u] && a[e.v]) || (s[e.v] && a[e.u])) acc += e.w;
  }
  return acc;
}

}  // namespace detail

/// Spectral balanced-separator loop. Each iteration either removes a
/// threshold set S of one of the dichotomy's disjoint functions with
/// w(E(S, U \ S)) <= w(E(S, V \ U)) (which cannot increase the conductance of
/// the removed union), or falls back to the best sweep set of the lambda'_2
/// split function. The enlargement branch is searched first; the theorem's
/// guarantee survives because one certified move always exists.
inline SeparatorResult balanced_separator(const WeightedGraph& g, int k) {
  if (k < 2) throw std::domain_error("balanced separator requires k >= 2");
  if (g.vertex_count() < 2) throw std::domain_error("balanced separator requires >= 2 vertices");

  const int n = g.vertex_count();
  const double total = g.total_volume();
  std::vector<uint8_t> in_u(n, 1);
  SeparatorResult result;
  double removed_phi = 0.0;

  auto remove_set = [&](const std::vector<int>& parent_ids) {
    for (int v : parent_ids) in_u[v] = 0;
  };
  auto removed_union_phi = [&]() -> double {
    std::vector<uint8_t> removed(n);
    bool any = false, all = true;
    for (int v = 0; v < n; ++v) {
      removed[v] = in_u[v] ? 0 : 1;
      any = any || removed[v];
      all = all && removed[v];
    }
    if (!any || all) return 0.0;
    VertexSet s = make_vertex_set(g, removed);
    if (!(s.volume > 0.0) || !(total - s.volume > 0.0)) return 0.0;
    return conductance(g, s);
  };

  while (detail::volume_of(g, in_u) > 0.8 * total) {
    SeparatorIteration it;
    it.iteration = result.iterations++;

    auto isolated = detail::isolated_in(g, in_u);
    if (!isolated.empty()) {
      // No internal edges: removing them cannot add cut weight.
      it.branch = "isolated";
      it.removed = isolated;
      remove_set(isolated);
      it.removed_union_phi = removed_phi = removed_union_phi();
      result.trace.push_back(std::move(it));
      continue;
    }

    std::vector<uint8_t> not_u(n);
    for (int v = 0; v < n; ++v) not_u[v] = in_u[v] ? 0 : 1;
    VertexSet u_set = make_vertex_set(g, in_u);
    auto sub = induced_subgraph(g, u_set);
    const WeightedGraph& h = sub.graph;

    auto sp = dense_spectrum(h, Operator::laplacian);
    double lam2 = h.vertex_count() >= 2 ? sp.eigenvalues[1] : 0.0;
    it.lambda2_h = lam2;
    VertexFunction f = nonneg_split(sp.g_function(1), lam2);

    // Enlargement branch: threshold sets of the dichotomy's disjoint
    // functions, checked against the boundary condition in G.
    std::optional<std::vector<int>> chosen;
    DichotomyResult dich;
    bool have_dich = false;
    try {
      dich = main_func_dichotomy(f, k);
      have_dich = true;
    } catch (const std::exception&) {
      have_dich = false;  // preconditions can fail on degenerate H; sweep below
    }
    if (have_dich && !dich.case_i) {
      for (const auto& fi : dich.functions) {
        if (chosen) break;
        std::vector<double> mags;
        for (double x : fi.values)
          if (x > 0.0) mags.push_back(x);
        mags = distinct_values_sorted(mags);
        for (double t : mags) {
          std::vector<uint8_t> s_parent(n, 0);
          for (int v = 0; v < h.vertex_count(); ++v)
            if (fi.values[v] >= t) s_parent[sub.to_parent[v]] = 1;
          std::vector<uint8_t> u_minus_s(n, 0);
          for (int v = 0; v < n; ++v) u_minus_s[v] = in_u[v] && !s_parent[v];
          double inside = detail::cut_between(g, s_parent, u_minus_s);
          double outside = detail::cut_between(g, s_parent, not_u);
          if (inside <= outside) {
            std::vector<int> ids;
            for (int v = 0; v < n; ++v)
              if (s_parent[v]) ids.push_back(v);
            if (!ids.empty() && ids.size() < static_cast<size_t>(u_set.size())) {
              chosen = std::move(ids);
              break;
            }
          }
        }
      }
    }

    if (chosen) {
      it.branch = "enlargement";
      it.removed = *chosen;
      remove_set(*chosen);
    } else {
      SweepResult sw = sweep_conductance(f);
      VertexSet s = threshold_set(f, sw.threshold);
      it.sweep_phi = sw.value;
      std::vector<int> ids;
      for (int v : s.vertices()) ids.push_back(sub.to_parent[v]);
      if (ids.empty() || ids.size() >= static_cast<size_t>(u_set.size())) {
        // Degenerate sweep: drop the single vertex extremizing f.
        int arg = 0;
        for (int v = 1; v < h.vertex_count(); ++v)
          if (f.values[v] > f.values[arg]) arg = v;
        ids = {sub.to_parent[arg]};
        it.branch = "degenerate";
      } else {
        it.branch = "sweep";
      }
      it.removed = ids;
      remove_set(ids);
    }
    it.removed_union_phi = removed_phi = removed_union_phi();
    result.trace.push_back(std::move(it));
  }

  std::vector<uint8_t> removed(n);
  for (int v = 0; v < n; ++v) removed[v] = in_u[v] ? 0 : 1;
  result.set = make_vertex_set(g, removed);
  result.conductance = conductance(g, result.set);
  if (result.set.volume < total / 5.0 - 1e-9 * total ||
      result.set.volume > 4.0 * total / 5.0 + 1e-9 * total)
    throw std::runtime_error("balanced separator: balance invariant violated");
  return result;
}

/// Enlargement lemma check: when every threshold set of f (supported in U)
/// has w(E(V_f(t), U-bar)) <= w(E(V_f(t), U \ V_f(t))), then
/// sqrt(8 R_H(f)) >= R_G(f). Otherwise the certificate is not applicable.
inline Certificate rayleigh_enlargement_check(const WeightedGraph& g, const VertexSet& u,
                                              const VertexFunction& f) {
  const int n = g.vertex_count();
  for (int v = 0; v < n; ++v) {
    if (f.values[v] < 0.0) throw std::domain_error("enlargement check requires f >= 0");
    if (f.values[v] != 0.0 && !u.contains(v))
      throw std::domain_error("enlargement check requires supp(f) inside U");
  }
  std::vector<uint8_t> not_u(n);
  for (int v = 0; v < n; ++v) not_u[v] = u.contains(v) ? 0 : 1;

  auto sub = induced_subgraph(g, u);
  VertexFunction f_h(sub.graph, std::vector<double>(sub.graph.vertex_count(), 0.0));
  for (int v = 0; v < sub.graph.vertex_count(); ++v) f_h.values[v] = f.values[sub.to_parent[v]];

  bool hypothesis = true;
  std::vector<double> mags;
  for (double x : f.values)
    if (x > 0.0) mags.push_back(x);
  mags = distinct_values_sorted(mags);
  for (double t : mags) {
    std::vector<uint8_t> s(n, 0), u_minus_s(n, 0);
    for (int v = 0; v < n; ++v) s[v] = f.values[v] >= t ? 1 : 0;
    for (int v = 0; v < n; ++v) u_minus_s[v] = u.contains(v) && !s[v];
    if (detail::cut_between(g, s, not_u) > detail::cut_between(g, s, u_minus_s)) {
      hypothesis = false;
      break;
    }
  }

  double rg = rayleigh(f);
  double rh = rayleigh(f_h);
  Certificate cert = Certificate::make("rayleigh-enlargement", rg, std::sqrt(8.0 * rh));
  cert.constants["rayleigh_G"] = rg;
  cert.constants["rayleigh_H"] = rh;
  if (!hypothesis) {
    cert.applicable = false;
    cert.holds = true;  // hypothesis failed; the lemma asserts nothing
  }
  cert.witnesses["f"] = digest(f.values);
  return cert;
}

/// Weaker max-cut enlargement condition over all threshold cuts; when it
/// holds everywhere, sqrt(72 R+_H(f)) >= R+_G(f) (signless forms).
inline Certificate maxcut_enlargement_check(const WeightedGraph& g, const VertexSet& u,
                                            const VertexFunction& f) {
  const int n = g.vertex_count();
  for (int v = 0; v < n; ++v)
    if (f.values[v] != 0.0 && !u.contains(v))
      throw std::domain_error("enlargement check requires supp(f) inside U");
  std::vector<uint8_t> not_u(n);
  for (int v = 0; v < n; ++v) not_u[v] = u.contains(v) ? 0 : 1;

  auto sub = induced_subgraph(g, u);
  VertexFunction f_h(sub.graph, std::vector<double>(sub.graph.vertex_count(), 0.0));
  for (int v = 0; v < sub.graph.vertex_count(); ++v) f_h.values[v] = f.values[sub.to_parent[v]];

  bool condition = true;
  std::vector<double> mags;
  for (double x : f.values)
    if (x != 0.0) mags.push_back(std::abs(x));
  mags = distinct_values_sorted(mags);
  for (double t : mags) {
    std::vector<uint8_t> L(n, 0), R(n, 0), lr(n, 0), u_minus(n, 0);
    for (int v = 0; v < n; ++v) {
      if (f.values[v] <= -t) L[v] = 1;
      else if (f.values[v] >= t) R[v] = 1;
      lr[v] = L[v] || R[v];
    }
    for (int v = 0; v < n; ++v) u_minus[v] = u.contains(v) && !lr[v];
    double internal_l = 0.0, internal_r = 0.0;
    for (const auto& e : g.edges()) {
      if (L[e.u] && L[e.v]) internal_l += e.w;
      if (R[e.u] && R[e.v]) internal_r += e.w;
    }
    double lhs = 0.5 * detail::cut_between(g, lr, not_u);
    double rhs = 2.0 * internal_l + 2.0 * internal_r + detail::cut_between(g, lr, u_minus);
    if (lhs > rhs + 1e-12) {
      condition = false;
      break;
    }
  }

  double rg = signless_rayleigh(f);
  double rh = signless_rayleigh(f_h);
  Certificate cert = Certificate::make("maxcut-enlargement", rg, std::sqrt(72.0 * rh));
  cert.constants["signless_rayleigh_G"] = rg;
  cert.constants["signless_rayleigh_H"] = rh;
  if (!condition) {
    cert.applicable = false;
    cert.holds = true;
  }
  cert.witnesses["f"] = digest(f.values);
  return cert;
}

struct MaxCutIteration {
  int iteration = 0;
  std::string branch;  // "sweep", "enlargement"
  double rho = 0.0;    // fraction of edge weight remaining in H
  double beta_removed = 0.0;
  int removed = 0;
};

struct MaxCutResult {
  InducedCut cut;            // L u R = V at termination
  double cut_fraction = 0.0;
  std::optional<double> guarantee;  // evaluated bound when 600 k eps < alpha_k
  std::optional<double> epsilon;    // 1 - optimal fraction (n <= 14 only)
  double alpha_k = 0.0;
  std::vector<MaxCutIteration> trace;
};

/// Iterative spectral max-cut. Each iteration removes either a threshold cut
/// of the symmetric band functions whose merge does not increase uncutness,
/// or the best bipartiteness sweep cut of the alpha'_1 eigenfunction.
inline MaxCutResult spectral_maxcut(const WeightedGraph& g, int k) {
  if (k < 2) throw std::domain_error("spectral max-cut requires k >= 2");
  if (g.edges().empty()) throw std::domain_error("spectral max-cut requires at least one edge");

  const int n = g.vertex_count();
  std::vector<uint8_t> in_u(n, 1);
  std::vector<int> side(n, 0);  // 0 unassigned, 1 L, 2 R
  MaxCutResult result;

  Spectrum gsp = dense_spectrum(g, Operator::signless);
  result.alpha_k = gsp.eigenvalues[k - 1];

  auto gamma_of = [&](const std::vector<int>& assignment) {
    std::vector<uint8_t> L(n, 0), R(n, 0);
    for (int v = 0; v < n; ++v) {
      if (assignment[v] == 1) L[v] = 1;
      if (assignment[v] == 2) R[v] = 1;
    }
    return uncutness(g, InducedCut{make_vertex_set(g, L), make_vertex_set(g, R)});
  };

  int iter = 0;
  while (true) {
    // Active part: U minus vertices isolated in the induced subgraph (those
    // wait for the terminal greedy assignment).
    auto isolated = detail::isolated_in(g, in_u);
    std::vector<uint8_t> active = in_u;
    for (int v : isolated) active[v] = 0;
    double active_edges = 0.0;
    for (const auto& e : g.edges())
      if (active[e.u] && active[e.v]) active_edges += e.w;
    if (active_edges == 0.0) break;

    MaxCutIteration it;
    it.iteration = iter++;
    it.rho = active_edges / g.total_edge_weight();

    VertexSet u_set = make_vertex_set(g, active);
    auto sub = induced_subgraph(g, u_set);
    const WeightedGraph& h = sub.graph;
    auto sp = dense_spectrum(h, Operator::signless);
    VertexFunction f = normalized_w(sp.eigenfunctions[0]);
    double beta_h = sweep_bipartiteness(f).value;

    double gamma_now = gamma_of(side);
    std::optional<std::pair<std::vector<int>, std::vector<int>>> chosen;  // (L ids, R ids)
    bool chosen_swapped = false;

    StepApproximation approx = symmetric_step_approximation(f, k, beta_h);
    if (!approx.succeeded) {
      auto bands = band_functions(f, approx);
      // k functions of smallest signless Rayleigh quotient, per the lemma.
      std::vector<size_t> order;
      for (size_t i = 0; i < bands.size(); ++i)
        if (!is_zero(bands[i])) order.push_back(i);
      std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return signless_rayleigh(bands[a]) < signless_rayleigh(bands[b]);
      });
      if (order.size() > static_cast<size_t>(k)) order.resize(k);

      for (size_t oi : order) {
        if (chosen) break;
        const auto& fi = bands[oi];
        std::vector<double> mags;
        for (double x : fi.values)
          if (x != 0.0) mags.push_back(std::abs(x));
        mags = distinct_values_sorted(mags);
        for (double t : mags) {
          std::vector<int> lp, rp;
          for (int v = 0; v < h.vertex_count(); ++v) {
            if (fi.values[v] <= -t) lp.push_back(sub.to_parent[v]);
            else if (fi.values[v] >= t) rp.push_back(sub.to_parent[v]);
          }
          if (lp.empty() && rp.empty()) continue;
          auto trial = side;
          for (int v : lp) trial[v] = 1;
          for (int v : rp) trial[v] = 2;
          double gamma_a = gamma_of(trial);
          auto trial_b = side;
          for (int v : lp) trial_b[v] = 2;
          for (int v : rp) trial_b[v] = 1;
          double gamma_b = gamma_of(trial_b);
          if (std::min(gamma_a, gamma_b) <= gamma_now) {
            chosen = {std::move(lp), std::move(rp)};
            chosen_swapped = gamma_b < gamma_a;
            InducedCut rc = threshold_cut(fi, t);
            it.beta_removed = bipartiteness_ratio(h, rc);
            break;
          }
        }
      }
    }

    if (chosen) {
      it.branch = "enlargement";
      for (int v : chosen->first) {
        side[v] = chosen_swapped ? 2 : 1;
        in_u[v] = 0;
      }
      for (int v : chosen->second) {
        side[v] = chosen_swapped ? 1 : 2;
        in_u[v] = 0;
      }
      it.removed = static_cast<int>(chosen->first.size() + chosen->second.size());
    } else {
      SweepResult sw = sweep_bipartiteness(f);
      InducedCut cut = threshold_cut(f, sw.threshold);
      it.branch = "sweep";
      it.beta_removed = sw.value;
      int removed = 0;
      for (int v = 0; v < h.vertex_count(); ++v) {
        int pv = sub.to_parent[v];
        if (cut.left.contains(v)) {
          side[pv] = 1;
          in_u[pv] = 0;
          ++removed;
        } else if (cut.right.contains(v)) {
          side[pv] = 2;
          in_u[pv] = 0;
          ++removed;
        }
      }
      it.removed = removed;
      if (removed == 0) throw std::runtime_error("max-cut sweep removed nothing");
    }
    result.trace.push_back(std::move(it));
  }

  // Greedy terminal assignment of leftovers toward the side cutting more.
  for (int v = 0; v < n; ++v) {
    if (side[v] != 0) continue;
    double to_l = 0.0, to_r = 0.0;
    for (int ei : g.incident(v)) {
      const auto& e = g.edges()[ei];
      int u = e.u == v ? e.v : e.u;
      if (side[u] == 1) to_l += e.w;
      else if (side[u] == 2) to_r += e.w;
    }
    side[v] = to_l >= to_r ? 2 : 1;  // joining R cuts the edges into L
  }

  std::vector<uint8_t> L(n, 0), R(n, 0);
  for (int v = 0; v < n; ++v) (side[v] == 1 ? L : R)[v] = 1;
  result.cut = make_induced_cut(g, L, R);
  double cut_w = 0.0;
  for (const auto& e : g.edges())
    if (L[e.u] != L[e.v]) cut_w += e.w;
  result.cut_fraction = cut_w / g.total_edge_weight();

  if (n <= 14) {
    auto oracle = exhaustive_max_cut(g);
    double eps = 1.0 - oracle.fraction;
    result.epsilon = eps;
    if (eps == 0.0) {
      result.guarantee = 1.0;
    } else if (600.0 * k * eps < result.alpha_k) {
      double x = 600.0 * k * eps / result.alpha_k;
      result.guarantee = 1.0 - x * (1.0 + std::log(1.0 / x));
    }
  }
  return result;
}

struct KwayResult {
  std::vector<VertexSet> parts;
  double phi_k = 0.0;
};

/// Baseline k-way partition: recursively sweep the largest remaining part.
inline KwayResult recursive_kway(const WeightedGraph& g, int k) {
  if (k < 1 || k > g.vertex_count()) throw std::domain_error("recursive k-way requires k <= n");
  std::vector<std::vector<int>> parts;
  {
    std::vector<int> all(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) all[v] = v;
    parts.push_back(std::move(all));
  }
  while (static_cast<int>(parts.size()) < k) {
    // Split the largest part by volume (ties: earliest in the list).
    size_t target = 0;
    double best_vol = -1.0;
    for (size_t i = 0; i < parts.size(); ++i) {
      if (parts[i].size() < 2) continue;
      double vol = 0.0;
      for (int v : parts[i]) vol += g.degree(v);
      if (vol > best_vol) {
        best_vol = vol;
        target = i;
      }
    }
    if (best_vol < 0.0) throw std::domain_error("no splittable part remains");

    auto part = parts[target];
    auto sub = induced_subgraph(g, make_vertex_set(g, part));
    const WeightedGraph& h = sub.graph;
    std::vector<int> side_a, side_b;
    auto iso = detail::isolated_in(h, std::vector<uint8_t>(h.vertex_count(), 1));
    if (!iso.empty()) {
      side_a = {sub.to_parent[iso.front()]};
      for (int v : part)
        if (v != side_a.front()) side_b.push_back(v);
    } else {
      auto sp = dense_spectrum(h, Operator::laplacian);
      VertexFunction f = nonneg_split(sp.g_function(1), sp.eigenvalues[1]);
      SweepResult sw = sweep_conductance(f);
      VertexSet s = threshold_set(f, sw.threshold);
      for (int v = 0; v < h.vertex_count(); ++v)
        (s.contains(v) ? side_a : side_b).push_back(sub.to_parent[v]);
    }
    parts[target] = std::move(side_a);
    parts.push_back(std::move(side_b));
  }

  KwayResult out;
  for (const auto& p : parts) out.parts.push_back(make_vertex_set(g, p));
  out.phi_k = phi_k_of_partition(g, out.parts);
  return out;
}

}  // namespace specpart
