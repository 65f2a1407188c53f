#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "specpart/errors.hpp"

namespace specpart {

struct Edge {
  int u;
  int v;
  double w;
};

/// Undirected graph with strictly positive edge weights. Immutable after
/// construction; weighted degrees and the total volume are precomputed.
/// Self-loops and duplicate undirected edges are rejected.
class WeightedGraph {
public:
  WeightedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ < 0) throw std::domain_error("vertex count must be nonnegative");
    degree_.assign(n_, 0.0);
    std::set<std::pair<int, int>> seen;
    for (auto& e : edges_) {
      if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
        throw std::domain_error("edge endpoint out of range");
      if (e.u == e.v) throw std::domain_error("self-loops are not allowed");
      if (!(e.w > 0.0) || !std::isfinite(e.w))
        throw std::domain_error("edge weights must be strictly positive and finite");
      if (e.u > e.v) std::swap(e.u, e.v);
      if (!seen.insert({e.u, e.v}).second)
        throw std::domain_error("duplicate undirected edge");
    }
    for (const auto& e : edges_) {
      degree_[e.u] += e.w;
      degree_[e.v] += e.w;
    }
    total_volume_ = 0.0;
    for (double d : degree_) total_volume_ += d;
    adjacency_.assign(n_, {});
    for (size_t i = 0; i < edges_.size(); ++i) {
      adjacency_[edges_[i].u].push_back(static_cast<int>(i));
      adjacency_[edges_[i].v].push_back(static_cast<int>(i));
    }
  }

  int vertex_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  double degree(int v) const { return degree_[v]; }
  const std::vector<double>& degrees() const { return degree_; }
  double total_volume() const { return total_volume_; }
  double total_edge_weight() const { return total_volume_ / 2.0; }

  /// Edge indices incident to v.
  const std::vector<int>& incident(int v) const { return adjacency_[v]; }

  bool has_isolated_vertex() const {
    for (double d : degree_)
      if (d == 0.0) return true;
    return false;
  }

private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<double> degree_;
  std::vector<std::vector<int>> adjacency_;
  double total_volume_ = 0.0;
};

/// Vertex subset with its volume and outgoing boundary weight, both fixed at
/// construction time and recomputable from the graph.
struct VertexSet {
  std::vector<uint8_t> membership;  // size n, 0/1
  double volume = 0.0;
  double boundary_weight = 0.0;

  bool contains(int v) const { return membership[v] != 0; }
  int size() const {
    int c = 0;
    for (uint8_t m : membership) c += m;
    return c;
  }
  bool empty() const { return size() == 0; }
  std::vector<int> vertices() const {
    std::vector<int> out;
    for (int v = 0; v < static_cast<int>(membership.size()); ++v)
      if (membership[v]) out.push_back(v);
    return out;
  }
};

inline VertexSet make_vertex_set(const WeightedGraph& g, const std::vector<uint8_t>& membership) {
  if (static_cast<int>(membership.size()) != g.vertex_count())
    throw std::domain_error("membership size mismatch");
  VertexSet s;
  s.membership = membership;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (s.membership[v]) s.volume += g.degree(v);
  for (const auto& e : g.edges())
    if (s.membership[e.u] != s.membership[e.v]) s.boundary_weight += e.w;
  return s;
}

inline VertexSet make_vertex_set(const WeightedGraph& g, const std::vector<int>& vertices) {
  std::vector<uint8_t> m(g.vertex_count(), 0);
  for (int v : vertices) {
    if (v < 0 || v >= g.vertex_count()) throw std::domain_error("vertex id out of range");
    m[v] = 1;
  }
  return make_vertex_set(g, m);
}

inline VertexSet complement_set(const WeightedGraph& g, const VertexSet& s) {
  std::vector<uint8_t> m(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) m[v] = s.membership[v] ? 0 : 1;
  return make_vertex_set(g, m);
}

/// Disjoint pair (L, R) of vertex sets.
struct InducedCut {
  VertexSet left;
  VertexSet right;
};

inline InducedCut make_induced_cut(const WeightedGraph& g, const std::vector<uint8_t>& left,
                                   const std::vector<uint8_t>& right) {
  for (size_t v = 0; v < left.size(); ++v)
    if (left[v] && right[v]) throw std::domain_error("induced cut sides must be disjoint");
  return InducedCut{make_vertex_set(g, left), make_vertex_set(g, right)};
}

/// phi(S) = w(E(S, S-bar)) / min(vol(S), vol(S-bar)).
inline double conductance(const WeightedGraph& g, const VertexSet& s) {
  double vol = s.volume;
  double covol = g.total_volume() - vol;
  if (s.empty() || s.size() == g.vertex_count())
    throw std::domain_error("conductance requires a proper nonempty subset");
  return s.boundary_weight / std::min(vol, covol);
}

/// beta(L, R) = (2 w(E(L)) + 2 w(E(R)) + w(E(L u R, complement))) / vol(L u R).
inline double bipartiteness_ratio(const WeightedGraph& g, const InducedCut& cut) {
  double internal_l = 0.0, internal_r = 0.0, out = 0.0, vol = 0.0;
  const auto& L = cut.left.membership;
  const auto& R = cut.right.membership;
  bool any = false;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (L[v] || R[v]) {
      vol += g.degree(v);
      any = true;
    }
  }
  if (!any) throw std::domain_error("bipartiteness ratio requires L u R nonempty");
  for (const auto& e : g.edges()) {
    bool ul = L[e.u], ur = R[e.u], vl = L[e.v], vr = R[e.v];
    if (ul && vl) internal_l += e.w;
    else if (ur && vr) internal_r += e.w;
    else if ((ul || ur) != (vl || vr)) out += e.w;  // one endpoint outside L u R
  }
  return (2.0 * internal_l + 2.0 * internal_r + out) / vol;
}

/// gamma(L, R) = w(E(L)) + w(E(R)) + w(E(L u R, complement)); internal edges
/// counted once. Empty cut yields 0.
inline double uncutness(const WeightedGraph& g, const InducedCut& cut) {
  double acc = 0.0;
  const auto& L = cut.left.membership;
  const auto& R = cut.right.membership;
  for (const auto& e : g.edges()) {
    bool ul = L[e.u], ur = R[e.u], vl = L[e.v], vr = R[e.v];
    if ((ul && vl) || (ur && vr)) acc += e.w;
    else if ((ul || ur) != (vl || vr)) acc += e.w;
  }
  return acc;
}

struct InducedSubgraph {
  WeightedGraph graph;
  std::vector<int> to_parent;  // subgraph id -> parent id
  std::vector<int> to_sub;     // parent id -> subgraph id, -1 outside U
};

/// Subgraph on U with exactly the edges internal to U, plus the index maps.
inline InducedSubgraph induced_subgraph(const WeightedGraph& g, const VertexSet& u) {
  if (u.empty()) throw std::domain_error("induced subgraph requires a nonempty vertex set");
  std::vector<int> to_parent = u.vertices();
  std::vector<int> to_sub(g.vertex_count(), -1);
  for (size_t i = 0; i < to_parent.size(); ++i) to_sub[to_parent[i]] = static_cast<int>(i);
  std::vector<Edge> edges;
  for (const auto& e : g.edges())
    if (to_sub[e.u] >= 0 && to_sub[e.v] >= 0)
      edges.push_back({to_sub[e.u], to_sub[e.v], e.w});
  return InducedSubgraph{WeightedGraph(static_cast<int>(to_parent.size()), std::move(edges)),
                         std::move(to_parent), std::move(to_sub)};
}

/// max_i phi(S_i) over pairwise disjoint nonempty sets.
inline double phi_k_of_partition(const WeightedGraph& g, const std::vector<VertexSet>& sets) {
  if (sets.empty()) throw std::domain_error("phi_k requires at least one set");
  std::vector<uint8_t> used(g.vertex_count(), 0);
  for (const auto& s : sets) {
    if (s.empty()) throw std::domain_error("phi_k members must be nonempty");
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (!s.membership[v]) continue;
      if (used[v]) throw std::domain_error("phi_k members must be pairwise disjoint");
      used[v] = 1;
    }
  }
  double worst = 0.0;
  for (const auto& s : sets) worst = std::max(worst, conductance(g, s));
  return worst;
}

}  // namespace specpart
