#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "specpart/function.hpp"
#include "specpart/graph.hpp"

namespace specpart {

/// Interval of the real line, interpreted per the half-open convention
/// (min, max]: closed on the larger value and open on the smaller.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double a, double b) : lo(std::min(a, b)), hi(std::max(a, b)) {}
  double length() const { return hi - lo; }
  bool contains(double x) const { return lo < x && x <= hi; }
};

struct SweepResult {
  double threshold = 0.0;
  VertexSet set;  // conductance sweeps report the smaller-volume side
  double value = 0.0;
  std::vector<std::pair<double, double>> trace;  // (t, value) per candidate
};

/// Threshold set {v : f(v) >= t}.
inline VertexSet threshold_set(const VertexFunction& f, double t) {
  std::vector<uint8_t> m(f.size(), 0);
  for (int v = 0; v < f.size(); ++v) m[v] = f.values[v] >= t ? 1 : 0;
  return make_vertex_set(*f.graph, m);
}

/// Threshold cut (L, R) = ({f <= -t}, {f >= t}) for t > 0.
inline InducedCut threshold_cut(const VertexFunction& f, double t) {
  std::vector<uint8_t> L(f.size(), 0), R(f.size(), 0);
  for (int v = 0; v < f.size(); ++v) {
    if (f.values[v] <= -t) L[v] = 1;
    else if (f.values[v] >= t) R[v] = 1;
  }
  return make_induced_cut(*f.graph, L, R);
}

inline std::vector<double> distinct_values_sorted(const std::vector<double>& vals) {
  std::vector<double> out = vals;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Best conductance over the threshold sets of f. Only distinct values of f
/// are candidate thresholds (the set is constant between consecutive values);
/// the minimum value itself is excluded since it yields the full vertex set.
/// Each candidate is evaluated through conductance(G, S), so sweep values are
/// bit-for-bit reproducible by exhaustive re-evaluation. Ties break toward
/// the smaller threshold, then the smaller set volume.
inline SweepResult sweep_conductance(const VertexFunction& f, bool want_trace = false) {
  const WeightedGraph& g = *f.graph;
  auto values = distinct_values_sorted(f.values);
  if (values.size() < 2) throw std::domain_error("sweep requires a nonconstant function");

  SweepResult best;
  bool have = false;
  for (size_t i = 1; i < values.size(); ++i) {
    double t = values[i];
    VertexSet s = threshold_set(f, t);
    double phi = conductance(g, s);
    if (want_trace) best.trace.push_back({t, phi});
    if (!have || phi < best.value) {
      have = true;
      best.value = phi;
      best.threshold = t;
      best.set = std::move(s);
    }
  }
  // Report the smaller-volume side of the optimal cut; the threshold set wins
  // volume ties.
  double covol = g.total_volume() - best.set.volume;
  if (covol < best.set.volume) best.set = complement_set(g, best.set);
  return best;
}

/// Best bipartiteness ratio over the threshold cuts of f; candidates are the
/// distinct nonzero magnitudes |f(v)|. Ties break toward the smaller t.
inline SweepResult sweep_bipartiteness(const VertexFunction& f, bool want_trace = false) {
  const WeightedGraph& g = *f.graph;
  if (is_zero(f)) throw std::domain_error("bipartiteness sweep of the zero function");
  std::vector<double> mags;
  for (double x : f.values)
    if (x != 0.0) mags.push_back(std::abs(x));
  mags = distinct_values_sorted(mags);

  SweepResult best;
  bool have = false;
  for (double t : mags) {
    InducedCut cut = threshold_cut(f, t);
    double beta = bipartiteness_ratio(g, cut);
    if (want_trace) best.trace.push_back({t, beta});
    if (!have || beta < best.value) {
      have = true;
      best.value = beta;
      best.threshold = t;
    }
  }
  best.set = threshold_set(f, best.threshold);  // R side; L side recoverable from threshold
  return best;
}

/// Dirichlet-Cheeger ratio sum w(u,v)|h(u)-h(v)| / sum w(v) h(v) for a
/// nonnegative h supported on at most half the volume; upper-bounds phi(h).
inline double dirichlet_bound(const VertexFunction& h) {
  const WeightedGraph& g = *h.graph;
  double denom = 0.0;
  for (int v = 0; v < h.size(); ++v) {
    if (h.values[v] < 0.0) throw std::domain_error("dirichlet bound requires h >= 0");
    denom += g.degree(v) * h.values[v];
  }
  if (!(denom > 0.0)) throw std::domain_error("dirichlet bound requires a nonzero h");
  if (support_volume(h) > g.total_volume() / 2.0 + 1e-12 * g.total_volume())
    throw std::domain_error("dirichlet bound requires vol(supp(h)) <= vol(V)/2");
  double num = 0.0;
  for (const auto& e : g.edges()) num += e.w * std::abs(h.values[e.u] - h.values[e.v]);
  return num / denom;
}

/// E_f(I) = sum w(u,v) len(I cap [f(u), f(v)])^2.
inline double restricted_energy(const VertexFunction& f, const Interval& interval) {
  double acc = 0.0;
  for (const auto& e : f.graph->edges()) {
    double a = std::min(f.values[e.u], f.values[e.v]);
    double b = std::max(f.values[e.u], f.values[e.v]);
    double overlap = std::min(interval.hi, b) - std::max(interval.lo, a);
    if (overlap > 0.0) acc += e.w * overlap * overlap;
  }
  return acc;
}

/// vol({v : f(v) >= t}).
inline double volume_above(const VertexFunction& f, double t) {
  double acc = 0.0;
  for (int v = 0; v < f.size(); ++v)
    if (f.values[v] >= t) acc += f.graph->degree(v);
  return acc;
}

/// vol({v : f(v) in (lo, hi]}).
inline double volume_in(const VertexFunction& f, const Interval& interval) {
  double acc = 0.0;
  for (int v = 0; v < f.size(); ++v)
    if (interval.contains(f.values[v])) acc += f.graph->degree(v);
  return acc;
}

/// Lower bound on E_f(I) for an interval I = (b, a] with a > b >= 0:
/// phi^2 vol_f(a)^2 len(I)^2 / (phi vol_f(a) + vol_f(I)). phi_f must be the
/// sweep conductance of f.
inline double energy_drop_lower_bound(const VertexFunction& f, const Interval& interval,
                                      double phi_f) {
  const WeightedGraph& g = *f.graph;
  for (double x : f.values)
    if (x < 0.0) throw std::domain_error("energy drop bound requires f >= 0");
  if (support_volume(f) > g.total_volume() / 2.0 + 1e-12 * g.total_volume())
    throw std::domain_error("energy drop bound requires vol(supp(f)) <= vol(V)/2");
  if (!(interval.lo >= 0.0) || !(interval.hi > interval.lo))
    throw std::domain_error("energy drop bound requires an interval (b, a] with a > b >= 0");
  if (!(phi_f >= 0.0)) throw std::domain_error("phi_f must be nonnegative");

  double vol_a = volume_above(f, interval.hi);
  double vol_i = volume_in(f, interval);
  double len = interval.length();
  double num = phi_f * phi_f * vol_a * vol_a * len * len;
  double den = phi_f * vol_a + vol_i;
  if (num == 0.0) return 0.0;
  return num / den;
}

}  // namespace specpart
