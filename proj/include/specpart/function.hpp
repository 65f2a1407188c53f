#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "specpart/graph.hpp"

namespace specpart {

/// Real-valued vertex function bound to the graph whose weighted degrees
/// define the l2(V, w) inner product.
struct VertexFunction {
  const WeightedGraph* graph = nullptr;
  std::vector<double> values;

  VertexFunction() = default;
  VertexFunction(const WeightedGraph& g, std::vector<double> vals)
      : graph(&g), values(std::move(vals)) {
    if (static_cast<int>(values.size()) != g.vertex_count())
      throw std::domain_error("vertex function length must equal the vertex count");
  }

  double operator()(int v) const { return values[v]; }
  int size() const { return static_cast<int>(values.size()); }
};

inline double w_inner(const VertexFunction& f, const VertexFunction& g) {
  double acc = 0.0;
  for (int v = 0; v < f.size(); ++v) acc += f.graph->degree(v) * f.values[v] * g.values[v];
  return acc;
}

inline double w_norm2(const VertexFunction& f) { return w_inner(f, f); }
inline double w_norm(const VertexFunction& f) { return std::sqrt(w_norm2(f)); }

inline bool is_zero(const VertexFunction& f) {
  for (double x : f.values)
    if (x != 0.0) return false;
  return true;
}

inline std::vector<int> support(const VertexFunction& f) {
  std::vector<int> out;
  for (int v = 0; v < f.size(); ++v)
    if (f.values[v] != 0.0) out.push_back(v);
  return out;
}

inline double support_volume(const VertexFunction& f) {
  double acc = 0.0;
  for (int v = 0; v < f.size(); ++v)
    if (f.values[v] != 0.0) acc += f.graph->degree(v);
  return acc;
}

inline bool disjointly_supported(const VertexFunction& a, const VertexFunction& b) {
  for (int v = 0; v < a.size(); ++v)
    if (a.values[v] != 0.0 && b.values[v] != 0.0) return false;
  return true;
}

/// Edge-difference energy sum_{u~v} w(u,v) (f(u)-f(v))^2.
inline double energy(const VertexFunction& f) {
  double acc = 0.0;
  for (const auto& e : f.graph->edges()) {
    double d = f.values[e.u] - f.values[e.v];
    acc += e.w * d * d;
  }
  return acc;
}

/// Edge-sum energy sum_{u~v} w(u,v) (f(u)+f(v))^2 (signless form).
inline double signless_energy(const VertexFunction& f) {
  double acc = 0.0;
  for (const auto& e : f.graph->edges()) {
    double s = f.values[e.u] + f.values[e.v];
    acc += e.w * s * s;
  }
  return acc;
}

inline VertexFunction normalized_w(const VertexFunction& f) {
  double nrm = w_norm(f);
  if (!(nrm > 0.0)) throw std::domain_error("cannot normalize the zero function");
  VertexFunction out = f;
  for (double& x : out.values) x /= nrm;
  return out;
}

}  // namespace specpart
