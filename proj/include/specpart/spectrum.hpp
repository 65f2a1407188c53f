#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "specpart/function.hpp"
#include "specpart/graph.hpp"

namespace specpart {

enum class Operator { laplacian, signless };

inline int dense_spectrum_cap() {
  static const int cap = [] {
    if (const char* env = std::getenv("SPECTRAL_CAP")) {
      int v = std::atoi(env);
      if (v > 0) return v;
    }
    return 4096;
  }();
  return cap;
}

/// Full ascending spectrum of L = I - D^{-1/2} A D^{-1/2} or
/// M = I + D^{-1/2} A D^{-1/2}. Eigenfunctions are exposed in the
/// f = D^{-1/2} g convention and are pairwise w-orthonormal; the sign of each
/// underlying g is fixed so its first nonzero coordinate is positive.
struct Spectrum {
  Operator which = Operator::laplacian;
  std::vector<double> eigenvalues;
  std::vector<VertexFunction> eigenfunctions;

  /// Eigenfunction in the g = D^{1/2} f convention.
  VertexFunction g_function(int i) const {
    const auto& f = eigenfunctions[i];
    VertexFunction g = f;
    for (int v = 0; v < f.size(); ++v) g.values[v] = f.values[v] * std::sqrt(f.graph->degree(v));
    return g;
  }
};

inline Spectrum dense_spectrum(const WeightedGraph& graph, Operator which,
                               int cap = dense_spectrum_cap()) {
  const int n = graph.vertex_count();
  if (n < 1) throw std::domain_error("dense spectrum requires at least one vertex");
  if (n > cap)
    throw capacity_error("dense spectrum cap exceeded (n=" + std::to_string(n) +
                         ", cap=" + std::to_string(cap) + ")");
  if (graph.has_isolated_vertex())
    throw std::domain_error("dense spectrum undefined for graphs with isolated vertices");

  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  const double sign = which == Operator::laplacian ? -1.0 : 1.0;
  for (const auto& e : graph.edges()) {
    double x = sign * e.w / std::sqrt(graph.degree(e.u) * graph.degree(e.v));
    m(e.u, e.v) += x;
    m(e.v, e.u) += x;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");

  Spectrum out;
  out.which = which;
  out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  out.eigenfunctions.reserve(n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd g = solver.eigenvectors().col(i);
    double scale = g.norm();
    for (int v = 0; v < n; ++v) {
      if (std::abs(g(v)) > 1e-9 * scale) {
        if (g(v) < 0) g = -g;
        break;
      }
    }
    std::vector<double> f(n);
    for (int v = 0; v < n; ++v) f[v] = g(v) / std::sqrt(graph.degree(v));
    out.eigenfunctions.emplace_back(graph, std::move(f));
  }
  return out;
}

/// R(f) = sum w(u,v) (f(u)-f(v))^2 / ||f||_w^2.
inline double rayleigh(const VertexFunction& f) {
  double denom = w_norm2(f);
  if (!(denom > 0.0)) throw std::domain_error("Rayleigh quotient of the zero function");
  return energy(f) / denom;
}

/// Signless form: sum w(u,v) (f(u)+f(v))^2 / ||f||_w^2.
inline double signless_rayleigh(const VertexFunction& f) {
  double denom = w_norm2(f);
  if (!(denom > 0.0)) throw std::domain_error("Rayleigh quotient of the zero function");
  return signless_energy(f) / denom;
}

inline double rayleigh(const VertexFunction& f, Operator which) {
  return which == Operator::laplacian ? rayleigh(f) : signless_rayleigh(f);
}

namespace detail {

// ||L g - lam g|| relative to ||g||, in the g convention.
inline double laplacian_residual(const WeightedGraph& graph, const std::vector<double>& g,
                                 double lam) {
  const int n = graph.vertex_count();
  std::vector<double> r(n);
  for (int v = 0; v < n; ++v) r[v] = (1.0 - lam) * g[v];
  for (const auto& e : graph.edges()) {
    double x = e.w / std::sqrt(graph.degree(e.u) * graph.degree(e.v));
    r[e.u] -= x * g[e.v];
    r[e.v] -= x * g[e.u];
  }
  double rn = 0.0, gn = 0.0;
  for (int v = 0; v < n; ++v) {
    rn += r[v] * r[v];
    gn += g[v] * g[v];
  }
  return std::sqrt(rn) / std::sqrt(gn);
}

// Connected component ids, -1 for none assigned yet.
inline std::vector<int> component_ids(const WeightedGraph& g) {
  const int n = g.vertex_count();
  std::vector<int> comp(n, -1);
  std::vector<int> stack;
  int next = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int ei : g.incident(v)) {
        const auto& e = g.edges()[ei];
        int u = e.u == v ? e.v : e.u;
        if (comp[u] < 0) {
          comp[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  return comp;
}

}  // namespace detail

/// Splits the lambda_2 eigenfunction by sign and returns the nonnegative,
/// w-normalized side of smaller support volume. Input g2 is in the g
/// convention; f = D^{-1/2} g2 is formed internally. Postconditions:
/// R(f) <= lam2 + 1e-9, vol(supp(f)) <= vol(V)/2, ||f||_w = 1.
inline VertexFunction nonneg_split(const VertexFunction& g2, double lam2) {
  const WeightedGraph& graph = *g2.graph;
  const int n = graph.vertex_count();
  if (detail::laplacian_residual(graph, g2.values, lam2) > 1e-8)
    throw std::domain_error("nonneg_split input is not a lambda_2 eigenfunction");

  VertexFunction f(graph, std::vector<double>(n, 0.0));
  for (int v = 0; v < n; ++v) f.values[v] = g2.values[v] / std::sqrt(graph.degree(v));

  double vol_pos = 0.0, vol_neg = 0.0;
  int first_pos = -1, first_neg = -1;
  for (int v = 0; v < n; ++v) {
    if (f.values[v] > 0.0) {
      vol_pos += graph.degree(v);
      if (first_pos < 0) first_pos = v;
    } else if (f.values[v] < 0.0) {
      vol_neg += graph.degree(v);
      if (first_neg < 0) first_neg = v;
    }
  }

  VertexFunction out(graph, std::vector<double>(n, 0.0));
  if (vol_pos > 0.0 && vol_neg > 0.0) {
    bool take_pos = vol_pos < vol_neg ||
                    (vol_pos == vol_neg && first_pos >= 0 && first_pos < first_neg);
    for (int v = 0; v < n; ++v) {
      double x = f.values[v];
      out.values[v] = take_pos ? std::max(x, 0.0) : -std::min(x, 0.0);
    }
    return normalized_w(out);
  }

  // One-signed eigenfunction: only possible in the lambda = 0 eigenspace of a
  // disconnected graph, where f is constant per component. Keep the
  // smallest-volume supported component so the support stays below half.
  if (!(std::abs(lam2) <= 1e-9))
    throw std::domain_error("one-signed eigenfunction with nonzero eigenvalue");
  auto comp = detail::component_ids(graph);
  int ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<double> comp_vol(ncomp, 0.0);
  std::vector<uint8_t> touched(ncomp, 0);
  for (int v = 0; v < n; ++v) {
    comp_vol[comp[v]] += graph.degree(v);
    if (f.values[v] != 0.0) touched[comp[v]] = 1;
  }
  int best = -1;
  for (int c = 0; c < ncomp; ++c)
    if (touched[c] && (best < 0 || comp_vol[c] < comp_vol[best])) best = c;
  if (best < 0) throw std::domain_error("nonneg_split input is the zero function");
  if (comp_vol[best] > graph.total_volume() / 2.0)
    throw std::domain_error("degenerate eigenbasis: no small-support side exists");
  for (int v = 0; v < n; ++v)
    out.values[v] = comp[v] == best ? std::abs(f.values[v]) : 0.0;
  return normalized_w(out);
}

/// Lemma bound lambda_k <= 2 max_i R(f_i) for disjointly supported functions;
/// returns the right-hand side in the requested quadratic form.
inline double lambda_bound_from_disjoint(const std::vector<VertexFunction>& fs, Operator which) {
  if (fs.empty()) throw std::domain_error("need at least one function");
  const int n = fs.front().size();
  std::vector<uint8_t> used(n, 0);
  for (const auto& f : fs) {
    if (is_zero(f)) throw std::domain_error("functions must be nonzero");
    for (int v = 0; v < n; ++v) {
      if (f.values[v] == 0.0) continue;
      if (used[v]) throw std::domain_error("supports must be pairwise disjoint");
      used[v] = 1;
    }
  }
  double worst = 0.0;
  for (const auto& f : fs) worst = std::max(worst, rayleigh(f, which));
  return 2.0 * worst;
}

}  // namespace specpart
