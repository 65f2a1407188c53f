#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "specpart/certificate.hpp"
#include "specpart/spectrum.hpp"
#include "specpart/sweep.hpp"

namespace specpart {

// Constants fixed by the second proof; exposed read-only so certificates
// match the stated chain exactly.
inline constexpr double kRegionAlpha = 0.5;                                  // dyadic ratio
inline constexpr double kRegionC = 1.0 / 24576.0;                            // alpha^6 (1-alpha)^2 / 96
inline constexpr double kDichotomyCaseOne = 1e4;                             // phi <= 1e4 k R gate
inline constexpr double kDichotomyCaseTwo = 1e8;                             // R(f_i) bound factor

/// Dyadic decomposition of the positive range of f: levels
/// I_i = (alpha^{i+1}, alpha^i], each split into 12k equal subintervals, with
/// heavy / balanced classification against the preceding level's mass.
struct DyadicDecomposition {
  int k = 0;
  double alpha = kRegionAlpha;
  double c = kRegionC;
  double delta = 0.0;  // phi(f)^2 / R(f)
  double phi_f = 0.0;
  double rayleigh_f = 0.0;
  int level_lo = 0;  // level of max f
  int level_hi = 0;  // one below the level of the min positive value

  struct Level {
    int index = 0;
    double mass = 0.0;                // l_i
    std::vector<double> sub_mass;     // l_{i,j}, j = 0 (top) .. 12k-1 (bottom)
    std::vector<uint8_t> heavy;
    int heavy_count = 0;
    bool balanced = false;
  };
  std::vector<Level> levels;  // indices level_lo .. level_hi inclusive

  const Level& level(int index) const { return levels[index - level_lo]; }
  double level_mass(int index) const {
    if (index < level_lo || index > level_hi) return 0.0;
    return levels[index - level_lo].mass;
  }
  /// Sum of l_{i-1} over balanced levels.
  double delta_mass() const {
    double acc = 0.0;
    for (const auto& lv : levels)
      if (lv.balanced) acc += level_mass(lv.index - 1);
    return acc;
  }

  // alpha is pinned to 1/2, so integer powers are exact.
  static double alpha_pow(int i) { return std::ldexp(1.0, -i); }

  double sub_length(int index) const { return alpha_pow(index) * (1.0 - alpha) / (12.0 * k); }
  double sub_upper(int index, int j) const {
    return alpha_pow(index) * (1.0 - j * (1.0 - alpha) / (12.0 * k));
  }
  double sub_lower(int index, int j) const { return sub_upper(index, j + 1); }
};

namespace detail {

// Level of x > 0: the integer i with alpha^{i+1} < x <= alpha^i.
inline int dyadic_level(double x) {
  int i = static_cast<int>(std::floor(-std::log2(x)));
  while (x > DyadicDecomposition::alpha_pow(i)) --i;
  while (x <= DyadicDecomposition::alpha_pow(i + 1)) ++i;
  return i;
}

}  // namespace detail

/// Decompose the positive values of a normalized nonnegative f; delta is
/// computed from the sweep conductance of f.
inline DyadicDecomposition dyadic_decompose(const VertexFunction& f, int k) {
  const WeightedGraph& graph = *f.graph;
  if (k < 2) throw std::domain_error("dyadic decomposition requires k >= 2");
  bool any_positive = false;
  for (double x : f.values) {
    if (x < 0.0) throw std::domain_error("dyadic decomposition requires f >= 0");
    if (x > 0.0) any_positive = true;
  }
  if (!any_positive) throw std::domain_error("dyadic decomposition requires a positive value");

  DyadicDecomposition dd;
  dd.k = k;
  dd.phi_f = sweep_conductance(f).value;
  dd.rayleigh_f = rayleigh(f);
  dd.delta = dd.rayleigh_f > 0.0 ? dd.phi_f * dd.phi_f / dd.rayleigh_f
                                 : std::numeric_limits<double>::infinity();

  double max_f = 0.0, min_pos = std::numeric_limits<double>::infinity();
  for (double x : f.values) {
    if (x > 0.0) {
      max_f = std::max(max_f, x);
      min_pos = std::min(min_pos, x);
    }
  }
  dd.level_lo = detail::dyadic_level(max_f);
  // One level past the minimum positive value: it is empty but its
  // predecessor carries mass, so its balance flag participates in Delta.
  dd.level_hi = detail::dyadic_level(min_pos) + 1;

  const int nsub = 12 * k;
  dd.levels.resize(dd.level_hi - dd.level_lo + 1);
  for (int idx = dd.level_lo; idx <= dd.level_hi; ++idx) {
    auto& lv = dd.levels[idx - dd.level_lo];
    lv.index = idx;
    lv.sub_mass.assign(nsub, 0.0);
    lv.heavy.assign(nsub, 0);
  }
  for (int v = 0; v < f.size(); ++v) {
    double x = f.values[v];
    if (x <= 0.0) continue;
    int i = detail::dyadic_level(x);
    auto& lv = dd.levels[i - dd.level_lo];
    double m = graph.degree(v) * x * x;
    lv.mass += m;
    double u = (1.0 - x / DyadicDecomposition::alpha_pow(i)) * (12.0 * k) / (1.0 - dd.alpha);
    int j = std::clamp(static_cast<int>(std::floor(u)), 0, nsub - 1);
    // Subintervals are closed at the upper end: an exact boundary value
    // belongs to the subinterval whose upper endpoint it is.
    if (j > 0 && x > dd.sub_upper(i, j)) --j;
    if (j < nsub - 1 && x <= dd.sub_upper(i, j + 1)) ++j;
    lv.sub_mass[j] += m;
  }
  for (auto& lv : dd.levels) {
    double prev = dd.level_mass(lv.index - 1);
    double threshold = dd.c * dd.delta * prev / k;
    lv.heavy_count = 0;
    for (int j = 0; j < nsub; ++j) {
      lv.heavy[j] = lv.sub_mass[j] >= threshold ? 1 : 0;
      lv.heavy_count += lv.heavy[j];
    }
    lv.balanced = lv.heavy_count >= 6 * k;
  }
  return dd;
}

struct RegionPiece {
  double lo = 0.0;
  double hi = 0.0;
  int level = 0;
  int sub_index = 0;
  double mass = 0.0;
};

/// Union of heavy subintervals assigned to one of the 2k regions;
/// epsilon = (1-alpha)/(12k) in the relative distance
/// dist(x, R) = inf_{y in R} |x-y| / y.
struct Region {
  std::vector<RegionPiece> pieces;
  double mass = 0.0;
  double epsilon = 0.0;
};

inline double region_distance(double x, const Region& region) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : region.pieces) {
    double d;
    if (x < p.lo) d = (p.lo - x) / p.lo;
    else if (x > p.hi) d = (x - p.hi) / p.hi;
    else d = 0.0;
    best = std::min(best, d);
  }
  return best;
}

/// From every balanced level, region a receives the (3a-1)-th heavy
/// subinterval (1-indexed, ordered by position j among the first 6k heavy
/// subintervals); the skipped heavies keep the regions
/// (1-alpha)/(12k)-well-separated.
inline std::vector<Region> build_regions(const DyadicDecomposition& dd) {
  const int k = dd.k;
  std::vector<Region> regions(2 * k);
  double eps = (1.0 - dd.alpha) / (12.0 * k);
  for (auto& r : regions) r.epsilon = eps;
  for (const auto& lv : dd.levels) {
    if (!lv.balanced) continue;
    std::vector<int> heavy_js;
    for (int j = 0; j < static_cast<int>(lv.heavy.size()) && static_cast<int>(heavy_js.size()) < 6 * k;
         ++j)
      if (lv.heavy[j]) heavy_js.push_back(j);
    for (int a = 1; a <= 2 * k; ++a) {
      int pos = 3 * a - 2;  // 0-indexed (3a-1)-th
      if (pos >= static_cast<int>(heavy_js.size())) continue;
      int j = heavy_js[pos];
      RegionPiece piece;
      piece.level = lv.index;
      piece.sub_index = j;
      piece.lo = dd.sub_lower(lv.index, j);
      piece.hi = dd.sub_upper(lv.index, j);
      piece.mass = lv.sub_mass[j];
      regions[a - 1].mass += piece.mass;
      regions[a - 1].pieces.push_back(piece);
    }
  }
  return regions;
}

struct RegionFunctions {
  std::vector<VertexFunction> all;   // 2k tent functions, disjointly supported
  std::vector<size_t> selected;      // k indices of smallest edge energy
  std::vector<double> edge_energy;   // numerators, one per tent
  double min_mass = 0.0;             // W
  double lemma_bound = 0.0;          // 2 R(f) / (k eps^2 W)
};

/// Tent functions f_i(v) = f(v) max(0, 1 - dist(f(v), R_i)/eps) and the k of
/// them with the smallest edge energy.
inline RegionFunctions region_functions(const VertexFunction& f,
                                        const std::vector<Region>& regions) {
  if (regions.empty()) throw std::domain_error("no regions supplied");
  const WeightedGraph& graph = *f.graph;
  const int k = static_cast<int>(regions.size()) / 2;
  RegionFunctions out;
  out.min_mass = std::numeric_limits<double>::infinity();
  for (const auto& r : regions) {
    if (!(r.mass > 0.0)) throw std::domain_error("region with zero mass");
    out.min_mass = std::min(out.min_mass, r.mass);
  }
  double eps = regions.front().epsilon;
  for (const auto& region : regions) {
    VertexFunction fi(graph, std::vector<double>(f.size(), 0.0));
    for (int v = 0; v < f.size(); ++v) {
      double x = f.values[v];
      if (x <= 0.0) continue;
      double d = region_distance(x, region);
      if (d < eps) fi.values[v] = x * (1.0 - d / eps);
    }
    out.edge_energy.push_back(energy(fi));
    out.all.push_back(std::move(fi));
  }
  std::vector<size_t> order(out.all.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return out.edge_energy[a] < out.edge_energy[b]; });
  out.selected.assign(order.begin(), order.begin() + k);
  double r = rayleigh(f);
  out.lemma_bound = 2.0 * r / (k * eps * eps * out.min_mass);
  return out;
}

struct DichotomyResult {
  bool case_i = false;
  Certificate certificate;
  std::vector<VertexFunction> functions;  // case (ii): k disjointly supported witnesses
  std::vector<RegionPiece> supports;      // case (ii): one heavy subinterval each
  double delta_mass = 0.0;                // Delta (case (ii))
  double phi_f = 0.0;
  double rayleigh_f = 0.0;
};

/// Theorem dichotomy: either phi(f) <= 1e4 k R(f) (case i), or there are k
/// disjointly supported functions, each supported inside a single heavy
/// subinterval, with R(f_i) <= 1e8 k^2 R(f)^2 / phi(f)^2 (case ii).
inline DichotomyResult main_func_dichotomy(const VertexFunction& f, int k) {
  const WeightedGraph& graph = *f.graph;
  for (double x : f.values)
    if (x < 0.0) throw std::domain_error("dichotomy requires f >= 0");
  if (support_volume(f) > graph.total_volume() / 2.0 + 1e-9 * graph.total_volume())
    throw std::domain_error("dichotomy requires vol(supp(f)) <= vol(V)/2");
  if (std::abs(w_norm(f) - 1.0) > 1e-6) throw std::domain_error("dichotomy requires ||f||_w = 1");

  DichotomyResult out;
  out.phi_f = sweep_conductance(f).value;
  out.rayleigh_f = rayleigh(f);
  if (out.phi_f <= kDichotomyCaseOne * k * out.rayleigh_f) {
    out.case_i = true;
    out.certificate =
        Certificate::make("mainfunc-case-i", out.phi_f, kDichotomyCaseOne * k * out.rayleigh_f);
    out.certificate.constants["k"] = k;
    out.certificate.witnesses["f"] = digest(f.values);
    return out;
  }

  auto dd = dyadic_decompose(f, k);
  auto regions = build_regions(dd);
  out.delta_mass = dd.delta_mass();
  if (out.delta_mass < 0.5 - kCertTol)
    throw std::runtime_error("dichotomy case (ii): Delta fell below 1/2");
  auto rf = region_functions(f, regions);

  double bound = kDichotomyCaseTwo * k * k * out.rayleigh_f * out.rayleigh_f /
                 (out.phi_f * out.phi_f);
  double worst = 0.0;
  for (size_t idx : rf.selected) {
    const auto& tent = rf.all[idx];
    const auto& region = regions[idx];
    // Restrict to the constituent heavy subinterval minimizing the restricted
    // Rayleigh quotient (restriction does not monotonically decrease R, so it
    // is re-evaluated per piece).
    VertexFunction best_restricted;
    const RegionPiece* best_piece = nullptr;
    double best_r = std::numeric_limits<double>::infinity();
    for (const auto& piece : region.pieces) {
      VertexFunction restricted(graph, std::vector<double>(f.size(), 0.0));
      double norm2 = 0.0;
      for (int v = 0; v < f.size(); ++v) {
        double x = f.values[v];
        if (x > piece.lo && x <= piece.hi) {
          restricted.values[v] = tent.values[v];
          norm2 += graph.degree(v) * tent.values[v] * tent.values[v];
        }
      }
      if (!(norm2 > 0.0)) continue;
      double r = rayleigh(restricted);
      if (r < best_r) {
        best_r = r;
        best_restricted = std::move(restricted);
        best_piece = &piece;
      }
    }
    if (!best_piece) throw std::runtime_error("dichotomy case (ii): region with no usable piece");
    worst = std::max(worst, best_r);
    out.functions.push_back(std::move(best_restricted));
    out.supports.push_back(*best_piece);
  }

  out.certificate = Certificate::make("mainfunc-case-ii", worst, bound);
  out.certificate.constants["k"] = k;
  out.certificate.constants["delta"] = dd.delta;
  out.certificate.constants["Delta_mass"] = out.delta_mass;
  out.certificate.constants["min_region_mass"] = rf.min_mass;
  out.certificate.witnesses["f"] = digest(f.values);
  return out;
}

/// Appendix bound phi(f) < 4.68 sqrt(R(f)) with alpha = (sqrt(17)-1)/4, plus
/// the intermediate energy chain E_f >= phi(f)^2 alpha^4 (1-alpha)/(1+alpha).
inline Certificate appendix_a_certificate(const VertexFunction& f) {
  for (double x : f.values)
    if (x < 0.0) throw std::domain_error("appendix A requires f >= 0");
  if (std::abs(w_norm(f) - 1.0) > 1e-6) throw std::domain_error("appendix A requires ||f||_w = 1");
  if (support_volume(f) > f.graph->total_volume() / 2.0 + 1e-9 * f.graph->total_volume())
    throw std::domain_error("appendix A requires vol(supp(f)) <= vol(V)/2");

  double r = rayleigh(f);
  double ef = energy(f);
  double phi = sweep_conductance(f).value;
  const double a = (std::sqrt(17.0) - 1.0) / 4.0;
  double chain = phi * phi * std::pow(a, 4) * (1.0 - a) / (1.0 + a);

  auto cert = Certificate::make("appendix-a", phi, 4.68 * std::sqrt(r));
  cert.constants["alpha"] = a;
  cert.constants["rayleigh"] = r;
  cert.constants["energy"] = ef;
  cert.constants["energy_chain_lhs"] = chain;
  cert.holds = cert.holds && chain <= ef + kCertTol;
  cert.witnesses["f"] = digest(f.values);
  return cert;
}

}  // namespace specpart
