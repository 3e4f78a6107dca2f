// Binary-tower lowering of geometric-mean cones to 2x2 PSD blocks.

#include <cmath>
#include <numeric>

#include "prelax/conic.hpp"

namespace prelax {

std::pair<long long, long long> rationalize(double x, double tol, long long max_den) {
  if (!std::isfinite(x)) throw InvalidArgument("rationalize: non-finite value");
  const double sign = x < 0 ? -1.0 : 1.0;
  double r = std::abs(x);
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(r);
    const long long ai = static_cast<long long>(a);
    const long long p2 = ai * p1 + p0;
    const long long q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
    if (std::abs(std::abs(x) - static_cast<double>(p1) / static_cast<double>(q1)) <= tol) break;
    const double frac = r - a;
    if (frac < 1e-300) break;
    r = 1.0 / frac;
  }
  if (q1 == 0) throw InvalidArgument("rationalize: no approximation within the denominator bound");
  return {static_cast<long long>(sign) * p1, q1};
}

namespace {

struct Weights {
  std::vector<long long> p;  // numerators over den
  long long den = 1;
  int levels = 0;            // 2^levels >= den
};

Weights weights(std::span<const double> lambda, long long cap) {
  Weights w;
  std::vector<std::pair<long long, long long>> fr;
  for (double l : lambda) {
    if (l < 0) throw InvalidArgument("GMC weight is negative");
    fr.push_back(rationalize(l, 1e-12));
    w.den = std::lcm(w.den, fr.back().second);
    if (w.den > cap) throw InvalidArgument("GMC weight denominator exceeds cap");
  }
  long long sum = 0;
  for (const auto& [p, q] : fr) {
    w.p.push_back(p * (w.den / q));
    sum += w.p.back();
  }
  if (sum != w.den) throw InvalidArgument("GMC weights do not sum to one");
  while ((1LL << w.levels) < w.den) ++w.levels;
  return w;
}

}  // namespace

ConicProgram lower_gmc(const ConicProgram& prog, const SolverConfig& cfg) {
  ConicProgram out = prog;
  out.gmcs.clear();
  for (std::size_t g = 0; g < prog.gmcs.size(); ++g) {
    const ProgramGmc& rec = prog.gmcs[g];
    const Weights w = weights(rec.lambda, cfg.gmc_denominator_cap);
    const std::string tag = "gmc" + std::to_string(g);
    int aux_count = 0;
    auto fresh = [&] {
      SparseAffine a;
      a.add(out.add_variable({std::nullopt, tag + "_z" + std::to_string(aux_count++)}), 1.0);
      return a;
    };

    if (w.levels == 0) {
      for (std::size_t i = 0; i < w.p.size(); ++i) {
        if (w.p[i] == 0) continue;
        ProgramRow row;
        row.expr = rec.t[i];
        for (const auto& [k, c] : rec.y.coeffs) row.expr.add(k, -c);
        row.expr.constant -= rec.y.constant;
        row.expr.normalize();
        row.group = rec.group;
        out.inequalities.push_back(std::move(row));
      }
      continue;
    }

    const long long slots = 1LL << w.levels;
    const bool y_is_root = slots == w.den;
    SparseAffine root = y_is_root ? rec.y : fresh();
    std::vector<SparseAffine> layer;
    for (std::size_t i = 0; i < w.p.size(); ++i) {
      for (long long s = 0; s < w.p[i]; ++s) layer.push_back(rec.t[i]);
    }
    while (static_cast<long long>(layer.size()) < slots) layer.push_back(root);

    auto add_block = [&](const SparseAffine& a, const SparseAffine& z, const SparseAffine& b) {
      ProgramBlock blk;
      blk.size = 2;
      blk.entries = {{0, 0, a}, {0, 1, z}, {1, 1, b}};
      blk.group = rec.group;
      out.blocks.push_back(std::move(blk));
    };
    while (layer.size() > 1) {
      std::vector<SparseAffine> next;
      const bool last = layer.size() == 2;
      for (std::size_t i = 0; i + 1 < layer.size(); i += 2) {
        if (!last && layer[i] == layer[i + 1]) {
          next.push_back(layer[i]);
          continue;
        }
        SparseAffine z = last ? root : fresh();
        add_block(layer[i], z, layer[i + 1]);
        next.push_back(z);
      }
      layer = std::move(next);
    }
    if (!y_is_root) {
      ProgramRow row;
      row.expr = root;
      for (const auto& [k, c] : rec.y.coeffs) row.expr.add(k, -c);
      row.expr.constant -= rec.y.constant;
      row.expr.normalize();
      row.group = rec.group;
      out.inequalities.push_back(std::move(row));
    }
  }
  return out;
}

bool tower_feasible(double y, std::span<const double> t, std::span<const double> lambda, long long denominator_cap) {
  if (t.size() != lambda.size() || t.empty()) throw InvalidArgument("tower_feasible: size mismatch");
  for (double v : t) {
    if (v < 0) return false;
  }
  const Weights w = weights(lambda, denominator_cap);
  if (w.levels == 0) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (w.p[i] > 0 && y > t[i]) return false;
    }
    return true;
  }
  const long long slots = 1LL << w.levels;
  const bool y_is_root = slots == w.den;
  // Largest admissible root when it also fills the padding slots: r = y.
  std::vector<double> layer;
  for (std::size_t i = 0; i < w.p.size(); ++i) {
    for (long long s = 0; s < w.p[i]; ++s) layer.push_back(t[i]);
  }
  const double filler = std::max(y, 0.0);
  while (static_cast<long long>(layer.size()) < slots) layer.push_back(filler);
  while (layer.size() > 2) {
    std::vector<double> next;
    for (std::size_t i = 0; i + 1 < layer.size(); i += 2) next.push_back(std::sqrt(layer[i] * layer[i + 1]));
    layer = std::move(next);
  }
  const double top = layer[0] * layer[1];
  if (y_is_root) return y * y <= top;
  return filler * filler <= top;
}

}  // namespace prelax
