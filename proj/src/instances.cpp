#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>

#include "prelax/bench.hpp"

namespace prelax {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform(double lo, double hi) {
  const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::uint64_t SplitMix64::below(std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r;
  do {
    r = next();
  } while (r >= limit);
  return r % n;
}

std::uint64_t dense_count(std::size_t n, int d, std::uint64_t cap) {
  // C(n+d, d) built incrementally as C(n+i, i).
  unsigned __int128 c = 1;
  for (int i = 1; i <= d; ++i) {
    c = c * (n + i) / i;
    if (c > cap) throw InvalidArgument("C(n+d,d) exceeds " + std::to_string(cap));
  }
  return static_cast<std::uint64_t>(c);
}

namespace {

ExponentSet scaled_chains(const std::vector<Exponent>& dirs) {
  ExponentSet a;
  for (const auto& alpha : dirs)
    for (int k = 0; k <= 10; ++k) a.insert(alpha * k);
  return a;
}

std::vector<Exponent> units_plus_diagonal(std::size_t n) {
  std::vector<Exponent> dirs;
  Exponent ones(n);
  for (std::size_t i = 0; i < n; ++i) {
    dirs.push_back(Exponent::unit(n, i));
    ones.set(i, 1);
  }
  dirs.push_back(ones);
  return dirs;
}

}  // namespace

ExponentSet tag_support(const std::string& tag, std::uint64_t seed) {
  static const std::regex sized(R"(^(dense|S)\((\d+),(\d+)\)$)");
  std::smatch m;
  if (std::regex_match(tag, m, sized)) {
    const std::size_t n = std::stoul(m[2]);
    const int d = std::stoi(m[3]);
    if (n == 0) throw InvalidArgument("tag " + tag + ": n must be positive");
    const std::uint64_t total = dense_count(n, d);
    const ExponentSet all = truncated_exponents(n, d);
    if (m[1] == "dense") return all;
    const auto k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(total))));
    std::vector<Exponent> pool(all.begin(), all.end());
    SplitMix64 rng(seed ^ 0x5eedULL);
    for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
    return ExponentSet(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
  }
  if (tag == "A5") return scaled_chains({Exponent{1, 1}});
  if (tag == "A6") return scaled_chains({Exponent{1, 1, 1, 1}});
  if (tag == "A7") return scaled_chains(units_plus_diagonal(2));
  if (tag == "A8") return scaled_chains(units_plus_diagonal(4));
  if (tag == "Aex") return {{0, 2}, {1, 1}, {2, 3}, {2, 4}, {4, 0}, {5, 5}};
  if (tag.rfind("custom:", 0) == 0) {
    return instance_from_json(read_json_file(tag.substr(7))).f.support();
  }
  throw InvalidArgument("unknown instance tag \"" + tag + "\"");
}

Instance gen_instance(const std::string& tag, std::uint64_t seed) {
  Instance inst;
  inst.tag = tag;
  inst.seed = seed;
  ExponentSet support;
  std::optional<Box> box;
  if (tag.rfind("custom:", 0) == 0) {
    const Instance base = instance_from_json(read_json_file(tag.substr(7)));
    support = base.f.support();
    box = base.box;
    inst.family = base.family;
    inst.id = (base.id.empty() ? std::string("custom") : base.id) + "-s" + std::to_string(seed);
  } else {
    support = tag_support(tag, seed);
    inst.id = tag + "-s" + std::to_string(seed);
  }
  if (support.empty()) throw InvalidArgument("tag " + tag + " has an empty support");
  const std::size_t n = support.begin()->dim();
  SplitMix64 rng(seed);
  Polynomial f(n);
  for (const auto& a : support) f.add_term(a, rng.uniform(-1.0, 1.0));
  inst.f = std::move(f);
  inst.box = box ? *box : Box::unit(n);
  return inst;
}

namespace {

struct FastPoly {
  std::size_t n = 0;
  int max_deg = 0;
  std::vector<std::pair<std::vector<int>, double>> terms;
  mutable std::vector<double> pw;

  explicit FastPoly(const Polynomial& f) : n(f.dim()) {
    for (const auto& [a, c] : f.terms()) {
      terms.emplace_back(a.entries(), c);
      for (int e : a.entries()) max_deg = std::max(max_deg, e);
    }
    pw.resize(n * (max_deg + 1));
  }

  double operator()(const std::vector<double>& x) const {
    const int stride = max_deg + 1;
    for (std::size_t i = 0; i < n; ++i) {
      pw[i * stride] = 1.0;
      for (int k = 1; k <= max_deg; ++k) pw[i * stride + k] = pw[i * stride + k - 1] * x[i];
    }
    double s = 0.0;
    for (const auto& [e, c] : terms) {
      double t = c;
      for (std::size_t i = 0; i < n; ++i) t *= pw[i * stride + e[i]];
      s += t;
    }
    return s;
  }
};

}  // namespace

BruteForceResult brute_force_min(const Polynomial& f, const Box& box, const BruteForceOptions& opts) {
  const std::size_t n = f.dim();
  if (box.dim() != n) throw InvalidArgument("brute_force_min: dimension mismatch");
  BruteForceResult out;
  std::vector<double> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = box.lower()[i];
    hi[i] = box.upper()[i];
    if (!std::isfinite(lo[i])) lo[i] = std::isfinite(hi[i]) ? hi[i] - 10.0 : -10.0;
    if (!std::isfinite(hi[i])) hi[i] = lo[i] + 10.0;
  }
  const FastPoly eval(f);
  if (n == 0) {
    out.value = eval({});
    return out;
  }

  std::vector<std::pair<double, std::vector<double>>> seeds;
  auto keep = [&](double v, const std::vector<double>& x) {
    if (static_cast<int>(seeds.size()) < opts.starts) {
      seeds.emplace_back(v, x);
      std::push_heap(seeds.begin(), seeds.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    } else if (v < seeds.front().first) {
      std::pop_heap(seeds.begin(), seeds.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      seeds.back() = {v, x};
      std::push_heap(seeds.begin(), seeds.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    }
  };

  int g = opts.grid_points;
  if (n <= 6) {
    while (g > 2 && std::pow(static_cast<double>(g), static_cast<double>(n)) > static_cast<double>(opts.max_evaluations)) --g;
    out.budget_exceeded = g < opts.grid_points;
    std::vector<int> idx(n, 0);
    std::vector<double> x(n);
    while (true) {
      for (std::size_t i = 0; i < n; ++i) x[i] = g == 1 ? lo[i] : lo[i] + (hi[i] - lo[i]) * idx[i] / (g - 1);
      keep(eval(x), x);
      std::size_t i = 0;
      while (i < n && ++idx[i] == g) idx[i++] = 0;
      if (i == n) break;
    }
  } else {
    SplitMix64 rng(opts.seed);
    const long long count = std::min<long long>(opts.max_evaluations, 200'000);
    std::vector<double> x(n);
    for (long long s = 0; s < count; ++s) {
      for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform(lo[i], hi[i]);
      keep(eval(x), x);
    }
    out.budget_exceeded = true;
  }

  out.value = std::numeric_limits<double>::infinity();
  for (auto [v, x] : seeds) {
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = (hi[i] - lo[i]) / std::max(g - 1, 1);
    for (int step = 0; step < opts.refine_steps; ++step) {
      bool improved = false;
      for (std::size_t i = 0; i < n; ++i) {
        for (double dir : {-1.0, 1.0}) {
          std::vector<double> y = x;
          y[i] = std::clamp(x[i] + dir * h[i], lo[i], hi[i]);
          const double fy = eval(y);
          if (fy < v) {
            v = fy;
            x = std::move(y);
            improved = true;
          }
        }
      }
      if (!improved)
        for (double& hi_ : h) hi_ *= 0.5;
    }
    if (v < out.value) {
      out.value = v;
      out.x = x;
    }
  }
  return out;
}

Interval trivial_range(const Polynomial& f, const Box& box) {
  Interval r{0.0, 0.0};
  for (const auto& [a, c] : f.terms()) {
    if (a.is_zero()) {
      r.lo += c;
      r.hi += c;
      continue;
    }
    const Interval m = monomial_range(a, box);
    const double p = c * m.lo, q = c * m.hi;
    r.lo += std::min(p, q);
    r.hi += std::max(p, q);
  }
  return r;
}

double triv_value(double min_relax, double max_relax, const Polynomial& f, const Box& box) {
  const Interval t = trivial_range(f, box);
  const double width = t.hi - t.lo;
  if (!std::isfinite(width)) return std::numeric_limits<double>::quiet_NaN();
  if (!(width > 1e-15)) return 0.0;
  return std::clamp((max_relax - min_relax) / width, 0.0, 1.0 + 1e-6);
}

}  // namespace prelax
