#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <thread>

#include "prelax/bench.hpp"

namespace prelax {

const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> m = {"M", "C", "S", "H", "MC", "T", "tree", "tssos-sos", "univariate-sparse", "custom"};
  return m;
}

PatternFamily method_family(const std::string& method, const Instance& inst) {
  const std::size_t n = inst.f.dim();
  ExponentSet a = inst.f.support();
  if (a.empty()) a.insert(Exponent(n));
  PatternFamily fam;
  if (method == "M") {
    fam = multilinear_family(a);
  } else if (method == "C") {
    fam = chain_family(a);
  } else if (method == "S") {
    fam = shifted_chain_family(a);
  } else if (method == "H") {
    fam = h_family(a);
  } else if (method == "MC") {
    fam = mc_family(a);
  } else if (method == "T") {
    fam = truncated_submonoid_family(a);
  } else if (method == "tree") {
    fam = expression_tree_family(inst.f);
  } else if (method == "tssos-sos") {
    a.insert(Exponent(n));
    const int half = (inst.f.degree() + 1) / 2;
    fam = tssos_family(a, truncated_exponents(n, half));
  } else if (method == "univariate-sparse") {
    fam = univariate_sparse_family(a);
  } else if (method == "custom") {
    if (!inst.family) throw InvalidArgument("instance " + inst.id + " carries no custom family");
    fam = *inst.family;
  } else {
    throw InvalidArgument("unknown method \"" + method + "\"");
  }
  fam.dim = n;
  return fam;
}

ConicProgram build_instance_program(const Instance& inst, const std::string& method, Sense sense, const ModelPolicy& policy) {
  ConicProgram prog = assemble_relaxation(inst.f, method_family(method, inst), inst.box, policy, sense);
  prog.id = inst.id + ":" + method + ":" + (sense == Sense::min ? "min" : "max");
  return prog;
}

RelaxationResult relax_instance(const Instance& inst, const std::string& method, Sense sense, const ModelPolicy& policy,
                                const SolverConfig& cfg) {
  return solve_relaxation(build_instance_program(inst, method, sense, policy), cfg);
}

double triv_criterion(const Polynomial& f, const Box& box, const PatternFamily& fam, const ModelPolicy& policy,
                      const SolverConfig& cfg) {
  const auto lo = solve_relaxation(assemble_relaxation(f, fam, box, policy, Sense::min), cfg);
  const auto hi = solve_relaxation(assemble_relaxation(f, fam, box, policy, Sense::max), cfg);
  if (lo.result.status != SolveStatus::optimal || hi.result.status != SolveStatus::optimal) {
    throw std::runtime_error("triv criterion needs optimal solves in both senses");
  }
  return triv_value(lo.value, hi.value, f, box);
}

BenchConfig bench_config_from_json(const Json& j) {
  BenchConfig c;
  auto strings = [&](const char* key, std::vector<std::string>& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_array()) throw JsonError(std::string("/") + key + ": expected an array of strings");
    out = j[key].get<std::vector<std::string>>();
  };
  if (!j.is_object()) throw JsonError("/: expected an object");
  strings("families", c.families);
  strings("methods", c.methods);
  strings("senses", c.senses);
  if (j.contains("samples")) c.samples = j["samples"].get<int>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("threads")) c.threads = j["threads"].get<int>();
  if (j.contains("policy")) {
    const Json& p = j["policy"];
    if (p.contains("multilinear")) {
      const auto m = p["multilinear"].get<std::string>();
      if (m == "vertex") {
        c.policy.multilinear = ModelPolicy::Multilinear::vertex;
      } else if (m == "mccormick") {
        c.policy.multilinear = ModelPolicy::Multilinear::mccormick;
      } else {
        throw JsonError("/policy/multilinear: expected \"vertex\" or \"mccormick\"");
      }
    }
    if (p.contains("vertex_max_coords")) c.policy.vertex_max_coords = p["vertex_max_coords"].get<int>();
    if (p.contains("vertex_cap")) c.policy.vertex_cap = p["vertex_cap"].get<int>();
    if (p.contains("generic_hull_fallback")) c.policy.generic_hull_fallback = p["generic_hull_fallback"].get<bool>();
    if (p.contains("bound_factor_degree")) c.policy.bound_factor_degree = p["bound_factor_degree"].get<int>();
  }
  if (j.contains("solver")) {
    const Json& s = j["solver"];
    if (s.contains("feasibility_tol")) c.solver.feasibility_tol = s["feasibility_tol"].get<double>();
    if (s.contains("gap_tol")) c.solver.gap_tol = s["gap_tol"].get<double>();
    if (s.contains("max_iterations")) c.solver.max_iterations = s["max_iterations"].get<int>();
    if (s.contains("step_fraction")) c.solver.step_fraction = s["step_fraction"].get<double>();
    if (s.contains("gmc_denominator_cap")) c.solver.gmc_denominator_cap = s["gmc_denominator_cap"].get<long long>();
  }
  for (const auto& s : c.senses) {
    if (s != "min" && s != "max") throw JsonError("/senses: expected \"min\" or \"max\", got \"" + s + "\"");
  }
  if (c.samples < 0) throw JsonError("/samples: must be nonnegative");
  return c;
}

Json to_json(const BenchConfig& c) {
  return {{"families", c.families},
          {"methods", c.methods},
          {"senses", c.senses},
          {"samples", c.samples},
          {"seed", c.seed},
          {"threads", c.threads},
          {"policy",
           {{"multilinear", c.policy.multilinear == ModelPolicy::Multilinear::vertex ? "vertex" : "mccormick"},
            {"vertex_max_coords", c.policy.vertex_max_coords},
            {"vertex_cap", c.policy.vertex_cap},
            {"generic_hull_fallback", c.policy.generic_hull_fallback},
            {"bound_factor_degree", c.policy.bound_factor_degree}}},
          {"solver",
           {{"feasibility_tol", c.solver.feasibility_tol},
            {"gap_tol", c.solver.gap_tol},
            {"max_iterations", c.solver.max_iterations},
            {"step_fraction", c.solver.step_fraction},
            {"gmc_denominator_cap", c.solver.gmc_denominator_cap}}}};
}

int bench_threads(int requested) {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("PATTERN_RELAX_THREADS")) {
    const int e = std::atoi(env);
    if (e > 0) n = std::min(n, e);
  }
  if (requested > 0) n = std::min(n, requested);
  return n;
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= v.size()) return v.back();
  return v[i] + (pos - static_cast<double>(i)) * (v[i + 1] - v[i]);
}

namespace {

struct Job {
  std::size_t family;
  int sample;
  std::size_t method;
};

std::vector<BenchRecord> run_job(const BenchConfig& cfg, const Instance& inst, const std::string& family,
                                 const std::string& method) {
  std::vector<BenchRecord> out;
  double lo = NAN, hi = NAN;
  for (const auto& sense_name : cfg.senses) {
    const Sense sense = sense_name == "min" ? Sense::min : Sense::max;
    BenchRecord r;
    r.instance_id = inst.id;
    r.family = family;
    r.method = method;
    r.sense = sense_name;
    r.value = NAN;
    r.triv = NAN;
    try {
      const ConicProgram prog = lower_gmc(build_instance_program(inst, method, sense, cfg.policy), cfg.solver);
      ConicSolver solver(cfg.solver);
      const auto t0 = std::chrono::steady_clock::now();
      const SolveResult res = solver.solve(prog);
      r.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      r.status = res.status;
      r.iters = res.iterations;
      r.value = sense == Sense::min ? res.primal_value : -res.primal_value;
      if (res.status == SolveStatus::optimal) (sense == Sense::min ? lo : hi) = r.value;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    out.push_back(std::move(r));
  }
  if (std::isfinite(lo) && std::isfinite(hi)) {
    const double t = triv_value(lo, hi, inst.f, inst.box);
    for (auto& r : out) r.triv = t;
  }
  return out;
}

std::string fmt(double v, const char* spec) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

BenchOutput run_benchmark(const BenchConfig& cfg) {
  std::vector<std::vector<Instance>> instances(cfg.families.size());
  for (std::size_t f = 0; f < cfg.families.size(); ++f) {
    for (int k = 0; k < cfg.samples; ++k) instances[f].push_back(gen_instance(cfg.families[f], cfg.seed + k));
  }
  std::vector<Job> jobs;
  for (std::size_t f = 0; f < cfg.families.size(); ++f)
    for (int k = 0; k < cfg.samples; ++k)
      for (std::size_t m = 0; m < cfg.methods.size(); ++m) jobs.push_back({f, k, m});

  std::vector<std::vector<BenchRecord>> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      const Job& j = jobs[i];
      results[i] = run_job(cfg, instances[j.family][j.sample], cfg.families[j.family], cfg.methods[j.method]);
    }
  };
  const int nthreads = std::min<int>(bench_threads(cfg.threads), static_cast<int>(std::max<std::size_t>(jobs.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  BenchOutput out;
  for (auto& r : results)
    for (auto& rec : r) {
      if (!rec.error.empty()) std::cerr << rec.instance_id << " " << rec.method << " " << rec.sense << ": " << rec.error << "\n";
      out.records.push_back(std::move(rec));
    }

  for (std::size_t f = 0; f < cfg.families.size(); ++f) {
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
      BenchSummary s;
      s.family = cfg.families[f];
      s.method = cfg.methods[m];
      std::vector<double> triv;
      double time = 0.0;
      int timed = 0;
      for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (jobs[i].family != f || jobs[i].method != m) continue;
        const auto& recs = results[i];
        if (!recs.empty() && std::isfinite(recs.front().triv)) triv.push_back(recs.front().triv);
        for (const auto& r : recs) {
          time += r.time_s;
          ++timed;
        }
      }
      s.count = static_cast<int>(triv.size());
      if (!triv.empty()) {
        s.median = quantile(triv, 0.5);
        s.q1 = quantile(triv, 0.25);
        s.q3 = quantile(triv, 0.75);
      } else {
        s.median = s.q1 = s.q3 = NAN;
      }
      s.mean_time = timed ? time / timed : 0.0;
      out.summary.push_back(s);
    }
  }
  return out;
}

std::string bench_csv(const std::vector<BenchRecord>& records) {
  std::string out = "instance_id,family,method,sense,value,triv,status,iters,time_s\n";
  for (const auto& r : records) {
    out += r.instance_id + "," + r.family + "," + r.method + "," + r.sense + "," + fmt(r.value, "%.10g") + "," +
           fmt(r.triv, "%.10g") + "," + (r.error.empty() ? to_string(r.status) : std::string("error")) + "," +
           std::to_string(r.iters) + "," + fmt(r.time_s, "%.6f") + "\n";
  }
  return out;
}

std::string summary_csv(const std::vector<BenchSummary>& summary) {
  std::string out = "family,method,count,median_triv,q1_triv,q3_triv,mean_time_s\n";
  for (const auto& s : summary) {
    out += s.family + "," + s.method + "," + std::to_string(s.count) + "," + fmt(s.median, "%.10g") + "," +
           fmt(s.q1, "%.10g") + "," + fmt(s.q3, "%.10g") + "," + fmt(s.mean_time, "%.6f") + "\n";
  }
  return out;
}

}  // namespace prelax
