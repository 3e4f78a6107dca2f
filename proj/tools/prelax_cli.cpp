#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "prelax/bench.hpp"
#include "prelax/certificate.hpp"

using namespace prelax;

namespace {

Sense parse_sense(const std::string& s) { return s == "max" ? Sense::max : Sense::min; }

void print_result(const RelaxationResult& r) {
  std::printf("status %s\nvalue %.12g\niterations %d\n", to_string(r.result.status).c_str(), r.value, r.result.iterations);
  for (const auto& w : r.program.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pattern relaxations for box-constrained polynomial optimization"};
  app.require_subcommand(1);

  std::string tag, out, instance_path, method = "C", sense = "min", sdpa_path, cert_path, config_path, summary_path;
  std::uint64_t seed = 1;
  int max_iterations = 200;
  bool verbose = false;
  const std::vector<std::string> senses = {"min", "max"};

  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--tag", tag, "dense(n,d), S(n,d), A5, A6, A7, A8, Aex or custom:<file>")->required();
  gen->add_option("--seed", seed);
  gen->add_option("--out", out, "Output file (stdout if omitted)");

  auto* relax = app.add_subcommand("relax", "Build a relaxation, optionally export it, and solve it");
  auto* solve = app.add_subcommand("solve", "Solve a relaxation and optionally extract a certificate");
  for (auto* sc : {relax, solve}) {
    sc->add_option("--instance", instance_path)->required()->check(CLI::ExistingFile);
    sc->add_option("--method", method)->check(CLI::IsMember(known_methods()));
    sc->add_option("--sense", sense)->check(CLI::IsMember(senses));
    sc->add_option("--max-iterations", max_iterations);
    sc->add_flag("--verbose", verbose);
  }
  relax->add_option("--export-sdpa", sdpa_path, "Write the lowered program in SDPA sparse format");
  solve->add_option("--certificate", cert_path, "Write the extracted certificate as JSON");

  auto* verify = app.add_subcommand("verify", "Check a certificate against an instance");
  verify->add_option("--certificate", cert_path)->required()->check(CLI::ExistingFile);
  verify->add_option("--instance", instance_path)->required()->check(CLI::ExistingFile);
  int samples = 1000;
  verify->add_option("--samples", samples, "Random box points for the pointwise check");

  auto* bench = app.add_subcommand("bench", "Run a benchmark");
  bench->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
  bench->add_option("--out", out)->required();
  bench->add_option("--summary", summary_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const std::string text = to_json(gen_instance(tag, seed)).dump(2) + "\n";
      if (out.empty()) {
        std::cout << text;
      } else {
        write_text_file(out, text);
      }
      return 0;
    }

    if (*relax || *solve) {
      const Instance inst = instance_from_json(read_json_file(instance_path));
      SolverConfig cfg;
      cfg.max_iterations = max_iterations;
      cfg.verbose = verbose;
      const ConicProgram prog = build_instance_program(inst, method, parse_sense(sense));
      if (*relax && !sdpa_path.empty()) write_text_file(sdpa_path, export_sdpa(lower_gmc(prog, cfg)));
      const RelaxationResult r = solve_relaxation(prog, cfg);
      print_result(r);
      if (*solve && !cert_path.empty()) {
        if (r.result.status != SolveStatus::optimal) {
          std::fprintf(stderr, "no certificate: solver status %s\n", to_string(r.result.status).c_str());
          return 1;
        }
        const Certificate c = extract_certificate(r.program, r.result);
        write_text_file(cert_path, to_json(c).dump(2) + "\n");
        std::printf("certificate %s lambda %.12g\n", to_string(c.kind).c_str(), c.lambda);
      }
      return r.result.status == SolveStatus::optimal ? 0 : 1;
    }

    if (*verify) {
      const Instance inst = instance_from_json(read_json_file(instance_path));
      const Certificate c = certificate_from_json(read_json_file(cert_path));
      VerifyOptions opts;
      opts.samples = samples;
      const VerifyReport rep = verify_certificate(c, inst.f, inst.box, opts);
      std::printf("%s\n", rep.summary().c_str());
      return rep.pass ? 0 : 1;
    }

    if (*bench) {
      const BenchConfig cfg = bench_config_from_json(read_json_file(config_path));
      const BenchOutput res = run_benchmark(cfg);
      write_text_file(out, bench_csv(res.records));
      if (!summary_path.empty()) {
        write_text_file(summary_path, summary_csv(res.summary));
      } else {
        std::cout << summary_csv(res.summary);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
