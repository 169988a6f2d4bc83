#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "permreg/counting.hpp"
#include "permreg/error.hpp"
#include "permreg/parallel.hpp"
#include "permreg/patterns.hpp"
#include "permreg/quasirand.hpp"
#include "permreg/regularity.hpp"
#include "permreg/report_json.hpp"
#include "permreg/uniformity.hpp"

using namespace permreg;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_exhausted = 2;

struct InputSpec {
  std::string input;
  std::string gen;
  int n = 0;
  std::uint64_t seed = 0;
};

struct Config {
  InputSpec in;
  std::string output;
  int threads = 0;
  double eps = 0.0;
  int m = 1;
  int min_blocks = 20;
  std::string tau;
  std::string mode = "regular";
  std::string strategy = "direct";
  std::string pair_mode = "auto";
  int max_parts = 4096;
  std::int64_t max_iterations = 0;
  bool estimate = false;
  bool both = false;
  bool smoothed = false;
  std::optional<double> delta;
  bool verify = true;
  int grid = 0;
  int k_max = 16;
  std::string kind = "random";
};

Permutation load(const InputSpec& in) {
  if (in.input.empty() == in.gen.empty()) throw parameter_error("give exactly one of --input or --gen");
  if (!in.input.empty()) {
    std::ifstream file(in.input);
    if (!file) throw std::ios_base::failure("cannot read " + in.input);
    std::stringstream buf;
    buf << file.rdbuf();
    return parse_permutation(buf.str());
  }
  if (in.n < 1) throw parameter_error("--gen needs --n >= 1");
  return generate(parse_gen_kind(in.gen), in.n, in.seed);
}

void emit(const Config& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream file(cfg.output);
  if (!file) throw std::ios_base::failure("cannot write " + cfg.output);
  file << text << '\n';
  if (!file) throw std::ios_base::failure("write failed for " + cfg.output);
}

void emit(const Config& cfg, const json& j) { emit(cfg, j.dump(2)); }

int cmd_partition(const Config& cfg) {
  const Permutation sigma = load(cfg.in);
  RefinePolicy refine;
  refine.max_parts = cfg.max_parts;
  refine.max_iterations = cfg.max_iterations;
  refine.mode = parse_pair_mode(cfg.pair_mode);
  if (cfg.mode == "regular") {
    const RegularRun run = regular_partition(sigma, cfg.eps, cfg.m, refine);
    emit(cfg, to_json(run));
    std::cerr << "regular partition: k=" << run.report.k << " |C0|=" << run.report.exceptional_size
              << " q=" << run.report.q << " irregular=" << run.report.irregular_pairs.size()
              << (run.status == RunStatus::success ? "" : " (exhausted: " + run.reason + ")") << '\n';
    return run.status == RunStatus::success ? exit_ok : exit_exhausted;
  }
  if (cfg.mode == "uniform") {
    UniformPolicy policy;
    policy.strategy = parse_uniform_strategy(cfg.strategy);
    policy.refine = refine;
    const UniformPartition u = uniform_partition(sigma, cfg.eps, cfg.m, policy);
    const UniformCheck check = verify_uniform(sigma, u);
    emit(cfg, to_json(u, check));
    std::cerr << "uniform partition: k=" << u.partition.k() << " |C0|=" << u.partition.exceptional.size()
              << " verified=" << (check.uniform ? "true" : "false") << '\n';
    return exit_ok;
  }
  throw parameter_error("unknown --mode '" + cfg.mode + "'");
}

int cmd_count(const Config& cfg) {
  const Permutation sigma = load(cfg.in);
  if (cfg.tau.empty()) throw parameter_error("count needs --tau");
  const Pattern tau = parse_pattern(cfg.tau);
  json out{{"n", sigma.size()}, {"tau", format_permutation(tau.perm)}};
  bool want_exact = !cfg.estimate || cfg.both;
  bool want_estimate = cfg.estimate || cfg.both;
  std::optional<std::uint64_t> exact;
  if (want_exact) {
    if (tau.m() <= max_exact_pattern) {
      try {
        exact = count_pattern(sigma, tau);
      } catch (const resource_error& e) {
        if (cfg.both) throw;
        std::cerr << "exact count skipped: " << e.what() << '\n';
      }
    } else if (cfg.both) {
      throw parameter_error("exact counting supports m <= " + std::to_string(max_exact_pattern));
    }
    if (!exact) want_estimate = true;
  }
  if (exact) out["exact"] = *exact;
  if (want_estimate) {
    const double eps = cfg.eps > 0 ? cfg.eps : 0.01;
    const UniformPartition u = uniform_partition(sigma, eps, cfg.min_blocks);
    EstimateOptions options;
    options.smoothed = cfg.smoothed;
    options.delta = cfg.delta;
    Estimate e = estimate_pattern_count(sigma, u, tau, options);
    e.exact = exact;
    json est = to_json(e);
    for (auto& [key, value] : est.items()) out[key] = value;
  }
  emit(cfg, out);
  std::cerr << "count " << format_permutation(tau.perm) << ":";
  if (out.contains("exact")) std::cerr << " exact=" << out["exact"].dump();
  if (out.contains("estimate")) std::cerr << " estimate=" << out["estimate"].dump() << " bound=" << out["bound"].dump();
  std::cerr << '\n';
  return exit_ok;
}

int cmd_destroy(const Config& cfg) {
  const Permutation sigma = load(cfg.in);
  if (cfg.tau.empty()) throw parameter_error("destroy needs --tau");
  const Pattern tau = parse_pattern(cfg.tau);
  const DestroyResult d = destroy_pattern(sigma, tau, cfg.eps);
  std::optional<DestroyCheck> check;
  if (cfg.verify) {
    try {
      check = verify_destroyed(sigma, tau, d.deleted);
    } catch (const resource_error& e) {
      std::cerr << "verification skipped: " << e.what() << '\n';
    }
  }
  emit(cfg, to_json(d, check));
  std::cerr << "deleted " << d.deleted.pairs.size() << " pairs";
  if (check) std::cerr << ", verified=" << (check->destroyed ? "true" : "false");
  std::cerr << '\n';
  return exit_ok;
}

int cmd_qr(const Config& cfg) {
  const Permutation sigma = load(cfg.in);
  QuasirandomOptions options;
  if (cfg.eps > 0) options.epsilon = cfg.eps;
  options.sp_grid = cfg.grid;
  options.eigen_k_max = cfg.k_max;
  const QuasirandomReport r = quasirandom_report(sigma, options);
  emit(cfg, to_json(r));
  std::cerr << "D*=" << r.D_star << " D in [" << r.D_lower << ", " << r.D_upper << "]"
            << " near_identity=" << (r.near_id.near ? "true" : "false") << '\n';
  return exit_ok;
}

int cmd_gen(const Config& cfg) {
  if (cfg.in.n < 1) throw parameter_error("gen needs --n >= 1");
  emit(cfg, format_permutation(generate(parse_gen_kind(cfg.kind), cfg.in.n, cfg.in.seed)));
  return exit_ok;
}

void add_input(CLI::App* sub, Config& cfg) {
  sub->add_option("--input", cfg.in.input, "Permutation file (one-line form)");
  sub->add_option("--gen", cfg.in.gen, "Generator: identity|reverse|interleave|random");
  sub->add_option("--n", cfg.in.n, "Size for --gen");
  sub->add_option("--seed", cfg.in.seed, "Seed for --gen");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularity and uniformity tools for permutations"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")->envname("PERMREG_THREADS");
  app.add_option("--output", cfg.output, "Write JSON here instead of stdout");

  auto* partition = app.add_subcommand("partition", "Build a regular or uniform partition");
  add_input(partition, cfg);
  partition->add_option("--eps", cfg.eps, "Epsilon")->required();
  partition->add_option("--mode", cfg.mode, "regular|uniform");
  partition->add_option("--m", cfg.m, "Minimum number of parts");
  partition->add_option("--strategy", cfg.strategy, "Uniform strategy: direct|regular");
  partition->add_option("--pair-mode", cfg.pair_mode, "exhaustive|grid|auto");
  partition->add_option("--max-parts", cfg.max_parts, "Part limit for the refinement driver");
  partition->add_option("--max-iterations", cfg.max_iterations, "Iteration limit (0 = ceil(2/eps^5))");

  auto* count = app.add_subcommand("count", "Count occurrences of a pattern");
  add_input(count, cfg);
  count->add_option("--tau", cfg.tau, "Pattern in one-line form")->required();
  count->add_option("--eps", cfg.eps, "Epsilon for the estimator (default 0.01)");
  count->add_option("--m", cfg.min_blocks, "Minimum number of blocks for the estimator (default 20)");
  count->add_flag("--estimate", cfg.estimate, "Use the integral estimator");
  count->add_flag("--both", cfg.both, "Report exact count and estimate");
  count->add_flag("--smoothed", cfg.smoothed, "Also report the smoothed estimate");
  count->add_option("--delta", cfg.delta, "Smoothing width (default sqrt(eps))");

  auto* destroy = app.add_subcommand("destroy", "Delete index pairs hitting every occurrence");
  add_input(destroy, cfg);
  destroy->add_option("--tau", cfg.tau, "Pattern in one-line form")->required();
  destroy->add_option("--eps", cfg.eps, "Epsilon")->required();
  destroy->add_flag("!--no-verify", cfg.verify, "Skip verification");

  auto* qr = app.add_subcommand("qr", "Quasirandomness statistics");
  add_input(qr, cfg);
  qr->add_option("--eps", cfg.eps, "Epsilon for the uniformity check (default 0.15)");
  qr->add_option("--grid", cfg.grid, "Separability grid step (0 = n/32)");
  qr->add_option("--kmax", cfg.k_max, "Largest frequency in the eigenvalue profile");

  auto* gen = app.add_subcommand("gen", "Generate a permutation");
  gen->add_option("--kind", cfg.kind, "identity|reverse|interleave|random");
  gen->add_option("--n", cfg.in.n, "Size")->required();
  gen->add_option("--seed", cfg.in.seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_error;
  }

  try {
    set_thread_count(cfg.threads);
    if (app.got_subcommand(partition)) return cmd_partition(cfg);
    if (app.got_subcommand(count)) return cmd_count(cfg);
    if (app.got_subcommand(destroy)) return cmd_destroy(cfg);
    if (app.got_subcommand(qr)) return cmd_qr(cfg);
    return cmd_gen(cfg);
  } catch (const refinement_exhausted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_exhausted;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_error;
  }
}
