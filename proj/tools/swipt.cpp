#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "swipt/harness.hpp"
#include "swipt/socp_builder.hpp"

using namespace swipt;

namespace {

int cmd_run(const std::string& config_path, std::string out, const CLI::App& sub, std::uint64_t seed,
            int realizations, const std::string& algorithm, const std::string& baseline, int workers,
            const std::string& aggregate_path) {
  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
    if (sub.count("--seed")) cfg.seed = seed;
    if (sub.count("--realizations")) cfg.realizations = realizations;
    if (sub.count("--algorithm")) cfg.algorithm = algorithm;
    if (sub.count("--baseline")) cfg.baseline = baseline;
    if (sub.count("--workers")) cfg.workers = workers;
    if (out.empty()) out = cfg.output;
    if (out.empty()) throw ConfigError("no output path (--out or \"output\")");
    cfg.validate();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  const std::vector<RunRecord> records = run_experiment(cfg);
  std::ofstream os(out, std::ios::binary);
  if (!os) {
    std::cerr << "cannot write " << out << "\n";
    return 1;
  }
  write_csv(os, records);
  const std::vector<AggregateRow> rows = aggregate(records);
  if (!aggregate_path.empty()) {
    std::ofstream as(aggregate_path, std::ios::binary);
    write_aggregate_csv(as, rows);
  }
  int degraded = 0;
  for (const RunRecord& r : records) degraded += r.degraded();
  for (const AggregateRow& r : rows) {
    std::fprintf(stderr, "M=%d P=%g dBm gamma=%g dB: %s mean %.3f dBm over %d, iterations %.2f\n", r.M, r.P_dBm,
                 r.gamma_dB, r.algorithm.c_str(), r.mean_dBm, r.count, r.mean_outer_iterations);
  }
  if (degraded) std::fprintf(stderr, "%d of %zu records degraded\n", degraded, records.size());
  return degraded ? 2 : 0;
}

int cmd_aggregate(const std::string& in_path, const std::string& out_path) {
  std::ifstream in(in_path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read " << in_path << "\n";
    return 1;
  }
  std::vector<RunRecord> records;
  try {
    records = read_csv(in);
  } catch (const std::exception& e) {
    std::cerr << in_path << ": " << e.what() << "\n";
    return 1;
  }
  if (out_path.empty()) {
    write_aggregate_csv(std::cout, aggregate(records));
  } else {
    std::ofstream os(out_path, std::ios::binary);
    write_aggregate_csv(os, aggregate(records));
  }
  return 0;
}

int cmd_dump(const std::string& config_path, int realization, const std::string& kind) {
  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  const NetworkInstance inst = cfg.instance(cfg.M.front(), cfg.P_dBm.front(), cfg.gamma_dB.front(), realization);
  const AlgoConfig algo = cfg.algo();
  if (kind == "init") {
    build_init_program(inst, algo.alpha_min, algo.alpha_max).program.write(std::cout);
    return 0;
  }
  const InitResult init = initialize(inst, algo);
  if (init.status != RunStatus::Converged) {
    std::cerr << "instance is infeasible\n";
    return 2;
  }
  const ExpansionPoint exp(inst, init.point, algo.alpha_min, algo.alpha_max);
  const BuiltProgram b = kind == "sum-eh" ? build_sum_eh_program(exp, inst, algo.alpha_min, algo.alpha_max)
                                          : build_max_min_program(exp, inst, algo.alpha_min, algo.alpha_max);
  b.program.write(std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beamforming and power-splitting experiments"};
  app.require_subcommand(1);

  std::string config, out, algorithm, baseline, aggregate_path;
  std::uint64_t seed = 0;
  int realizations = 0, workers = 1;
  CLI::App* run = app.add_subcommand("run", "Run a Monte-Carlo sweep and write per-record CSV");
  run->add_option("--config", config, "JSON experiment file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "record CSV (defaults to the config's output)");
  run->add_option("--seed", seed, "master seed");
  run->add_option("--realizations", realizations, "channel draws per sweep cell")->check(CLI::PositiveNumber);
  run->add_option("--algorithm", algorithm)->check(CLI::IsMember({"sum-eh", "max-min"}));
  run->add_option("--baseline", baseline)->check(CLI::IsMember({"none", "sdp-fixed-alpha", "bisection", "bb"}));
  run->add_option("--workers", workers, "threads, 0 for all cores")->check(CLI::NonNegativeNumber);
  run->add_option("--aggregate", aggregate_path, "also write the per-cell summary CSV");

  std::string in_path, agg_out;
  CLI::App* agg = app.add_subcommand("aggregate", "Summarize a record CSV per (M, P, gamma) cell");
  agg->add_option("--in", in_path, "record CSV")->required();
  agg->add_option("--out", agg_out, "summary CSV (stdout if omitted)");

  std::string dump_config, kind = "sum-eh";
  int dump_realization = 0;
  CLI::App* dump = app.add_subcommand("dump", "Print the conic program of the first sweep cell");
  dump->add_option("--config", dump_config, "JSON experiment file")->required()->check(CLI::ExistingFile);
  dump->add_option("--realization", dump_realization)->check(CLI::NonNegativeNumber);
  dump->add_option("--kind", kind, "init, or the first surrogate program")
      ->check(CLI::IsMember({"init", "sum-eh", "max-min"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  if (*run) return cmd_run(config, out, *run, seed, realizations, algorithm, baseline, workers, aggregate_path);
  if (*agg) return cmd_aggregate(in_path, agg_out);
  return cmd_dump(dump_config, dump_realization, kind);
}
