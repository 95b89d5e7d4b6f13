// Batch front end: parse a config, run the task, emit JSONL (and CSV).
// Exit codes: 0 success, 1 error, 2 verified mathematical inequality failed.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nbe/config.hpp"
#include "nbe/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"neutralized-entropy toolkit"};
  std::string config_path;
  std::string out_path;
  std::string mode_flag;
  std::string seed_flag;
  int threads = 0;
  app.add_option("--config", config_path, "path to a run configuration")->required();
  app.add_option("--out", out_path, "JSONL output path (overrides config)");
  app.add_option("--mode", mode_flag, "greedy|exact (overrides config)");
  app.add_option("--seed", seed_flag, "seed (overrides config)");
  app.add_option("--threads", threads, "worker threads (overrides config)");
  CLI11_PARSE(app, argc, argv);

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot open config " << config_path << "\n";
    return 1;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  nbe::ParseResult parsed = nbe::parse_config(buf.str());
  if (!parsed.ok()) {
    for (const auto& issue : parsed.errors) {
      std::cerr << "config error";
      if (issue.line > 0) std::cerr << " (line " << issue.line << ")";
      std::cerr << ": " << issue.message << "\n";
    }
    return 1;
  }
  nbe::RunConfig cfg = *parsed.config;
  if (!out_path.empty()) cfg.out_path = out_path;
  if (!mode_flag.empty()) {
    if (mode_flag == "greedy") cfg.mode = nbe::CoverMode::Greedy;
    else if (mode_flag == "exact") cfg.mode = nbe::CoverMode::Exact;
    else {
      std::cerr << "error: --mode must be greedy or exact\n";
      return 1;
    }
  }
  if (!seed_flag.empty()) cfg.seed = std::stoull(seed_flag);
  if (threads > 0) cfg.threads = threads;

  auto t0 = std::chrono::steady_clock::now();
  nbe::RunOutcome outcome = nbe::run(cfg);
  auto t1 = std::chrono::steady_clock::now();
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();

  if (outcome.exit_code == 1) {
    std::cerr << "error: " << outcome.error << "\n";
    return 1;
  }

  std::string jsonl = nbe::to_jsonl(outcome.records);
  if (cfg.out_path.empty()) {
    std::cout << jsonl;
  } else {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << cfg.out_path << "\n";
      return 1;
    }
    out << jsonl;
  }
  if (!cfg.csv_path.empty() && !outcome.csv_lines.empty()) {
    std::ofstream csv(cfg.csv_path, std::ios::binary);
    for (const auto& line : outcome.csv_lines) csv << line << "\n";
  }
  // Timing stays on the side channel so JSONL output is byte-stable.
  std::cerr << "runtime_ms " << ms << "\n";
  return outcome.exit_code;
}
