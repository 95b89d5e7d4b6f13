#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nbe/dynamics.hpp"
#include "nbe/estimators.hpp"
#include "nbe/measure.hpp"
#include "nbe/zset.hpp"

namespace nbe {

enum class Task {
  EstimateNB,
  EstimateNWB,
  EstimateKatok,
  EstimateBK,
  VerifySandwich,
  VerifyProp25,
  VerifyVitali,
  VerifyFrostman,
  ZooList,
};

std::string task_name(Task t);

struct RunConfig {
  Task task = Task::ZooList;
  std::uint64_t seed = 0;
  CoverMode mode = CoverMode::Greedy;
  RadiusMode radius = RadiusMode::Neutralized;
  std::string out_path;   // JSONL; empty = stdout
  std::string csv_path;   // optional table dump
  int threads = 1;

  std::string system_ref;             // "zoo:<name>" or "" for inline
  std::optional<std::string> inline_map;
  std::optional<std::string> inline_space;

  SetSpec z = SetSpec::full();
  std::int64_t ground = 512;

  std::vector<double> epsilons;       // strictly decreasing
  std::vector<std::int64_t> n_schedule;
  std::int64_t n_max = 0;
  double alpha_lo = -1.0, alpha_hi = 6.0;
  std::vector<double> deltas;         // strictly decreasing (katok)
  std::pair<std::int64_t, std::int64_t> window{0, 0};  // bk

  std::int64_t measure_count = 0;     // 0 = no measure section
  SamplerConfig::Init measure_init = SamplerConfig::Init::Grid;
  bool measure_push = false;
  std::string measure_file;           // CSV ingestion; overrides sampling
  std::string measure_out;            // CSV emission of the measure used

  std::int64_t verify_instances = 20;   // sandwich/frostman
  std::int64_t verify_families = 1000;  // vitali

  std::string normalized() const;  // canonical text form (round-trips)
};

struct ParseIssue {
  int line = 0;
  std::string message;
};

struct ParseResult {
  std::optional<RunConfig> config;
  std::vector<ParseIssue> errors;
  bool ok() const { return errors.empty() && config.has_value(); }
};

// key = value grammar with [section] headers and '#' comments. All problems
// are reported, each with its line number; unknown keys are errors.
ParseResult parse_config(const std::string& text);

// Materialize the configured system (zoo reference or inline descriptor).
System system_from_config(const RunConfig& cfg);

// Inline descriptor parsing, also used by the zoo round-trip test.
MapSequence parse_map_descriptor(const std::string& text);
Space parse_space_descriptor(const std::string& text);

}  // namespace nbe
