#pragma once

#include <span>
#include <string>
#include <vector>

#include "snaptrace/jsparse/parser.hpp"

namespace snaptrace::js {

struct BenchRow {
  std::string name;
  std::vector<double> frame_ms;
  double average_ms = 0.0;
};

struct BenchConfig {
  std::string name;
  ParseOptions options;
};

/// Arithmetic mean. Throws std::invalid_argument on an empty range.
double mean_ms(std::span<const double> values);

/// Builds a row from already measured frame times.
BenchRow make_row(std::string name, std::vector<double> frame_ms);

/// Times `frames` sequential full passes over the corpus. Throws Error(BenchError)
/// if the corpus is empty, frames < 1, or any file fails to parse.
BenchRow bench_parse(const std::vector<std::string>& corpus, int frames, const BenchConfig& config);

/// The parser configurations compared by the benchmark report.
std::vector<BenchConfig> default_bench_configs();

/// Aligned plain-text table: one row per configuration, one column per frame,
/// then the average.
std::string render_bench_table(const std::vector<BenchRow>& rows);

/// Machine-readable twin of render_bench_table (a JSON array of records).
std::string render_bench_json(const std::vector<BenchRow>& rows);

}  // namespace snaptrace::js
