#include "snaptrace/jsparse/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

#include "snaptrace/error.hpp"

namespace snaptrace::js {

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

double mean_ms(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean of no values");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

BenchRow make_row(std::string name, std::vector<double> frame_ms) {
  BenchRow row{std::move(name), std::move(frame_ms), 0.0};
  row.average_ms = mean_ms(row.frame_ms);
  return row;
}

BenchRow bench_parse(const std::vector<std::string>& corpus, int frames, const BenchConfig& config) {
  if (corpus.empty()) throw Error(Errc::BenchError, "benchmark corpus is empty");
  if (frames < 1) throw Error(Errc::BenchError, "frames must be >= 1");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto outcome = parse(corpus[i], config.options);
    if (!parsed_ok(outcome)) {
      const auto& e = error_of(outcome);
      throw Error(Errc::BenchError, "corpus file #" + std::to_string(i) + " does not parse: " + e.message +
                                        " at " + std::to_string(e.line) + ":" + std::to_string(e.col));
    }
  }
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(frames));
  std::size_t sink = 0;
  for (int f = 0; f < frames; ++f) {
    auto start = std::chrono::steady_clock::now();
    for (const auto& src : corpus) {
      auto outcome = parse(src, config.options);
      sink += outcome.index();
    }
    auto stop = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
  }
  if (sink != 0) throw Error(Errc::BenchError, "corpus parse became unstable during benchmark");
  return make_row(config.name, std::move(times));
}

std::vector<BenchConfig> default_bench_configs() {
  return {
      BenchConfig{"jsparse+spans", ParseOptions{true}},
      BenchConfig{"jsparse-nospans", ParseOptions{false}},
  };
}

std::string render_bench_table(const std::vector<BenchRow>& rows) {
  std::size_t frames = 0;
  for (const auto& r : rows) frames = std::max(frames, r.frame_ms.size());

  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"Parser"};
  for (std::size_t f = 0; f < frames; ++f) header.push_back("Frame " + std::to_string(f + 1) + " (ms)");
  header.push_back("Average (ms)");
  cells.push_back(header);
  for (const auto& r : rows) {
    std::vector<std::string> line{r.name};
    for (std::size_t f = 0; f < frames; ++f) line.push_back(f < r.frame_ms.size() ? fixed2(r.frame_ms[f]) : "");
    line.push_back(fixed2(r.average_ms));
    cells.push_back(std::move(line));
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  std::string out;
  for (const auto& line : cells) {
    std::string text;
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c > 0) text += "  ";
      if (c == 0) {
        text += line[c] + std::string(width[c] - line[c].size(), ' ');
      } else {
        text += std::string(width[c] - line[c].size(), ' ') + line[c];
      }
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out += text + "\n";
  }
  return out;
}

std::string render_bench_json(const std::vector<BenchRow>& rows) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"parser", r.name}, {"frame_ms", r.frame_ms}, {"average_ms", r.average_ms}});
  }
  return arr.dump(2);
}

}  // namespace snaptrace::js
