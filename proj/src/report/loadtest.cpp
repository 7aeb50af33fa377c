#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "snaptrace/report.hpp"

namespace snaptrace::report {

double percentile(std::vector<double> sample, double p) {
  if (sample.empty()) return 0.0;
  std::sort(sample.begin(), sample.end());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(sample.size())));
  return sample[std::clamp<std::size_t>(rank, 1, sample.size()) - 1];
}

LoadTestResult run_loadtest(const LoadTestOptions& options) {
  using clock = std::chrono::steady_clock;
  const auto total = options.total_requests;
  const auto senders = std::max<std::size_t>(1, std::min<std::uint64_t>(options.senders, std::max<std::uint64_t>(total, 1)));
  const auto interval = std::chrono::duration<double>(options.duration_seconds / static_cast<double>(std::max<std::uint64_t>(total, 1)));

  std::atomic<std::uint64_t> next{0}, sent{0}, succeeded{0}, failed{0}, connect_errors{0};
  std::vector<std::vector<double>> latencies(senders);
  const auto start = clock::now();

  auto worker = [&](std::size_t w) {
    httplib::Client client(options.url);
    client.set_connection_timeout(2, 0);
    client.set_read_timeout(10, 0);
    client.set_keep_alive(true);
    httplib::Headers headers;
    if (!options.token.empty()) headers.emplace("Authorization", options.token);
    for (;;) {
      auto i = next.fetch_add(1);
      if (i >= total) break;
      std::this_thread::sleep_until(start + std::chrono::duration_cast<clock::duration>(interval * static_cast<double>(i)));
      auto t0 = clock::now();
      ++sent;
      auto res = client.Get("/api/v1/questions", headers);
      latencies[w].push_back(std::chrono::duration<double, std::milli>(clock::now() - t0).count());
      if (res && res->status == 200) {
        ++succeeded;
      } else {
        ++failed;
        if (!res && res.error() == httplib::Error::Connection) ++connect_errors;
      }
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < senders; ++w) threads.emplace_back(worker, w);
  for (auto& t : threads) t.join();

  LoadTestResult r;
  r.elapsed_seconds = std::chrono::duration<double>(clock::now() - start).count();
  r.sent = sent;
  r.succeeded = succeeded;
  r.failed = failed;
  std::vector<double> all;
  for (const auto& v : latencies) all.insert(all.end(), v.begin(), v.end());
  r.p50_ms = percentile(all, 50);
  r.p95_ms = percentile(all, 95);
  r.p99_ms = percentile(all, 99);
  r.unreachable = r.succeeded == 0 && connect_errors > 0;
  return r;
}

std::string render_loadtest_text(const LoadTestResult& r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3);
  out << "sent       " << r.sent << "\n";
  out << "succeeded  " << r.succeeded << "\n";
  out << "failed     " << r.failed << "\n";
  out << "elapsed    " << r.elapsed_seconds << " s\n";
  out << "p50        " << r.p50_ms << " ms\n";
  out << "p95        " << r.p95_ms << " ms\n";
  out << "p99        " << r.p99_ms << " ms\n";
  if (r.unreachable) out << "error      ServerUnreachable\n";
  return out.str();
}

json loadtest_to_json(const LoadTestResult& r) {
  return json{{"sent", r.sent},
              {"succeeded", r.succeeded},
              {"failed", r.failed},
              {"elapsed_seconds", r.elapsed_seconds},
              {"p50_ms", r.p50_ms},
              {"p95_ms", r.p95_ms},
              {"p99_ms", r.p99_ms},
              {"unreachable", r.unreachable}};
}

}  // namespace snaptrace::report
