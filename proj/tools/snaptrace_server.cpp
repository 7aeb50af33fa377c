// snaptrace-server: serves the platform API over HTTP and sweeps idle sessions.

#include <condition_variable>
#include <csignal>
#include <iostream>

#include "CLI11.hpp"
#include "snaptrace/error.hpp"
#include "snaptrace/server.hpp"

using namespace snaptrace;

int main(int argc, char** argv) {
  CLI::App app{"snaptrace platform server"};
  std::optional<std::string> config_path;
  std::optional<std::string> listen;
  std::optional<std::string> store_root;
  int sweep_seconds = 10;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--listen", listen, "host:port, overrides config and environment");
  app.add_option("--store", store_root, "store root, overrides config and environment");
  app.add_option("--sweep-interval", sweep_seconds, "seconds between timeout sweeps")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  // Handle termination signals synchronously on the main thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    auto env = server::process_env();
    auto config = server::load_config(config_path, [&](const std::string& name) -> std::optional<std::string> {
      if (name == "SNAPTRACE_LISTEN" && listen) return listen;
      if (name == "SNAPTRACE_STORE" && store_root) return store_root;
      return env(name);
    });
    store::Store store(config.store_root);
    server::Platform platform(store, config);
    server::HttpServer http(platform);
    int port = http.start(config.host, config.port);
    std::cerr << "snaptrace-server listening on " << config.host << ":" << port << ", store " << config.store_root
              << std::endl;

    std::mutex mu;
    std::condition_variable cv;
    bool stopping = false;
    std::thread sweeper([&] {
      std::unique_lock lock(mu);
      while (!cv.wait_for(lock, std::chrono::seconds(sweep_seconds), [&] { return stopping; })) {
        for (const auto& id : platform.sweep_timeouts()) std::cerr << "session " << id << " timed out" << std::endl;
      }
    });

    int sig = 0;
    sigwait(&signals, &sig);
    {
      std::lock_guard lock(mu);
      stopping = true;
    }
    cv.notify_all();
    sweeper.join();
    http.stop();
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.name() << ": " << e.what() << std::endl;
    return 1;
  }
}
