// Command-line driver: one experiment (or one sweep) per invocation.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "pfl/errors.hpp"
#include "pfl/harness/config.hpp"
#include "pfl/harness/runner.hpp"
#include "pfl/kernels/kernels.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

}  // namespace

int main(int argc, char** argv) {
  pfl::harness::HarnessOptions options;
  try {
    options = pfl::harness::parse_config(argc, argv);
  } catch (const pfl::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (!options.help_text.empty()) {
    std::cout << options.help_text;
    return 0;
  }

  const auto& cfg = options.experiment;
  const std::string resolved = pfl::harness::describe(options);
  std::cout << "# resolved configuration\n" << resolved;
  std::cout << "# kernels: " << pfl::kernels::backend_name(pfl::kernels::active_backend()) << '\n';

  try {
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream(std::filesystem::path(cfg.output_dir) / "config.txt") << resolved;
    if (options.sweep_clients.empty()) {
      const auto result = pfl::harness::run(cfg, &std::cout);
      const auto& s = result.summary;
      std::cout << "final: acc=" << s.acc_pct << "% prec=" << s.prec_pct << "% rec=" << s.rec_pct
                << "% f1=" << s.f1_pct << "% server_ms/round=" << s.per_round_server_ms << '\n';
    } else {
      const auto rows = pfl::harness::sweep(cfg, options.sweep_clients, options.sweep_mechanisms, &std::cout);
      for (const auto& s : rows) {
        std::cout << s.mechanism << " N=" << s.clients << ": acc=" << s.acc_pct
                  << "% server_ms/round=" << s.per_round_server_ms << '\n';
      }
    }
  } catch (const pfl::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
