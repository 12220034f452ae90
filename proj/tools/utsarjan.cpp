#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include "utsarjan/api/config.hpp"
#include "utsarjan/api/server.hpp"
#include "utsarjan/diary/store.hpp"

namespace {

using namespace utsarjan;

std::atomic<api::HttpServer*> g_server{nullptr};

void on_signal(int) {
  if (auto* s = g_server.load()) s->stop();
}

int serve(const api::Config& config) {
  auto problems = api::check_config(config);
  if (!problems.empty()) {
    for (const auto& p : problems) std::cerr << "config: " << p << "\n";
    return 2;
  }
  auto service = api::build_service(config);
  api::HttpServer server(*service, config.static_dir);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "listening on " << config.listen_address << ":" << config.listen_port << "\n";
  server.listen(config.listen_address, config.listen_port);
  g_server = nullptr;
  service->flush_notifications();
  return 0;
}

int export_patient(const api::Config& config, const std::string& patient_id, const std::string& out) {
  diary::DiaryStore store(std::make_shared<diary::FileRepository>(config.store_path),
                          std::make_shared<diary::BlobStore>(config.blob_dir), system_clock());
  auto csv = store.export_csv(patient_id);
  if (out.empty() || out == "-") {
    std::cout << csv;
  } else {
    diary::atomic_write_file(out, csv);
  }
  return 0;
}

int check(const api::Config& config) {
  auto problems = api::check_config(config);
  for (const auto& p : problems) std::cout << p << "\n";
  if (problems.empty()) std::cout << "ok\n";
  return problems.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nephrotic syndrome diary service"};
  app.require_subcommand(1);
  std::string config_path = "config/example.conf";
  app.add_option("-c,--config", config_path, "Configuration file")->check(CLI::ExistingFile);

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  std::string patient_id, out;
  auto* export_cmd = app.add_subcommand("export", "Write a patient's diary as CSV");
  export_cmd->add_option("--patient", patient_id, "Patient id")->required();
  export_cmd->add_option("-o,--out", out, "Output file; stdout when omitted");
  auto* check_cmd = app.add_subcommand("check-config", "Validate the configuration and exit");

  CLI11_PARSE(app, argc, argv);
  try {
    auto config = api::load_config(config_path);
    if (*serve_cmd) return serve(config);
    if (*export_cmd) return export_patient(config, patient_id, out);
    if (*check_cmd) return check(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
