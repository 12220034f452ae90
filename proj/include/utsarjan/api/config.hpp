#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "utsarjan/api/mailer.hpp"

namespace utsarjan::api {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Service settings. Relative paths are resolved against the config file's directory.
struct Config {
  std::string listen_address = "127.0.0.1";
  int listen_port = 8080;
  std::filesystem::path store_path = "var/store";
  std::filesystem::path blob_dir = "var/blobs";
  std::filesystem::path bp_table = "data/bp_reference_v1.csv";
  std::filesystem::path growth_table = "data/growth_reference_v1.csv";
  std::optional<std::filesystem::path> hospitals_file;
  std::vector<std::string> webhook_urls;
  std::optional<std::filesystem::path> log_sink_path;
  std::optional<std::filesystem::path> static_dir;
  SmtpSettings smtp;
  std::uint64_t hash_cost = 2;
  std::size_t hash_memory_kib = 65536;
  int token_ttl_hours = 24;
  int retry_attempts = 3;
  int retry_initial_backoff_ms = 1000;
  std::size_t sink_queue_capacity = 1024;
  std::size_t max_image_bytes = 5 * 1024 * 1024;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads process environment variables.
EnvLookup process_env();

/// `key = value` lines; `#` starts a comment. Every key can be overridden by
/// the environment variable UTSARJAN_<KEY>, e.g. UTSARJAN_LISTEN_PORT.
/// Throws ConfigError on unknown keys or malformed values.
Config parse_config(std::string_view text, const std::filesystem::path& base_dir, const EnvLookup& env);
Config load_config(const std::filesystem::path& path, const EnvLookup& env = process_env());

/// Problems that would stop `serve` from starting; empty when usable.
std::vector<std::string> check_config(const Config& config);

}  // namespace utsarjan::api
