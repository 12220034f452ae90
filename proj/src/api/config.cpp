#include "utsarjan/api/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "utsarjan/diary/repository.hpp"
#include "utsarjan/rules/blood_pressure.hpp"
#include "utsarjan/rules/growth.hpp"

namespace utsarjan::api {

namespace fs = std::filesystem;

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
  };
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T number(const std::string& key, const std::string& value, T min) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || out < min) {
    throw ConfigError(key + ": expected an integer >= " + std::to_string(min) + ", got '" + value + "'");
  }
  return out;
}

bool boolean(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key + ": expected true or false");
}

std::vector<std::string> list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream in(value);
  for (std::string item; std::getline(in, item, ',');) {
    if (auto t = trim(item); !t.empty()) out.push_back(t);
  }
  return out;
}

using Setter = std::function<void(Config&, const std::string&, const fs::path&)>;

fs::path resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  return p.is_absolute() ? p : base / p;
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"listen_address", [](Config& c, const std::string& v, const fs::path&) { c.listen_address = v; }},
      {"listen_port",
       [](Config& c, const std::string& v, const fs::path&) {
         c.listen_port = number<int>("listen_port", v, 0);
         if (c.listen_port > 65535) throw ConfigError("listen_port: out of range");
       }},
      {"store_path", [](Config& c, const std::string& v, const fs::path& b) { c.store_path = resolve(b, v); }},
      {"blob_dir", [](Config& c, const std::string& v, const fs::path& b) { c.blob_dir = resolve(b, v); }},
      {"bp_table", [](Config& c, const std::string& v, const fs::path& b) { c.bp_table = resolve(b, v); }},
      {"growth_table", [](Config& c, const std::string& v, const fs::path& b) { c.growth_table = resolve(b, v); }},
      {"hospitals_file",
       [](Config& c, const std::string& v, const fs::path& b) {
         c.hospitals_file = v.empty() ? std::nullopt : std::optional{resolve(b, v)};
       }},
      {"webhook_urls", [](Config& c, const std::string& v, const fs::path&) { c.webhook_urls = list(v); }},
      {"log_sink_path",
       [](Config& c, const std::string& v, const fs::path& b) {
         c.log_sink_path = v.empty() ? std::nullopt : std::optional{resolve(b, v)};
       }},
      {"static_dir",
       [](Config& c, const std::string& v, const fs::path& b) {
         c.static_dir = v.empty() ? std::nullopt : std::optional{resolve(b, v)};
       }},
      {"smtp_url", [](Config& c, const std::string& v, const fs::path&) { c.smtp.url = v; }},
      {"smtp_from", [](Config& c, const std::string& v, const fs::path&) { c.smtp.from = v; }},
      {"smtp_username", [](Config& c, const std::string& v, const fs::path&) { c.smtp.username = v; }},
      {"smtp_password", [](Config& c, const std::string& v, const fs::path&) { c.smtp.password = v; }},
      {"smtp_require_tls",
       [](Config& c, const std::string& v, const fs::path&) { c.smtp.require_tls = boolean("smtp_require_tls", v); }},
      {"hash_cost",
       [](Config& c, const std::string& v, const fs::path&) { c.hash_cost = number<std::uint64_t>("hash_cost", v, 1); }},
      {"hash_memory_kib",
       [](Config& c, const std::string& v, const fs::path&) {
         c.hash_memory_kib = number<std::size_t>("hash_memory_kib", v, 8);
       }},
      {"token_ttl_hours",
       [](Config& c, const std::string& v, const fs::path&) { c.token_ttl_hours = number<int>("token_ttl_hours", v, 1); }},
      {"retry_attempts",
       [](Config& c, const std::string& v, const fs::path&) { c.retry_attempts = number<int>("retry_attempts", v, 1); }},
      {"retry_initial_backoff_ms",
       [](Config& c, const std::string& v, const fs::path&) {
         c.retry_initial_backoff_ms = number<int>("retry_initial_backoff_ms", v, 0);
       }},
      {"sink_queue_capacity",
       [](Config& c, const std::string& v, const fs::path&) {
         c.sink_queue_capacity = number<std::size_t>("sink_queue_capacity", v, 1);
       }},
      {"max_image_bytes",
       [](Config& c, const std::string& v, const fs::path&) {
         c.max_image_bytes = number<std::size_t>("max_image_bytes", v, 1);
       }},
  };
  return table;
}

std::string env_name(const std::string& key) {
  std::string out = "UTSARJAN_";
  for (char ch : key) out += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return out;
}

}  // namespace

Config parse_config(std::string_view text, const fs::path& base_dir, const EnvLookup& env) {
  Config config;
  config.store_path = base_dir / config.store_path;
  config.blob_dir = base_dir / config.blob_dir;
  config.bp_table = base_dir / config.bp_table;
  config.growth_table = base_dir / config.growth_table;

  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    auto key = trim(std::string_view(line).substr(0, eq));
    auto value = trim(std::string_view(line).substr(eq + 1));
    auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    it->second(config, value, base_dir);
  }
  for (const auto& [key, set] : setters()) {
    if (auto v = env(env_name(key))) set(config, trim(*v), fs::current_path());
  }
  return config;
}

Config load_config(const fs::path& path, const EnvLookup& env) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), fs::absolute(path).parent_path(), env);
}

std::vector<std::string> check_config(const Config& c) {
  std::vector<std::string> problems;
  std::shared_ptr<const rules::GrowthReferenceTable> growth;
  try {
    growth = std::make_shared<const rules::GrowthReferenceTable>(rules::GrowthReferenceTable::load(c.growth_table.string()));
  } catch (const std::exception& e) {
    problems.push_back("growth_table: " + std::string(e.what()));
  }
  if (growth) {
    try {
      rules::BpReferenceTable::load(c.bp_table.string(), growth);
    } catch (const std::exception& e) {
      problems.push_back("bp_table: " + std::string(e.what()));
    }
  }
  if (c.hospitals_file) {
    try {
      auto j = nlohmann::json::parse(diary::read_file(*c.hospitals_file));
      if (!j.is_array()) problems.push_back("hospitals_file: expected a JSON array");
    } catch (const std::exception& e) {
      problems.push_back("hospitals_file: " + std::string(e.what()));
    }
  }
  for (const auto& url : c.webhook_urls) {
    if (url.rfind("http://", 0) != 0 && url.rfind("https://", 0) != 0) {
      problems.push_back("webhook_urls: not an http(s) URL: " + url);
    }
  }
  if (!c.smtp.url.empty() && c.smtp.from.empty()) problems.push_back("smtp_from: required when smtp_url is set");
  if (c.static_dir && !fs::is_directory(*c.static_dir)) {
    problems.push_back("static_dir: not a directory: " + c.static_dir->string());
  }
  return problems;
}

}  // namespace utsarjan::api
