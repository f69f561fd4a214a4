#include "linksim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>

#ifndef LINKSIM_DEFAULT_DATA_DIR
#define LINKSIM_DEFAULT_DATA_DIR "data"
#endif

namespace linksim {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) return std::nullopt;
  }
  return value;
}

template <typename T>
std::optional<std::vector<T>> parse_list(std::string_view s) {
  std::vector<T> values;
  if (trim(s).empty()) return values;
  for (auto part : split(s, ',')) {
    auto v = parse_number<T>(part);
    if (!v) return std::nullopt;
    values.push_back(*v);
  }
  return values;
}

std::optional<std::vector<int>> parse_rb_set(std::string_view s) {
  s = trim(s);
  std::vector<int> rbs;
  if (s.empty() || s == "none") return rbs;
  for (auto part : split(s, ',')) {
    const auto colon = part.find(':');
    if (colon == std::string_view::npos) {
      auto v = parse_number<int>(part);
      if (!v) return std::nullopt;
      rbs.push_back(*v);
      continue;
    }
    auto lo = parse_number<int>(part.substr(0, colon));
    auto hi = parse_number<int>(part.substr(colon + 1));
    if (!lo || !hi || *hi < *lo) return std::nullopt;
    for (int rb = *lo; rb <= *hi; ++rb) rbs.push_back(rb);
  }
  return rbs;
}

std::optional<std::vector<double>> parse_snr_points(std::string_view s) {
  const auto parts = split(s, ':');
  if (parts.size() == 1) return parse_list<double>(s);
  if (parts.size() != 3) return std::nullopt;
  auto start = parse_number<double>(parts[0]);
  auto step = parse_number<double>(parts[1]);
  auto stop = parse_number<double>(parts[2]);
  if (!start || !step || !stop || !(*step > 0.0) || *stop < *start) return std::nullopt;
  std::vector<double> points;
  const auto count = static_cast<long>(std::floor((*stop - *start) / *step + 1e-9));
  for (long i = 0; i <= count; ++i) points.push_back(*start + static_cast<double>(i) * *step);
  return points;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string text;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) text += sep;
    text += items[i];
  }
  return text;
}

}  // namespace

const std::vector<std::string>& valid_config_keys() {
  static const std::vector<std::string> keys{
      "name",        "n_rb",          "n_symbols",          "pdp_file",   "n_tx",
      "n_rx",        "boosted_rbs",   "boost_db",           "snr_points_db",
      "aggregation_levels",           "regb_sizes",         "lambda",     "lambda_per_al",
      "n_trials",    "master_seed",   "estimation_mode",    "snr_window"};
  return keys;
}

void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value,
                   std::vector<std::string>& problems) {
  key = trim(key);
  value = trim(value);
  const std::string k{key};
  const auto bad = [&](const std::string& why) { problems.push_back(k + ": " + why); };

  const auto set_int = [&](int& field) {
    if (auto v = parse_number<int>(value)) field = *v; else bad("expected an integer");
  };
  const auto set_real = [&](double& field) {
    if (auto v = parse_number<double>(value)) field = *v; else bad("expected a number");
  };

  if (k == "name") {
    config.name = std::string(value);
  } else if (k == "n_rb") {
    set_int(config.n_rb);
  } else if (k == "n_symbols") {
    set_int(config.n_symbols);
  } else if (k == "pdp_file") {
    config.pdp_file = std::string(value);
  } else if (k == "n_tx") {
    set_int(config.n_tx);
  } else if (k == "n_rx") {
    set_int(config.n_rx);
  } else if (k == "boosted_rbs") {
    if (auto v = parse_rb_set(value)) config.boosted_rbs = *v;
    else bad("expected comma-separated RB numbers or ranges a:b, or 'none'");
  } else if (k == "boost_db") {
    set_real(config.boost_db);
  } else if (k == "snr_points_db") {
    if (auto v = parse_snr_points(value)) config.snr_points_db = *v;
    else bad("expected comma-separated numbers or start:step:stop");
  } else if (k == "aggregation_levels") {
    if (auto v = parse_list<int>(value)) config.aggregation_levels = *v;
    else bad("expected comma-separated integers");
  } else if (k == "regb_sizes") {
    if (auto v = parse_list<int>(value)) config.regb_sizes = *v;
    else bad("expected comma-separated integers");
  } else if (k == "lambda") {
    set_real(config.lambda.global);
  } else if (k == "lambda_per_al") {
    std::map<int, double> table;
    bool ok = true;
    if (!value.empty()) {
      for (auto part : split(value, ',')) {
        const auto colon = part.find(':');
        auto al = colon == std::string_view::npos ? std::nullopt
                                                  : parse_number<int>(part.substr(0, colon));
        auto lam = colon == std::string_view::npos ? std::nullopt
                                                   : parse_number<double>(part.substr(colon + 1));
        if (!al || !lam) {
          ok = false;
          break;
        }
        table[*al] = *lam;
      }
    }
    if (ok) config.lambda.per_al = std::move(table);
    else bad("expected comma-separated al:lambda pairs");
  } else if (k == "n_trials") {
    set_int(config.n_trials);
  } else if (k == "master_seed") {
    if (auto v = parse_number<std::uint64_t>(value)) config.master_seed = *v;
    else bad("expected an unsigned 64-bit integer");
  } else if (k == "estimation_mode") {
    if (value == "genie") config.estimation = EstimationMode::kGenie;
    else if (value == "estimated") config.estimation = EstimationMode::kEstimated;
    else bad("expected 'genie' or 'estimated'");
  } else if (k == "snr_window") {
    if (value == "regb") config.snr_window = SnrWindow::kBundle;
    else if (value == "pdcch") config.snr_window = SnrWindow::kPdcch;
    else bad("expected 'regb' or 'pdcch'");
  } else {
    problems.push_back("unknown key '" + k + "'; valid keys: " + join(valid_config_keys(), ", "));
  }
}

ScenarioConfig parse_config(std::istream& in, std::string_view source, ScenarioConfig base) {
  std::vector<std::string> problems;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      problems.push_back(std::string(source) + ":" + std::to_string(line_no) +
                         ": expected key=value");
      continue;
    }
    apply_setting(base, text.substr(0, eq), text.substr(eq + 1), problems);
  }
  for (auto& p : validation_errors(base)) problems.push_back(std::move(p));
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return base;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"config: cannot open '" + path.string() + "'"});
  return parse_config(in, path.string());
}

void apply_overrides(ScenarioConfig& config, const std::vector<std::string>& overrides) {
  std::vector<std::string> problems;
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      problems.push_back("--set '" + o + "': expected key=value");
      continue;
    }
    apply_setting(config, std::string_view(o).substr(0, eq),
                  std::string_view(o).substr(eq + 1), problems);
  }
  for (auto& p : validation_errors(config)) problems.push_back(std::move(p));
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

std::filesystem::path data_directory() {
  if (const char* env = std::getenv("LINKSIM_DATA_DIR"); env && *env) return env;
  return LINKSIM_DEFAULT_DATA_DIR;
}

std::filesystem::path resolve_data_path(const std::string& file) {
  const std::filesystem::path p(file);
  if (p.is_absolute() || std::filesystem::exists(p)) return p;
  return data_directory() / p;
}

std::vector<ScenarioConfig> paper_repro_scenarios() {
  ScenarioConfig base;
  base.n_rb = 48;
  base.n_symbols = 1;
  base.pdp_file = "tdl_a.pdp";
  base.n_tx = 2;
  base.n_rx = 1;
  base.snr_points_db = default_snr_points_db();
  base.regb_sizes = {2, 3, 6};
  base.n_trials = 5000;
  base.master_seed = kPaperReproSeed;

  ScenarioConfig flat = base;
  flat.name = "flat";
  flat.aggregation_levels = {1, 2, 4, 8};

  ScenarioConfig quarter = base;
  quarter.name = "boost_1_12";
  quarter.aggregation_levels = {1, 2, 4, 8};
  quarter.boost_db = 3.0;
  for (int rb = 1; rb <= 12; ++rb) quarter.boosted_rbs.push_back(rb);

  ScenarioConfig half = base;
  half.name = "boost_1_24";
  half.aggregation_levels = {1, 2};
  half.boost_db = 3.0;
  for (int rb = 1; rb <= 24; ++rb) half.boosted_rbs.push_back(rb);

  return {flat, quarter, half};
}

}  // namespace linksim
