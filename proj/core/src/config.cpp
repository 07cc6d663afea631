#include "srrls/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "srrls/errors.hpp"

namespace srrls {
namespace {

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct Block {
  std::size_t line = 0;
  std::vector<Entry> entries;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

class Reader {
 public:
  explicit Reader(std::string_view origin) : origin_(origin) {}

  [[noreturn]] void fail(std::size_t line, const std::string& msg) const {
    throw ConfigError(std::string(origin_) + ":" + std::to_string(line) + ": " + msg);
  }

  double real(const Entry& e) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (ec != std::errc() || ptr != e.value.data() + e.value.size() || std::isnan(v)) {
      fail(e.line, "'" + e.key + "' expects a real number, got '" + e.value + "'");
    }
    return v;
  }

  std::uint64_t integer(const Entry& e) const {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (ec != std::errc() || ptr != e.value.data() + e.value.size()) {
      fail(e.line, "'" + e.key + "' expects a nonnegative integer, got '" + e.value + "'");
    }
    return v;
  }

  bool boolean(const Entry& e) const {
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    fail(e.line, "'" + e.key + "' expects true or false, got '" + e.value + "'");
  }

 private:
  std::string_view origin_;
};

using GlobalSetter = std::function<void(ExperimentConfig&, const Reader&, const Entry&)>;
using AlgorithmSetter = std::function<void(AlgorithmSpec&, const Reader&, const Entry&)>;

const std::map<std::string, GlobalSetter, std::less<>>& global_setters() {
  static const std::map<std::string, GlobalSetter, std::less<>> setters = {
      {"system",
       [](ExperimentConfig& c, const Reader& r, const Entry& e) {
         const auto kind = parse_system_kind(e.value);
         if (!kind) r.fail(e.line, "system must be 'sparse' or 'channel'");
         c.system = *kind;
       }},
      {"M", [](ExperimentConfig& c, const Reader& r, const Entry& e) { c.order = r.integer(e); }},
      {"Q", [](ExperimentConfig& c, const Reader& r, const Entry& e) { c.active = r.integer(e); }},
      {"Q_after",
       [](ExperimentConfig& c, const Reader& r, const Entry& e) { c.active_after = r.integer(e); }},
      {"change_at",
       [](ExperimentConfig& c, const Reader& r, const Entry& e) {
         if (e.value == "none") {
           c.change_at.reset();
         } else {
           c.change_at = r.integer(e);
         }
       }},
      {"iterations",
       [](ExperimentConfig& c, const Reader& r, const Entry& e) { c.iterations = r.integer(e); }},
      {"runs", [](ExperimentConfig& c, const Reader& r, const Entry& e) { c.runs = r.integer(e); }},
      {"noise",
       [](ExperimentConfig& c, const Reader& r, const Entry& e) {
         const auto kind = parse_noise_kind(e.value);
         if (!kind) r.fail(e.line, "unknown noise kind '" + e.value + "'");
         c.noise = *kind;
       }},
      {"snr_db", [](ExperimentConfig& c, const Reader& r, const Entry& e) { c.snr_db = r.real(e); }},
      {"p",
       [](ExperimentConfig& c, const Reader& r, const Entry& e) {
         c.impulse_probability = r.real(e);
       }},
      {"impulse_ratio",
       [](ExperimentConfig& c, const Reader& r, const Entry& e) {
         c.impulse_power_ratio = r.real(e);
       }},
      {"alpha", [](ExperimentConfig& c, const Reader& r, const Entry& e) { c.alpha = r.real(e); }},
      {"gamma", [](ExperimentConfig& c, const Reader& r, const Entry& e) { c.gamma = r.real(e); }},
      {"channel",
       [](ExperimentConfig& c, const Reader&, const Entry& e) {
         c.channel = e.value == "synthetic" ? std::string() : e.value;
       }},
      {"seed", [](ExperimentConfig& c, const Reader& r, const Entry& e) { c.seed = r.integer(e); }},
      {"threads",
       [](ExperimentConfig& c, const Reader& r, const Entry& e) { c.threads = r.integer(e); }},
      {"output_dir",
       [](ExperimentConfig& c, const Reader&, const Entry& e) { c.output_dir = e.value; }},
  };
  return setters;
}

const std::map<std::string, AlgorithmSetter, std::less<>>& algorithm_setters() {
  using S = AlgorithmSpec;
  static const std::map<std::string, AlgorithmSetter, std::less<>> setters = {
      {"label", [](S& s, const Reader&, const Entry& e) { s.label = e.value; }},
      {"lambda", [](S& s, const Reader& r, const Entry& e) { s.lambda = r.real(e); }},
      {"rho", [](S& s, const Reader& r, const Entry& e) { s.rho = r.real(e); }},
      {"mu", [](S& s, const Reader& r, const Entry& e) { s.mu = r.real(e); }},
      {"delta", [](S& s, const Reader& r, const Entry& e) { s.delta = r.real(e); }},
      {"window", [](S& s, const Reader& r, const Entry& e) { s.m_estimator.window = r.integer(e); }},
      {"zeta", [](S& s, const Reader& r, const Entry& e) { s.m_estimator.zeta = r.real(e); }},
      {"vartheta", [](S& s, const Reader& r, const Entry& e) { s.m_estimator.vartheta = r.real(e); }},
      {"chi", [](S& s, const Reader& r, const Entry& e) { s.vff.chi = r.real(e); }},
      {"tau", [](S& s, const Reader& r, const Entry& e) { s.vff.tau = r.real(e); }},
      {"lambda_max", [](S& s, const Reader& r, const Entry& e) { s.vff.lambda_max = r.real(e); }},
      {"lambda_min", [](S& s, const Reader& r, const Entry& e) { s.vff.lambda_min = r.real(e); }},
      {"kappa", [](S& s, const Reader& r, const Entry& e) { s.vff.kappa = r.real(e); }},
      {"reset", [](S& s, const Reader& r, const Entry& e) { s.enable_reset = r.boolean(e); }},
      {"reset_t", [](S& s, const Reader& r, const Entry& e) { s.reset.t = r.real(e); }},
      {"reset_threshold",
       [](S& s, const Reader& r, const Entry& e) { s.reset.threshold = r.real(e); }},
      {"reset_log_base",
       [](S& s, const Reader& r, const Entry& e) { s.reset.log_base = r.real(e); }},
      {"rho_warmup",
       [](S& s, const Reader& r, const Entry& e) {
         if (e.value == "auto") {
           s.rho_warmup.reset();
         } else {
           s.rho_warmup = r.integer(e);
         }
       }},
      {"covariance_ceiling",
       [](S& s, const Reader& r, const Entry& e) {
         if (e.value == "auto") {
           s.covariance_ceiling.reset();
         } else {
           s.covariance_ceiling = r.real(e);
         }
       }},
  };
  return setters;
}

std::string fmt_real(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, std::string_view origin) {
  const Reader reader(origin);
  std::vector<Entry> globals;
  std::vector<Block> blocks;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line != "[algorithm]") reader.fail(line_no, "unknown section " + std::string(line));
      blocks.push_back(Block{line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) reader.fail(line_no, "expected 'key = value'");
    Entry entry{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))),
                line_no};
    if (entry.key.empty()) reader.fail(line_no, "missing key");
    (blocks.empty() ? globals : blocks.back().entries).push_back(std::move(entry));
  }

  CaseKind kind = CaseKind::kCustom;
  for (const Entry& e : globals) {
    if (e.key != "case") continue;
    const auto parsed = parse_case_kind(e.value);
    if (!parsed) reader.fail(e.line, "case must be case1, case2 or custom");
    kind = *parsed;
  }

  ExperimentConfig config = defaults_for(kind);
  const auto& gset = global_setters();
  for (const Entry& e : globals) {
    if (e.key == "case") continue;
    const auto it = gset.find(e.key);
    if (it == gset.end()) reader.fail(e.line, "unknown key '" + e.key + "'");
    it->second(config, reader, e);
  }

  if (!blocks.empty()) {
    config.algorithms.clear();
    const auto& aset = algorithm_setters();
    for (const Block& block : blocks) {
      const Entry* variant_entry = nullptr;
      for (const Entry& e : block.entries) {
        if (e.key == "variant") variant_entry = &e;
      }
      if (!variant_entry) reader.fail(block.line, "[algorithm] block without 'variant'");
      const auto variant = parse_variant(variant_entry->value);
      if (!variant) reader.fail(variant_entry->line, "unknown variant '" + variant_entry->value + "'");
      AlgorithmSpec spec = default_algorithm(kind, *variant);
      for (const Entry& e : block.entries) {
        if (e.key == "variant") continue;
        const auto it = aset.find(e.key);
        if (it == aset.end()) reader.fail(e.line, "unknown algorithm key '" + e.key + "'");
        it->second(spec, reader, e);
      }
      config.algorithms.push_back(std::move(spec));
    }
  }
  try {
    config.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  } catch (const ParameterError& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, path.string());
}

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "# resolved experiment configuration\n";
  out << "case = " << to_string(c.case_kind) << '\n';
  out << "system = " << to_string(c.system) << '\n';
  out << "M = " << c.order << '\n';
  out << "Q = " << c.active << '\n';
  out << "Q_after = " << c.active_after << '\n';
  out << "change_at = " << (c.change_at ? std::to_string(*c.change_at) : "none") << '\n';
  out << "iterations = " << c.iterations << '\n';
  out << "runs = " << c.runs << '\n';
  out << "noise = " << to_string(c.noise) << '\n';
  out << "snr_db = " << fmt_real(c.snr_db) << '\n';
  out << "p = " << fmt_real(c.impulse_probability) << '\n';
  out << "impulse_ratio = " << fmt_real(c.impulse_power_ratio) << '\n';
  out << "alpha = " << fmt_real(c.alpha) << '\n';
  out << "gamma = " << fmt_real(c.gamma) << '\n';
  out << "channel = " << (c.channel.empty() ? "synthetic" : c.channel) << '\n';
  out << "seed = " << c.seed << '\n';
  out << "threads = " << c.threads << '\n';
  out << "output_dir = " << c.output_dir << '\n';
  for (const AlgorithmSpec& s : c.algorithms) {
    out << "\n[algorithm]\n";
    out << "variant = " << to_string(s.variant) << '\n';
    out << "label = " << s.display_label() << '\n';
    out << "lambda = " << fmt_real(s.lambda) << '\n';
    out << "rho = " << fmt_real(s.rho) << '\n';
    out << "mu = " << fmt_real(s.mu) << '\n';
    out << "delta = " << fmt_real(s.delta) << '\n';
    out << "window = " << s.m_estimator.window << '\n';
    out << "zeta = " << fmt_real(s.m_estimator.zeta) << '\n';
    out << "vartheta = " << fmt_real(s.m_estimator.vartheta) << '\n';
    out << "chi = " << fmt_real(s.vff.chi) << '\n';
    out << "tau = " << fmt_real(s.vff.tau) << '\n';
    out << "lambda_max = " << fmt_real(s.vff.lambda_max) << '\n';
    out << "lambda_min = " << fmt_real(s.vff.lambda_min) << '\n';
    out << "kappa = " << fmt_real(s.vff.kappa) << '\n';
    out << "reset = " << (s.enable_reset ? "true" : "false") << '\n';
    out << "reset_t = " << fmt_real(s.reset.t) << '\n';
    out << "reset_threshold = " << fmt_real(s.reset.threshold) << '\n';
    out << "reset_log_base = " << fmt_real(s.reset.log_base) << '\n';
    out << "rho_warmup = " << (s.rho_warmup ? std::to_string(*s.rho_warmup) : "auto") << '\n';
    out << "covariance_ceiling = "
        << (s.covariance_ceiling ? fmt_real(*s.covariance_ceiling) : "auto") << '\n';
  }
  return out.str();
}

}  // namespace srrls
