#include "srrls/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "srrls/config.hpp"
#include "srrls/errors.hpp"

namespace srrls {
namespace {

// Fixed sparsity weights for the constant-rho variants, chosen by a coarse
// sweep of S-RRLS on each scenario (see README). Applied as rho * (1 - lambda).
constexpr double kCase1ReferenceRho = 0.03;
constexpr double kCase2ReferenceRho = 1e-4;

SparseSystem channel_system(const ExperimentConfig& config) {
  SparseSystem sys;
  sys.w_o = config.channel.empty() ? synthetic_echo_channel(config.order)
                                   : load_channel(config.channel, config.order);
  for (Eigen::Index i = 0; i < sys.w_o.size(); ++i) {
    if (sys.w_o[i] != 0.0) sys.support.push_back(static_cast<std::size_t>(i));
  }
  sys.active = sys.support.size();
  return sys;
}

NoiseModel noise_for(const ExperimentConfig& config, double signal_power) {
  NoiseModel model;
  model.kind = config.noise;
  switch (config.noise) {
    case NoiseKind::kContaminatedGaussian:
      model.p = config.impulse_probability;
      model.sigma_eta_sq = config.impulse_power_ratio * signal_power;
      [[fallthrough]];
    case NoiseKind::kGaussian:
      model.sigma_g_sq = snr_to_sigma_g(signal_power, config.snr_db);
      break;
    case NoiseKind::kAlphaStable:
      model.alpha = config.alpha;
      model.gamma = config.gamma;
      break;
  }
  return model;
}

void append_double(std::string& out, double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), ptr);
}

}  // namespace

std::string_view to_string(CaseKind kind) {
  switch (kind) {
    case CaseKind::kCase1:
      return "case1";
    case CaseKind::kCase2:
      return "case2";
    case CaseKind::kCustom:
      return "custom";
  }
  return "?";
}

std::optional<CaseKind> parse_case_kind(std::string_view name) {
  if (name == "case1" || name == "1") return CaseKind::kCase1;
  if (name == "case2" || name == "2") return CaseKind::kCase2;
  if (name == "custom") return CaseKind::kCustom;
  return std::nullopt;
}

std::string_view to_string(SystemKind kind) {
  return kind == SystemKind::kSparse ? "sparse" : "channel";
}

std::optional<SystemKind> parse_system_kind(std::string_view name) {
  if (name == "sparse") return SystemKind::kSparse;
  if (name == "channel") return SystemKind::kChannel;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (order == 0) throw ConfigError("M must be at least 1");
  if (iterations == 0) throw ConfigError("iterations must be at least 1");
  if (runs == 0) throw ConfigError("runs must be at least 1");
  if (system == SystemKind::kSparse) {
    if (active == 0 || active > order) throw ConfigError("Q must lie in [1, M]");
    if (change_at && (active_after == 0 || active_after > order)) {
      throw ConfigError("Q_after must lie in [1, M]");
    }
  } else if (change_at) {
    throw ConfigError("an abrupt change requires system = sparse");
  }
  if (change_at && *change_at == 0) throw ConfigError("change_at is a 1-based iteration index");
  if (noise == NoiseKind::kContaminatedGaussian &&
      !(impulse_probability >= 0.0 && impulse_probability <= 1.0)) {
    throw ConfigError("p must lie in [0, 1]");
  }
  if (noise == NoiseKind::kContaminatedGaussian && !(impulse_power_ratio >= 0.0)) {
    throw ConfigError("impulse_ratio must be nonnegative");
  }
  if (noise == NoiseKind::kAlphaStable && !(alpha > 0.0 && alpha <= 2.0 && gamma > 0.0)) {
    throw ConfigError("alpha-stable noise needs alpha in (0, 2] and gamma > 0");
  }
  if (algorithms.empty()) throw ConfigError("no algorithms configured");
  for (const AlgorithmSpec& spec : algorithms) {
    const std::string label = spec.display_label();
    if (label.find_first_of(",\n\r") != std::string::npos) {
      throw ConfigError("algorithm label '" + label + "' may not contain commas or newlines");
    }
    try {
      spec.validate();
    } catch (const ParameterError& e) {
      throw ConfigError(e.what());
    }
  }
  for (std::size_t i = 0; i < algorithms.size(); ++i) {
    for (std::size_t j = i + 1; j < algorithms.size(); ++j) {
      if (algorithms[i].display_label() == algorithms[j].display_label()) {
        throw ConfigError("duplicate algorithm label '" + algorithms[i].display_label() + "'");
      }
    }
  }
}

AlgorithmSpec default_algorithm(CaseKind kind, Variant variant) {
  AlgorithmSpec spec;
  spec.variant = variant;
  spec.delta = 0.5;
  spec.m_estimator = {.window = 9, .zeta = 0.99, .vartheta = 2.576};
  spec.vff = VffParams{};
  spec.reset = ResetDetectorParams{};
  if (kind == CaseKind::kCase2) {
    spec.lambda = 0.977;
    spec.mu = 0.001;
    spec.m_estimator.window = 16;
    spec.rho = is_sparse(variant) && !has_adaptive_rho(variant) ? kCase2ReferenceRho : 0.0;
  } else {
    spec.lambda = 0.995;
    spec.mu = 0.01;
    spec.rho = is_sparse(variant) && !has_adaptive_rho(variant) ? kCase1ReferenceRho : 0.0;
  }
  return spec;
}

ExperimentConfig case1_defaults() {
  ExperimentConfig c;
  c.case_kind = CaseKind::kCase1;
  c.system = SystemKind::kSparse;
  c.order = 64;
  c.active = 4;
  c.active_after = 8;
  c.change_at = 1501;
  c.iterations = 3000;
  c.runs = 100;
  c.noise = NoiseKind::kContaminatedGaussian;
  c.snr_db = 30.0;
  c.impulse_probability = 0.001;
  c.impulse_power_ratio = 1000.0;
  for (Variant v : all_variants()) c.algorithms.push_back(default_algorithm(CaseKind::kCase1, v));
  return c;
}

ExperimentConfig case2_defaults() {
  ExperimentConfig c;
  c.case_kind = CaseKind::kCase2;
  c.system = SystemKind::kChannel;
  c.order = 256;
  c.change_at.reset();
  c.iterations = 5000;
  c.runs = 100;
  c.noise = NoiseKind::kAlphaStable;
  c.alpha = 1.65;
  c.gamma = 0.02;
  for (Variant v : {Variant::kRlm, Variant::kSRRls, Variant::kSRRlsOpt, Variant::kJoSRRls}) {
    c.algorithms.push_back(default_algorithm(CaseKind::kCase2, v));
  }
  return c;
}

ExperimentConfig defaults_for(CaseKind kind) {
  switch (kind) {
    case CaseKind::kCase1:
      return case1_defaults();
    case CaseKind::kCase2:
      return case2_defaults();
    case CaseKind::kCustom: {
      ExperimentConfig c = case1_defaults();
      c.case_kind = CaseKind::kCustom;
      return c;
    }
  }
  return case1_defaults();
}

double deviation_ratio(const Vector& w, const Vector& w_o) {
  const double ref = w_o.squaredNorm();
  if (!(ref > 0.0)) throw ConfigError("NMSD is undefined for a zero ground-truth system");
  return (w - w_o).squaredNorm() / ref;
}

double ratio_to_db(double ratio) {
  if (!(ratio > 0.0)) return kNmsdFloorDb;
  return std::max(10.0 * std::log10(ratio), kNmsdFloorDb);
}

double nmsd(const Vector& w, const Vector& w_o) { return ratio_to_db(deviation_ratio(w, w_o)); }

Scenario::Scenario(const ExperimentConfig& config, std::size_t run_index)
    : config_(config),
      run_seed_(mix_seed(config.seed, run_index)),
      before_([&] {
        if (config.system == SystemKind::kChannel) return channel_system(config);
        Rng rng(mix_seed(run_seed_, 3));
        return make_sparse_system(config.order, config.active, rng);
      }()),
      after_([&]() -> std::optional<SparseSystem> {
        if (!config.change_at || config.system != SystemKind::kSparse) return std::nullopt;
        Rng rng(mix_seed(run_seed_, 5));
        return make_sparse_system(config.order, config.active_after, rng);
      }()),
      current_(&before_),
      signal_power_(config.noise == NoiseKind::kAlphaStable
                        ? 0.0
                        : ar2_output_power(before_.w_o, mix_seed(run_seed_, 4))),
      input_(mix_seed(run_seed_, 1)),
      regressor_(config.order),
      noise_(noise_for(config, signal_power_), mix_seed(run_seed_, 2)) {
  if (!(before_.w_o.squaredNorm() > 0.0)) {
    throw ConfigError("ground-truth system is identically zero; NMSD is undefined");
  }
}

Scenario::Sample Scenario::next() {
  ++k_;
  if (after_ && config_.change_at && k_ == *config_.change_at) current_ = &*after_;
  Sample s;
  s.x = input_.next();
  regressor_.push(s.x);
  s.noise = noise_.next();
  s.impulse = noise_.last_was_impulse();
  s.d = regressor_.values().dot(current_->w_o) + s.noise;
  return s;
}

RunTrace run_single(const ExperimentConfig& config, std::size_t run_index,
                    const StepObserver& observer) {
  Scenario scenario(config, run_index);
  std::vector<AdaptiveFilter> filters;
  filters.reserve(config.algorithms.size());
  for (const AlgorithmSpec& spec : config.algorithms) filters.emplace_back(spec, config.order);

  RunTrace trace;
  trace.ratio.assign(filters.size(), std::vector<double>(config.iterations, 0.0));
  for (std::size_t k = 0; k < config.iterations; ++k) {
    const Scenario::Sample s = scenario.next();
    for (std::size_t a = 0; a < filters.size(); ++a) {
      const StepDiagnostics diag = filters[a].step(s.x, s.d);
      trace.ratio[a][k] = deviation_ratio(filters[a].weights(), scenario.w_o());
      if (observer) observer(a, diag, filters[a], scenario);
    }
  }
  return trace;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::size_t workers = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, config.runs);

  std::vector<std::optional<RunTrace>> traces(config.runs);
  std::vector<std::string> failures(config.runs);
  std::atomic<std::size_t> next_run{0};
  std::mutex config_error_mutex;
  std::exception_ptr config_error;

  auto worker = [&] {
    for (std::size_t r = next_run++; r < config.runs; r = next_run++) {
      try {
        traces[r] = run_single(config, r);
      } catch (const NumericalError& e) {
        failures[r] = "run " + std::to_string(r) + ": " + e.what();
      } catch (...) {
        std::lock_guard lock(config_error_mutex);
        if (!config_error) config_error = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (config_error) std::rethrow_exception(config_error);

  ExperimentResult result;
  const std::size_t n_alg = config.algorithms.size();
  std::vector<std::vector<double>> sum(n_alg, std::vector<double>(config.iterations, 0.0));
  for (std::size_t r = 0; r < config.runs; ++r) {
    if (!traces[r]) {
      result.discarded.push_back(failures[r]);
      continue;
    }
    ++result.runs_used;
    for (std::size_t a = 0; a < n_alg; ++a) {
      for (std::size_t k = 0; k < config.iterations; ++k) sum[a][k] += traces[r]->ratio[a][k];
    }
  }
  if (result.runs_used == 0) {
    throw NumericalError("every run diverged; first failure: " + result.discarded.front());
  }
  for (std::size_t a = 0; a < n_alg; ++a) {
    NmsdCurve curve;
    curve.label = config.algorithms[a].display_label();
    curve.values.resize(config.iterations);
    for (std::size_t k = 0; k < config.iterations; ++k) {
      curve.values[k] = ratio_to_db(sum[a][k] / static_cast<double>(result.runs_used));
    }
    result.curves.push_back(std::move(curve));
  }
  return result;
}

namespace {

constexpr std::string_view kPlotScript = R"py(#!/usr/bin/env python3
"""Plot NMSD learning curves written by `srrls run`."""
import csv
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
src = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "nmsd.csv")
dst = sys.argv[2] if len(sys.argv) > 2 else os.path.join(here, "nmsd.png")

with open(src, newline="") as f:
    rows = list(csv.reader(f))
header, body = rows[0], rows[1:]
k = [int(r[0]) for r in body]

fig, ax = plt.subplots(figsize=(7, 4.5))
for col, label in enumerate(header[1:], start=1):
    ax.plot(k, [float(r[col]) for r in body], label=label, linewidth=1.2)
ax.set_xlabel("Iterations")
ax.set_ylabel("NMSD (dB)")
ax.grid(True, alpha=0.3)
ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig(dst, dpi=150)
print(dst)
)py";

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw ConfigError("failed writing " + path.string());
}

}  // namespace

void emit_outputs(const std::vector<NmsdCurve>& curves, const ExperimentConfig& config,
                  const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());

  const std::size_t rows = curves.empty() ? 0 : curves.front().values.size();
  for (const NmsdCurve& c : curves) {
    if (c.values.size() != rows) throw ConfigError("curves have different lengths");
  }
  std::string csv = "iteration";
  for (const NmsdCurve& c : curves) {
    csv += ',';
    csv += c.label;
  }
  csv += '\n';
  for (std::size_t k = 0; k < rows; ++k) {
    csv += std::to_string(k + 1);
    for (const NmsdCurve& c : curves) {
      csv += ',';
      append_double(csv, c.values[k]);
    }
    csv += '\n';
  }
  write_file(dir / "nmsd.csv", csv);
  write_file(dir / "config_resolved.cfg", format_config(config));
  write_file(dir / "plot_nmsd.py", kPlotScript);
}

std::vector<NmsdCurve> read_nmsd_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty CSV");

  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  const auto header = split(line);
  if (header.empty() || header.front() != "iteration") {
    throw ConfigError(path.string() + ": missing 'iteration' header");
  }
  std::vector<NmsdCurve> curves(header.size() - 1);
  for (std::size_t i = 1; i < header.size(); ++i) curves[i - 1].label = header[i];

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": wrong column count");
    }
    for (std::size_t i = 1; i < cells.size(); ++i) {
      double v = 0.0;
      const std::string& c = cells[i];
      const auto [ptr, err] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (err != std::errc() || ptr != c.data() + c.size()) {
        throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": bad value '" + c + "'");
      }
      curves[i - 1].values.push_back(v);
    }
  }
  return curves;
}

double window_mean(const std::vector<double>& values, std::size_t first, std::size_t last) {
  if (first == 0 || last < first || last > values.size()) {
    throw ParameterError("window [" + std::to_string(first) + ", " + std::to_string(last) +
                         "] outside curve of length " + std::to_string(values.size()));
  }
  double sum = 0.0;
  for (std::size_t k = first; k <= last; ++k) sum += values[k - 1];
  return sum / static_cast<double>(last - first + 1);
}

}  // namespace srrls
