// Copyright 2026 The tdoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "cli/config_file.hpp"
#include "cli/csv.hpp"
#include "cli/recording_io.hpp"
#include "tdoa/crlb.hpp"
#include "tdoa/errors.hpp"
#include "tdoa/gcc.hpp"
#include "tdoa/harness.hpp"
#include "tdoa/sigmodel.hpp"

namespace tdoa::cli {

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<Method> parse_method_list(const std::string& s) {
  std::vector<Method> out;
  for (const auto& name : split_list(s)) {
    auto m = parse_method(name);
    if (!m) throw ConfigError("unknown method '" + name + "'");
    out.push_back(*m);
  }
  if (out.empty()) throw ConfigError("method list is empty");
  return out;
}

std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  for (const auto& tok : split_list(s)) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) {
      throw ConfigError(std::string("invalid ") + what + " '" + tok + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError(std::string(what) + " list is empty");
  return out;
}

// Output sink: a file, or `fallback` for "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path != "-") {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw IoError("cannot open output file: " + path);
      stream_ = &file_;
    }
  }
  bool is_file() const { return file_.is_open(); }
  void write(const std::string& text) {
    *stream_ << text;
    stream_->flush();
    if (!*stream_) throw IoError("error writing output");
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

struct SourceFlags {
  double sample_rate_hz = SourceConfig{}.sample_rate_hz;
  double duration_s = SourceConfig{}.duration_s;
  double center_hz = SourceConfig{}.center_hz;
  double bandwidth_hz = SourceConfig{}.bandwidth_hz;

  void add_to(CLI::App* app) {
    app->add_option("--sample-rate-hz", sample_rate_hz, "Sample rate")->capture_default_str();
    app->add_option("--duration-s", duration_s, "Observation length")->capture_default_str();
    app->add_option("--center-hz", center_hz, "Source band centre")->capture_default_str();
    app->add_option("--bandwidth-hz", bandwidth_hz, "Source bandwidth")->capture_default_str();
  }
  void apply(SourceConfig& src) const {
    src.sample_rate_hz = sample_rate_hz;
    src.duration_s = duration_s;
    src.center_hz = center_hz;
    src.bandwidth_hz = bandwidth_hz;
  }
};

struct WelchFlags {
  std::size_t window_len = WelchConfig{}.window_len;
  double overlap = WelchConfig{}.overlap_fraction;

  void add_to(CLI::App* app) {
    app->add_option("--window-len", window_len, "Welch segment length")->capture_default_str();
    app->add_option("--overlap", overlap, "Welch overlap fraction")->capture_default_str();
  }
  WelchConfig config() const {
    WelchConfig w;
    w.window_len = window_len;
    w.overlap_fraction = overlap;
    return w;
  }
};

struct GridFlags {
  double lo = -14.0;
  double hi = 20.0;
  double step = 1.0;

  void add_to(CLI::App* app) {
    app->add_option("--snr-min", lo, "Lowest in-band SNR (dB)")->capture_default_str();
    app->add_option("--snr-max", hi, "Highest in-band SNR (dB)")->capture_default_str();
    app->add_option("--snr-step", step, "In-band SNR step (dB)")->capture_default_str();
  }
};

struct SimulateArgs {
  int scenario = 1;
  std::optional<int> trials;
  bool full = false;
  std::uint64_t seed = 1;
  GridFlags grid;
  std::string elements;
  std::string methods;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::string out = "-";
  double max_lag_s = ScenarioConfig{}.max_lag_s;
  double pair_delay = ArrayConfig{}.pair_delay_samples;
  bool progress = false;
  SourceFlags src;
  WelchFlags welch;
};

struct CrlbArgs {
  GridFlags grid;
  SourceFlags src;
  std::string out = "-";
};

struct EstimateArgs {
  std::string input;
  std::string format = "auto";
  std::optional<double> sample_rate_hz;
  std::string method = "msif";
  std::string pair = "0,1";
  std::optional<double> max_lag_s;
  WelchFlags welch;
};

struct SynthArgs {
  std::string out;
  double snr_db = 20.0;
  int elements = 16;
  std::uint64_t seed = 1;
  double pair_delay = ArrayConfig{}.pair_delay_samples;
  SourceFlags src;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg;
  if (a.scenario == 1) {
    cfg = ScenarioConfig::method_comparison();
  } else if (a.scenario == 2) {
    cfg = ScenarioConfig::element_sweep();
  } else {
    throw ConfigError("--scenario must be 1 or 2");
  }
  cfg.snr_inband_grid_db = snr_grid(a.grid.lo, a.grid.hi, a.grid.step);
  if (!a.elements.empty()) cfg.element_counts = parse_int_list(a.elements, "element count");
  if (!a.methods.empty()) cfg.methods = parse_method_list(a.methods);
  cfg.trials = a.trials ? *a.trials : (a.full ? 20000 : 2000);
  cfg.base_seed = a.seed;
  a.src.apply(cfg.src);
  cfg.welch = a.welch.config();
  cfg.max_lag_s = a.max_lag_s;
  cfg.array.pair_delay_samples = a.pair_delay;
  if (a.workers < 1) throw ConfigError("--workers must be >= 1");
  cfg.validate();

  Sink sink(a.out, out);
  std::ostream& summary = sink.is_file() ? out : err;

  ProgressFn progress;
  if (a.progress) {
    progress = [&err](std::size_t done, std::size_t total) {
      if (done == total || done % 1000 == 0) {
        err << "\rtrials " << done << "/" << total << (done == total ? "\n" : "")
            << std::flush;
      }
    };
  }
  const RmseTable table = run_scenario(cfg, a.workers, progress);
  sink.write(rmse_csv(table));

  for (Method m : cfg.methods) {
    for (int count : cfg.element_counts) {
      const auto curve = table.curve(m, count);
      const auto thr = threshold_snr(curve);
      summary << "threshold method=" << to_string(m) << " M=" << count;
      if (thr) {
        summary << " snr_in_db=" << format_real(*thr) << " snr_broadband_db="
                << format_real(snr_inband_to_broadband(*thr, cfg.src));
      } else {
        summary << " snr_in_db=none";
      }
      summary << '\n';
    }
  }
  return kExitOk;
}

int cmd_crlb(const CrlbArgs& a, std::ostream& out) {
  SourceConfig src;
  a.src.apply(src);
  src.validate();
  std::vector<CrlbRow> rows;
  for (double snr : snr_grid(a.grid.lo, a.grid.hi, a.grid.step)) {
    CrlbInput in;
    in.snr_inband_db = snr;
    in.duration_s = src.duration_s;
    in.center_hz = src.center_hz;
    in.bandwidth_hz = src.bandwidth_hz;
    CrlbResult r;
    try {
      r = crlb(in);
    } catch (const ArgumentError& e) {
      throw ConfigError(e.what());
    }
    rows.push_back({snr, snr_inband_to_broadband(snr, src), r.std_s});
  }
  Sink sink(a.out, out);
  sink.write(crlb_csv(rows));
  return kExitOk;
}

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  const auto format = parse_input_format(a.format);
  if (!format) throw ConfigError("--format must be auto, binary or text");
  const auto method = parse_method(a.method);
  if (!method) throw ConfigError("unknown method '" + a.method + "'");
  const auto pair_idx = parse_int_list(a.pair, "pair index");
  if (pair_idx.size() != 2) throw ConfigError("--pair expects two indices i,j");

  ChannelData data = read_channels(a.input, *format);
  const std::size_t m = data.channels.size();
  if (m < 2) throw ConfigError("input needs at least two channels");
  for (const auto& ch : data.channels) {
    if (ch.size() != data.channels.front().size()) {
      throw ConfigError("channels have unequal lengths");
    }
  }
  for (int idx : pair_idx) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= m) {
      throw ConfigError("pair index out of range");
    }
  }
  if (pair_idx[0] == pair_idx[1]) throw ConfigError("pair indices must differ");

  double fs = a.sample_rate_hz.value_or(data.sample_rate_hz);
  if (fs == 0.0) fs = SourceConfig{}.sample_rate_hz;
  if (!(fs > 0.0) || !std::isfinite(fs)) throw ConfigError("sample rate must be positive");

  const WelchConfig wcfg = a.welch.config();
  SensorRecording rec;
  rec.channels = std::move(data.channels);
  rec.sample_rate_hz = fs;
  try {
    wcfg.validate(rec.length());
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  const double max_lag = a.max_lag_s.value_or(default_max_lag_s(wcfg, fs));

  DelayEstimate est;
  try {
    est = estimate_pair(rec, *method, wcfg, max_lag,
                        {static_cast<std::size_t>(pair_idx[0]),
                         static_cast<std::size_t>(pair_idx[1])});
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  out << "delay_s=" << format_real(est.delay_s) << '\n'
      << "delay_samples=" << format_real(est.delay_s * fs) << '\n'
      << "coarse_lag_samples=" << est.coarse_lag_samples << '\n'
      << "refined=" << (est.refined ? "true" : "false") << '\n';
  return kExitOk;
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  SourceConfig src;
  a.src.apply(src);
  src.snr_inband_db = a.snr_db;
  ArrayConfig arr;
  arr.num_elements = a.elements;
  arr.pair_delay_samples = a.pair_delay;
  src.validate();
  arr.validate();
  SensorRecording rec;
  try {
    rec = synth_recording(src, arr, a.seed);
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  write_binary_channels(a.out, rec.channels, rec.sample_rate_hz);
  const double d = rec.true_delays_samples[static_cast<std::size_t>(arr.other_index)] -
                   rec.true_delays_samples[static_cast<std::size_t>(arr.ref_index)];
  out << "true_delay_s=" << format_real(d / rec.sample_rate_hz) << '\n';
  return kExitOk;
}

std::optional<std::string> find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-delay estimation with generalized cross-correlation", "tdoa"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  std::string config_path;

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Run a Monte Carlo scenario and write an RMSE table");
  s->add_option("--scenario", sim.scenario, "1: method comparison, 2: element sweep")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  s->add_option("--trials", sim.trials, "Trials per grid point (default 2000)");
  s->add_flag("--full", sim.full, "Use 20000 trials per grid point");
  s->add_option("--seed", sim.seed, "Base seed")->capture_default_str();
  sim.grid.add_to(s);
  s->add_option("--elements", sim.elements, "Comma-separated element counts");
  s->add_option("--methods", sim.methods, "Comma-separated methods: cc,scot,phat,ml,msif");
  s->add_option("--workers", sim.workers, "Worker threads")->capture_default_str();
  s->add_option("--out", sim.out, "CSV output path, '-' for stdout")->capture_default_str();
  s->add_option("--max-lag-s", sim.max_lag_s, "Peak search half-width")->capture_default_str();
  s->add_option("--pair-delay", sim.pair_delay, "True pair delay in samples")->capture_default_str();
  s->add_flag("--progress", sim.progress, "Report progress on stderr");
  sim.src.add_to(s);
  sim.welch.add_to(s);
  s->add_option("--config", config_path, "key=value file; flags override it");

  CrlbArgs cr;
  auto* c = app.add_subcommand("crlb", "Tabulate the delay-estimation lower bound");
  cr.grid.add_to(c);
  cr.src.add_to(c);
  c->add_option("--out", cr.out, "CSV output path, '-' for stdout")->capture_default_str();
  c->add_option("--config", config_path, "key=value file; flags override it");

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "Estimate the delay between two channels of a file");
  e->add_option("input", est.input, "Recording file")->required();
  e->add_option("--format", est.format, "auto, binary or text")->capture_default_str();
  e->add_option("--sample-rate-hz", est.sample_rate_hz, "Overrides the file's sample rate");
  e->add_option("--method", est.method, "cc, scot, phat, ml or msif")->capture_default_str();
  e->add_option("--pair", est.pair, "Channel pair i,j; delay is j relative to i")
      ->capture_default_str();
  e->add_option("--max-lag-s", est.max_lag_s, "Peak search half-width (default: half window)");
  est.welch.add_to(e);
  e->add_option("--config", config_path, "key=value file; flags override it");

  SynthArgs syn;
  auto* y = app.add_subcommand("synth", "Write a synthetic array recording for `estimate`");
  y->add_option("--out", syn.out, "Binary output path (sidecar written alongside)")->required();
  y->add_option("--snr", syn.snr_db, "In-band SNR (dB)")->capture_default_str();
  y->add_option("--elements", syn.elements, "Number of sensors")->capture_default_str();
  y->add_option("--seed", syn.seed, "Seed")->capture_default_str();
  y->add_option("--pair-delay", syn.pair_delay, "Delay of sensor 1 vs sensor 0 in samples")
      ->capture_default_str();
  syn.src.add_to(y);
  y->add_option("--config", config_path, "key=value file; flags override it");

  try {
    if (auto path = find_config_path(args); path && !args.empty() &&
                                             args.front().rfind("-", 0) != 0) {
      auto extra = read_config_args(*path);
      args.insert(args.begin() + 1, extra.begin(), extra.end());
    }
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::ParseError& pe) {
      const int code = app.exit(pe, out, err);
      return code == 0 ? kExitOk : kExitUsage;
    }

    if (s->parsed()) return cmd_simulate(sim, out, err);
    if (c->parsed()) return cmd_crlb(cr, out);
    if (e->parsed()) return cmd_estimate(est, out);
    if (y->parsed()) return cmd_synth(syn, out);
    return kExitUsage;
  } catch (const IoError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitRuntime;
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace tdoa::cli
