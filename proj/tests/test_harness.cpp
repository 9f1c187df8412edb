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


#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <tuple>

#include "tdoa/crlb.hpp"
#include "tdoa/errors.hpp"
#include "tdoa/harness.hpp"

using namespace tdoa;

namespace {

RmseRow row(double snr, double rmse, double crlb_std) {
  RmseRow r;
  r.snr_in_db = snr;
  r.rmse_s = rmse;
  r.crlb_std_s = crlb_std;
  return r;
}

ScenarioConfig small_config() {
  auto cfg = ScenarioConfig::method_comparison();
  cfg.snr_inband_grid_db = {0.0, 10.0};
  cfg.trials = 3;
  cfg.base_seed = 99;
  return cfg;
}

}  // namespace

TEST_CASE("scenario factories") {
  const auto s1 = ScenarioConfig::method_comparison();
  CHECK(s1.scenario == Scenario::method_comparison);
  CHECK(s1.element_counts == std::vector<int>{16});
  CHECK(s1.methods.size() == 5);
  CHECK(s1.snr_inband_grid_db.size() == 35);
  CHECK(s1.snr_inband_grid_db.front() == -14.0);
  CHECK(s1.snr_inband_grid_db.back() == 20.0);
  CHECK(s1.trials == 2000);
  CHECK(s1.max_lag_s == doctest::Approx(0.005));
  CHECK_NOTHROW(s1.validate());

  const auto s2 = ScenarioConfig::element_sweep();
  CHECK(s2.methods == std::vector<Method>{Method::msif});
  CHECK(s2.element_counts == std::vector<int>{2, 4, 8, 16});
  CHECK_NOTHROW(s2.validate());
}

TEST_CASE("scenario validation") {
  auto c = ScenarioConfig::method_comparison();
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ScenarioConfig::method_comparison();
  c.snr_inband_grid_db.clear();
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ScenarioConfig::method_comparison();
  c.element_counts = {8};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ScenarioConfig::element_sweep();
  c.methods = {Method::cc};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ScenarioConfig::element_sweep();
  c.element_counts = {1, 2};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ScenarioConfig::method_comparison();
  c.max_lag_s = 0.006;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ScenarioConfig::method_comparison();
  c.welch.window_len = 9600;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ScenarioConfig::method_comparison();
  c.methods.clear();
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(run_scenario(c), ConfigError);
}

TEST_CASE("snr_grid") {
  CHECK(snr_grid(-2, 2, 1) == std::vector<double>{-2, -1, 0, 1, 2});
  CHECK(snr_grid(0, 1, 0.25).size() == 5);
  CHECK(snr_grid(3, 3, 1) == std::vector<double>{3});
  CHECK_THROWS_AS(snr_grid(0, 1, 0), ConfigError);
  CHECK_THROWS_AS(snr_grid(1, 0, 1), ConfigError);
}

TEST_CASE("rmse") {
  CHECK(rmse(std::vector<double>{0, 0, 0}) == 0.0);
  CHECK(rmse(std::vector<double>{3e-5, -4e-5}) ==
        doctest::Approx(std::sqrt(12.5) * 1e-5).epsilon(1e-14));
  CHECK(rmse(std::vector<double>{3e-5, -4e-5}) == doctest::Approx(3.536e-5).epsilon(1e-4));
  CHECK_THROWS_AS(rmse(std::vector<double>{}), ArgumentError);

  // Errors uniform over +/-240 samples at 48 kHz.
  std::vector<double> u;
  for (int i = 0; i < 48001; ++i) u.push_back((-240.0 + 480.0 * i / 48000.0) / 48000.0);
  CHECK(rmse(u) == doctest::Approx(240.0 / std::sqrt(3.0) / 48000.0).epsilon(1e-4));
  CHECK(rmse(u) == doctest::Approx(2.89e-3).epsilon(2e-3));
}

TEST_CASE("threshold_snr") {
  std::vector<RmseRow> exact, plateau, mixed, relapse;
  for (int s = -5; s <= 5; ++s) {
    const double c = 1e-5 * std::pow(10.0, -s / 20.0);
    exact.push_back(row(s, c, c));
    plateau.push_back(row(s, 1e-3, c));
    mixed.push_back(row(s, s < 1 ? 1e-3 : 2.0 * c, c));
    relapse.push_back(row(s, (s < -2 || s == 3) ? 1e-3 : c, c));
  }
  CHECK(threshold_snr(exact) == -5.0);
  CHECK_FALSE(threshold_snr(plateau).has_value());
  CHECK(threshold_snr(mixed) == 1.0);
  CHECK(threshold_snr(mixed, 1.5) == std::nullopt);
  CHECK(threshold_snr(relapse) == 4.0);
  CHECK_FALSE(threshold_snr(std::vector<RmseRow>{}).has_value());
  // The boundary is inclusive.
  CHECK(threshold_snr(std::vector<RmseRow>{row(0, 5e-5, 1e-5)}) == 0.0);
}

TEST_CASE("trial seeds ignore the method and separate cells") {
  CHECK(trial_seed(1, 0.0, 16, 0) == trial_seed(1, 0.0, 16, 0));
  CHECK(trial_seed(1, 0.0, 16, 0) != trial_seed(1, 1.0, 16, 0));
  CHECK(trial_seed(1, 0.0, 16, 0) != trial_seed(1, 0.0, 8, 0));
  CHECK(trial_seed(1, 0.0, 16, 0) != trial_seed(1, 0.0, 16, 1));
  CHECK(trial_seed(1, 0.0, 16, 0) != trial_seed(2, 0.0, 16, 0));
}

TEST_CASE("run_trial is paired across methods and deterministic") {
  const auto cfg = ScenarioConfig::method_comparison();
  const auto all = run_trial_methods(cfg, 5.0, 16, 3);
  REQUIRE(all.size() == 5);
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
    const double one = run_trial(cfg, 5.0, 16, cfg.methods[i], 3);
    CHECK(one == all[i]);
    CHECK(run_trial(cfg, 5.0, 16, cfg.methods[i], 3) == one);
  }
  // A method subset sees the same recording.
  auto sub = cfg;
  sub.methods = {Method::msif, Method::cc};
  const auto pair = run_trial_methods(sub, 5.0, 16, 3);
  CHECK(pair[0] == all[4]);
  CHECK(pair[1] == all[0]);
}

TEST_CASE("run_trial near-noiseless accuracy") {
  const auto cfg = ScenarioConfig::method_comparison();
  for (long t = 0; t < 5; ++t) {
    for (Method m : {Method::cc, Method::scot, Method::ml, Method::msif}) {
      const double err = run_trial(cfg, 60.0, 16, m, t);
      const std::string name(to_string(m));
      CAPTURE(name);
      CHECK(std::abs(err) * 48000.0 < 0.05);
    }
  }
}

TEST_CASE("run_trial estimates stay inside the search window") {
  const auto cfg = ScenarioConfig::method_comparison();
  const double d = cfg.array.pair_delay_samples / cfg.src.sample_rate_hz;
  for (long t = 0; t < 20; ++t) {
    const auto errs = run_trial_methods(cfg, -40.0, 16, t);
    for (double e : errs) CHECK(std::abs(e + d) <= cfg.max_lag_s + 1e-15);
  }
  for (double e : run_trial_methods(cfg, -40.0, 16, 0)) CHECK(std::abs(e) <= cfg.max_lag_s);
}

TEST_CASE("run_trial rejects invalid configs") {
  auto cfg = ScenarioConfig::method_comparison();
  cfg.trials = 0;
  CHECK_THROWS_AS(run_trial(cfg, 0.0, 16, Method::cc, 0), ConfigError);
}

TEST_CASE("degenerate sweep") {
  auto cfg = ScenarioConfig::method_comparison();
  cfg.snr_inband_grid_db = {4.0};
  cfg.methods = {Method::ml};
  cfg.trials = 1;
  const auto table = run_scenario(cfg);
  REQUIRE(table.rows.size() == 1);
  const auto& r = table.rows.front();
  CHECK(r.rmse_s == std::abs(run_trial(cfg, 4.0, 16, Method::ml, 0)));
  CHECK(r.mean_error_s == run_trial(cfg, 4.0, 16, Method::ml, 0));
  CHECK(r.trials == 1);
  CHECK(r.num_elements == 16);
}

TEST_CASE("run_scenario table shape, ordering and invariants") {
  auto cfg = small_config();
  const auto table = run_scenario(cfg, 1);
  REQUIRE(table.rows.size() == 10);
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto& a = table.rows[i - 1];
    const auto& b = table.rows[i];
    CHECK(std::tuple(a.method, a.num_elements, a.snr_in_db) <
          std::tuple(b.method, b.num_elements, b.snr_in_db));
  }
  for (const auto& r : table.rows) {
    CHECK(r.rmse_s >= 0.0);
    CHECK(r.rmse_s >= std::abs(r.mean_error_s));
    CrlbInput in;
    in.snr_inband_db = r.snr_in_db;
    CHECK(r.crlb_std_s == crlb(in).std_s);
    CHECK(r.snr_broadband_db == snr_inband_to_broadband(r.snr_in_db, cfg.src));
    CHECK(r.trials == 3);
  }
  const auto curve = table.curve(Method::msif, 16);
  REQUIRE(curve.size() == 2);
  CHECK(curve[0].snr_in_db == 0.0);
  CHECK(table.curve(Method::msif, 8).empty());

  // Each row is the RMSE of its paired trials.
  for (const auto& r : table.rows) {
    std::vector<double> errs;
    for (long t = 0; t < 3; ++t) errs.push_back(run_trial(cfg, r.snr_in_db, 16, r.method, t));
    CHECK(r.rmse_s == rmse(errs));
  }
}

TEST_CASE("run_scenario is identical for any worker count") {
  auto cfg = ScenarioConfig::element_sweep();
  cfg.snr_inband_grid_db = {-2.0, 6.0};
  cfg.trials = 4;
  const auto one = run_scenario(cfg, 1);
  for (unsigned w : {2u, 3u, 7u}) {
    const auto many = run_scenario(cfg, w);
    REQUIRE(many.rows.size() == one.rows.size());
    for (std::size_t i = 0; i < one.rows.size(); ++i) {
      CHECK(many.rows[i].rmse_s == one.rows[i].rmse_s);
      CHECK(many.rows[i].mean_error_s == one.rows[i].mean_error_s);
    }
  }
}

TEST_CASE("progress callback reaches the total") {
  auto cfg = small_config();
  std::size_t last = 0, total_seen = 0;
  run_scenario(cfg, 2, [&](std::size_t done, std::size_t total) {
    last = std::max(last, done);
    total_seen = total;
  });
  CHECK(total_seen == 6);
  CHECK(last == 6);
}

TEST_CASE("worker failures propagate") {
  auto cfg = small_config();
  CHECK_THROWS_AS(run_scenario(cfg, 2, [](std::size_t done, std::size_t) {
                    if (done == 2) throw std::runtime_error("stop");
                  }),
                  std::runtime_error);
}
