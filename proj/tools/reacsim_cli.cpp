// Copyright 2026 The reacsim Authors
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


// reacsim command-line tool. Exit codes: 0 success, 1 usage error, 2 data error,
// 3 simulation failure (partial results are still written).

#include "reacsim/config.hpp"
#include "reacsim/data_ingest.hpp"
#include "reacsim/predictor_factory.hpp"
#include "reacsim/report.hpp"
#include "reacsim/result_io.hpp"
#include "reacsim/sim_engine.hpp"
#include "reacsim/svg_plot.hpp"
#include "reacsim/synthetic.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace reacsim;

namespace
{
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kDataError = 2;
constexpr int kSimFailure = 3;

/// --config, else $REACSIM_CONFIG, else built-in defaults.
RunConfig resolve_config(const std::string & flag)
{
  if (!flag.empty()) return load_config(flag);
  if (const char * env = std::getenv("REACSIM_CONFIG"); env && *env) return load_config(env);
  return RunConfig{};
}

void write_file(const fs::path & path, const std::string & text)
{
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

/// Runs settings x scenarios x seeds, writing one result file per run as it finishes.
int run_and_write(
  const fs::path & scenario_dir, const RunConfig & cfg, const std::vector<Setting> & settings,
  const fs::path & out_dir)
{
  const auto scenarios = load_scenarios(scenario_dir);
  if (scenarios.empty()) throw ParseError("no scenarios in '" + scenario_dir.string() + "'");
  fs::create_directories(out_dir);
  std::size_t failed = 0;
  auto sink = [&](const SimResult & r) {
    std::ostringstream buf;
    write_result(buf, r);
    write_file(out_dir / result_file_name(r), buf.str());
    if (!r.ok()) {
      ++failed;
      std::cerr << "run failed: " << r.scenario_id << ' ' << to_string(r.setting) << " seed "
                << r.seed << ": " << r.error << '\n';
    }
  };
  const auto results = run_ablation(
    scenarios, make_predictor_factory(cfg.predictor, cfg.sim), cfg.sim, settings, cfg.seeds, sink,
    cfg.parallelism);
  std::cerr << results.size() << " runs, " << failed << " failed, results in " << out_dir.string()
            << '\n';
  return failed ? kSimFailure : kOk;
}
}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"reacsim: closed-loop reactive traffic simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "reacsim 0.1.0");

  std::string tracks, map_file, out, scenarios, config, setting_name, results, result_file;
  std::string table_out, seeds_flag, out_tracks, out_map;
  std::optional<unsigned> parallelism;
  std::size_t sample_n = 100;
  std::uint64_t seed = 0;
  int cases = 20;

  auto * ingest = app.add_subcommand("ingest", "Parse a track CSV (and optional map) into scenario files");
  ingest->add_option("--tracks", tracks, "Track CSV")->required()->check(CLI::ExistingFile);
  ingest->add_option("--map", map_file, "Map polyline file")->check(CLI::ExistingFile);
  ingest->add_option("--out", out, "Scenario directory")->required();
  ingest->add_option("--config", config, "Config file (sim.t_obs, sim.t_sim)");

  auto add_run_options = [&](CLI::App * sub) {
    sub->add_option("--scenarios", scenarios, "Scenario directory")->required()->check(CLI::ExistingDirectory);
    sub->add_option("--config", config, "Config file (falls back to $REACSIM_CONFIG)");
    sub->add_option("--out", out, "Result directory")->required();
    sub->add_option("--seeds", seeds_flag, "Comma-separated seeds, overriding the config");
    sub->add_option("--parallelism", parallelism, "Worker threads, overriding the config")
      ->check(CLI::PositiveNumber);
  };
  auto * simulate = app.add_subcommand("simulate", "Run one framework setting");
  add_run_options(simulate);
  std::vector<std::string> setting_names;
  for (Setting s : kAllSettings) setting_names.emplace_back(to_string(s));
  simulate->add_option("--setting", setting_name, "Framework setting (default: sim.setting)")
    ->check(CLI::IsMember(setting_names));
  auto * ablation = app.add_subcommand("ablation", "Run all six framework settings");
  add_run_options(ablation);

  auto * report = app.add_subcommand("report", "Aggregate result files into a metrics report");
  report->add_option("--results", results, "Result directory")->required()->check(CLI::ExistingDirectory);
  report->add_option("--out", out, "Report CSV")->required();
  report->add_option("--table", table_out, "Also write the aligned text table here");
  report->add_option("--config", config, "Config file (metrics.*)");

  auto * plot = app.add_subcommand("plot", "Render one result as a three-panel SVG");
  plot->add_option("--result", result_file, "Result file (.jsonl)")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", out, "SVG file")->required();

  auto * sample = app.add_subcommand("sample", "Seeded uniform subset of scenarios");
  sample->add_option("--scenarios", scenarios, "Scenario directory")->required()->check(CLI::ExistingDirectory);
  sample->add_option("--n", sample_n, "Subset size")->default_val(100);
  sample->add_option("--seed", seed, "Sampling seed")->default_val(0);
  sample->add_option("--out", out, "Copy the subset into this directory");

  auto * synth = app.add_subcommand("synth", "Generate a synthetic track log and map");
  synth->add_option("--out-tracks", out_tracks, "Track CSV")->required();
  synth->add_option("--out-map", out_map, "Map file")->required();
  synth->add_option("--cases", cases, "Number of cases")->default_val(20)->check(CLI::PositiveNumber);
  synth->add_option("--seed", seed, "Generator seed")->default_val(7);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*ingest) {
      const RunConfig cfg = resolve_config(config);
      const auto records = parse_tracks(tracks);
      BuildReport rep;
      auto scs = build_scenarios(records, cfg.sim.t_obs, cfg.sim.t_sim, 0, &rep, cfg.sim.dt);
      if (!map_file.empty()) {
        const MapData map = parse_map(map_file);
        for (auto & sc : scs) sc.map = map;
      }
      save_scenarios(out, scs);
      std::cerr << rep.emitted << " scenarios written to " << out << ", " << rep.skipped
                << " agents skipped (too short)\n";
      return kOk;
    }
    if (*simulate || *ablation) {
      RunConfig cfg = resolve_config(config);
      if (!seeds_flag.empty()) cfg.seeds = parse_seed_list(seeds_flag);
      if (parallelism) cfg.parallelism = *parallelism;
      std::vector<Setting> settings;
      if (*ablation) {
        settings.assign(kAllSettings.begin(), kAllSettings.end());
      } else {
        settings.push_back(setting_name.empty() ? cfg.sim.setting : parse_setting(setting_name));
      }
      return run_and_write(scenarios, cfg, settings, out);
    }
    if (*report) {
      const RunConfig cfg = resolve_config(config);
      const auto rs = load_results(results);
      if (rs.empty()) throw ParseError("no result files in '" + results + "'");
      const SimReport rep = aggregate(rs, cfg.miss, cfg.jerk);
      std::ostringstream csv, table;
      write_report_csv(csv, rep);
      write_report_table(table, rep);
      write_file(out, csv.str());
      if (!table_out.empty()) write_file(table_out, table.str());
      std::cout << table.str();
      return kOk;
    }
    if (*plot) {
      std::ifstream in(result_file);
      const SimResult r = read_result(in);
      write_file(out, render_result_svg(r));
      return kOk;
    }
    if (*sample) {
      const auto scs = load_scenarios(scenarios);
      std::vector<Scenario> subset;
      for (auto i : sample_indices(scs.size(), sample_n, seed)) {
        std::cout << scs[i].id << '\n';
        subset.push_back(scs[i]);
      }
      if (!out.empty()) save_scenarios(out, subset);
      return kOk;
    }
    if (*synth) {
      SyntheticOptions opt;
      opt.cases = cases;
      opt.seed = seed;
      const auto data = generate_synthetic(opt);
      std::ostringstream t, m;
      serialize_tracks(t, data.records);
      serialize_map(m, data.map);
      write_file(out_tracks, t.str());
      write_file(out_map, m.str());
      return kOk;
    }
  } catch (const ParseError & e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}
