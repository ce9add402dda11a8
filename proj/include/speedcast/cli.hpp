#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "speedcast/forecast.hpp"
#include "speedcast/ingest.hpp"
#include "speedcast/metrics.hpp"
#include "speedcast/svg.hpp"

namespace speedcast::cli {

// ---- option structs -------------------------------------------------------

struct EvaluateOptions {
  std::string config_path;
  std::string data_path;
  std::string target;
  bool all_targets = false;
  std::string method = "blocksparse";
  int order = 12;
  std::string orders_file;
  int k_blocks = 0;  // 0 = auto
  int train_rows = 108;
  bool train_rows_set = false;  // windows only matter when this is false
  int horizon = 6;
  std::string train_window = "05:00-14:00";
  std::string test_window = "14:00-23:00";
  std::string out_dir = ".";
  bool mph = false;
  bool exclude_self = false;
  bool no_plot = false;
  ColumnMap columns;
};

struct CoefficientsOptions {
  std::string config_path;
  std::string data_path;
  std::string target;
  std::string method = "blocksparse";
  int order = 12;
  std::string orders_file;
  int k_blocks = 0;
  int train_rows = 108;
  bool train_rows_set = false;
  std::string train_window = "05:00-14:00";
  std::string out_dir = ".";
  bool mph = false;
  bool exclude_self = false;
  bool no_plot = false;
  ColumnMap columns;
};

struct SynthesizeOptions {
  std::string config_path;
  std::string spec_path;
  std::uint32_t seed = 1;
  std::string out_dir = ".";
};

// ---- helpers ---------------------------------------------------------------

namespace detail {

// ---- config files: simple key=value lines, command-line flags win ----------

inline std::string trim_copy(std::string s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) {
    s.erase(s.begin());
  }
  while (!s.empty() && is_space(s.back())) {
    s.pop_back();
  }
  return s;
}

struct ConfigBinding {
  std::string key;
  CLI::Option* option;  // when used on the command line, the file value loses
  std::function<void(const std::string&)> apply;
};
using ConfigMap = std::vector<ConfigBinding>;

inline bool config_bool(const std::string& raw, const std::string& key) {
  std::string v = raw;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") {
    return true;
  }
  if (v == "false" || v == "0" || v == "no" || v == "off") {
    return false;
  }
  throw InvalidConfig("config key '" + key + "' wants a boolean, got '" + raw +
                      "'");
}

inline int config_int(const std::string& raw, const std::string& key) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(raw, &pos);
    if (pos == raw.size()) {
      return v;
    }
  } catch (const std::exception&) {
  }
  throw InvalidConfig("config key '" + key + "' wants an integer, got '" + raw +
                      "'");
}

inline void bind_key(ConfigMap& map, CLI::Option* option, const std::string& key,
                 std::string& slot) {
  map.push_back({key, option, [&slot](const std::string& v) { slot = v; }});
}

inline void bind_key(ConfigMap& map, CLI::Option* option, const std::string& key,
                 int& slot) {
  map.push_back(
      {key, option,
       [&slot, key](const std::string& v) { slot = config_int(v, key); }});
}

inline void bind_key(ConfigMap& map, CLI::Option* option, const std::string& key,
                 std::uint32_t& slot) {
  map.push_back({key, option, [&slot, key](const std::string& v) {
                   slot = static_cast<std::uint32_t>(config_int(v, key));
                 }});
}

inline void bind_key(ConfigMap& map, CLI::Option* option, const std::string& key,
                 bool& slot) {
  map.push_back(
      {key, option,
       [&slot, key](const std::string& v) { slot = config_bool(v, key); }});
}

inline void apply_config_file(const std::string& path, const ConfigMap& map) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidConfig("cannot open config file '" + path + "'");
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string text = trim_copy(line);
    if (text.empty()) {
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ParseError(line_no, "expected key=value in '" + path + "'");
    }
    const std::string key = trim_copy(text.substr(0, eq));
    const std::string value = trim_copy(text.substr(eq + 1));
    const auto binding =
        std::find_if(map.begin(), map.end(),
                     [&](const ConfigBinding& b) { return b.key == key; });
    if (binding == map.end()) {
      throw InvalidConfig("unknown config key '" + key + "' in '" + path +
                          "'");
    }
    if (binding->option != nullptr && binding->option->count() > 0) {
      continue;  // explicit flag beats the file
    }
    binding->apply(value);
  }
}

struct ClockWindow {
  int begin_tod = 0;  // seconds of day
  int end_tod = 0;
};

inline ClockWindow parse_window(const std::string& text) {
  const auto dash = text.find('-');
  if (dash == std::string::npos) {
    throw InvalidConfig("bad window '" + text + "'; expected HH:MM-HH:MM");
  }
  const auto a = parse_clock(text.substr(0, dash));
  const auto b = parse_clock(text.substr(dash + 1));
  if (!a || !b) {
    throw InvalidConfig("bad window '" + text + "'; expected HH:MM-HH:MM");
  }
  return {*a, *b};
}

inline std::optional<std::size_t> find_time_index(const MeasurementSeries& s,
                                                  int tod_seconds,
                                                  std::size_t from = 0) {
  for (std::size_t i = from; i < s.size(); ++i) {
    const std::int64_t tod = ((s.timestamp_at(i) % 86400) + 86400) % 86400;
    if (tod == tod_seconds) {
      return i;
    }
  }
  return std::nullopt;
}

inline std::size_t resolve_target(const Dataset& data,
                                  const std::string& sensor_id) {
  for (std::size_t i = 0; i < data.series_count(); ++i) {
    if (data.series[i].sensor_id == sensor_id) {
      return i;
    }
  }
  throw InvalidConfig("target sensor not found: '" + sensor_id + "'");
}

// Orders file: '#' comments; each data line is either a bare lag count
// (positional, one per series) or "<sensor_id> <count>" (also ',' or '='
// separated). Sensors absent from a keyed file fall back to default_order.
inline std::vector<int> load_orders_file(const std::string& path,
                                         const Dataset& data,
                                         int default_order) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidConfig("cannot open orders file '" + path + "'");
  }
  std::vector<std::pair<std::string, int>> keyed;
  std::vector<int> positional;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    for (char& c : line) {
      if (c == ',' || c == '=' || c == '\t') {
        c = ' ';
      }
    }
    std::istringstream row(line);
    std::string first;
    if (!(row >> first)) {
      continue;
    }
    std::string second;
    if (row >> second) {
      try {
        keyed.emplace_back(first, std::stoi(second));
      } catch (const std::exception&) {
        throw ParseError(line_no, "bad order '" + second + "' in " + path);
      }
    } else {
      try {
        positional.push_back(std::stoi(first));
      } catch (const std::exception&) {
        throw ParseError(line_no, "bad order '" + first + "' in " + path);
      }
    }
    std::string extra;
    if (row >> extra) {
      throw ParseError(line_no, "trailing text '" + extra + "' in " + path);
    }
  }
  if (!keyed.empty() && !positional.empty()) {
    throw InvalidConfig("orders file '" + path +
                        "' mixes bare counts with sensor=count lines");
  }
  if (!positional.empty()) {
    if (positional.size() != data.series_count()) {
      throw InvalidConfig("orders file '" + path + "' lists " +
                          std::to_string(positional.size()) + " orders for " +
                          std::to_string(data.series_count()) + " series");
    }
    return positional;
  }
  std::vector<int> orders(data.series_count(), default_order);
  for (const auto& [sensor, order] : keyed) {
    orders[resolve_target(data, sensor)] = order;
  }
  return orders;
}

inline std::filesystem::path ensure_out_dir(const std::string& dir) {
  std::filesystem::path p(dir.empty() ? "." : dir);
  std::filesystem::create_directories(p);
  return p;
}

inline std::ofstream open_out_file(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write '" + path.string() + "'");
  }
  return out;
}

inline std::string format_metric(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::fixed, 3);
  return std::string(buf, res.ptr);
}

struct ResolvedPlan {
  ForecastConfig config;
  std::size_t eval_begin = 0;
  std::size_t eval_end = 0;
  std::size_t anchor = 0;  // end of the initial training window
};

// Turns flag values into a ForecastConfig plus grid positions. The training
// row count comes from --train-rows when given, otherwise from the span of
// the training clock window; the evaluation range comes from the test clock
// window, both located on the dataset's own grid.
template <typename Options>
inline ResolvedPlan resolve_plan(const Dataset& data, const Options& options,
                                 const std::string& test_window) {
  ForecastConfig config;
  if (options.method == "ar") {
    config.method = Method::kAr;
  } else if (options.method == "blocksparse") {
    config.method = Method::kBlockSparse;
  } else {
    throw InvalidConfig("unknown method '" + options.method +
                        "'; expected ar or blocksparse");
  }
  config.default_order = options.order;
  if (!options.orders_file.empty()) {
    config.orders = load_orders_file(options.orders_file, data, options.order);
  }
  config.solver.max_active_blocks = options.k_blocks;
  if (options.exclude_self) {
    if (config.method == Method::kAr) {
      throw InvalidConfig(
          "--exclude-self requires --method blocksparse; the plain AR model "
          "has only the target's own lags");
    }
    config.solver.excluded_blocks = {
        static_cast<int>(data.target_index)};
  }

  const auto& grid = data.series.front();
  const ClockWindow train = parse_window(options.train_window);
  if (options.train_rows_set) {
    config.training_rows = options.train_rows;
  } else {
    const auto begin = find_time_index(grid, train.begin_tod);
    if (!begin) {
      throw InvalidConfig("training window start is not on the data grid");
    }
    const auto end = find_time_index(grid, train.end_tod, *begin + 1);
    if (!end) {
      throw InvalidConfig("training window end is not on the data grid");
    }
    config.training_rows = static_cast<int>(*end - *begin);
  }
  if (config.training_rows < 1) {
    throw InvalidConfig("training window is empty");
  }

  const BlockLayout layout = config.resolve_layout(data.series_count());
  const std::size_t need = static_cast<std::size_t>(layout.n_max) +
                           static_cast<std::size_t>(config.training_rows);

  ResolvedPlan plan;
  plan.config = std::move(config);

  const auto anchor = find_time_index(grid, train.end_tod, need);
  if (!anchor) {
    throw InsufficientHistory(
        "no training window end on the grid with " + std::to_string(need) +
        " preceding samples");
  }
  plan.anchor = *anchor;

  if (!test_window.empty()) {
    const ClockWindow test = parse_window(test_window);
    const auto begin = find_time_index(grid, test.begin_tod, need);
    if (!begin) {
      throw InsufficientHistory(
          "no test window start on the grid with " + std::to_string(need) +
          " preceding samples");
    }
    const auto end = find_time_index(grid, test.end_tod, *begin + 1);
    plan.eval_begin = *begin;
    plan.eval_end = end ? *end : data.length();
  }
  return plan;
}

}  // namespace detail

// ---- evaluate --------------------------------------------------------------

namespace detail {

// Full evaluation of one target: rolling forecasts, trace and report files,
// optional plot pair. Returns a one-line summary for the terminal.
inline std::string evaluate_one_target(Dataset data, std::size_t target_index,
                                       const EvaluateOptions& options,
                                       const std::filesystem::path& out_dir) {
  data.target_index = target_index;
  ResolvedPlan plan = resolve_plan(data, options, options.test_window);
  plan.config.horizon_steps = options.horizon;

  EvaluationTrace trace =
      rolling_evaluate(data, {plan.eval_begin, plan.eval_end}, plan.config);
  const ErrorReport errors =
      compute_errors(trace.actuals(), trace.predictions());

  {
    auto out = open_out_file(out_dir / "trace.csv");
    write_trace_csv(out, trace);
  }
  const std::vector<MethodReport> rows = {{options.method, errors}};
  {
    auto out = open_out_file(out_dir / "report.md");
    out << report_table_markdown(rows);
  }
  {
    auto out = open_out_file(out_dir / "report.csv");
    out << report_table_csv(rows);
  }
  if (!options.no_plot) {
    std::vector<std::int64_t> timestamps;
    timestamps.reserve(trace.rows.size());
    for (const auto& row : trace.rows) {
      timestamps.push_back(row.timestamp);
    }
    {
      auto out = open_out_file(out_dir / "forecast_points.csv");
      out << "timestamp,actual_kmh,predicted_kmh\n";
      for (const auto& row : trace.rows) {
        out << format_iso8601(row.timestamp) << ','
            << speedcast::detail::format_value(row.actual_kmh) << ','
            << speedcast::detail::format_value(row.predicted_kmh) << '\n';
      }
    }
    {
      auto out = open_out_file(out_dir / "forecast.svg");
      const std::string title = data.target().sensor_id + " actual vs " +
                                options.method + " forecast (km/h)";
      write_forecast_svg(out, timestamps, trace.actuals(),
                         trace.predictions(), title);
    }
  }

  std::ostringstream summary;
  summary << data.target().sensor_id << "  method=" << options.method
          << "  points=" << trace.rows.size()
          << "  MAE=" << format_metric(errors.mae)
          << "  RMSE=" << format_metric(errors.rmse) << "  NRMSE="
          << (errors.nrmse ? format_metric(*errors.nrmse) + "%" : "n/a");
  return summary.str();
}

}  // namespace detail

inline int cmd_evaluate(const EvaluateOptions& options) {
  IngestOptions ingest;
  ingest.columns = options.columns;
  ingest.mph = options.mph;
  const Dataset data = load_csv(options.data_path, ingest);
  const auto out_root = detail::ensure_out_dir(options.out_dir);

  if (!options.all_targets) {
    const std::size_t target =
        options.target.empty() ? 0 : detail::resolve_target(data,
                                                            options.target);
    std::cout << detail::evaluate_one_target(data, target, options, out_root)
              << '\n';
    return 0;
  }

  // One worker per target; each writes to its own subdirectory, so workers
  // never share output state. Summaries print in dataset order.
  std::vector<std::future<std::string>> workers;
  for (std::size_t i = 0; i < data.series_count(); ++i) {
    const auto sub = out_root / data.series[i].sensor_id;
    std::filesystem::create_directories(sub);
    workers.push_back(std::async(std::launch::async,
                                 detail::evaluate_one_target, data, i,
                                 options, sub));
  }
  for (auto& w : workers) {
    std::cout << w.get() << '\n';
  }
  return 0;
}

// ---- coefficients ----------------------------------------------------------

inline int cmd_coefficients(const CoefficientsOptions& options) {
  IngestOptions ingest;
  ingest.columns = options.columns;
  ingest.mph = options.mph;
  Dataset data = load_csv(options.data_path, ingest);
  data.target_index = options.target.empty()
                          ? 0
                          : detail::resolve_target(data, options.target);

  detail::ResolvedPlan plan = detail::resolve_plan(data, options, "");
  plan.config.horizon_steps = 1;
  const ForecastResult fit = recursive_forecast(data, plan.anchor,
                                                plan.config);

  std::vector<std::string> sensor_ids;
  if (plan.config.method == Method::kAr) {
    sensor_ids = {data.target().sensor_id};
  } else {
    for (const auto& s : data.series) {
      sensor_ids.push_back(s.sensor_id);
    }
  }
  const CoefficientVector coef{fit.coefficients, fit.layout,
                               fit.active_blocks, {} };

  const auto out_dir = detail::ensure_out_dir(options.out_dir);
  {
    auto out = detail::open_out_file(out_dir / "coefficients.csv");
    out << coefficient_table_csv(coef, sensor_ids);
  }
  if (!options.no_plot) {
    auto out = detail::open_out_file(out_dir / "coefficients.svg");
    const std::string title = "coefficient blocks for target " +
                              data.target().sensor_id + " (" + options.method +
                              ")";
    write_coefficient_svg(out, coef.x, coef.layout, sensor_ids, title);
  }

  std::cout << coefficient_table_text(coef, sensor_ids);
  std::cout << "active blocks:";
  if (fit.active_sensor_ids.empty()) {
    std::cout << " none";
  }
  for (const auto& id : fit.active_sensor_ids) {
    std::cout << ' ' << id;
  }
  std::cout << '\n';
  return 0;
}

// ---- synthesize ------------------------------------------------------------

inline int cmd_synthesize(const SynthesizeOptions& options) {
  std::ifstream in(options.spec_path);
  if (!in) {
    throw InvalidConfig("cannot open spec file '" + options.spec_path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  const SyntheticSpec spec = parse_synthetic_spec_json(text.str());
  const SyntheticOutput output = generate_synthetic(spec, options.seed);

  const auto out_dir = detail::ensure_out_dir(options.out_dir);
  {
    auto out = detail::open_out_file(out_dir / "data.csv");
    save_csv(out, output.dataset);
  }
  {
    auto out = detail::open_out_file(out_dir / "dependencies.json");
    out << dependencies_json(output);
  }
  std::cout << "wrote " << output.dataset.series_count() << " series x "
            << output.dataset.length() << " samples to "
            << (out_dir / "data.csv").string() << '\n';
  return 0;
}

// ---- argument wiring -------------------------------------------------------

namespace detail {

inline void add_column_flags(CLI::App* cmd, ColumnMap& columns,
                             ConfigMap& config) {
  bind_key(config,
       cmd->add_option("--timestamp-col", columns.timestamp,
                       "timestamp column name")
           ->capture_default_str(),
       "timestamp-col", columns.timestamp);
  bind_key(config,
       cmd->add_option("--sensor-col", columns.sensor_id,
                       "sensor id column name")
           ->capture_default_str(),
       "sensor-col", columns.sensor_id);
  bind_key(config,
       cmd->add_option("--variable-col", columns.variable,
                       "variable column name (optional in the file)")
           ->capture_default_str(),
       "variable-col", columns.variable);
  bind_key(config,
       cmd->add_option("--value-col", columns.value, "value column name")
           ->capture_default_str(),
       "value-col", columns.value);
}

template <typename Options>
inline void add_model_flags(CLI::App* cmd, Options& options,
                            CLI::Option*& train_rows_opt, ConfigMap& config) {
  bind_key(config, cmd->add_option("--config", options.config_path,
                               "key=value config file; explicit flags win"),
       "config", options.config_path);  // bound so the key is at least known
  bind_key(config,
       cmd->add_option("--data", options.data_path, "input CSV"), "data",
       options.data_path);
  bind_key(config,
       cmd->add_option("--target", options.target,
                       "target sensor id (default: first series)"),
       "target", options.target);
  bind_key(config,
       cmd->add_option("--method", options.method, "fitting method")
           ->check(CLI::IsMember({"ar", "blocksparse"}))
           ->capture_default_str(),
       "method", options.method);
  bind_key(config,
       cmd->add_option("--order", options.order, "uniform lag count per series")
           ->check(CLI::PositiveNumber)
           ->capture_default_str(),
       "order", options.order);
  bind_key(config,
       cmd->add_option("--orders-file", options.orders_file,
                       "per-series lag counts (see README)"),
       "orders-file", options.orders_file);
  bind_key(config,
       cmd->add_option("--k-blocks", options.k_blocks,
                       "max active blocks; 0 = auto (20% of blocks)")
           ->check(CLI::NonNegativeNumber)
           ->capture_default_str(),
       "k-blocks", options.k_blocks);
  train_rows_opt = cmd->add_option("--train-rows", options.train_rows,
                                   "training rows M; overrides the window "
                                   "span")
                       ->check(CLI::PositiveNumber)
                       ->capture_default_str();
  config.push_back({"train-rows", train_rows_opt,
                    [&options](const std::string& v) {
                      options.train_rows = config_int(v, "train-rows");
                      options.train_rows_set = true;
                    }});
  bind_key(config,
       cmd->add_option("--train-window", options.train_window,
                       "training clock window HH:MM-HH:MM")
           ->capture_default_str(),
       "train-window", options.train_window);
  bind_key(config,
       cmd->add_flag("--exclude-self", options.exclude_self,
                     "bar the target's own block from selection"),
       "exclude-self", options.exclude_self);
  bind_key(config,
       cmd->add_flag("--mph", options.mph, "input values are mph; convert"),
       "mph", options.mph);
  bind_key(config,
       cmd->add_option("--out", options.out_dir, "output directory")
           ->capture_default_str(),
       "out", options.out_dir);
  bind_key(config,
       cmd->add_flag("--no-plot", options.no_plot, "skip SVG/plot outputs"),
       "no-plot", options.no_plot);
}

}  // namespace detail

inline int run(int argc, const char* const* argv) {
  CLI::App app{"spatio-temporal average speed forecasting over sensor links"};
  app.require_subcommand(1);

  EvaluateOptions eval_options;
  CLI::Option* eval_train_rows = nullptr;
  detail::ConfigMap eval_config;
  auto* eval = app.add_subcommand(
      "evaluate", "rolling multi-step forecast evaluation over a test window");
  detail::bind_key(eval_config,
               eval->add_flag("--all-targets", eval_options.all_targets,
                              "evaluate every series, one worker each"),
               "all-targets", eval_options.all_targets);
  detail::bind_key(eval_config,
               eval->add_option("--horizon", eval_options.horizon,
                                "forecast steps per refit")
                   ->check(CLI::PositiveNumber)
                   ->capture_default_str(),
               "horizon", eval_options.horizon);
  detail::bind_key(eval_config,
               eval->add_option("--test-window", eval_options.test_window,
                                "evaluation clock window HH:MM-HH:MM")
                   ->capture_default_str(),
               "test-window", eval_options.test_window);
  detail::add_model_flags(eval, eval_options, eval_train_rows, eval_config);
  detail::add_column_flags(eval, eval_options.columns, eval_config);

  CoefficientsOptions coef_options;
  CLI::Option* coef_train_rows = nullptr;
  detail::ConfigMap coef_config;
  auto* coef = app.add_subcommand(
      "coefficients",
      "fit one window and dump the block-annotated coefficient vector");
  detail::add_model_flags(coef, coef_options, coef_train_rows, coef_config);
  detail::add_column_flags(coef, coef_options.columns, coef_config);

  SynthesizeOptions synth_options;
  detail::ConfigMap synth_config;
  auto* synth = app.add_subcommand(
      "synthesize", "generate a seeded synthetic dataset from a JSON spec");
  detail::bind_key(synth_config,
               synth->add_option("--config", synth_options.config_path,
                                 "key=value config file; explicit flags win"),
               "config", synth_options.config_path);
  detail::bind_key(synth_config,
               synth->add_option("--spec", synth_options.spec_path,
                                 "spec JSON path"),
               "spec", synth_options.spec_path);
  detail::bind_key(synth_config,
               synth->add_option("--seed", synth_options.seed,
                                 "generator seed")
                   ->capture_default_str(),
               "seed", synth_options.seed);
  detail::bind_key(synth_config,
               synth->add_option("--out", synth_options.out_dir,
                                 "output directory")
                   ->capture_default_str(),
               "out", synth_options.out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(eval)) {
      eval_options.train_rows_set = eval_train_rows->count() > 0;
      if (!eval_options.config_path.empty()) {
        detail::apply_config_file(eval_options.config_path, eval_config);
      }
      if (eval_options.data_path.empty()) {
        throw InvalidConfig("--data is required (flag or config file)");
      }
      return cmd_evaluate(eval_options);
    }
    if (app.got_subcommand(coef)) {
      coef_options.train_rows_set = coef_train_rows->count() > 0;
      if (!coef_options.config_path.empty()) {
        detail::apply_config_file(coef_options.config_path, coef_config);
      }
      if (coef_options.data_path.empty()) {
        throw InvalidConfig("--data is required (flag or config file)");
      }
      return cmd_coefficients(coef_options);
    }
    if (!synth_options.config_path.empty()) {
      detail::apply_config_file(synth_options.config_path, synth_config);
    }
    if (synth_options.spec_path.empty()) {
      throw InvalidConfig("--spec is required (flag or config file)");
    }
    return cmd_synthesize(synth_options);
  } catch (const NumericalFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace speedcast::cli
