#include <catch2/catch.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "speedcast/ingest.hpp"
#include "speedcast/normalizer.hpp"
#include "speedcast/regression.hpp"
#include "speedcast/solvers.hpp"

using namespace speedcast;

namespace {

Dataset load_text(const std::string& text, const IngestOptions& options = {}) {
  std::istringstream in(text);
  return load_csv(in, options);
}

}  // namespace

TEST_CASE("csv loading") {
  SECTION("long-format rows group into aligned series") {
    const Dataset data = load_text(
        "timestamp,sensor_id,variable,value\n"
        "2016-05-10T05:00:00,401234,speed,62.5\n"
        "2016-05-10T05:00:00,401235,speed,58\n"
        "2016-05-10T05:05:00,401234,speed,61\n"
        "2016-05-10T05:05:00,401235,speed,59.25\n"
        "2016-05-10T05:10:00,401234,speed,60\n"
        "2016-05-10T05:10:00,401235,speed,60.5\n");
    REQUIRE(data.series_count() == 2);
    REQUIRE(data.length() == 3);
    REQUIRE(data.series[0].sensor_id == "401234");  // first seen first
    REQUIRE(data.series[0].start_time == make_utc(2016, 5, 10, 5, 0, 0));
    REQUIRE(data.series[0].step == 300);
    REQUIRE(data.series[0].values == std::vector<double>{62.5, 61.0, 60.0});
    REQUIRE(data.series[1].values == std::vector<double>{58.0, 59.25, 60.5});
  }

  SECTION("row order does not matter") {
    const Dataset data = load_text(
        "timestamp,sensor_id,variable,value\n"
        "2016-05-10T05:05:00,a,speed,2\n"
        "2016-05-10T05:00:00,a,speed,1\n"
        "2016-05-10T05:10:00,a,speed,3\n");
    REQUIRE(data.series[0].values == std::vector<double>{1.0, 2.0, 3.0});
  }

  SECTION("epoch-second timestamps are auto-detected") {
    const std::int64_t t0 = make_utc(2016, 5, 10, 5, 0, 0);
    std::ostringstream text;
    text << "timestamp,sensor_id,variable,value\n";
    text << t0 << ",a,speed,1\n" << (t0 + 300) << ",a,speed,2\n";
    const Dataset data = load_text(text.str());
    REQUIRE(data.series[0].start_time == t0);
    REQUIRE(data.series[0].values == std::vector<double>{1.0, 2.0});
  }

  SECTION("column names are configurable and the variable column optional") {
    IngestOptions options;
    options.columns.timestamp = "Time";
    options.columns.sensor_id = "Station";
    options.columns.value = "AvgSpeed";
    const Dataset data = load_text(
        "Station,AvgSpeed,Time\n"
        "7,44,2016-05-10 05:00:00\n"
        "7,45,2016-05-10 05:05:00\n",
        options);
    REQUIRE(data.series[0].sensor_id == "7");
    REQUIRE(data.series[0].variable == Variable::speed());
    REQUIRE(data.series[0].values == std::vector<double>{44.0, 45.0});
  }

  SECTION("mph conversion touches speed series only") {
    IngestOptions options;
    options.mph = true;
    const Dataset data = load_text(
        "timestamp,sensor_id,variable,value\n"
        "2016-05-10T05:00:00,a,speed,10\n"
        "2016-05-10T05:00:00,a,flow,100\n",
        options);
    REQUIRE(data.series[0].values[0] == Approx(16.09344));
    REQUIRE(data.series[1].values[0] == 100.0);
  }

  SECTION("quoted fields with embedded commas and quotes") {
    const Dataset data = load_text(
        "timestamp,sensor_id,variable,value\n"
        "2016-05-10T05:00:00,\"loop,7 \"\"north\"\"\",speed,50\n");
    REQUIRE(data.series[0].sensor_id == "loop,7 \"north\"");
  }
}

TEST_CASE("csv loading failures") {
  SECTION("header problems are reported on line 1") {
    try {
      load_text("time,sensor_id,value\nx,y,z\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      REQUIRE(e.line == 1);
    }
    REQUIRE_THROWS_AS(load_text(""), ParseError);
    REQUIRE_THROWS_AS(load_text("timestamp,sensor_id,variable,value\n"),
                      ParseError);
  }

  SECTION("malformed rows carry their line number") {
    try {
      load_text(
          "timestamp,sensor_id,variable,value\n"
          "2016-05-10T05:00:00,a,speed,60\n"
          "2016-05-10T05:05:00,a,speed,sixty\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      REQUIRE(e.line == 3);
    }
    REQUIRE_THROWS_AS(
        load_text("timestamp,sensor_id,variable,value\n"
                  "2016-05-10T05:00:00,a,speed,inf\n"),
        ParseError);
    REQUIRE_THROWS_AS(
        load_text("timestamp,sensor_id,variable,value\n"
                  "garbage,a,speed,60\n"),
        ParseError);
  }

  SECTION("off-grid and duplicate samples") {
    REQUIRE_THROWS_AS(
        load_text("timestamp,sensor_id,variable,value\n"
                  "2016-05-10T05:00:00,a,speed,60\n"
                  "2016-05-10T05:02:00,a,speed,61\n"
                  "2016-05-10T05:10:00,a,speed,62\n"),
        GridViolation);
    REQUIRE_THROWS_AS(
        load_text("timestamp,sensor_id,variable,value\n"
                  "2016-05-10T05:00:00,a,speed,60\n"
                  "2016-05-10T05:00:00,a,speed,61\n"),
        GridViolation);
  }
}

TEST_CASE("gap policy") {
  // CSV for sensor "a" on a 5-minute grid of `slots` positions, skipping the
  // listed slot indices; slot k carries the value 40 + k
  auto grid_csv = [](int slots, const std::vector<int>& skip) {
    const std::int64_t t0 = make_utc(2016, 5, 10, 5, 0, 0);
    std::ostringstream out;
    out << "timestamp,sensor_id,variable,value\n";
    for (int k = 0; k < slots; ++k) {
      if (std::find(skip.begin(), skip.end(), k) != skip.end()) {
        continue;
      }
      out << (t0 + 300 * k) << ",a,speed," << (40 + k) << '\n';
    }
    return out.str();
  };

  SECTION("an isolated single hole takes the mean of its neighbors") {
    // 1 of 21 missing = 4.8%, inside the limit
    const Dataset data = load_text(grid_csv(21, {2}));
    REQUIRE(data.length() == 21);
    REQUIRE(data.series[0].values[2] == Approx(0.5 * (41.0 + 43.0)));
    REQUIRE(data.series[0].values[3] == 43.0);
  }

  SECTION("adjacent holes are rejected rather than guessed") {
    // 2 of 40 missing = 5% passes the fraction check but is not isolated
    REQUIRE_THROWS_AS(load_text(grid_csv(40, {7, 8})), TooSparse);
  }

  SECTION("holes at the edges are rejected") {
    // sensor b spans the full grid; sensor a starts one slot late, a 4.8%
    // hole that clears the fraction limit but cannot be interpolated
    const std::int64_t t0 = make_utc(2016, 5, 10, 5, 0, 0);
    std::ostringstream out;
    out << "timestamp,sensor_id,variable,value\n";
    for (int k = 0; k < 21; ++k) {
      out << (t0 + 300 * k) << ",b,speed,50\n";
      if (k > 0) {
        out << (t0 + 300 * k) << ",a,speed,60\n";
      }
    }
    REQUIRE_THROWS_AS(load_text(out.str()), TooSparse);
  }

  SECTION("too many holes trip the fraction limit") {
    // 2 of 12 missing = 16.7% > 5%
    try {
      load_text(grid_csv(12, {3, 7}));
      FAIL("expected TooSparse");
    } catch (const TooSparse& e) {
      REQUIRE(e.sensor == "a");
      REQUIRE(e.missing_fraction == Approx(2.0 / 12.0));
    }
  }
}

TEST_CASE("save and reload is the identity on gap-free data") {
  SyntheticSpec spec;
  spec.length = 48;
  spec.series = {
      {.sensor_id = "401", .kind = SyntheticSeriesSpec::kSmooth},
      {.sensor_id = "402", .kind = SyntheticSeriesSpec::kWhiteNoise,
       .base = 55.0, .amplitude = 6.0},
  };
  const Dataset original = generate_synthetic(spec, 9).dataset;

  std::ostringstream out;
  save_csv(out, original);
  const Dataset reloaded = load_text(out.str());

  REQUIRE(reloaded.series_count() == original.series_count());
  for (std::size_t i = 0; i < original.series_count(); ++i) {
    REQUIRE(reloaded.series[i].sensor_id == original.series[i].sensor_id);
    REQUIRE(reloaded.series[i].start_time == original.series[i].start_time);
    REQUIRE(reloaded.series[i].step == original.series[i].step);
    REQUIRE(reloaded.series[i].values == original.series[i].values);
  }

  // serializing the reloaded dataset reproduces the bytes exactly
  std::ostringstream again;
  save_csv(again, reloaded);
  REQUIRE(again.str() == out.str());
}

TEST_CASE("synthetic generation") {
  SECTION("pure function of spec and seed") {
    SyntheticSpec spec;
    spec.length = 64;
    spec.series = {
        {.sensor_id = "a", .kind = SyntheticSeriesSpec::kSmooth},
        {.sensor_id = "b", .kind = SyntheticSeriesSpec::kCopy, .copy_of = "a",
         .delay_steps = 2, .noise_level = 0.1},
    };
    const SyntheticOutput first = generate_synthetic(spec, 7);
    const SyntheticOutput second = generate_synthetic(spec, 7);
    const SyntheticOutput other = generate_synthetic(spec, 8);
    for (std::size_t i = 0; i < 2; ++i) {
      REQUIRE(first.dataset.series[i].values ==
              second.dataset.series[i].values);
    }
    REQUIRE(first.dataset.series[0].values != other.dataset.series[0].values);
  }

  SECTION("a noiseless delayed copy matches its source shifted") {
    SyntheticSpec spec;
    spec.length = 64;
    spec.series = {
        {.sensor_id = "a", .kind = SyntheticSeriesSpec::kSmooth},
        {.sensor_id = "b", .kind = SyntheticSeriesSpec::kCopy, .copy_of = "a",
         .delay_steps = 2},
    };
    const Dataset data = generate_synthetic(spec, 3).dataset;
    const auto& src = data.series[0].values;
    const auto& dst = data.series[1].values;
    double sxy = 0.0, sxx = 0.0, syy = 0.0, sx = 0.0, sy = 0.0;
    const std::size_t n = src.size() - 2;
    for (std::size_t t = 2; t < src.size(); ++t) {
      REQUIRE(dst[t] == src[t - 2]);
      const double x = src[t - 2];
      const double y = dst[t];
      sx += x;
      sy += y;
      sxx += x * x;
      syy += y * y;
      sxy += x * y;
    }
    const double num = sxy - sx * sy / static_cast<double>(n);
    const double den = std::sqrt((sxx - sx * sx / static_cast<double>(n)) *
                                 (syy - sy * sy / static_cast<double>(n)));
    REQUIRE(num / den == Approx(1.0).margin(1e-12));
  }

  SECTION("declared dependencies surface as ground truth") {
    SyntheticSpec spec;
    spec.length = 32;
    spec.target = "b";
    spec.series = {
        {.sensor_id = "a", .kind = SyntheticSeriesSpec::kSmooth},
        {.sensor_id = "b", .kind = SyntheticSeriesSpec::kCopy, .copy_of = "a",
         .delay_steps = 3, .noise_level = 0.05},
    };
    const SyntheticOutput output = generate_synthetic(spec, 1);
    REQUIRE(output.dataset.target_index == 1);
    REQUIRE(output.dependencies.size() == 1);
    REQUIRE(output.dependencies[0].source == "a");
    REQUIRE(output.dependencies[0].target == "b");
    REQUIRE(output.dependencies[0].delay_steps == 3);

    const std::string json = dependencies_json(output);
    REQUIRE(json.find("\"source\": \"a\"") != std::string::npos);
    REQUIRE(json.find("\"delay_steps\": 3") != std::string::npos);
  }

  SECTION("spec validation") {
    SyntheticSpec spec;
    spec.length = 32;
    REQUIRE_THROWS_AS(generate_synthetic(spec, 1), InvalidSpec);  // no series

    spec.series = {
        {.sensor_id = "a", .kind = SyntheticSeriesSpec::kCopy, .copy_of = "b"},
        {.sensor_id = "b", .kind = SyntheticSeriesSpec::kCopy, .copy_of = "a"},
    };
    REQUIRE_THROWS_AS(generate_synthetic(spec, 1), InvalidSpec);  // cycle

    spec.series = {
        {.sensor_id = "a", .kind = SyntheticSeriesSpec::kCopy,
         .copy_of = "nope"},
    };
    REQUIRE_THROWS_AS(generate_synthetic(spec, 1), InvalidSpec);

    spec.series = {
        {.sensor_id = "a", .kind = SyntheticSeriesSpec::kSmooth},
        {.sensor_id = "a", .kind = SyntheticSeriesSpec::kSmooth},
    };
    REQUIRE_THROWS_AS(generate_synthetic(spec, 1), InvalidSpec);  // dup id

    spec.series = {{.sensor_id = "a", .kind = SyntheticSeriesSpec::kSmooth}};
    spec.target = "missing";
    REQUIRE_THROWS_AS(generate_synthetic(spec, 1), InvalidSpec);
  }
}

TEST_CASE("synthetic spec json") {
  SECTION("round trip of the documented shape") {
    const SyntheticSpec spec = parse_synthetic_spec_json(R"({
      "length": 128,
      "step_seconds": 300,
      "start_time": "2016-05-10T00:00:00",
      "target": "s1",
      "series": [
        {"id": "s0", "kind": "smooth", "base": 65, "amplitude": 20},
        {"id": "s1", "copy_of": "s0", "delay": 2, "noise": 0.05},
        {"id": "s2", "kind": "noise", "base": 60, "amplitude": 10}
      ]
    })");
    REQUIRE(spec.length == 128);
    REQUIRE(spec.start_time == make_utc(2016, 5, 10));
    REQUIRE(spec.target == "s1");
    REQUIRE(spec.series.size() == 3);
    REQUIRE(spec.series[0].kind == SyntheticSeriesSpec::kSmooth);
    REQUIRE(spec.series[0].base == 65.0);
    REQUIRE(spec.series[1].kind == SyntheticSeriesSpec::kCopy);
    REQUIRE(spec.series[1].copy_of == "s0");
    REQUIRE(spec.series[1].delay_steps == 2);
    REQUIRE(spec.series[1].noise_level == 0.05);
    REQUIRE(spec.series[2].kind == SyntheticSeriesSpec::kWhiteNoise);
    REQUIRE_NOTHROW(generate_synthetic(spec, 5));
  }

  SECTION("malformed specs are rejected") {
    REQUIRE_THROWS_AS(parse_synthetic_spec_json("not json"), InvalidSpec);
    REQUIRE_THROWS_AS(parse_synthetic_spec_json("{}"), InvalidSpec);
    REQUIRE_THROWS_AS(parse_synthetic_spec_json(R"({"series": 5})"),
                      InvalidSpec);
    REQUIRE_THROWS_AS(
        parse_synthetic_spec_json(
            R"({"series": [{"id": "x", "kind": "cubist"}]})"),
        InvalidSpec);
  }
}

TEST_CASE("a noisy delayed copy is recovered from its source block") {
  // source white noise, target = source delayed 3 steps + 10% noise; the
  // source block must carry the support and its lag-3 column the weight
  SyntheticSpec spec;
  spec.length = 60;
  spec.target = "dst";
  spec.series = {
      {.sensor_id = "src", .kind = SyntheticSeriesSpec::kWhiteNoise,
       .base = 60.0, .amplitude = 10.0},
      {.sensor_id = "dst", .kind = SyntheticSeriesSpec::kCopy,
       .copy_of = "src", .delay_steps = 3, .noise_level = 0.1},
  };
  const Dataset data = generate_synthetic(spec, 21).dataset;

  const Normalizer norm = fit_normalizer(data, {0, data.length()});
  const Dataset unit = normalize(norm, data);
  RegressionProblem problem = build_uniform_problem(unit, 4, 40);

  SolverConfig config;
  config.max_active_blocks = 1;
  const CoefficientVector coef = solve_block_sparse(problem, config);
  REQUIRE(coef.active_blocks == std::vector<int>{0});

  const int off = coef.layout.block_begin(0);
  const double lag3 = std::fabs(coef.x(off + 2));
  for (int c = 0; c < 4; ++c) {
    if (c != 2) {
      REQUIRE(lag3 > std::fabs(coef.x(off + c)));
    }
  }

  // exhaustive single-block search agrees
  oracle::Matrix a(static_cast<std::size_t>(problem.rows()),
                   oracle::Vector(static_cast<std::size_t>(problem.cols())));
  for (Eigen::Index r = 0; r < problem.rows(); ++r) {
    for (Eigen::Index c = 0; c < problem.cols(); ++c) {
      a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
          problem.a(r, c);
    }
  }
  const oracle::Vector b(problem.b.data(), problem.b.data() + problem.b.size());
  const oracle::SupportFit reference =
      oracle::best_support(a, b, {0, 4}, {4, 4}, 1);
  REQUIRE(reference.blocks == std::vector<int>{0});
}
