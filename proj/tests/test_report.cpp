#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "pvdim/runner.hpp"

using namespace pvdim;

namespace {

std::string dump(const Report& r, const std::string& format) {
  std::ostringstream os;
  format == "json" ? write_json(r, os) : write_csv(r, os);
  return os.str();
}

}  // namespace

TEST(RunConfig, Validation) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  c.taus = {0.5};
  EXPECT_THROW(c.validate(), Error);
  c = RunConfig{};
  c.bits_cap = 64;
  EXPECT_THROW(c.validate(), Error);
  c = RunConfig{};
  c.measures = {"poisson:1"};
  EXPECT_THROW(c.validate(), Error);
}

TEST(RunConfig, MergeOverridesOnlyPresentFields) {
  RunConfig c;
  c.merge(json{{"n", 7}, {"taus", {0.1, 0.2}}});
  EXPECT_EQ(c.n, 7u);
  EXPECT_EQ(c.taus, (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(c.poly, "golden");
  EXPECT_FALSE(c.to_json().contains("threads"));
}

TEST(Resolve, NamesAndSides) {
  EXPECT_NEAR(resolve_pisot("golden", "auto").first.beta_value(), 0.6180339887, 1e-9);
  EXPECT_NEAR(resolve_pisot("table1:2", "auto").first.beta_value(), 0.5436890127, 1e-9);
  EXPECT_NEAR(resolve_pisot("table1:6", "auto").first.beta_value(), 0.7244919590, 1e-9);
  EXPECT_NEAR(resolve_pisot("family:4", "auto").first.beta_value(), 0.5187900637, 1e-9);
  auto [p, side] = resolve_pisot("-1,1,1", "auto");
  EXPECT_EQ(side, Side::beta);
  EXPECT_EQ(p.minpoly(), (IntPolynomial{-1, -1, 1}));
  EXPECT_THROW(resolve_pisot("-1,x,1", "auto"), Error);
  EXPECT_THROW(resolve_pisot("table1:9", "auto"), Error);
}

TEST(Report, EmptyTableIsValid) {
  Report r;
  r.kind = "empty";
  r.table.columns = {"n", "u_n"};
  auto j = json::parse(dump(r, "json"));
  EXPECT_EQ(j["schema"], kReportSchema);
  EXPECT_TRUE(j["table"]["rows"].is_array());
  EXPECT_TRUE(j["table"]["rows"].empty());
  std::istringstream csv(dump(r, "csv"));
  auto t = read_csv(csv);
  EXPECT_EQ(t.columns, r.table.columns);
  EXPECT_TRUE(t.rows.empty());
}

TEST(Report, JsonRoundTrip) {
  RunConfig c;
  c.n_max = 5;
  c.taus = {0.4};
  Report r = dims_report(c);
  Report back = Report::from_json(json::parse(dump(r, "json")));
  EXPECT_EQ(dump(back, "json"), dump(r, "json"));
}

TEST(Report, CsvRoundTripPreservesNumbers) {
  RunConfig c;
  c.n_max = 8;
  c.taus = {0.4, 0.1};
  Report r = dims_report(c);
  std::istringstream csv(dump(r, "csv"));
  ReportTable t = read_csv(csv);
  ASSERT_EQ(t.columns, r.table.columns);
  ASSERT_EQ(t.rows.size(), r.table.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
      const json& a = r.table.rows[i][j];
      const json& b = t.rows[i][j];
      if (a.is_number_float()) EXPECT_EQ(a.get<double>(), b.get<double>());
      else EXPECT_EQ(a, b);
    }
}

TEST(Report, CsvQuotesStrings) {
  Report r;
  r.table.columns = {"label"};
  r.table.rows.push_back({"markov:0.9,0.1,0.5,0.5"});
  r.table.rows.push_back({"say \"hi\""});
  std::istringstream csv(dump(r, "csv"));
  auto t = read_csv(csv);
  EXPECT_EQ(t.rows[0][0], "markov:0.9,0.1,0.5,0.5");
  EXPECT_EQ(t.rows[1][0], "say \"hi\"");
}

TEST(Report, EmitErrors) {
  Report r;
  EXPECT_THROW(emit_report(r, "xml", "-"), Error);
  try {
    emit_report(r, "json", "/nonexistent-dir/x.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::io_error);
  }
}

TEST(Presets, Names) {
  for (const auto& name : preset_names()) EXPECT_NO_THROW(preset_config(name));
  try {
    preset_config("bogus");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::unknown_preset);
  }
}

TEST(Presets, Table1Verify) {
  Report r = run_preset("table1-verify", preset_config("table1-verify"));
  EXPECT_TRUE(r.passed());
  std::set<int> rows;
  for (const auto& row : r.table.rows) rows.insert(row[0].get<int>());
  EXPECT_EQ(rows.size(), 7u);
}

TEST(Presets, GoldenPartition) {
  Report r = run_preset("golden-partition", preset_config("golden-partition"));
  EXPECT_TRUE(r.passed());
  const auto counts = r.summary["class_counts"];
  ASSERT_EQ(counts.size(), 14u);
  EXPECT_EQ(counts[0], 2);
  EXPECT_EQ(counts[1], 4);
  EXPECT_EQ(counts[2], 7);
  EXPECT_EQ(counts[3], 12);
}

TEST(Presets, Thm22GapHonest) {
  Report r = run_preset("thm22-gap", preset_config("thm22-gap"));
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.summary["verdict"], "gap not found");
  const auto u = r.summary["per_tau"][0]["u"];
  EXPECT_NEAR(u.back().get<double>(), 1.390072, 1e-4);
  bool observed = false;
  for (const auto& [label, text] : r.observations)
    if (label == "garsia-threshold") observed = text.find("not evidence about singularity") != std::string::npos;
  EXPECT_TRUE(observed);
}

TEST(Presets, DeterministicAcrossThreads) {
  for (const std::string name : {"thm22-gap", "golden-partition"}) {
    std::string first;
    for (unsigned t : {1u, 4u, 16u}) {
      RunConfig c = preset_config(name);
      c.threads = t;
      c.seed = 3;
      const std::string out = dump(run_preset(name, c), "json");
      if (first.empty()) first = out;
      EXPECT_EQ(out, first) << name << " threads=" << t;
    }
  }
}

TEST(Presets, ErdosScanObservesWithoutClaiming) {
  RunConfig c = preset_config("erdos-scan");
  c.n_max = 10;
  Report r = run_preset("erdos-scan", c);
  EXPECT_EQ(r.table.rows.size(), 10u);
  ASSERT_FALSE(r.observations.empty());
  EXPECT_NE(r.observations[0].second.find("not evidence"), std::string::npos);
}

TEST(Presets, BoxdimEmpirical) {
  RunConfig c = preset_config("boxdim-empirical");
  c.depth = 14;
  Report r = run_preset("boxdim-empirical", c);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.summary["unit_segment_slope"].get<double>(), 1.0, 0.05);
}
