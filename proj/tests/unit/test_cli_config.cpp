#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "commands.hpp"
#include "csv.hpp"
#include "run_config.hpp"
#include "twotier/error.hpp"

using namespace twotier;
using namespace twotier::cli;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in, "test");
}

}  // namespace

TEST(RunConfig, EmptyInputGivesReferenceDefaults) {
  const auto c = parse("");
  EXPECT_EQ(c.r_macro_m, 500.0);
  EXPECT_EQ(c.r_femto_m, 20.0);
  EXPECT_EQ(c.p_macro_dbm, 50.0);
  EXPECT_EQ(c.p_femto_dbm, 22.0);
  EXPECT_EQ(c.alpha, 4.0);
  EXPECT_EQ(c.beta, 3.0);
  EXPECT_EQ(c.wall_loss_db, 12.0);
  EXPECT_EQ(c.gamma_macro, 1.0);
  EXPECT_EQ(c.gamma_femto, 10.0);
  EXPECT_EQ(c.avg_femtocells, 20.0);
  EXPECT_EQ(c.seed, 1u);
}

TEST(RunConfig, ParsesValuesAndComments) {
  const auto c = parse("# comment\n  p_femto_dbm = 25   # trailing\n\nseed=99\nsurrogates = reported\n");
  EXPECT_EQ(c.p_femto_dbm, 25.0);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.surrogates, "reported");
}

TEST(RunConfig, RejectsUnknownAndDuplicateKeys) {
  EXPECT_THROW(parse("p_femto = 25\n"), InvalidConfiguration);
  EXPECT_THROW(parse("seed = 1\nseed = 2\n"), InvalidConfiguration);
  EXPECT_THROW(parse("seed 1\n"), InvalidConfiguration);
}

TEST(RunConfig, RejectsBadValues) {
  EXPECT_THROW(parse("alpha = four\n"), InvalidConfiguration);
  EXPECT_THROW(parse("alpha = 4x\n"), InvalidConfiguration);
  EXPECT_THROW(parse("alpha = -1\n"), InvalidConfiguration);
  EXPECT_THROW(parse("r_femto_m = 800\n"), InvalidConfiguration);
  EXPECT_THROW(parse("eps_macro = 1.2\n"), InvalidConfiguration);
  EXPECT_THROW(parse("scenarios = all\n"), InvalidConfiguration);
  EXPECT_THROW(parse("surrogates = guessed\n"), InvalidConfiguration);
  EXPECT_THROW(parse("trials = -5\n"), InvalidConfiguration);
  EXPECT_THROW(parse("wall_loss_db = inf\n"), InvalidConfiguration);
}

TEST(RunConfig, ErrorNamesLine) {
  try {
    parse("seed = 1\nbogus = 2\n");
    FAIL();
  } catch (const InvalidConfiguration& e) {
    EXPECT_NE(std::string(e.what()).find("test:2"), std::string::npos);
  }
}

TEST(RunConfig, WriteParseRoundTrip) {
  RunConfig c;
  c.p_femto_dbm = 25.5;
  c.trials = 1234;
  c.correlation_table = "deltas.csv";
  std::ostringstream out;
  write_run_config(out, c);
  const auto back = parse(out.str());
  EXPECT_EQ(back.p_femto_dbm, 25.5);
  EXPECT_EQ(back.trials, 1234u);
  EXPECT_EQ(back.correlation_table, "deltas.csv");
  EXPECT_EQ(run_config_keys().size(), 29u);
}

TEST(Csv, NineSignificantDigits) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_double(1.23456789012e-7), "1.23456789e-07");
  EXPECT_EQ(format_double(NAN), "");
}

TEST(Csv, Escaping) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(Sweep, ScenarioSetAndDistances) {
  RunConfig c;
  const auto s = sweep_scenarios(c);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[1].p_femto_dbm, 25.0);
  EXPECT_EQ(s[2].p_macro_dbm, 53.0);
  EXPECT_EQ(s[3].r_macro_m, 1000.0);
  c.scenarios = "base";
  EXPECT_EQ(sweep_scenarios(c).size(), 1u);
  const auto d = sweep_distances(c, 500.0);
  ASSERT_EQ(d.size(), 20u);
  EXPECT_NEAR(d.front(), 50.0, 1e-12);
  EXPECT_NEAR(d.back(), 500.0, 1e-12);
  EXPECT_TRUE(std::is_sorted(d.begin(), d.end()));
}

TEST(ValidationReport, TextAndVerdict) {
  ValidationReport r;
  r.checks.push_back({"a", CheckStatus::Pass, 0.01, "<= 0.05", ""});
  r.checks.push_back({"b", CheckStatus::Warn, 0.2, "<= 0.05", "insufficient precision"});
  EXPECT_TRUE(r.passed());
  EXPECT_NE(r.text().find("WARN  b"), std::string::npos);
  r.checks.push_back({"c", CheckStatus::Fail, 0.2, "<= 0.05", ""});
  EXPECT_FALSE(r.passed());
  EXPECT_NE(r.text().find("summary: 1 pass, 1 fail, 1 warn"), std::string::npos);
}
