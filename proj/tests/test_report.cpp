#include <sstream>

#include <gtest/gtest.h>

#include "qls/report.hpp"
#include "support.hpp"

using namespace qls;

namespace {

double budget_value(const Table& t, const std::string& name) {
  for (const auto& row : t.rows)
    if (std::get<std::string>(row[0]) == name) {
      if (const auto* b = std::get_if<bool>(&row[1])) return *b ? 1.0 : 0.0;
      return std::get<double>(row[1]);
    }
  throw std::runtime_error("no row " + name);
}

double summary_value(const Table& t, const std::string& key) {
  for (const auto& [k, v] : t.summary)
    if (k == key) return std::get<double>(v);
  throw std::runtime_error("no summary " + key);
}

std::string csv(const Table& t) {
  std::ostringstream out;
  write_csv(out, t);
  return out.str();
}

}  // namespace

TEST(Report, BudgetElectron) {
  const auto t = cmd_budget(test::scenario("paper-electron"));
  EXPECT_NEAR(budget_value(t, "exchange_time"), 0.160, 0.05 * 0.160);
  EXPECT_NEAR(budget_value(t, "figure"), 0.098, 0.05 * 0.098);
  EXPECT_EQ(budget_value(t, "feasible"), 1.0);
  EXPECT_TRUE(t.warnings.empty());
}

TEST(Report, BudgetProtonWarns) {
  const auto t = cmd_budget(test::scenario("paper-proton"));
  EXPECT_GE(budget_value(t, "n_bar"), 100.0);
  EXPECT_EQ(budget_value(t, "feasible"), 0.0);
  ASSERT_EQ(t.warnings.size(), 1u);
}

TEST(Report, FieldMarksTrapsAndAgrees) {
  const auto t = cmd_field(test::scenario("paper-electron"));
  ASSERT_EQ(t.columns[3], "B2_T_per_m2");
  int marked = 0;
  for (const auto& row : t.rows) {
    EXPECT_TRUE(std::get<bool>(row[6]));
    const auto& marker = std::get<std::string>(row[7]);
    if (marker == "logic") {
      ++marked;
      EXPECT_EQ(std::get<double>(row[2]), 0.0);
      EXPECT_NEAR(std::get<double>(row[3]), 9000.0, 1e-9);
    }
    if (marker == "spectroscopy") {
      ++marked;
      EXPECT_NEAR(std::get<double>(row[0]), 0.05, 0.0);
    }
  }
  EXPECT_EQ(marked, 2);
}

TEST(Report, IdealWidthMatchesDrive) {
  const auto t = cmd_lineshape(test::scenario("ideal"));
  EXPECT_NEAR(summary_value(t, "fitted_width_Hz"), 1.0, 0.05);
}

TEST(Report, LinewidthRatioFollowsB2) {
  const double w4 = summary_value(cmd_lineshape(test::scenario("linewidth-b2-4")), "fitted_width_Hz");
  const double w300 =
      summary_value(cmd_lineshape(test::scenario("linewidth-b2-300")), "fitted_width_Hz");
  EXPECT_NEAR(w300 / w4, 75.0, 7.5);
}

TEST(Report, SameSeedByteIdentical) {
  const auto c = test::scenario("paper-electron");
  EXPECT_EQ(csv(cmd_lineshape(c)), csv(cmd_lineshape(c)));
  EXPECT_EQ(csv(cmd_protocol(c)), csv(cmd_protocol(c)));
}

TEST(Report, RecordsFormatIsJsonLines) {
  const auto t = cmd_budget(test::scenario("paper-electron"));
  std::ostringstream out;
  write_records(out, t);
  std::istringstream in(out.str());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    const auto j = Json::parse(line);
    EXPECT_TRUE(j.contains("quantity"));
    ++n;
  }
  EXPECT_EQ(n, t.rows.size());
}

TEST(Report, SweepDetuningFigureDecreases) {
  SweepSpec s{"resonator.detune_linewidths", 5.0, 100.0, 20};
  const auto t = cmd_sweep(test::scenario("paper-electron"), s);
  ASSERT_EQ(t.rows.size(), 20u);
  for (std::size_t i = 1; i < t.rows.size(); ++i)
    EXPECT_LT(std::get<double>(t.rows[i][6]), std::get<double>(t.rows[i - 1][6]));
}

TEST(Report, SweepTemperatureMatchesBose) {
  SweepSpec s{"budget.temperature_K", 1e-3, 1.0, 13, true};
  const auto t = cmd_sweep(test::scenario("paper-electron"), s);
  const double hw = constants::hbar * two_pi * 200e6;
  for (const auto& row : t.rows) {
    const double T = std::get<double>(row[0]);
    EXPECT_NEAR(std::get<double>(row[5]), 1.0 / std::expm1(hw / (constants::k_B * T)),
                1e-12 * std::max(1.0, std::get<double>(row[5])));
  }
}

TEST(Report, SweepResistanceEasesFigure) {
  // Resonator held at a fixed offset below the axial frequency.
  auto c = test::scenario("paper-electron");
  c.resonator.detune_Hz = 30.0 / (two_pi * 10e-12 * 500e3);
  c.resonator.detune_linewidths.reset();
  SweepSpec s{"resonator.resistance_Ohm", 1e5, 1e7, 9, true};
  const auto t = cmd_sweep(c, s);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    EXPECT_GT(std::get<double>(t.rows[i][1]), std::get<double>(t.rows[i - 1][1]));  // Q up
    EXPECT_LT(std::get<double>(t.rows[i][6]), std::get<double>(t.rows[i - 1][6]));   // figure down
  }
}

TEST(Report, SweepRejectsNonNumericAxis) {
  SweepSpec s{"species", 1.0, 2.0, 3};
  EXPECT_THROW(cmd_sweep(test::scenario("paper-electron"), s), SchemaError);
}
