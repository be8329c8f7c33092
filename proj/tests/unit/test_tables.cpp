#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "bondkit/tables.hpp"

namespace bondkit {
namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no bondkit::Error thrown";
  return ErrorKind::ParseError;
}

TableOptions quick_pde() {
  TableOptions o;
  o.pde.n_space = 201;
  o.pde.n_time = 400;
  return o;
}

std::size_t passed(const std::vector<CellCheck>& checks) {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const CellCheck& c) { return c.pass; }));
}

TEST(Table1, ShapeAndGoldens) {
  const Table t = build_table(TableId::T1, benchmark_params(0.5));
  ASSERT_EQ(t.columns.size(), 9u);
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.columns[0].name, "tau");
  EXPECT_EQ(t.columns[0].style, ColumnStyle::Label);
  EXPECT_EQ(t.columns[t.column_index("cw_l2_eoc")].style, ColumnStyle::Order);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(t.rows[i][0], kTable1Taus[i]);
  EXPECT_TRUE(std::isnan(t.rows[3][t.column_index("cw_linf_eoc")]));
  EXPECT_FALSE(std::isnan(t.rows[2][t.column_index("cw_linf_eoc")]));
  const auto checks = check_table(t, TableId::T1);
  EXPECT_EQ(checks.size(), 28u);
  EXPECT_EQ(passed(checks), 28u);
  EXPECT_EQ(kind_of([&] { t.column_index("nope"); }), ErrorKind::GridMismatch);
}

TEST(Table1, UsesGammaOneHalfWhateverIsPassed) {
  std::ostringstream a, b;
  write_csv(a, build_table(TableId::T1, benchmark_params(0.5)));
  write_csv(b, build_table(TableId::T1, benchmark_params(1.0)));
  EXPECT_EQ(a.str(), b.str());
}

TEST(Table2, ShapeAndGoldens) {
  const Table t = build_table(TableId::T2, benchmark_params());
  ASSERT_EQ(t.rows.size(), 10u);
  ASSERT_EQ(t.columns.size(), 3u);
  EXPECT_NEAR(t.rows[4][t.column_index("cw_l2")] / 1.427e-4, 1.0, 0.05);
  EXPECT_NEAR(t.rows[9][t.column_index("improved_l2")] / 1.200e-3, 1.0, 0.05);
  const auto checks = check_table(t, TableId::T2);
  EXPECT_EQ(checks.size(), 20u);
  EXPECT_EQ(passed(checks), 20u);
}

TEST(Table3, ShapeFromCoarseSolve) {
  const Table t = build_table(TableId::T3, benchmark_params(), quick_pde());
  ASSERT_EQ(t.rows.size(), 16u);
  ASSERT_EQ(t.columns.size(), 6u);
  for (std::size_t i = 0; i < 16; ++i) {
    EXPECT_EQ(t.rows[i][t.column_index("gamma")], kTable3Gammas[i / 4]);
    EXPECT_EQ(t.rows[i][t.column_index("tau")], kTable3Taus[i % 4]);
    EXPECT_GT(t.rows[i][t.column_index("linf")], 0.0);
    EXPECT_LE(t.rows[i][t.column_index("l2")], t.rows[i][t.column_index("linf")] * std::sqrt(0.15));
    EXPECT_GE(t.rows[i][t.column_index("solver_err_linf")], 0.0);
  }
  EXPECT_EQ(check_table(t, TableId::T3).size(), 32u);
}

TEST(Table3, WithoutSolverErrorEstimate) {
  TableOptions o = quick_pde();
  o.estimate_solver_error = false;
  const Table t = build_table(TableId::T3, benchmark_params(), o);
  for (const auto& row : t.rows) EXPECT_TRUE(std::isnan(row[t.column_index("solver_err_linf")]));
}

TEST(Table3, MissingSolutions) {
  const ModelParams p = benchmark_params();
  EXPECT_EQ(kind_of([&] { table3_from_solutions(p, {}, {}); }), ErrorKind::MissingPdeSolution);
  auto fine = table3_solutions(p, quick_pde().pde);
  ASSERT_EQ(fine.size(), 4u);
  EXPECT_NO_THROW(table3_from_solutions(p, fine, {}, quick_pde()));
  auto short_list = fine;
  short_list.pop_back();
  EXPECT_EQ(kind_of([&] { table3_from_solutions(p, short_list, {}, quick_pde()); }), ErrorKind::MissingPdeSolution);
  PdeConfig c = quick_pde().pde;
  const std::array<double, 1> only_one{1.0};
  fine[2] = solve(ModelParams{p.alpha, p.beta, p.sigma, kTable3Gammas[2]}, c, only_one);
  EXPECT_EQ(kind_of([&] { table3_from_solutions(p, fine, {}, quick_pde()); }), ErrorKind::MissingPdeSolution);
}

TEST(Figure1, ImprovedBelowOriginal) {
  const std::vector<double> taus{0.5, 1.0, 5.0, 10.0};
  const Table t = figure1(benchmark_params(1.0), taus);
  ASSERT_EQ(t.rows.size(), 4u);
  for (const auto& row : t.rows) EXPECT_LT(row[2], row[1]);
}

TEST(TableOutput, CsvAndText) {
  const Table t = build_table(TableId::T1, benchmark_params());
  std::ostringstream csv;
  write_csv(csv, t);
  const std::string s = csv.str();
  EXPECT_TRUE(s.starts_with("# "));
  EXPECT_NE(s.find("\ntau,cw_linf,cw_linf_eoc,"), std::string::npos);
  EXPECT_NE(s.find(",,"), std::string::npos);
  EXPECT_EQ(s.find("nan"), std::string::npos);
  EXPECT_EQ(s.find("# generated"), std::string::npos);
  std::ostringstream stamped;
  write_csv(stamped, t, true);
  EXPECT_NE(stamped.str().find("# generated"), std::string::npos);

  std::ostringstream text;
  write_text(text, t);
  const std::string x = text.str();
  EXPECT_NE(x.find("2.774e-07"), std::string::npos);
  EXPECT_NE(x.find("4.930"), std::string::npos);
  EXPECT_NE(x.find("--"), std::string::npos);
  EXPECT_NE(x.find("7.042"), std::string::npos);
}

TEST(TableOutput, CsvIsDeterministic) {
  std::ostringstream a, b;
  write_csv(a, build_table(TableId::T2, benchmark_params()));
  write_csv(b, build_table(TableId::T2, benchmark_params()));
  EXPECT_EQ(a.str(), b.str());
}

}  // namespace
}  // namespace bondkit
