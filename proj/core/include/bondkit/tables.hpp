#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bondkit/model.hpp"
#include "bondkit/pde_solver.hpp"

namespace bondkit {

enum class TableId { T1 = 1, T2 = 2, T3 = 3 };

/// How a column is printed in the aligned text layout.
enum class ColumnStyle { Label, Norm, Order };

struct Column {
  std::string name;
  ColumnStyle style;
};

/// Rectangular numeric table. NaN marks an absent entry (printed as "--").
struct Table {
  std::string title;
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  std::size_t column_index(const std::string& name) const;
};

struct TableOptions {
  RateGrid norm_grid = default_norm_grid();
  /// Fine grid for the numerical reference of T3.
  PdeConfig pde{};
  /// Also solve on a grid with half the nodes and a quarter of the steps to
  /// estimate the reference error of T3.
  bool estimate_solver_error = true;
};

inline const std::vector<double> kTable1Taus{1.0, 0.75, 0.5, 0.25};
inline const std::vector<double> kTable2Taus{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
inline const std::vector<double> kTable3Gammas{0.5, 0.75, 1.0, 1.32};
inline const std::vector<double> kTable3Taus{1.0, 0.75, 0.5, 0.25};

/// T1 and T2 from closed forms; T3 solves the pricing PDE once per gamma.
Table build_table(TableId id, const ModelParams& p, const TableOptions& opts = {});

/// Numerical references for T3, one per gamma in kTable3Gammas.
std::vector<PdeSolution> table3_solutions(const ModelParams& p, const PdeConfig& cfg);

/// T3 from precomputed solutions. `coarse` may be empty; otherwise it must
/// pair with `fine`. Throws MissingPdeSolution if a gamma or maturity is absent.
Table table3_from_solutions(const ModelParams& p, std::span<const PdeSolution> fine,
                            std::span<const PdeSolution> coarse, const TableOptions& opts = {});

/// L2 errors of both approximations against CIR on a maturity sweep.
Table figure1(const ModelParams& p, std::span<const double> taus, const TableOptions& opts = {});

/// Result of comparing one cell with its reference value.
struct CellCheck {
  std::size_t row;
  std::string column;
  double value;
  double golden;
  /// Relative deviation for norms, absolute for orders.
  double deviation;
  double tolerance;
  bool pass;
};

/// Compares every cell that has a reference counterpart. T1: 2% on norms and
/// 0.05 on orders. T2: 5%. T3: max(10%, twice the estimated reference error).
std::vector<CellCheck> check_table(const Table& t, TableId id);

void write_csv(std::ostream& out, const Table& t, bool stamp = false);
void write_text(std::ostream& out, const Table& t);

}  // namespace bondkit
