#include "bondkit_cli/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "bondkit/analysis.hpp"
#include "bondkit/approximation.hpp"
#include "bondkit/closed_form.hpp"
#include "bondkit/csv.hpp"
#include "bondkit/pde_solver.hpp"
#include "bondkit/tables.hpp"

namespace bondkit::cli {

namespace {

struct ModelFlags {
  std::string params_file;
  double alpha = 0.0;
  double beta = 0.0;
  double sigma = 0.0;
  double gamma = 0.5;
  bool feller = false;
  CLI::Option* o_alpha = nullptr;
  CLI::Option* o_beta = nullptr;
  CLI::Option* o_sigma = nullptr;
  CLI::Option* o_gamma = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--params", params_file, "Parameter file (key = value lines)");
    o_alpha = app->add_option("--alpha", alpha, "Drift intercept");
    o_beta = app->add_option("--beta", beta, "Drift slope");
    o_sigma = app->add_option("--sigma", sigma, "Volatility scale");
    o_gamma = app->add_option("--gamma", gamma, "Volatility exponent");
    app->add_flag("--feller", feller, "Enforce 2 alpha >= sigma^2 when gamma = 1/2");
  }

  /// Defaults, then the parameter file, then individual flags.
  ModelParams resolve() const {
    ModelParams p = benchmark_params(0.5);
    if (!params_file.empty()) p = load_params(params_file, p);
    if (o_alpha->count()) p.alpha = alpha;
    if (o_beta->count()) p.beta = beta;
    if (o_sigma->count()) p.sigma = sigma;
    if (o_gamma->count()) p.gamma = gamma;
    return validate_params(p, feller);
  }
};

struct PdeFlags {
  PdeConfig cfg;
  std::string drift = "central";
  std::string lower = "second";

  void attach(CLI::App* app, bool with_horizon) {
    app->add_option("--nspace", cfg.n_space, "Spatial nodes");
    app->add_option("--ntime", cfg.n_time, "Time steps (rounded up to align maturities)");
    app->add_option("--rmax", cfg.r_max, "Upper end of the rate domain");
    if (with_horizon) app->add_option("--tfinal", cfg.t_final, "Final maturity");
    app->add_option("--theta", cfg.theta, "Time weight (0.5 Crank-Nicolson, 1 implicit)");
    app->add_option("--rannacher", cfg.rannacher_steps, "Fully implicit start-up steps");
    app->add_option("--drift", drift, "Drift scheme")
        ->check(CLI::IsMember({"central", "upwind", "fitted", "hybrid"}));
    app->add_option("--lower-boundary", lower, "Order of the r = 0 drift difference")
        ->check(CLI::IsMember({"first", "second"}));
    app->add_flag("--allow-unsupported-gamma", cfg.allow_unsupported_gamma,
                  "Permit gamma >= 3/2");
  }

  PdeConfig resolve() const {
    PdeConfig c = cfg;
    c.drift = drift == "upwind"   ? DriftScheme::Upwind
              : drift == "fitted" ? DriftScheme::Fitted
              : drift == "hybrid" ? DriftScheme::Hybrid
                                  : DriftScheme::Central;
    c.lower_boundary = lower == "first" ? LowerBoundaryOrder::First : LowerBoundaryOrder::Second;
    return c;
  }
};

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::GammaMismatch: return kExitMethodMismatch;
    case ErrorKind::UnstableSolve:
    case ErrorKind::TridiagonalSingular: return kExitUnstable;
    default: return kExitValidation;
  }
}

std::string fmt17(double x) { return format_general(x, 17); }

/// Writes to --out when given, otherwise to `out`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw Error(ErrorKind::InvalidConfig, "cannot open '" + path + "' for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

double pde_point(const ModelParams& p, PdeConfig cfg, double tau, double r) {
  if (r < 0.0 || r > cfg.r_max) {
    throw Error(ErrorKind::DomainError, "rate must lie in [0, r_max] for the pde method");
  }
  cfg.t_final = tau;
  const std::vector<double> taus{tau};
  const auto sol = solve(p, cfg, taus);
  const auto& v = sol.log_prices.front();
  const double x = r / cfg.dr();
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(x), cfg.n_space - 2);
  const double w = x - static_cast<double>(i);
  return (1.0 - w) * v[i] + w * v[i + 1];
}

std::vector<double> figure_taus(double t_max, double step) {
  if (!(step > 0.0) || !(t_max >= step)) {
    throw Error(ErrorKind::InvalidConfig, "figure needs 0 < step <= tmax");
  }
  std::vector<double> taus;
  const auto n = static_cast<std::size_t>(std::floor(t_max / step + 1e-9));
  // Round to 15 significant digits so 3 * 0.1 prints as 0.3.
  for (std::size_t k = 1; k <= n; ++k) {
    const double tau = static_cast<double>(k) * step;
    const double scale = std::pow(10.0, 14 - static_cast<int>(std::floor(std::log10(tau))));
    taus.push_back(std::round(tau * scale) / scale);
  }
  return taus;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-coupon bond pricing under the CKLS short-rate model", "bondkit"};
  app.require_subcommand(1);

  // price
  auto* price = app.add_subcommand("price", "Log price and price at one (tau, r) point");
  ModelFlags price_model;
  price_model.attach(price);
  PdeFlags price_pde;
  price_pde.attach(price, false);
  double price_tau = 0.0;
  double price_rate = 0.0;
  std::string price_method = "cw";
  price->add_option("--tau", price_tau, "Maturity in years")->required();
  price->add_option("--rate", price_rate, "Short rate")->required();
  price->add_option("--method", price_method, "Pricer")
      ->check(CLI::IsMember({"cw", "improved", "cir", "vasicek", "pde"}));

  // table
  auto* table = app.add_subcommand("table", "Error tables against exact or numerical prices");
  ModelFlags table_model;
  table_model.attach(table);
  PdeFlags table_pde;
  table_pde.attach(table, false);
  int table_id = 1;
  std::string table_out;
  std::string table_format = "csv";
  bool table_check = false;
  bool table_stamp = false;
  bool table_no_estimate = false;
  table->add_option("--table", table_id, "Table number")->required()->check(CLI::IsMember({1, 2, 3}));
  table->add_option("--out", table_out, "Output path (default stdout)");
  table->add_option("--format", table_format, "Output layout")->check(CLI::IsMember({"csv", "text"}));
  table->add_flag("--check", table_check, "Compare with embedded reference values");
  table->add_flag("--stamp", table_stamp, "Add a generation timestamp to the metadata");
  table->add_flag("--no-estimate", table_no_estimate, "Skip the coarse solve used for error bands");

  // eoc
  auto* eoc_cmd = app.add_subcommand("eoc", "Experimental order of convergence");
  ModelFlags eoc_model;
  eoc_model.attach(eoc_cmd);
  std::string eoc_taus = "1,0.75,0.5,0.25";
  std::string eoc_pair = "cw,cir";
  std::string eoc_norm = "linf";
  std::string eoc_errors;
  std::string eoc_out;
  eoc_cmd->add_option("--taus", eoc_taus, "Comma-separated maturities (or step sizes with --errors)");
  eoc_cmd->add_option("--method-pair", eoc_pair, "Two pricers, e.g. improved,cir");
  eoc_cmd->add_option("--norm", eoc_norm, "linf or l2")->check(CLI::IsMember({"linf", "l2"}));
  eoc_cmd->add_option("--errors", eoc_errors, "Precomputed comma-separated errors");
  eoc_cmd->add_option("--out", eoc_out, "Output path (default stdout)");

  // pde
  auto* pde = app.add_subcommand("pde", "Solve the pricing equation and export snapshots");
  ModelFlags pde_model;
  pde_model.attach(pde);
  PdeFlags pde_flags;
  pde_flags.attach(pde, true);
  std::string pde_taus;
  std::string pde_out;
  bool pde_stamp = false;
  pde->add_option("--taus", pde_taus, "Snapshot maturities (default: tfinal)");
  pde->add_option("--out", pde_out, "Output path (default stdout)");
  pde->add_flag("--stamp", pde_stamp, "Add a generation timestamp to the metadata");

  // figure
  auto* figure = app.add_subcommand("figure", "L2 error against CIR over a maturity sweep");
  ModelFlags figure_model;
  figure_model.attach(figure);
  double figure_tmax = 10.0;
  double figure_step = 0.1;
  std::string figure_out;
  figure->add_option("--tmax", figure_tmax, "Largest maturity");
  figure->add_option("--step", figure_step, "Maturity spacing");
  figure->add_option("--out", figure_out, "Output path (default stdout)");

  // params
  auto* params = app.add_subcommand("params", "Print the effective parameter file");
  ModelFlags params_model;
  params_model.attach(params);
  std::string params_out;
  params->add_option("--out", params_out, "Output path (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*price) {
      const ModelParams p = price_model.resolve();
      double lp = 0.0;
      if (price_method == "cw") lp = cw_log_price(p, price_tau, price_rate);
      else if (price_method == "improved") lp = improved_log_price(p, price_tau, price_rate);
      else if (price_method == "cir") lp = cir_log_price(p, price_tau, price_rate);
      else if (price_method == "vasicek") lp = vasicek_log_price(p, price_tau, price_rate);
      else if (price_tau > 0.0) lp = pde_point(p, price_pde.resolve(), price_tau, price_rate);
      out << "lnP=" << fmt17(lp) << " P=" << fmt17(std::exp(lp)) << '\n';
      return kExitOk;
    }

    if (*table) {
      const ModelParams p = table_model.resolve();
      TableOptions opts;
      opts.pde = table_pde.resolve();
      opts.estimate_solver_error = !table_no_estimate;
      const auto id = static_cast<TableId>(table_id);
      const Table t = build_table(id, p, opts);
      {
        Sink sink(table_out, out);
        if (table_format == "text") write_text(sink.get(), t);
        else write_csv(sink.get(), t, table_stamp);
      }
      if (!table_check) return kExitOk;
      const auto checks = check_table(t, id);
      std::size_t passed = 0;
      const CellCheck* worst = nullptr;
      for (const auto& c : checks) {
        passed += c.pass ? 1 : 0;
        if (worst == nullptr || c.deviation / c.tolerance > worst->deviation / worst->tolerance) worst = &c;
      }
      std::ostream& report = table_out.empty() ? err : out;
      report << "check: " << passed << "/" << checks.size() << " cells within tolerance";
      if (worst != nullptr) {
        report << "; worst " << worst->column << " row " << worst->row << " value "
               << format_scientific(worst->value, 4) << " reference " << format_scientific(worst->golden, 4)
               << " deviation " << format_general(worst->deviation, 3) << " tolerance "
               << format_general(worst->tolerance, 3);
      }
      report << '\n';
      return passed == checks.size() ? kExitOk : kExitCheckFailed;
    }

    if (*eoc_cmd) {
      const auto taus = parse_double_list(eoc_taus);
      if (taus.size() < 2) throw Error(ErrorKind::InvalidConfig, "eoc needs at least two maturities");
      const MaturityGrid grid(taus);
      const NormKind kind = parse_norm(eoc_norm);
      std::vector<double> errs;
      std::string label = "given";
      if (!eoc_errors.empty()) {
        errs = parse_double_list(eoc_errors);
      } else {
        const auto names = split(eoc_pair, ',');
        if (names.size() != 2) throw Error(ErrorKind::ParseError, "--method-pair needs two names");
        const ModelParams p = eoc_model.resolve();
        const auto reports = error_reports(parse_method(trim(names[0])), parse_method(trim(names[1])),
                                           kind, p, default_norm_grid(), taus);
        for (const auto& r : reports) errs.push_back(r.value);
        label = reports.front().method_pair;
      }
      const auto rows = eoc(errs, grid);
      Sink sink(eoc_out, out);
      auto& o = sink.get();
      o << "# pair: " << label << "\n# norm: " << to_string(kind) << "\ntau,err,eoc\n";
      for (std::size_t i = 0; i < errs.size(); ++i) {
        o << format_shortest(taus[i]) << ',' << format_shortest(errs[i]) << ',';
        if (i < rows.size()) o << format_shortest(rows[i].eoc);
        o << '\n';
      }
      return kExitOk;
    }

    if (*pde) {
      const ModelParams p = pde_model.resolve();
      PdeConfig cfg = pde_flags.resolve();
      std::vector<double> taus = pde_taus.empty() ? std::vector<double>{cfg.t_final}
                                                  : parse_double_list(pde_taus);
      cfg.n_time = aligned_time_steps(taus, cfg.t_final, cfg.n_time);
      if (cfg.n_space < 9) err << "warning: n_space=" << cfg.n_space << " is too coarse to be trusted\n";
      const auto sol = solve(p, cfg, taus);
      {
        Sink sink(pde_out, out);
        write_csv(sink.get(), sol, pde_stamp);
      }
      const auto& d = sol.diagnostics;
      (pde_out.empty() ? err : out)
          << "steps=" << d.steps << " implicit_steps=" << d.implicit_steps
          << " max_solve_residual=" << format_scientific(d.max_solve_residual, 3)
          << " min_price=" << fmt17(d.min_price) << " max_price=" << fmt17(d.max_price) << '\n';
      return kExitOk;
    }

    if (*figure) {
      const ModelParams p = figure_model.resolve();
      const auto taus = figure_taus(figure_tmax, figure_step);
      Sink sink(figure_out, out);
      write_csv(sink.get(), figure1(p, taus));
      return kExitOk;
    }

    if (*params) {
      Sink sink(params_out, out);
      write_params(sink.get(), params_model.resolve());
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace bondkit::cli
