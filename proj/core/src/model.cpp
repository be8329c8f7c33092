#include "bondkit/model.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "bondkit/csv.hpp"

namespace bondkit {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonPositiveAlpha: return "NonPositiveAlpha";
    case ErrorKind::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorKind::NegativeGamma: return "NegativeGamma";
    case ErrorKind::NonFiniteParameter: return "NonFiniteParameter";
    case ErrorKind::FellerViolated: return "FellerViolated";
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::GammaMismatch: return "GammaMismatch";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::UnsupportedGamma: return "UnsupportedGamma";
    case ErrorKind::UnstableSolve: return "UnstableSolve";
    case ErrorKind::TridiagonalSingular: return "TridiagonalSingular";
    case ErrorKind::NonPositiveError: return "NonPositiveError";
    case ErrorKind::ZeroMaturity: return "ZeroMaturity";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::MissingPdeSolution: return "MissingPdeSolution";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

ModelParams benchmark_params(double gamma) {
  return ModelParams{0.00315, -0.0555, 0.0894, gamma};
}

ModelParams validate_params(const ModelParams& p, bool require_feller) {
  if (!std::isfinite(p.alpha) || !std::isfinite(p.beta) || !std::isfinite(p.sigma) ||
      !std::isfinite(p.gamma)) {
    throw Error(ErrorKind::NonFiniteParameter, "all parameters must be finite");
  }
  if (!(p.alpha > 0.0)) throw Error(ErrorKind::NonPositiveAlpha, "alpha must be > 0");
  if (!(p.sigma > 0.0)) throw Error(ErrorKind::NonPositiveSigma, "sigma must be > 0");
  if (p.gamma < 0.0) throw Error(ErrorKind::NegativeGamma, "gamma must be >= 0");
  if (require_feller && p.gamma == 0.5 && 2.0 * p.alpha < p.sigma * p.sigma) {
    throw Error(ErrorKind::FellerViolated, "2*alpha >= sigma^2 required (2*alpha = " +
                                               format_shortest(2.0 * p.alpha) + ", sigma^2 = " +
                                               format_shortest(p.sigma * p.sigma) + ")");
  }
  return p;
}

RateGrid::RateGrid(double r_min, double r_max, std::size_t n_points)
    : r_min_(r_min), r_max_(r_max), n_(n_points), h_(0.0) {
  if (!(r_min >= 0.0) || !(r_max > r_min) || !std::isfinite(r_max)) {
    throw Error(ErrorKind::InvalidGrid, "rate grid needs 0 <= r_min < r_max");
  }
  if (n_points < 2) throw Error(ErrorKind::InvalidGrid, "rate grid needs at least 2 points");
  h_ = (r_max - r_min) / static_cast<double>(n_points - 1);
}

std::vector<double> RateGrid::points() const {
  std::vector<double> pts(n_);
  for (std::size_t i = 0; i < n_; ++i) pts[i] = (*this)[i];
  return pts;
}

RateGrid default_norm_grid() { return RateGrid(0.0, 0.15, 1501); }

MaturityGrid::MaturityGrid(std::vector<double> taus) : taus_(std::move(taus)) {
  if (taus_.empty()) throw Error(ErrorKind::InvalidGrid, "maturity grid is empty");
  for (double t : taus_) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw Error(ErrorKind::InvalidGrid, "maturities must be finite and > 0");
    }
  }
  if (taus_.size() > 1) {
    const bool increasing = taus_[1] > taus_[0];
    for (std::size_t i = 1; i < taus_.size(); ++i) {
      const bool ok = increasing ? taus_[i] > taus_[i - 1] : taus_[i] < taus_[i - 1];
      if (!ok) throw Error(ErrorKind::InvalidGrid, "maturities must be strictly monotone");
    }
  }
}

LogPriceCurve::LogPriceCurve(RateGrid g, double t, std::vector<double> v)
    : grid(g), tau(t), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw Error(ErrorKind::GridMismatch, "curve length does not match its grid");
  }
  for (double x : values) {
    if (!std::isfinite(x)) throw Error(ErrorKind::DomainError, "non-finite log-price");
    if (tau == 0.0 && x != 0.0) {
      throw Error(ErrorKind::DomainError, "log-price at tau = 0 must be exactly 0");
    }
  }
}

ModelParams parse_params(std::istream& in, const ModelParams& defaults) {
  ModelParams p = defaults;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(body.substr(0, eq));
    const auto value = parse_double(body.substr(eq + 1));
    if (!value) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": bad number");
    }
    if (key == "alpha") p.alpha = *value;
    else if (key == "beta") p.beta = *value;
    else if (key == "sigma") p.sigma = *value;
    else if (key == "gamma") p.gamma = *value;
    else {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
  }
  return p;
}

ModelParams load_params(const std::filesystem::path& path, const ModelParams& defaults) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  return parse_params(in, defaults);
}

void write_params(std::ostream& out, const ModelParams& p) {
  out << "alpha = " << format_shortest(p.alpha) << '\n'
      << "beta = " << format_shortest(p.beta) << '\n'
      << "sigma = " << format_shortest(p.sigma) << '\n'
      << "gamma = " << format_shortest(p.gamma) << '\n';
}

}  // namespace bondkit
