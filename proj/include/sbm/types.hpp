#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sbm {

using ComplexValue = std::complex<double>;

// Error taxonomy. The split matters for the CLI exit codes: DomainError and
// its children mean the request itself was invalid (exit 2), NumericalError
// means the computation failed (exit 3), IoError is exit 4.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error {
  using Error::Error;
};
struct PoleError : DomainError {
  using DomainError::DomainError;
};
struct DegenerateParameterError : DomainError {
  using DomainError::DomainError;
};
struct StepSizeError : DomainError {
  using DomainError::DomainError;
};
struct MismatchError : DomainError {
  using DomainError::DomainError;
};

struct NumericalError : Error {
  using Error::Error;
};
struct OverflowError : NumericalError {
  using NumericalError::NumericalError;
};
struct ConvergenceError : NumericalError {
  using NumericalError::NumericalError;
};
struct InstabilityError : NumericalError {
  using NumericalError::NumericalError;
};

struct IoError : Error {
  using Error::Error;
};

inline constexpr double infinite_beta = std::numeric_limits<double>::infinity();

// Physical inputs. All frequencies are measured in units of the tunneling
// splitting v, times in 1/v, beta in 1/v; beta == infinite_beta means T = 0.
struct BathParameters {
  double w0 = 1.0;
  double gamma = 1.0;
  double kappa = 0.0;
  double beta = 1.0;
  double v = 1.0;
  double p0 = 1.0;

  bool zero_temperature() const { return std::isinf(beta); }

  void validate() const {
    if (!(w0 > 0)) throw DomainError("BathParameters: w0 must be positive");
    if (!(gamma > 0)) throw DomainError("BathParameters: gamma must be positive");
    if (!(kappa >= 0)) throw DomainError("BathParameters: kappa must be non-negative");
    if (!(beta > 0)) throw DomainError("BathParameters: beta must be positive or infinite");
    if (!(v > 0)) throw DomainError("BathParameters: v must be positive");
    if (!(std::abs(p0) <= 1.0)) throw DomainError("BathParameters: |p0| must be <= 1");
  }
};

// Everything derived once per parameter set. delta is the complex oscillator
// splitting sqrt(w0^2 - gamma^2) (imaginary when overdamped), z = delta +
// i*gamma, er the reorganization energy kappa^2/w0, a/b/c the coefficients of
// the closed-form correlation function, f0sq the t=0 force autocorrelation
// <F(0)^2>, xi = er / (2 sqrt(f0sq)) the Markov shape parameter (0 when
// kappa = 0), beta_tilde = beta / (2 pi).
struct DerivedCoefficients {
  ComplexValue delta{};
  ComplexValue theta{};
  ComplexValue z{};
  double er = 0.0;
  ComplexValue a{};
  ComplexValue b{};
  double c = 0.0;
  double f0sq = 0.0;
  double xi = 0.0;
  double beta_tilde = 0.0;
};

struct CorrelationModel {
  enum class Variant {
    Full,
    F3,
    F3b,
    ShortTime,
    ZeroT,
    ZeroTCritical,
    MatsubaraReference,
  };

  Variant variant = Variant::Full;
  double matsubara_tolerance = 1e-12;  // only read by MatsubaraReference
};

const char* to_string(CorrelationModel::Variant v);
// Accepts the CLI spellings: full, f3, f3b, st, zerot, zerotcrit, matsubara.
CorrelationModel parse_model(const std::string& name);

struct SolverMeta {
  double t_f = 0.0;
  double h = 0.0;
  std::size_t n_steps = 0;
  // first time beyond which the kernel was treated as identically zero;
  // infinity when no truncation was applied
  double kernel_support = std::numeric_limits<double>::infinity();
  std::size_t store_stride = 1;
};

struct PopulationTrace {
  std::vector<double> times;
  std::vector<double> values;
  std::string model;  // "full", "f3", "f3b", "st", "matsubara" or "markov"
  double step = 0.0;
  SolverMeta meta;
};

struct KernelSpec {
  CorrelationModel model;
  double v = 1.0;
  // optional kernel samples on the solver grid (k -> K(k*h)); when present the
  // solver uses them instead of evaluating the analytic kernel
  std::optional<std::vector<double>> tabulation;
};

struct TfChoice {
  double t_f = 0.0;
  bool saturated = false;
};

struct SweepGrid {
  double w0 = 1.0;
  std::vector<double> gamma_axis;
  std::vector<double> kappa_axis;
  std::vector<double> beta_axis;
  double eps_fine = 0.01;
  double eps_coarse = 0.05;
  std::size_t samples = 1000;
};

std::vector<double> log_axis(double lo, double hi, std::size_t n);
// Default sweep: 20 log-spaced points per axis over [0.01, 100].
SweepGrid default_grid(double w0);

struct EpsRecord {
  std::optional<double> markov;
  std::optional<double> st;
  std::optional<double> f3b;
  std::optional<double> f3;
};

struct ValidityCell {
  double gamma = 0.0;
  double kappa = 0.0;
  double beta = 0.0;
  std::string label;  // Markov | ShortTime | F3b | F3 | FullRequired
  EpsRecord eps;
  double t_f = 0.0;
  std::vector<std::string> flags;
};

struct ValidityMap {
  SweepGrid grid;
  std::vector<ValidityCell> cells;  // row-major over (gamma, kappa, beta)
};

inline constexpr int map_schema_version = 1;

}  // namespace sbm
