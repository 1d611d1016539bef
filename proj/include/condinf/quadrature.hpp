#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace condinf {

//! Options for scanning and integrating exp(logf) over an interval.
struct ScanOptions
{
  //! spacing of the scan near the centre
  double step = 0.1;
  //! number of evenly spaced steps on each side before the spacing grows
  std::size_t linear_steps = 200;
  //! geometric growth of the spacing beyond linear_steps
  double growth = 1.25;
  //! a side ends once logf stays this far below the running maximum
  double drop = 40.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  //! the integrand may be unbounded at a finite limit
  bool singular_lower = false;
  bool singular_upper = false;
  //! relative tolerance of each piece
  double rel_tol = 1e-10;
  //! cap on scan nodes per side
  std::size_t max_nodes = 20000;
  //! consecutive scan nodes merged into one quadrature piece
  std::size_t nodes_per_piece = 16;
  //! recursion limit of the adaptive Gauss-Kronrod pieces
  unsigned max_depth = 12;
};

//! Sorted scan nodes with their log values. Nodes placed exactly on a
//! finite limit carry NaN: their value is never evaluated.
struct ScanGrid
{
  std::vector<double> x;
  std::vector<double> logf;
  double max_log = -std::numeric_limits<double>::infinity();
  double argmax = 0.0;
};

using LogFunction = std::function<double(double)>;

//! Walks outward from `centre` until logf has dropped `drop` below its
//! maximum on both sides (or a limit is met). Throws IntegrationFailure
//! when a side does not decay within max_nodes, and when logf is -inf at
//! every node.
ScanGrid scan_log_function(const LogFunction& logf, double centre, const ScanOptions& opts);

//! int weight(x) exp(logf(x) - grid.max_log) dx over the scanned range,
//! piece by piece between scan nodes (adaptive Gauss-Kronrod; tanh-sinh on
//! a piece touching a singular limit). Pieces whose nodes are all
//! negligible are skipped.
double integrate_scaled(const LogFunction& logf,
                        const std::function<double(double)>& weight,
                        const ScanGrid& grid,
                        const ScanOptions& opts);

//! log int exp(logf(x)) dx.
double log_integrate(const LogFunction& logf, double centre, const ScanOptions& opts);

//! log(exp(a) + exp(b))
double log_add(double a, double b);

} // namespace condinf
