#pragma once

// Grid-refinement counter for the real zero rays of a square homogeneous
// system.  At mesh eta = 2^-k the cube grid is projected to S^n; the points
// whose alpha test passes become vertices of a proximity graph (edges join
// overlapping certification caps).  The refinement stops when
//   (i)  vertices of distinct components are far apart, and
//   (ii) every rejected grid point has a large residual,
// at which point components biject with zeros and the ray count is r/2.
//
// Two arithmetic modes share one code path: `exact` uses host doubles with
// the alpha_star test; `rounded` emulates a t-bit significand and uses the
// relaxed finite-precision tests and thresholds.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "realrays/alpha.hpp"
#include "realrays/arithmetic.hpp"
#include "realrays/polynomial.hpp"
#include "realrays/sphere.hpp"

namespace realrays {

class ArithmeticMode {
 public:
  static ArithmeticMode exact() { return ArithmeticMode(); }
  static ArithmeticMode rounded(int bits) { return ArithmeticMode(PrecisionContext(bits)); }

  bool is_rounded() const noexcept { return ctx_.has_value(); }
  /// Only valid in rounded mode.
  const PrecisionContext& context() const { return ctx_.value(); }
  std::string name() const;

 private:
  ArithmeticMode() = default;
  explicit ArithmeticMode(PrecisionContext ctx) : ctx_(ctx) {}
  std::optional<PrecisionContext> ctx_;
};

struct EngineOptions {
  int workers = 1;
  std::uint64_t grid_cap = kDefaultGridCap;
};

struct Vertex {
  std::uint64_t grid_index = 0;
  std::vector<double> x;  // projected grid point, in the mode's arithmetic
  double radius = 0.0;    // certification cap radius
  double f_sup = 0.0;
  double sigma_min = 0.0;
};

struct ProximityGraph {
  CubeGridSpec spec;
  std::uint64_t grid_size = 0;
  std::vector<Vertex> vertices;  // sorted by grid index; antipodally closed
  /// A spanning forest of the proximity graph (pairs i < j): its components
  /// are those of the full graph, without storing every overlapping pair.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  /// Smallest ||f(x)||_inf over grid points that failed the test (+inf if none).
  double min_excluded_fsup = std::numeric_limits<double>::infinity();
  std::uint64_t excluded_count = 0;
  /// max over the grid of min{mu_norm, 1/||f(x)||_inf}.
  double kappa_hat = 0.0;
};

struct ComponentSet {
  std::vector<int> component_of;     // per vertex
  std::vector<int> representatives;  // smallest vertex index of each component, ascending
  int count() const noexcept { return static_cast<int>(representatives.size()); }
};

struct HaltCheck {
  bool condition_i = true;
  bool condition_ii = true;
  double distance_threshold = 0.0;
  double residual_threshold = 0.0;
  double min_intercomponent_distance = std::numeric_limits<double>::infinity();
  double min_excluded_fsup = std::numeric_limits<double>::infinity();

  bool halts() const noexcept { return condition_i && condition_ii; }
};

/// Expects f normalized.  Throws GridTooLarge past options.grid_cap.
/// `kappa_floor` must not exceed the grid maximum of min{mu_norm, 1/f_sup}
/// (e.g. the value from a coarser, nested level); it only lets points that
/// cannot matter skip the singular value computation.
ProximityGraph build_graph(const PolynomialSystem& f, const CubeGridSpec& spec, const ArithmeticMode& mode,
                           const EngineOptions& options = {}, double kappa_floor = 0.0);

ComponentSet connected_components(const ProximityGraph& graph);

HaltCheck check_halt(const ProximityGraph& graph, const ComponentSet& components, const ArithmeticMode& mode,
                     int max_degree);

/// Starting mesh: the largest 2^-k (k >= 1) not above 2 sqrt2 / (pi sqrt(n+1)).
int initial_level(int n);

enum class CountStatus { Converged, IterationCapReached };
std::string to_string(CountStatus status);

struct IterationReport {
  int k = 0;
  double eta = 0.0;
  std::uint64_t grid_size = 0;
  std::uint64_t vertex_count = 0;
  int component_count = 0;
  bool condition_i_pass = false;
  bool condition_ii_pass = false;
  double min_intercomponent_distance = std::numeric_limits<double>::infinity();
  double min_excluded_fsup = std::numeric_limits<double>::infinity();
};

struct ComponentZero {
  std::vector<double> representative;
  std::vector<double> zero;
  double beta = 0.0;  // last recorded Newton step length
  std::vector<double> beta_trace;
  bool envelope_satisfied = true;
  bool refined = true;  // false when Newton hit a singular Jacobian
};

struct CountResult {
  std::uint64_t count = 0;
  CountStatus status = CountStatus::IterationCapReached;
  std::vector<IterationReport> iterations;
  std::vector<ComponentZero> components;
  double kappa_lower_bound = 0.0;
  double original_norm = 0.0;
  /// Set when refinement stopped because the next level exceeded the grid cap.
  bool grid_cap_hit = false;
};

struct CountOptions {
  ArithmeticMode mode = ArithmeticMode::exact();
  int max_iterations = 24;
  EngineOptions engine;
  int refine_max_steps = 12;
  double refine_beta_tol = 1e-13;
  std::function<void(const IterationReport&)> on_iteration;
};

/// Runs the refinement loop on f (normalized internally).  Throws
/// std::logic_error on an odd component count at halt, and GridTooLarge if
/// even the first level exceeds the cap.
CountResult count_roots(const PolynomialSystem& f, const CountOptions& options = {});

/// Lower bound on kappa(f) from the level-k grid (exact arithmetic).
double estimate_kappa(const PolynomialSystem& f, const CubeGridSpec& spec, const EngineOptions& options = {});

}  // namespace realrays
