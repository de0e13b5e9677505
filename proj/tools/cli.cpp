#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "realrays/alpha.hpp"
#include "realrays/arithmetic.hpp"
#include "realrays/counting.hpp"
#include "realrays/io.hpp"

namespace realrays::cli {

namespace {

using Json = nlohmann::ordered_json;

CommandOutput input_error(const std::string& message) {
  return {kExitInputError, {}, "error: " + message + "\n"};
}

ArithmeticMode mode_of(const RunConfig& config) {
  return config.mode == Mode::Rounded ? ArithmeticMode::rounded(config.bits) : ArithmeticMode::exact();
}

CountOptions count_options(const RunConfig& config) {
  CountOptions opts;
  opts.mode = mode_of(config);
  opts.max_iterations = config.max_iterations;
  opts.engine.workers = config.workers;
  opts.engine.grid_cap = config.grid_cap;
  return opts;
}

std::string trace_line(const IterationReport& r) {
  Json j;
  j["k"] = r.k;
  j["grid_size"] = r.grid_size;
  j["vertex_count"] = r.vertex_count;
  j["component_count"] = r.component_count;
  j["condition_i_pass"] = r.condition_i_pass;
  j["condition_ii_pass"] = r.condition_ii_pass;
  j["min_intercomponent_distance"] =
      std::isfinite(r.min_intercomponent_distance) ? Json(r.min_intercomponent_distance) : Json(nullptr);
  j["min_excluded_fsup"] = std::isfinite(r.min_excluded_fsup) ? Json(r.min_excluded_fsup) : Json(nullptr);
  return "trace: " + j.dump() + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_real(double v) {
  std::ostringstream ss;
  ss << std::setprecision(6) << v;
  return ss.str();
}

}  // namespace

void validate(const RunConfig& config) {
  if (config.mode == Mode::Rounded && (config.bits < 2 || config.bits > 53)) {
    throw std::invalid_argument("--bits must lie in [2, 53], got " + std::to_string(config.bits));
  }
  if (config.max_iterations < 1) throw std::invalid_argument("--max-iter must be >= 1");
  if (config.workers < 1) throw std::invalid_argument("--workers must be >= 1");
  if (config.grid_cap < 1) throw std::invalid_argument("--grid-cap must be >= 1");
}

CommandOutput cmd_count(const RunConfig& config, std::string_view input) {
  try {
    validate(config);
    const PolynomialSystem f = parse_system(input);
    CommandOutput out;
    CountOptions opts = count_options(config);
    if (config.trace) opts.on_iteration = [&](const IterationReport& r) { out.diagnostics += trace_line(r); };
    const CountResult result = count_roots(f, opts);
    out.document = result_to_json(result);
    if (result.status != CountStatus::Converged) {
      out.exit_code = kExitNotConverged;
      out.diagnostics += result.grid_cap_hit ? "refinement stopped: next level exceeds the grid cap\n"
                                             : "refinement stopped: iteration cap reached\n";
    }
    return out;
  } catch (const InputError& e) {
    return input_error(e.what());
  } catch (const std::invalid_argument& e) {
    return input_error(e.what());
  } catch (const GridTooLarge& e) {
    return input_error(e.what());
  }
}

CommandOutput cmd_refine(const RunConfig& config, std::string_view input, std::span<const double> start,
                         int max_steps, double beta_tol) {
  try {
    validate(config);
    if (max_steps < 0) throw std::invalid_argument("--max-steps must be >= 0");
    if (!(beta_tol >= 0.0)) throw std::invalid_argument("--beta-tol must be >= 0");
    const PolynomialSystem f = parse_system(input);
    if (static_cast<int>(start.size()) != f.dimension()) {
      throw std::invalid_argument("start point needs " + std::to_string(f.dimension()) + " coordinates, got " +
                                  std::to_string(start.size()));
    }
    double norm2 = 0.0;
    for (double c : start) norm2 += c * c;
    if (!(std::abs(std::sqrt(norm2) - 1.0) <= 1e-6)) {
      throw std::invalid_argument("start point is not on the unit sphere (norm " +
                                  format_real(std::sqrt(norm2)) + ")");
    }
    const PolynomialSystem unit = f.normalized();
    const SpherePoint x = SpherePoint::normalize(start);

    CommandOutput out;
    RefineReport report;
    report.start_alpha_bar = point_data(unit, x).alpha_bar;
    report.certified_start = report.start_alpha_bar < theory_constants().alpha_star;
    if (!report.certified_start) {
      out.diagnostics += "warning: uncertified start (alpha_bar = " + format_real(report.start_alpha_bar) + ")\n";
    }
    report.refine = newton_refine(unit, x, max_steps, beta_tol);
    if (report.refine.singular) {
      out.diagnostics += "singular Jacobian after " + std::to_string(report.refine.beta_trace.size()) + " steps\n";
    }
    out.document = refine_to_json(report);
    out.exit_code = report.refine.converged ? kExitOk : kExitNotConverged;
    return out;
  } catch (const InputError& e) {
    return input_error(e.what());
  } catch (const std::invalid_argument& e) {
    return input_error(e.what());
  }
}

CommandOutput cmd_kappa(const RunConfig& config, std::string_view input, int level) {
  try {
    validate(config);
    if (level < 1) throw std::invalid_argument("--level must be >= 1");
    const PolynomialSystem f = parse_system(input);
    EngineOptions engine;
    engine.workers = config.workers;
    engine.grid_cap = config.grid_cap;
    const CubeGridSpec spec{f.n(), level};
    const double kappa = estimate_kappa(f, spec, engine);
    Json doc;
    doc["level"] = level;
    doc["eta"] = spec.eta();
    doc["grid_size"] = spec.point_count();
    doc["kappa_lower_bound"] = std::isfinite(kappa) ? Json(kappa) : Json(nullptr);
    return {kExitOk, doc.dump(2) + "\n", {}};
  } catch (const InputError& e) {
    return input_error(e.what());
  } catch (const std::invalid_argument& e) {
    return input_error(e.what());
  } catch (const GridTooLarge& e) {
    return input_error(e.what());
  }
}

CommandOutput cmd_sweep(const RunConfig& config, std::string_view input, const std::vector<int>& bits) {
  try {
    validate(config);
    for (int t : bits) {
      if (t < 2 || t > 53) throw std::invalid_argument("bit counts must lie in [2, 53], got " + std::to_string(t));
    }
    const PolynomialSystem f = parse_system(input);
    CommandOutput out;
    SweepTable table;
    if (bits.empty()) {
      out.document = sweep_to_json(table);
      return out;
    }

    RunConfig exact_config = config;
    exact_config.mode = Mode::Exact;
    const CountResult exact = count_roots(f, count_options(exact_config));
    if (exact.status != CountStatus::Converged) {
      out.exit_code = kExitNotConverged;
      out.diagnostics = "error: exact mode did not converge; no reference count for the sweep\n";
      return out;
    }
    table.exact_count = exact.count;
    table.kappa_lower_bound = exact.kappa_lower_bound;
    table.required_precision = required_precision(f.n(), f.max_degree(), f.max_terms(), exact.kappa_lower_bound);

    const int level_budget =
        std::min(config.max_iterations, static_cast<int>(exact.iterations.size()) + kSweepExtraLevels);
    for (int t : bits) {
      RunConfig rc = config;
      rc.mode = Mode::Rounded;
      rc.bits = t;
      rc.max_iterations = level_budget;
      SweepRow row;
      row.bits = t;
      row.unit = PrecisionContext(t).unit();
      row.within_required_precision = row.unit <= table.required_precision;
      try {
        const CountResult r = count_roots(f, count_options(rc));
        row.status = to_string(r.status);
        if (r.status == CountStatus::Converged) row.count = r.count;
      } catch (const std::logic_error& e) {
        // Rounding broke the antipodal pairing of components.
        row.status = "inconsistent";
      }
      row.agrees_with_exact = row.count && *row.count == table.exact_count;
      if (!row.agrees_with_exact) {
        out.diagnostics += "bits " + std::to_string(t) + ": " +
                           (row.count ? "count " + std::to_string(*row.count) : row.status) +
                           " disagrees with exact count " + std::to_string(table.exact_count) + "\n";
      }
      table.rows.push_back(std::move(row));
    }
    out.document = sweep_to_json(table);
    return out;
  } catch (const InputError& e) {
    return input_error(e.what());
  } catch (const std::invalid_argument& e) {
    return input_error(e.what());
  } catch (const GridTooLarge& e) {
    return input_error(e.what());
  }
}

std::vector<double> parse_point(std::string_view text) {
  std::vector<double> out;
  std::istringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: \"" + item + "\"");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw std::invalid_argument("not a number: \"" + item + "\"");
    }
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty point");
  return out;
}

std::vector<int> parse_bits(std::string_view text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(pos, end - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    int v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw std::invalid_argument("not an integer bit count: \"" + std::string(item) + "\"");
    }
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Count and certify the real zero rays of homogeneous polynomial systems"};
  app.require_subcommand(1);

  RunConfig config;
  std::string input_path;
  std::string output_path;
  std::string mode = "exact";

  auto* count = app.add_subcommand("count", "count the real zero rays");
  count->add_option("--input", input_path, "input system document")->required();
  count->add_option("--mode", mode, "exact or rounded")->check(CLI::IsMember({"exact", "rounded"}));
  count->add_option("--bits", config.bits, "significand bits in rounded mode");
  count->add_option("--max-iter", config.max_iterations, "maximum refinement levels");
  count->add_option("--workers", config.workers, "worker threads");
  count->add_option("--grid-cap", config.grid_cap, "maximum grid points per level");
  count->add_option("--output", output_path, "write the result document here instead of stdout");
  count->add_flag("--trace", config.trace, "print one report per level on stderr");

  std::string start_text;
  int max_steps = 12;
  double beta_tol = 1e-13;
  auto* refine = app.add_subcommand("refine", "run Newton's method from a start point");
  refine->add_option("--input", input_path, "input system document")->required();
  refine->add_option("--start", start_text, "comma-separated start point")->required();
  refine->add_option("--max-steps", max_steps, "maximum Newton steps");
  refine->add_option("--beta-tol", beta_tol, "stop once the step length is below this");
  refine->add_option("--output", output_path, "write the document here instead of stdout");

  int level = 0;
  auto* kappa = app.add_subcommand("kappa", "lower bound on the condition number from one grid level");
  kappa->add_option("--input", input_path, "input system document")->required();
  kappa->add_option("--level", level, "grid level k (mesh 2^-k)")->required();
  kappa->add_option("--workers", config.workers, "worker threads");
  kappa->add_option("--grid-cap", config.grid_cap, "maximum grid points");
  kappa->add_option("--output", output_path, "write the document here instead of stdout");

  std::string bits_text;
  auto* sweep = app.add_subcommand("sweep", "compare rounded-mode counts across precisions");
  sweep->add_option("--input", input_path, "input system document")->required();
  sweep->add_option("--bits", bits_text, "comma-separated significand bit counts")->required();
  sweep->add_option("--max-iter", config.max_iterations, "maximum refinement levels");
  sweep->add_option("--workers", config.workers, "worker threads");
  sweep->add_option("--grid-cap", config.grid_cap, "maximum grid points per level");
  sweep->add_option("--output", output_path, "write the document here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }
  config.mode = mode == "rounded" ? Mode::Rounded : Mode::Exact;

  std::string input;
  try {
    input = read_file(input_path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  CommandOutput result;
  try {
    if (count->parsed()) {
      result = cmd_count(config, input);
    } else if (refine->parsed()) {
      result = cmd_refine(config, input, parse_point(start_text), max_steps, beta_tol);
    } else if (kappa->parsed()) {
      result = cmd_kappa(config, input, level);
    } else {
      result = cmd_sweep(config, input, parse_bits(bits_text));
    }
  } catch (const std::invalid_argument& e) {
    result = input_error(e.what());
  } catch (const std::exception& e) {
    result = {kExitInputError, {}, std::string("error: ") + e.what() + "\n"};
  }

  err << result.diagnostics;
  if (!result.document.empty()) {
    if (output_path.empty()) {
      out << result.document;
    } else {
      std::ofstream file(output_path, std::ios::binary);
      file << result.document;
      if (!file) {
        err << "error: cannot write " << output_path << "\n";
        return kExitInputError;
      }
    }
  }
  return result.exit_code;
}

}  // namespace realrays::cli
