#pragma once

// JSON documents: input systems, count results, refine traces, sweep tables.
//
// Input system:
//   {"n": 2, "degrees": [1, 1],
//    "polys": [[{"J": [1, 0, 0], "c": 0.3}, {"J": [0, 1, 0], "c": -1}], ...]}
// An optional integer "expected_count" is accepted (oracle fixtures).
//
// Non-finite reals (an infinite distance or condition estimate) are written
// as null and read back as +infinity.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "realrays/alpha.hpp"
#include "realrays/counting.hpp"
#include "realrays/polynomial.hpp"

namespace realrays {

/// Throws InputError on malformed documents and invalid systems.
PolynomialSystem parse_system(std::string_view document);

/// Reads "expected_count" from a fixture document, if present.
std::optional<std::uint64_t> parse_expected_count(std::string_view document);

std::string system_to_json(const PolynomialSystem& f, std::optional<std::uint64_t> expected_count = {});

std::string result_to_json(const CountResult& result);

/// Reads back the fields written by result_to_json.  Throws InputError.
CountResult parse_result(std::string_view document);

struct RefineReport {
  RefineResult refine;
  bool certified_start = false;  // alpha_bar(start) < alpha_star
  double start_alpha_bar = 0.0;
};

std::string refine_to_json(const RefineReport& report);

struct SweepRow {
  int bits = 0;
  double unit = 0.0;
  std::optional<std::uint64_t> count;  // empty when the rounded run did not converge
  std::string status;
  bool agrees_with_exact = false;
  bool within_required_precision = false;
};

struct SweepTable {
  std::uint64_t exact_count = 0;
  double kappa_lower_bound = 0.0;
  double required_precision = 0.0;  // u_max with C = 1
  std::vector<SweepRow> rows;
};

std::string sweep_to_json(const SweepTable& table);

}  // namespace realrays
