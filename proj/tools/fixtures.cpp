// Writes the oracle test systems as input documents with "expected_count".
//   realrays_fixtures <directory>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "realrays/io.hpp"
#include "realrays/oracle.hpp"

namespace {

using realrays::Monomial;
using realrays::Polynomial;
using realrays::PolynomialSystem;

PolynomialSystem binary(int degree, std::vector<Monomial> terms) {
  std::vector<Polynomial> polys;
  polys.emplace_back(2, degree, std::move(terms));
  return PolynomialSystem({degree}, std::move(polys));
}

bool write(const std::filesystem::path& dir, const std::string& name, const PolynomialSystem& f,
           std::optional<std::uint64_t> count) {
  std::ofstream out(dir / (name + ".json"), std::ios::binary);
  out << realrays::system_to_json(f, count);
  if (!out) {
    std::cerr << "error: cannot write " << (dir / (name + ".json")).string() << "\n";
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: realrays_fixtures <directory>\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);

  bool ok = true;
  ok &= write(dir, "circle", binary(2, {{{2, 0}, 1.0}, {{0, 2}, 1.0}}), 0);
  ok &= write(dir, "twolines", binary(2, {{{2, 0}, -0.25}, {{0, 2}, 1.0}}), 2);
  ok &= write(dir, "double_root", binary(2, {{{0, 2}, 1.0}}), std::nullopt);
  ok &= write(dir, "line", binary(1, {{{1, 0}, -0.1}, {{0, 1}, 1.0}}), 1);
  ok &= write(dir, "axis", binary(1, {{{0, 1}, 1.0}}), 1);
  for (const auto& c : realrays::oracle::univariate_suite()) ok &= write(dir, c.name, c.system, c.expected_count);
  for (const auto& c : realrays::oracle::multivariate_suite()) ok &= write(dir, c.name, c.system, c.expected_count);
  return ok ? 0 : 1;
}
