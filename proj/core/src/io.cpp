#include "realrays/io.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"

namespace realrays {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kIndent = 2;

Json real(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double real_from(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

Json parse_json(std::string_view document) {
  try {
    return Json::parse(document.begin(), document.end());
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed document: ") + e.what());
  }
}

const Json& field(const Json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw InputError(std::string("missing field \"") + name + "\"");
  }
  return obj.at(name);
}

template <class T>
T get_as(const Json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const Json::exception&) {
    throw InputError("field " + what + " has the wrong type");
  }
}

Json point_array(const std::vector<double>& v) {
  Json a = Json::array();
  for (double c : v) a.push_back(real(c));
  return a;
}

}  // namespace

PolynomialSystem parse_system(std::string_view document) {
  const Json doc = parse_json(document);
  if (!doc.is_object()) throw InputError("system document must be a JSON object");
  const Json& jn = field(doc, "n");
  if (!jn.is_number_integer()) throw InputError("field \"n\" must be an integer");
  const auto n = jn.get<long long>();
  if (n < 1) throw InputError("n must be >= 1, got " + std::to_string(n));

  const Json& jd = field(doc, "degrees");
  const Json& jp = field(doc, "polys");
  if (!jd.is_array() || !jp.is_array()) throw InputError("\"degrees\" and \"polys\" must be arrays");
  if (static_cast<long long>(jd.size()) != n || static_cast<long long>(jp.size()) != n) {
    throw InputError("expected " + std::to_string(n) + " degrees and polynomials, got " +
                     std::to_string(jd.size()) + " and " + std::to_string(jp.size()));
  }

  std::vector<int> degrees;
  for (const auto& d : jd) {
    if (!d.is_number_integer()) throw InputError("degrees must be integers");
    degrees.push_back(d.get<int>());
  }

  const int dim = static_cast<int>(n) + 1;
  std::vector<Polynomial> polys;
  for (std::size_t i = 0; i < jp.size(); ++i) {
    const Json& terms = jp[i];
    if (!terms.is_array()) throw InputError("polys[" + std::to_string(i) + "] must be an array of monomials");
    std::vector<Monomial> monos;
    for (const auto& t : terms) {
      const Json& jj = field(t, "J");
      const Json& jc = field(t, "c");
      if (!jj.is_array()) throw InputError("monomial exponent \"J\" must be an array");
      if (!jc.is_number()) throw InputError("monomial coefficient \"c\" must be a number");
      Monomial m;
      for (const auto& e : jj) {
        if (!e.is_number_integer()) throw InputError("exponents must be integers");
        m.exponents.push_back(e.get<int>());
      }
      m.coefficient = jc.get<double>();
      monos.push_back(std::move(m));
    }
    if (degrees[i] < 1) throw InputError("degree of polynomial " + std::to_string(i) + " must be positive");
    try {
      polys.emplace_back(dim, degrees[i], std::move(monos));
    } catch (const InputError& e) {
      throw InputError("polynomial " + std::to_string(i) + ": " + e.what());
    }
  }
  return PolynomialSystem(std::move(degrees), std::move(polys));
}

std::optional<std::uint64_t> parse_expected_count(std::string_view document) {
  const Json doc = parse_json(document);
  if (!doc.is_object() || !doc.contains("expected_count")) return std::nullopt;
  return get_as<std::uint64_t>(doc.at("expected_count"), "\"expected_count\"");
}

std::string system_to_json(const PolynomialSystem& f, std::optional<std::uint64_t> expected_count) {
  Json doc;
  doc["n"] = f.n();
  doc["degrees"] = f.degrees();
  Json polys = Json::array();
  for (const auto& p : f.polys()) {
    Json terms = Json::array();
    for (const auto& m : p.terms()) {
      Json t;
      t["J"] = m.exponents;
      t["c"] = m.coefficient;
      terms.push_back(std::move(t));
    }
    polys.push_back(std::move(terms));
  }
  doc["polys"] = std::move(polys);
  if (expected_count) doc["expected_count"] = *expected_count;
  return doc.dump(kIndent) + "\n";
}

std::string result_to_json(const CountResult& result) {
  Json doc;
  // No count is reported unless the refinement halted.
  doc["count"] = result.status == CountStatus::Converged ? Json(result.count) : Json(nullptr);
  doc["status"] = to_string(result.status);
  Json its = Json::array();
  for (const auto& r : result.iterations) {
    Json j;
    j["k"] = r.k;
    j["eta"] = r.eta;
    j["grid_size"] = r.grid_size;
    j["vertex_count"] = r.vertex_count;
    j["component_count"] = r.component_count;
    j["condition_i_pass"] = r.condition_i_pass;
    j["condition_ii_pass"] = r.condition_ii_pass;
    j["min_intercomponent_distance"] = real(r.min_intercomponent_distance);
    j["min_excluded_fsup"] = real(r.min_excluded_fsup);
    its.push_back(std::move(j));
  }
  doc["iterations"] = std::move(its);
  Json comps = Json::array();
  for (const auto& c : result.components) {
    Json j;
    j["representative"] = point_array(c.representative);
    j["zero"] = point_array(c.zero);
    j["beta"] = real(c.beta);
    comps.push_back(std::move(j));
  }
  doc["components"] = std::move(comps);
  doc["kappa_lower_bound"] = real(result.kappa_lower_bound);
  doc["original_norm"] = real(result.original_norm);
  return doc.dump(kIndent) + "\n";
}

CountResult parse_result(std::string_view document) {
  const Json doc = parse_json(document);
  CountResult r;
  try {
    const auto& count = doc.at("count");
    r.count = count.is_null() ? 0 : count.get<std::uint64_t>();
    const auto status = doc.at("status").get<std::string>();
    if (status == "converged") {
      r.status = CountStatus::Converged;
    } else if (status == "iteration-cap-reached") {
      r.status = CountStatus::IterationCapReached;
    } else {
      throw InputError("unknown status \"" + status + "\"");
    }
    for (const auto& j : doc.at("iterations")) {
      IterationReport it;
      it.k = j.at("k").get<int>();
      it.eta = j.at("eta").get<double>();
      it.grid_size = j.at("grid_size").get<std::uint64_t>();
      it.vertex_count = j.at("vertex_count").get<std::uint64_t>();
      it.component_count = j.at("component_count").get<int>();
      it.condition_i_pass = j.at("condition_i_pass").get<bool>();
      it.condition_ii_pass = j.at("condition_ii_pass").get<bool>();
      it.min_intercomponent_distance = real_from(j.at("min_intercomponent_distance"));
      it.min_excluded_fsup = real_from(j.at("min_excluded_fsup"));
      r.iterations.push_back(it);
    }
    for (const auto& j : doc.at("components")) {
      ComponentZero c;
      for (const auto& v : j.at("representative")) c.representative.push_back(real_from(v));
      for (const auto& v : j.at("zero")) c.zero.push_back(real_from(v));
      c.beta = real_from(j.at("beta"));
      r.components.push_back(std::move(c));
    }
    r.kappa_lower_bound = real_from(doc.at("kappa_lower_bound"));
    r.original_norm = real_from(doc.at("original_norm"));
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed result document: ") + e.what());
  }
  return r;
}

std::string refine_to_json(const RefineReport& report) {
  Json doc;
  doc["start_alpha_bar"] = real(report.start_alpha_bar);
  doc["certified_start"] = report.certified_start;
  doc["steps"] = report.refine.steps;
  Json trace = Json::array();
  for (double b : report.refine.beta_trace) trace.push_back(real(b));
  doc["beta_trace"] = std::move(trace);
  doc["final_point"] = point_array(report.refine.point.coords());
  doc["converged"] = report.refine.converged;
  doc["singular_jacobian"] = report.refine.singular;
  doc["envelope"] = report.refine.envelope_satisfied ? "satisfied" : "violated";
  return doc.dump(kIndent) + "\n";
}

std::string sweep_to_json(const SweepTable& table) {
  Json doc;
  doc["exact_count"] = table.exact_count;
  doc["kappa_lower_bound"] = real(table.kappa_lower_bound);
  doc["required_precision"] = real(table.required_precision);
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    Json j;
    j["bits"] = r.bits;
    j["u"] = r.unit;
    j["count"] = r.count ? Json(*r.count) : Json(nullptr);
    j["status"] = r.status;
    j["agrees_with_exact"] = r.agrees_with_exact;
    j["within_required_precision"] = r.within_required_precision;
    rows.push_back(std::move(j));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(kIndent) + "\n";
}

}  // namespace realrays
