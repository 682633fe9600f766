#include "qmod/json_io.hpp"

#include <fstream>
#include <iostream>

#include "qmod/errors.hpp"

namespace qmod {

Json series_to_json(const QSeries& s) {
  Json j;
  j["valuation"] = s.valuation();
  j["precision"] = s.precision();
  if (s.modulus())
    j["modulus"] = s.modulus()->get_si();  // moduli in use are small prime powers
  else
    j["modulus"] = nullptr;
  Json coeffs = Json::array();
  for (const auto& [e, c] : s.coeffs()) coeffs.push_back(Json::array({e, c.get_str()}));
  j["coeffs"] = std::move(coeffs);
  return j;
}

QSeries series_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("valuation") || !j.contains("precision") ||
      !j.contains("coeffs"))
    throw UsageError("series_from_json: expected {valuation, precision, modulus, coeffs}");
  long val = j.at("valuation").get<long>();
  long prec = j.at("precision").get<long>();
  std::optional<mpz_class> mod;
  if (j.contains("modulus") && !j.at("modulus").is_null()) {
    const auto& m = j.at("modulus");
    mod = m.is_string() ? mpz_class(m.get<std::string>()) : mpz_class(m.get<long>());
  }
  QSeries::Coeffs coeffs;
  long prev = 0;
  bool first = true;
  for (const auto& entry : j.at("coeffs")) {
    if (!entry.is_array() || entry.size() != 2)
      throw UsageError("series_from_json: coeffs entries must be [exponent, \"coeff\"]");
    long e = entry.at(0).get<long>();
    if (!first && e <= prev) throw UsageError("series_from_json: exponents must ascend");
    prev = e;
    first = false;
    if (e < val || e >= prec)
      throw UsageError("series_from_json: exponent " + std::to_string(e) +
                       " outside [valuation, precision)");
    mpz_class c = entry.at(1).is_string() ? mpz_class(entry.at(1).get<std::string>())
                                          : mpz_class(entry.at(1).get<long>());
    coeffs[e] = std::move(c);
  }
  return QSeries(std::move(coeffs), val, prec, std::move(mod));
}

Json filtration_to_json(const FiltrationResult& r) {
  Json j;
  j["omega2"] = r.omega2;
  Json witness = Json::array();
  for (const auto& w : r.witness)
    witness.push_back(Json{{"theta_exp", w.theta_exp}, {"f_exp", w.f_exp}, {"coeff", w.coeff}});
  j["witness"] = std::move(witness);
  j["checked_precision"] = r.checked_precision;
  j["candidate_chain"] = r.candidate_chain;
  return j;
}

Json props_report_to_json(const FiltrationPropsReport& r) {
  Json j;
  j["ell"] = r.ell;
  j["sample_count"] = r.sample_count;
  Json laws = Json::array();
  for (const auto& l : r.laws) {
    Json lj;
    lj["law"] = l.law;
    lj["samples"] = l.samples;
    lj["failures"] = l.failures;
    lj["vacuous"] = l.vacuous;
    lj["pass"] = l.pass();
    lj["counterexamples"] = l.counterexamples;
    laws.push_back(std::move(lj));
  }
  j["laws"] = std::move(laws);
  j["all_pass"] = r.all_pass();
  return j;
}

Json cycle_report_to_json(const CycleReport& r) {
  Json j;
  j["converged"] = r.converged;
  j["m_onset"] = r.m_onset;
  j["limit_pair_verified"] = r.limit_pair_verified;
  if (r.lambda_congruent)
    j["lambda_congruent"] = *r.lambda_congruent;
  else
    j["lambda_congruent"] = nullptr;
  j["coefficients_checked"] = r.coefficients_checked;
  j["windows"] = r.windows;
  return j;
}

Json square_class_report_to_json(const SquareClassReport& r) {
  Json j;
  j["classes"] = r.classes;
  j["constant"] = r.constant.get_str();
  j["precision_window"] = r.precision_window;
  j["stable"] = r.stable;
  return j;
}

Json distribution_report_to_json(const DistributionReport& r) {
  Json j;
  j["modulus"] = r.modulus;
  j["checkpoints"] = r.checkpoints;
  Json per_residue = Json::array();
  for (long res = 0; res < r.modulus; ++res) {
    Json e;
    e["residue"] = res;
    e["counts"] = r.counts[res];
    e["normalized"] = r.normalized[res];
    e["verdict"] = r.consistent[res] ? "consistent" : "inconsistent";
    per_residue.push_back(std::move(e));
  }
  j["residues"] = std::move(per_residue);
  j["note"] = r.surrogate;
  return j;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
  return j;
}

void dump_json(const Json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw UsageError("cannot write " + out_path);
  out << j.dump(2) << "\n";
}

}  // namespace qmod
