// Command-line front door: build q-expansions, apply operators, compute
// filtrations, run theta-cycle detection, tabulate traces of singular
// moduli, emit residue-distribution reports, and run the verification suite.
//
// Output contract: a single JSON document on stdout (or CSV with
// --format csv for tabular data); diagnostics on stderr. Exit codes:
// 0 success, 1 check failure, 2 usage error, 3 precision error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qmod/distribution.hpp"
#include "qmod/errors.hpp"
#include "qmod/filtration.hpp"
#include "qmod/forms.hpp"
#include "qmod/json_io.hpp"
#include "qmod/numtheory.hpp"
#include "qmod/operators.hpp"
#include "qmod/singular_moduli.hpp"
#include "qmod/theta_cycle.hpp"
#include "qmod/verify.hpp"

namespace {

using qmod::Json;

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw qmod::UsageError("cannot write " + out_path);
  out << text;
}

qmod::QSeries load_series(const std::string& path) {
  return qmod::series_from_json(qmod::load_json_file(path));
}

std::optional<mpz_class> optional_modulus(long mod_flag) {
  if (mod_flag == 0) return std::nullopt;
  if (mod_flag < 2) throw qmod::UsageError("--mod must be >= 2");
  return mpz_class(mod_flag);
}

qmod::NamedForm build_form(const std::string& form, long prec,
                           const std::optional<mpz_class>& mod) {
  if (form == "theta") return qmod::theta(prec, mod);
  if (form == "F") return qmod::weight2_F(prec, mod);
  if (form == "j") return qmod::jay(prec, mod);
  if (form == "zagier") return qmod::zagier_trace_form(prec, mod);
  if (form.rfind("eisenstein:", 0) == 0) {
    try {
      return qmod::eisenstein(std::stol(form.substr(11)), prec, mod);
    } catch (const std::invalid_argument&) {
      throw qmod::UsageError("eisenstein form needs an integer weight, e.g. eisenstein:4");
    }
  }
  if (form.rfind("eta:", 0) == 0)
    return qmod::eta_quotient(qmod::EtaQuotientSpec::parse(form.substr(4)), prec, mod);
  throw qmod::UsageError("unknown form '" + form +
                         "' (expected theta|F|eisenstein:k|eta:SPEC|j|zagier)");
}

int run(int argc, char** argv) {
  CLI::App app{"exact q-expansion arithmetic for modular forms on Gamma_0(4)"};
  app.require_subcommand(1);

  std::string out_path, format = "json";

  // series build
  auto* series = app.add_subcommand("series", "series construction");
  series->require_subcommand(1);
  auto* build = series->add_subcommand("build", "build a named form's q-expansion");
  std::string form;
  long prec = 64, mod_flag = 0;
  build->add_option("--form", form, "theta|F|eisenstein:k|eta:SPEC|j|zagier (SPEC like 1^8,4^16,2^-24)")
      ->required();
  build->add_option("--prec", prec, "number of known coefficients");
  build->add_option("--mod", mod_flag, "reduce modulo this prime power");
  build->add_option("--out", out_path, "write to file instead of stdout");
  build->callback([&]() {
    qmod::NamedForm f = build_form(form, prec, optional_modulus(mod_flag));
    qmod::dump_json(qmod::series_to_json(f.series), out_path);
    std::cerr << f.label << ": doubled weight " << f.weight.k2 << " (weight " << f.weight.str()
              << ")\n";
  });

  // op
  auto* op = app.add_subcommand("op", "apply U_p, V_p or the theta operator");
  std::string apply, input;
  long iterate = 1;
  op->add_option("--apply", apply, "U:p | V:p | Theta")->required();
  op->add_option("--input", input, "QSeries JSON file")->required();
  op->add_option("--iterate", iterate, "apply the operator this many times (single-pass for U)");
  op->add_option("--out", out_path, "write to file instead of stdout");
  op->callback([&]() {
    qmod::QSeries f = load_series(input);
    qmod::QSeries g;
    auto parse_p = [&](const std::string& s) {
      try {
        return std::stol(s);
      } catch (const std::exception&) {
        throw qmod::UsageError("--apply needs a numeric p, e.g. U:5");
      }
    };
    if (apply == "Theta") {
      g = f;
      for (long i = 0; i < iterate; ++i) g = qmod::theta_op(g);
    } else if (apply.rfind("U:", 0) == 0) {
      g = qmod::u_iterate(f, parse_p(apply.substr(2)), iterate);
    } else if (apply.rfind("V:", 0) == 0) {
      g = qmod::v_op(f, qmod::checked_pow_long(parse_p(apply.substr(2)), iterate));
    } else {
      throw qmod::UsageError("--apply must be U:p, V:p or Theta");
    }
    qmod::dump_json(qmod::series_to_json(g), out_path);
    std::cerr << "output precision " << g.precision() << "\n";
  });

  // filtration (+ filtration verify)
  auto* filt = app.add_subcommand("filtration", "mod-l filtration of a holomorphic input");
  long ell = 5, k2 = 0, samples = 100, seed = 0;
  std::string filt_input;
  filt->add_option("--input", filt_input, "QSeries JSON file (mod l)");
  filt->add_option("--ell", ell, "prime l >= 5");
  filt->add_option("--k2", k2, "doubled weight of the construction behind the input");
  filt->add_option("--out", out_path, "write to file instead of stdout");
  auto* filt_verify = filt->add_subcommand("verify", "randomized filtration-law report");
  filt_verify->add_option("--ell", ell, "5 or 7");
  filt_verify->add_option("--samples", samples, "instances per law (<= 500)");
  filt_verify->add_option("--seed", seed, "RNG seed");
  filt_verify->add_option("--out", out_path, "write to file instead of stdout");
  filt_verify->callback([&]() {
    auto rep = qmod::verify_filtration_props(ell, samples, static_cast<std::uint64_t>(seed));
    qmod::dump_json(qmod::props_report_to_json(rep), out_path);
    if (!rep.all_pass()) throw qmod::CheckFailure("filtration law failures (see report)");
  });
  filt->callback([&]() {
    if (filt_verify->parsed()) return;
    if (filt_input.empty()) throw qmod::UsageError("filtration: --input is required");
    qmod::QSeries f = qmod::reduce_mod(load_series(filt_input), ell);
    qmod::dump_json(qmod::filtration_to_json(qmod::filtration(f, k2)), out_path);
  });

  // theta-cycle (+ theta-cycle support)
  auto* cycle = app.add_subcommand("theta-cycle", "U_l iteration against the theta limit pair");
  std::string cycle_input;
  long max_m = 3, window = 20, cycle_k2 = -1;
  cycle->add_option("--input", cycle_input, "QSeries JSON file");
  cycle->add_option("--ell", ell, "prime l >= 5");
  cycle->add_option("--max-m", max_m, "deepest U_l iterate");
  cycle->add_option("--window", window, "minimum comparison window at max-m");
  cycle->add_option("--k2", cycle_k2,
                    "doubled weight of the construction (enables the lambda-congruence field)");
  cycle->add_option("--out", out_path, "write to file instead of stdout");
  auto* support = cycle->add_subcommand("support", "square-class support of the input mod l");
  support->add_option("--input", cycle_input, "QSeries JSON file")->required();
  support->add_option("--ell", ell, "prime l >= 5");
  support->add_option("--out", out_path, "write to file instead of stdout");
  support->callback([&]() {
    auto rep = qmod::square_class_support(load_series(cycle_input), ell);
    qmod::dump_json(qmod::square_class_report_to_json(rep), out_path);
  });
  cycle->callback([&]() {
    if (support->parsed()) return;
    if (cycle_input.empty()) throw qmod::UsageError("theta-cycle: --input is required");
    std::optional<long> k2opt;
    if (cycle_k2 >= 0) k2opt = cycle_k2;
    auto rep = qmod::detect_theta_limit(load_series(cycle_input), ell, max_m, window, k2opt);
    qmod::dump_json(qmod::cycle_report_to_json(rep), out_path);
  });

  // traces
  auto* traces = app.add_subcommand("traces", "tabulate t(d) with oracle cross-checks");
  long max_d = 300;
  bool check_all = false;
  int jobs = 1;
  traces->add_option("--max-d", max_d, "largest discriminant");
  traces->add_option("--mod", mod_flag, "store residues modulo this prime power");
  traces->add_flag("--check-all", check_all, "oracle-verify every tabulated d");
  traces->add_option("--jobs", jobs, "oracle worker threads");
  traces->add_option("--format", format, "json|csv");
  traces->add_option("--out", out_path, "write to file instead of stdout");
  traces->callback([&]() {
    auto table = qmod::trace_table(max_d, optional_modulus(mod_flag), jobs, check_all);
    if (format == "csv") {
      std::ostringstream csv;
      csv << "d,t\n";
      for (const auto& [d, t] : table.t) csv << d << "," << t.get_str() << "\n";
      emit_text(csv.str(), out_path);
    } else {
      Json j;
      j["modulus"] = table.modulus ? Json(table.modulus->get_si()) : Json(nullptr);
      Json rows = Json::array();
      for (const auto& [d, t] : table.t) rows.push_back(Json::array({d, t.get_str()}));
      j["t"] = std::move(rows);
      qmod::dump_json(j, out_path);
    }
  });

  // distribution
  auto* dist = app.add_subcommand("distribution", "residue-class growth diagnostics");
  std::string source = "zagier";
  long jflag = 1, max_x = 20000;
  dist->add_option("--source", source, "zagier | path to a QSeries JSON file");
  dist->add_option("--ell", ell, "prime l >= 5");
  dist->add_option("--j", jflag, "prime power exponent");
  dist->add_option("--max-x", max_x, "largest checkpoint");
  dist->add_option("--jobs", jobs, "worker threads for the trace table");
  dist->add_option("--format", format, "json|csv");
  dist->add_option("--out", out_path, "write to file instead of stdout");
  dist->callback([&]() {
    auto cps = qmod::default_checkpoints(max_x);
    qmod::DistributionReport rep;
    if (source == "zagier") {
      mpz_class elj;
      mpz_ui_pow_ui(elj.get_mpz_t(), ell, jflag);
      auto table = qmod::trace_table(max_x, elj, jobs);
      std::vector<long> stream(max_x + 1, 0);
      for (const auto& [d, t] : table.t) stream[d] = t.get_si();
      rep = qmod::residue_counts(stream, elj.get_si(), cps);
    } else {
      rep = qmod::well_distribution_scan(load_series(source), ell, jflag, cps);
    }
    if (format == "csv") {
      std::ostringstream csv;
      csv << "X,r,count,normalized\n";
      for (std::size_t i = 0; i < rep.checkpoints.size(); ++i)
        for (long r = 0; r < rep.modulus; ++r)
          csv << rep.checkpoints[i] << "," << r << "," << rep.counts[r][i] << ","
              << rep.normalized[r][i] << "\n";
      emit_text(csv.str(), out_path);
    } else {
      qmod::dump_json(qmod::distribution_report_to_json(rep), out_path);
    }
  });

  // verify
  auto* verify = app.add_subcommand("verify", "run the full identity/property suite");
  std::vector<long> ells{5, 7};
  std::string budget = "full", inject;
  verify->add_option("--ell", ells, "primes for the randomized families (subset of 5 7 11 13)");
  verify->add_option("--budget", budget, "full|quick (quick skips the heavy trace scans)");
  verify->add_option("--seed", seed, "RNG seed for the randomized suites");
  verify->add_option("--jobs", jobs, "oracle worker threads");
  verify->add_option("--inject-fault", inject, "test hook: 'theta' flips one theta coefficient");
  verify->add_option("--out", out_path, "write the report to a file as well as stdout");
  verify->callback([&]() {
    qmod::VerifyOptions opts;
    opts.ells = ells;
    opts.seed = static_cast<std::uint64_t>(seed);
    opts.jobs = jobs;
    if (budget == "quick")
      opts.budget = qmod::Budget::Quick;
    else if (budget != "full")
      throw qmod::UsageError("--budget must be full or quick");
    if (inject == "theta")
      opts.fault = qmod::Fault::ThetaFlip;
    else if (!inject.empty())
      throw qmod::UsageError("--inject-fault supports only 'theta'");
    auto report = qmod::run_verify(opts);
    Json j = qmod::verify_report_to_json(report, opts);
    qmod::dump_json(j, "");
    if (!out_path.empty()) qmod::dump_json(j, out_path);
    for (const auto& c : report.checks)
      std::cerr << (c.skipped ? "SKIP" : c.pass ? "PASS" : "FAIL") << " " << c.id << "\n";
    if (!report.all_pass()) throw qmod::CheckFailure("verification failures (see report)");
    if (report.any_skipped()) std::cerr << "warning: some checks were skipped\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const qmod::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const qmod::PrecisionError& e) {
    std::cerr << "precision error: " << e.what() << "\n";
    return 3;
  } catch (const qmod::CheckFailure& e) {
    std::cerr << "check failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
