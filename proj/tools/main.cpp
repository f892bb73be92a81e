// hh3verify: symbolic verification of the Hochschild 3-cycle construction on
// matrix quantum group algebras, its cap pairing with derivation cocycles,
// and the Casimir non-vanishing certificate.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hh3/chain.hpp"
#include "hh3/errors.hpp"
#include "hh3/form_lie.hpp"
#include "hh3/matrix_io.hpp"
#include "hh3/numeric.hpp"
#include "hh3/report.hpp"

namespace {

constexpr const char* kToolVersion = "0.1.0";

struct Output {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::vector<hh3::VerificationReport> checks;
  bool json = false;

  void emit_and_note(bool ok) const {
    if (json) {
      nlohmann::json j;
      j["tool_version"] = kToolVersion;
      j["command"] = command;
      j["config"] = config;
      j["checks"] = nlohmann::json::array();
      for (const auto& c : checks) j["checks"].push_back(c.to_json());
      std::cout << j.dump(2) << "\n";
      return;
    }
    for (const auto& c : checks) {
      std::cout << c.check << " [" << c.mode << "] " << c.status;
      if (c.value) std::cout << "  value=" << *c.value;
      if (c.message) std::cout << "  (" << *c.message << ")";
      std::cout << "  " << c.runtime_ms << " ms\n";
      if (c.residual_form) std::cout << "  residual: " << *c.residual_form << "\n";
    }
    std::cout << (ok ? "all checks passed" : "CHECK FAILED") << "\n";
  }
};

hh3::BilinearFormSpec resolve_form(const std::string& e_source, std::optional<int> n) {
  if (e_source == "identity") {
    if (!n) throw hh3::Error("--E identity requires --N");
    return hh3::BilinearFormSpec::identity(*n);
  }
  if (e_source == "symplectic") {
    if (!n) throw hh3::Error("--E symplectic requires --N");
    if (*n % 2 != 0) throw hh3::Error("--E symplectic requires even N");
    return hh3::BilinearFormSpec::symplectic(*n);
  }
  hh3::QMatrix m = hh3::load_matrix_file(e_source);
  if (n && *n != m.rows()) throw hh3::Error("--N does not match the matrix file dimension");
  return hh3::BilinearFormSpec::concrete(std::move(m));
}

bool check_ok(const hh3::VerificationReport& r) {
  return r.status != "failed";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbolic + numeric verifier for the Hochschild 3-cycle construction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string format = "text";
  app.add_option("--format", format, "output format: text | json")
      ->check(CLI::IsMember({"text", "json"}));

  // verify-cycle
  auto* cycle = app.add_subcommand("verify-cycle", "check b3(c_V) = 0 symbolically");
  std::string epsilon = "generic";
  bool generic_e = false;
  cycle->add_option("--epsilon", epsilon, "symmetry sign of E: +1 | -1 | generic")
      ->check(CLI::IsMember({"+1", "-1", "generic"}));
  cycle->add_flag("--generic-E", generic_e,
                  "skip the symmetry rule and report the canonical residual");

  // selfdual
  auto* selfdual = app.add_subcommand("selfdual", "replay the self-duality equivalence");
  std::string direction = "both";
  selfdual->add_option("--direction", direction, "forward | backward | both")
      ->check(CLI::IsMember({"forward", "backward", "both"}));

  // pair
  auto* pair = app.add_subcommand("pair", "cap pairing of c_V with three derivations");
  std::string pair_e = "identity";
  std::optional<int> pair_n;
  std::string f1_path, f2_path, f3_path;
  pair->add_option("--E", pair_e, "identity | symplectic | matrix file path");
  pair->add_option("--N", pair_n, "dimension (for identity/symplectic)");
  pair->add_option("--F1", f1_path, "matrix file for F1")->required();
  pair->add_option("--F2", f2_path, "matrix file for F2")->required();
  pair->add_option("--F3", f3_path, "matrix file for F3")->required();

  // casimir-pairing
  auto* casimir = app.add_subcommand("casimir-pairing",
                                     "total pairing of [c_V] against the Casimir decomposition");
  std::string cas_e = "identity";
  std::optional<int> cas_n;
  casimir->add_option("--E", cas_e, "identity | symplectic | matrix file path");
  casimir->add_option("--N", cas_n, "dimension (for identity/symplectic)");

  // hh0
  auto* hh0 = app.add_subcommand("hh0", "counit-vanishes-on-commutators check");
  int hh0_samples = 100;
  uint64_t hh0_seed = 0x5eedULL;
  hh0->add_option("--samples", hh0_samples, "number of random word pairs");
  hh0->add_option("--seed", hh0_seed, "RNG seed");

  // numeric-check
  auto* numeric = app.add_subcommand("numeric-check", "floating-point grounding oracle");
  std::string num_target = "cycle";
  std::string num_e = "identity";
  std::optional<int> num_n;
  int num_samples = 100;
  double num_tol = 1e-9;
  uint64_t num_seed = 0x5eedULL;
  std::string num_points = "group";
  std::string num_expect = "zero";
  numeric->add_option("--target", num_target, "cycle | residual | antipode")
      ->check(CLI::IsMember({"cycle", "residual", "antipode"}));
  numeric->add_option("--E", num_e, "identity | symplectic | matrix file path");
  numeric->add_option("--N", num_n, "dimension (for identity/symplectic)");
  numeric->add_option("--samples", num_samples, "number of sampled point tuples");
  numeric->add_option("--tol", num_tol, "zero tolerance");
  numeric->add_option("--seed", num_seed, "RNG seed");
  numeric->add_option("--points", num_points,
                      "group: isometry points of E; general: general linear points")
      ->check(CLI::IsMember({"group", "general"}));
  numeric->add_option("--expect", num_expect, "expected outcome: zero | nonzero")
      ->check(CLI::IsMember({"zero", "nonzero"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage/input errors exit 2; --help stays 0
  }

  Output out;
  out.json = (format == "json");
  bool ok = true;

  try {
    if (cycle->parsed()) {
      out.command = "verify-cycle";
      out.config = {{"epsilon", epsilon}, {"generic_E", generic_e}};
      if (generic_e) {
        out.checks.push_back(hh3::verify_cycle(hh3::CycleMode::GenericE));
      } else if (epsilon == "+1") {
        out.checks.push_back(hh3::verify_cycle(hh3::CycleMode::EpsPlus));
      } else if (epsilon == "-1") {
        out.checks.push_back(hh3::verify_cycle(hh3::CycleMode::EpsMinus));
      } else {
        out.checks.push_back(hh3::verify_cycle(hh3::CycleMode::EpsGeneric));
      }
    } else if (selfdual->parsed()) {
      out.command = "selfdual";
      out.config = {{"direction", direction}};
      hh3::SelfdualDirection dir = direction == "forward"    ? hh3::SelfdualDirection::Forward
                                   : direction == "backward" ? hh3::SelfdualDirection::Backward
                                                             : hh3::SelfdualDirection::Both;
      out.checks.push_back(hh3::verify_selfdual_equivalence(dir));
    } else if (pair->parsed()) {
      out.command = "pair";
      out.config = {{"E", pair_e}, {"F1", f1_path}, {"F2", f2_path}, {"F3", f3_path}};
      if (pair_n) out.config["N"] = *pair_n;
      auto form = resolve_form(pair_e, pair_n);
      hh3::QMatrix f1 = hh3::load_matrix_file(f1_path);
      hh3::QMatrix f2 = hh3::load_matrix_file(f2_path);
      hh3::QMatrix f3 = hh3::load_matrix_file(f3_path);
      hh3::StopWatch watch;
      hh3::Rational value = hh3::pairing_symbolic(f1, f2, f3, form.form());
      hh3::Rational oracle = -(f1 * f2 * f3).trace();
      hh3::VerificationReport r;
      r.check = "pair";
      r.mode = "cap against cup of three derivations";
      r.status = (value == oracle) ? "ok" : "failed";
      r.value = value.str();
      r.message = "matrix oracle -tr(F1 F2 F3) = " + oracle.str();
      r.runtime_ms = watch.ms();
      out.checks.push_back(std::move(r));
    } else if (casimir->parsed()) {
      out.command = "casimir-pairing";
      out.config = {{"E", cas_e}};
      if (cas_n) out.config["N"] = *cas_n;
      auto form = resolve_form(cas_e, cas_n);
      auto result = hh3::total_pairing(form.form());
      out.checks.push_back(result.report);
    } else if (hh0->parsed()) {
      out.command = "hh0";
      out.config = {{"samples", hh0_samples}, {"seed", hh0_seed}};
      out.checks.push_back(hh3::hh0_commutator_check(hh0_samples, hh0_seed));
    } else if (numeric->parsed()) {
      out.command = "numeric-check";
      out.config = {{"target", num_target}, {"E", num_e},      {"samples", num_samples},
                    {"tol", num_tol},       {"seed", num_seed}, {"points", num_points},
                    {"expect", num_expect}};
      if (num_n) out.config["N"] = *num_n;
      auto form = resolve_form(num_e, num_n);
      auto kind =
          (num_points == "group") ? hh3::PointKind::Isometry : hh3::PointKind::GeneralLinear;
      hh3::VerificationReport r;
      if (num_target == "cycle") {
        r = hh3::numeric_zero_check(hh3::boundary(hh3::build_cv()), form, num_samples, num_tol,
                                    num_seed, kind);
        r.check = "numeric-check:cycle";
      } else if (num_target == "residual") {
        r = hh3::numeric_zero_check(hh3::generic_cycle_residual().full, form, num_samples, num_tol,
                                    num_seed, kind);
        r.check = "numeric-check:residual";
      } else {
        // antipode: sum_k v_ik u_kj - delta_ij, fully contracted against delta_ji
        hh3::Index i = hh3::free_index("i"), j = hh3::free_index("j"), k = hh3::free_index("k");
        hh3::Term t;
        t.scalars.push_back(hh3::ScalarAtom::delta(j, i));
        t.factors = {hh3::Word{hh3::Letter::v(i, k), hh3::Letter::u(k, j)}};
        for (hh3::Index idx : {i, j, k}) t = hh3::sum_over(std::move(t), idx);
        hh3::Term nterm;
        nterm.coeff = -hh3::Coefficient::dim_n();
        auto x = hh3::IndexedExpr::from_terms({t, nterm});
        r = hh3::numeric_zero_check(x, form, num_samples, num_tol, num_seed, kind);
        r.check = "numeric-check:antipode";
      }
      const bool zero = (r.status == "numerically-zero");
      if ((num_expect == "zero") != zero) {
        r.status = "failed";
        r.message = "outcome does not match --expect " + num_expect;
      }
      out.checks.push_back(std::move(r));
    }
  } catch (const hh3::NotSemisimpleError& e) {
    hh3::VerificationReport r;
    r.check = out.command;
    r.mode = "hypothesis";
    r.status = "failed";
    r.message = e.what();
    out.checks.push_back(std::move(r));
    out.emit_and_note(false);
    return 1;
  } catch (const hh3::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  for (const auto& c : out.checks) ok = ok && check_ok(c);
  out.emit_and_note(ok);
  return ok ? 0 : 1;
}
