// fidcoh: coherence measures, qubit transformations and property suites from
// the command line.
//
// Exit codes: 0 ok, 1 domain-false (not transformable, suite failed),
// 2 validation error, 3 I/O or parse error.

#include <cstdarg>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fidcoh/channels.hpp"
#include "fidcoh/io.hpp"
#include "fidcoh/measures.hpp"
#include "fidcoh/transform.hpp"
#include "fidcoh/verify.hpp"

using namespace fidcoh;

namespace {

enum Exit { kOk = 0, kFalse = 1, kInvalid = 2, kIoError = 3 };

constexpr const char* kSeedEnv = "FIDCOH_SEED";

std::string fmt(const char* pattern, ...) {
  char buf[128];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

std::string g12(double x) { return fmt("%.12g", x); }

void emit(const std::optional<std::string>& out, const io::Json& j) {
  if (out) {
    io::write_json(*out, j);
  } else {
    std::cout << j.dump(2) << '\n';
  }
}

PureState require_pure(const io::State& s, const char* role) {
  if (const auto* psi = std::get_if<PureState>(&s)) return *psi;
  throw ValidationError(ValidationError::Kind::InvalidArgument, 0.0,
                        std::string(role) + " must be a pure state file (kind \"pure\")");
}

struct MeasureArgs {
  std::string input;
  std::string measure = "cf";
  RoofConfig roof;
  std::uint64_t seed = 0;
};

int cmd_measure(const MeasureArgs& a) {
  const io::State s = io::read_state(a.input);
  if (a.measure == "cl1") {
    std::cout << g12(c_l1(io::as_density(s))) << '\n';
    return kOk;
  }
  if (const auto* psi = std::get_if<PureState>(&s)) {
    std::cout << g12(c_f_pure(*psi)) << '\n';
    return kOk;
  }
  const DensityMatrix& rho = std::get<DensityMatrix>(s);
  if (rho.dim() == 2) {
    std::cout << g12(c_f_qubit(rho)) << '\n';
    return kOk;
  }
  RoofConfig cfg = a.roof;
  cfg.seed = Seed{a.seed};
  const RoofResult r = c_f_roof_estimate(rho, cfg);
  std::cout << g12(r.value);
  if (rho.dim() >= 3) {
    std::cout << "  (upper-bound estimate; " << r.ensemble.size() << "-member ensemble, "
              << (r.converged ? "converged" : "not converged") << " after " << r.iterations_used << " sweeps)";
  }
  std::cout << '\n';
  return kOk;
}

int cmd_fidelity(const std::string& a, const std::string& b) {
  const DensityMatrix rho = io::as_density(io::read_state(a));
  const DensityMatrix sigma = io::as_density(io::read_state(b));
  std::cout << fmt("%.12f", uhlmann_fidelity(rho, sigma)) << '\n';
  return kOk;
}

int cmd_transform_check(const std::string& src, const std::string& tgt) {
  const PureState phi = require_pure(io::read_state(src), "source");
  const DensityMatrix rho = io::as_density(io::read_state(tgt));
  const bool ok = can_transform(phi, rho);
  const double source_cf = c_f_pure(phi);
  const double target_cf = c_f_qubit(rho);
  if (ok) {
    std::cout << "transformable (" << fmt("%g", source_cf) << " ≥ " << fmt("%g", target_cf) << ")\n";
  } else {
    std::cout << "not transformable (" << fmt("%g", source_cf) << " < " << fmt("%g", target_cf) << ")\n";
  }
  std::cout << "C_F(source) = " << g12(source_cf) << "\nC_F(target) = " << g12(target_cf) << '\n';
  return ok ? kOk : kFalse;
}

int cmd_transform_build(const std::string& src, const std::string& tgt, const std::optional<std::string>& out) {
  const PureState phi = require_pure(io::read_state(src), "source");
  const DensityMatrix rho = io::as_density(io::read_state(tgt));
  const IncoherentChannel ch = build_transform_channel(phi, rho);

  ComplexMatrix image = ComplexMatrix::Zero(2, 2);
  for (const auto& k : ch.kraus()) image += k * phi.projector() * k.adjoint();
  const ChannelReport report = check_channel(ch.kraus());

  // residuals go to stderr when the channel itself is written to stdout
  std::ostream& log = out ? std::cout : std::cerr;
  log << "kraus operators: " << ch.size() << '\n'
      << "completeness residual: " << fmt("%.3e", report.completeness_residual) << '\n'
      << "reconstruction residual: " << fmt("%.3e", max_abs(image - rho.matrix())) << '\n';
  emit(out, io::channel_to_json(ch.kraus()));
  return kOk;
}

int cmd_channel_validate(const std::string& path) {
  const ChannelReport report = check_channel(io::read_channel(path));
  std::cout << "completeness residual: " << fmt("%.3e", report.completeness_residual) << '\n'
            << "incoherence residual: " << fmt("%.3e", report.incoherence_residual) << '\n'
            << report.summary() << '\n';
  return report.ok() ? kOk : kInvalid;
}

int cmd_channel_apply(const std::string& path, const std::string& state, const std::optional<std::string>& out) {
  const IncoherentChannel ch = validate_channel(io::read_channel(path));
  const DensityMatrix rho = io::as_density(io::read_state(state));
  emit(out, io::to_json(apply_channel(ch, rho)));
  return kOk;
}

struct VerifyArgs {
  std::string suite = "all";
  SuiteConfig cfg;
  std::uint64_t seed = 0;
  bool json = false;
};

int cmd_verify(VerifyArgs a) {
  const std::optional<Suite> suite = parse_suite(a.suite);
  if (!suite) {
    std::cerr << "error: unknown suite \"" << a.suite << "\" (expected c1, c3, c4, l1, roof or all)\n";
    return kInvalid;
  }
  a.cfg.suite = *suite;
  a.cfg.seed = Seed{a.seed};
  const VerificationReport r = run_suite(a.cfg);
  std::cout << (a.json ? r.to_json(true) : r.summary()) << '\n';
  return r.passed ? kOk : kFalse;
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const io::Json::exception& e) {
    std::cerr << "error: malformed file: " << e.what() << '\n';
    return kIoError;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const UnsupportedSuite& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const TransformError& e) {
    std::cerr << e.what() << '\n';
    return kFalse;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fidelity-based and l1 coherence of quantum states"};
  app.require_subcommand(1);
  int code = kOk;

  MeasureArgs measure;
  auto* m = app.add_subcommand("measure", "Coherence of a state file");
  m->add_option("input", measure.input, "State file")->required();
  m->add_option("--measure", measure.measure, "cf or cl1")
      ->check(CLI::IsMember({"cf", "cl1"}))
      ->capture_default_str();
  m->add_option("--restarts", measure.roof.restarts, "Roof estimator restarts (dim >= 3)")->capture_default_str();
  m->add_option("--ensemble-size", measure.roof.ensemble_size, "Roof ensemble size, 0 = rank^2")
      ->capture_default_str();
  m->add_option("--max-iter", measure.roof.max_iterations, "Sweeps per restart")->capture_default_str();
  m->add_option("--seed", measure.seed, "RNG seed")->envname(kSeedEnv);
  m->callback([&] { code = guarded([&] { return cmd_measure(measure); }); });

  std::string fid_a, fid_b;
  auto* f = app.add_subcommand("fidelity", "Uhlmann fidelity of two state files");
  f->add_option("a", fid_a)->required();
  f->add_option("b", fid_b)->required();
  f->callback([&] { code = guarded([&] { return cmd_fidelity(fid_a, fid_b); }); });

  std::string src, tgt;
  std::optional<std::string> out;
  auto* t = app.add_subcommand("transform", "Pure-qubit to qubit conversion by incoherent operations");
  t->require_subcommand(1);
  auto* check = t->add_subcommand("check", "Decide transformability");
  check->add_option("source", src, "Pure qubit state file")->required();
  check->add_option("target", tgt, "Qubit state file")->required();
  check->callback([&] { code = guarded([&] { return cmd_transform_check(src, tgt); }); });
  auto* build = t->add_subcommand("build", "Construct the transforming channel");
  build->add_option("source", src, "Pure qubit state file")->required();
  build->add_option("target", tgt, "Qubit state file")->required();
  build->add_option("-o,--out", out, "Channel file to write (default: stdout)");
  build->callback([&] { code = guarded([&] { return cmd_transform_build(src, tgt, out); }); });

  std::string channel, state;
  auto* c = app.add_subcommand("channel", "Incoherent channel files");
  c->require_subcommand(1);
  auto* validate = c->add_subcommand("validate", "Check completeness and incoherence");
  validate->add_option("channel", channel)->required();
  validate->callback([&] { code = guarded([&] { return cmd_channel_validate(channel); }); });
  auto* apply = c->add_subcommand("apply", "Apply a channel to a state");
  apply->add_option("channel", channel)->required();
  apply->add_option("state", state)->required();
  apply->add_option("-o,--out", out, "State file to write (default: stdout)");
  apply->callback([&] { code = guarded([&] { return cmd_channel_apply(channel, state, out); }); });

  VerifyArgs verify;
  verify.cfg.trials = 1000;
  auto* v = app.add_subcommand("verify", "Randomized property suites");
  v->add_option("--suite", verify.suite, "c1, c3, c4, l1, roof or all")->capture_default_str();
  v->add_option("--trials", verify.cfg.trials)->capture_default_str();
  v->add_option("--dim", verify.cfg.dim)->capture_default_str();
  v->add_option("--seed", verify.seed, "RNG seed")->envname(kSeedEnv);
  v->add_option("--tol", verify.cfg.tolerance)->capture_default_str();
  v->add_flag("--json", verify.json, "Print the structured report");
  v->callback([&] { code = guarded([&] { return cmd_verify(verify); }); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInvalid;
  }
  return code;
}
