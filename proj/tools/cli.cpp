#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

#include "pmlab/causal_oracle.hpp"
#include "pmlab/game.hpp"
#include "pmlab/io.hpp"
#include "pmlab/optimizer.hpp"

namespace pmlab::cli {

namespace {

using nlohmann::json;

Real parse_real(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const Real v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw FormatError("cannot read " + what + " from '" + text + "'");
}

Vector3 parse_vector(const std::string& text) {
  std::vector<Real> parts;
  std::istringstream in(text);
  for (std::string cell; std::getline(in, cell, ',');) parts.push_back(parse_real(cell, "vector component"));
  if (parts.size() != 3) throw FormatError("a vector is three comma-separated numbers");
  Vector3 v(parts[0], parts[1], parts[2]);
  if (!(v.norm() > 0)) throw DomainError("vector must be nonzero");
  return v.normalized();
}

MatrixRecord load_record(const std::string& source) {
  if (is_builtin_name(source)) return to_record(builtin_process(source));
  return read_matrix_file(source);
}

ProcessMatrix load_process(const std::string& source) {
  if (is_builtin_name(source)) return builtin_process(source);
  MatrixRecord r = read_matrix_file(source);
  return ProcessMatrix::from_matrix(std::move(r.matrix), std::move(r.layout), std::move(r.provenance));
}

std::string num(Real v) { return format_csv_number(v); }

// Writes to `path`, or to `out` for "-".
void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot write " + path);
  f << text;
}

void add_config_options(CLI::App* sub, OptimizerConfig& c) {
  sub->add_option("--restarts", c.restarts, "random restarts")->capture_default_str();
  sub->add_option("--max-iterations", c.max_iterations, "iterations per restart")->capture_default_str();
  sub->add_option("--initial-step", c.initial_step, "initial step length")->capture_default_str();
  sub->add_option("--step-decay", c.step_decay, "geometric step decay")->capture_default_str();
  sub->add_option("--convergence-tol", c.tolerance, "stop when a step gains less")->capture_default_str();
  sub->add_option("--difference-step", c.difference_step, "central-difference step")->capture_default_str();
  sub->add_flag("--general-correlations", c.general_correlations, "free correlation tensors");
  sub->add_flag("--cycle-encodings", c.cycle_encodings, "cycle restarts through all encoding tables");
  sub->add_option("--threads", c.threads, "restart workers, 0 = hardware")->capture_default_str();
}

struct Globals {
  bool json = false;
  std::uint64_t seed = OptimizerConfig{}.seed;
  Real tol = 1e-8;
};

int cmd_validate(const Globals& g, const std::string& source, std::ostream& out) {
  const MatrixRecord r = load_record(source);
  const ValidityReport report = validate(r.matrix, r.layout);
  if (g.json) {
    out << to_json(report) << '\n';
  } else {
    out << (report.is_valid ? "valid" : "invalid") << '\n';
    for (const auto& reason : report.reasons) out << "  " << reason << '\n';
    for (const auto& [term, c] : report.forbidden_terms) out << "  forbidden " << term.label() << ' ' << num(c) << '\n';
  }
  return report.is_valid ? 0 : 1;
}

int cmd_game(const Globals& g, const std::string& source, Real alpha, Real beta, const std::string& t_text,
             std::ostream& out) {
  const GameSpec spec{alpha, beta};
  spec.check();
  const Vector3 t = parse_vector(t_text);
  const ProcessMatrix w = load_process(source);
  const JointDistribution dist = joint_distribution(w, alice_z_instruments(), bob_branch_instruments(t));
  const Real p = success_probability(dist, spec);
  const Real bound = causal_bound(spec);
  if (g.json) {
    json rows = json::array();
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int bp = 0; bp < 2; ++bp)
              rows.push_back({{"x", x}, {"y", y}, {"a", a}, {"b", b}, {"bprime", bp}, {"p", dist(x, y, a, b, bp)}});
    out << json{{"process", w.provenance()},
                {"alpha", alpha},
                {"beta", beta},
                {"p_succ", p},
                {"causal_bound", bound},
                {"violation", p > bound + 1e-9},
                {"distribution", rows}}
               .dump()
        << '\n';
  } else {
    write_csv(out, dist);
    out << "# p_succ " << num(p) << "\n# causal_bound " << num(bound) << "\n# violation "
        << (p > bound + 1e-9 ? "yes" : "no") << '\n';
  }
  return 0;
}

int cmd_sweep(const Globals& g, Real from, Real to, int steps, const std::string& path, std::ostream& out) {
  if (!(from >= 0.5 && from < to && to < 1.0)) throw DomainError("sweep range needs 1/2 <= from < to < 1");
  if (steps < 2) throw DomainError("sweep needs at least two steps");
  std::ostringstream text;
  json rows = json::array();
  text << "beta,p_succ_w_beta,causal_bound,analytic_max,gap\n";
  const auto alice = alice_z_instruments();
  const auto bob = bob_branch_instruments();
  for (int i = 0; i < steps; ++i) {
    const Real beta = i == steps - 1 ? to : from + (to - from) * i / (steps - 1);
    const GameSpec spec{0.5, beta};
    const Real p = success_probability(joint_distribution(w_beta(beta), alice, bob), spec);
    const Real bound = causal_bound(spec);
    const Real analytic = analytic_max_dbit(beta);
    text << num(beta) << ',' << num(p) << ',' << num(bound) << ',' << num(analytic) << ',' << num(p - bound) << '\n';
    rows.push_back({{"beta", beta}, {"p_succ_w_beta", p}, {"causal_bound", bound}, {"analytic_max", analytic},
                    {"gap", p - bound}});
  }
  emit(path, out, g.json ? rows.dump() + "\n" : text.str());
  return 0;
}

int cmd_oracle(const Globals& g, Real alpha, Real beta, const std::string& table_path, std::ostream& out) {
  if (table_path.empty()) {
    const GameSpec spec{alpha, beta};
    const Real bound = oracle_bound(spec);
    if (g.json)
      out << json{{"alpha", alpha}, {"beta", beta}, {"oracle_bound", bound}, {"causal_bound", causal_bound(spec)}}.dump()
          << '\n';
    else
      out << "oracle_bound " << num(bound) << '\n';
    return 0;
  }
  std::ifstream in(table_path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + table_path);
  const CorrelationTable table = read_csv(in);
  if (!table.is_normalized()) throw DomainError("correlation table is not normalized");
  const CausalVerdict v = is_causal(table, g.tol);
  if (g.json) {
    json doc{{"causal", v.causal}, {"distance", v.distance}};
    if (!v.causal) {
      doc["functional"] = v.functional.coefficients;
      doc["functional_bound"] = v.functional.bound;
      doc["functional_value"] = v.functional_value;
    }
    out << doc.dump() << '\n';
  } else {
    out << (v.causal ? "causal" : "not causal") << "\ndistance " << num(v.distance) << '\n';
    if (!v.causal)
      out << "functional_value " << num(v.functional_value) << "\nfunctional_bound " << num(v.functional.bound)
          << '\n';
  }
  return 0;
}

void print_vector(std::ostream& out, const char* name, const Vector3& v) {
  out << name << ' ' << num(v.x()) << ',' << num(v.y()) << ',' << num(v.z()) << '\n';
}

int cmd_optimize(const Globals& g, const std::string& mode, const std::string& source, Real alpha, Real beta,
                 OptimizerConfig config, std::ostream& out) {
  config.seed = g.seed;
  OptimizationResult r;
  Real reference;
  if (mode == "dbit") {
    r = maximize_instruments(load_process(source), beta, config);
    reference = analytic_max_dbit(beta);
  } else {
    r = maximize_reprepare_family(alpha, config);
    reference = 0.25 * (2.0 + std::sqrt(2.0));
  }
  if (g.json) {
    json doc = json::parse(to_json(r));
    doc["mode"] = mode;
    doc["reference"] = reference;
    doc["causal_bound"] = causal_bound({r.alpha, r.beta});
    out << doc.dump() << '\n';
    return 0;
  }
  out << "value " << num(r.value) << "\nreference " << num(reference) << "\ncausal_bound "
      << num(causal_bound({r.alpha, r.beta})) << "\nfeasible " << (r.feasible ? "yes" : "no") << '\n';
  if (r.alice) {
    print_vector(out, "alice_input", r.alice->input);
    print_vector(out, "alice_output", r.alice->output);
  }
  if (r.bob) {
    print_vector(out, "bob_guess_axis", r.bob->guess_axis);
    print_vector(out, "bob_relay_input", r.bob->relay.input);
    print_vector(out, "bob_relay_output", r.bob->relay.output);
  }
  if (r.coefficients) {
    const auto& c = *r.coefficients;
    out << "coefficients " << num(c.a_to_b) << ',' << num(c.b_to_a_x) << ',' << num(c.b_to_a_y) << ','
        << num(c.b_to_a_z) << ',' << num(c.alice_bias) << ',' << num(c.bob_bias) << '\n';
  }
  if (r.decoding_axis) print_vector(out, "decoding_axis", *r.decoding_axis);
  return 0;
}

int cmd_witness(const Globals& g, const std::string& source, std::ostream& out) {
  const ProcessMatrix w = load_process(source);
  const Real v = witness_value(witness_s(), w);
  if (g.json)
    out << json{{"process", w.provenance()}, {"witness", v}}.dump() << '\n';
  else
    out << "witness " << num(v) << '\n';
  return 0;
}

int cmd_threshold(const Globals& g, OptimizerConfig config, std::ostream& out) {
  config.seed = g.seed;
  const ThresholdResult t = threshold_alpha(config);
  if (g.json)
    out << json{{"alpha", t.alpha}, {"value_at_crossing", t.value_at_crossing}, {"bisections", t.bisections}}.dump()
        << '\n';
  else
    out << "alpha " << num(t.alpha) << "\nvalue_at_crossing " << num(t.value_at_crossing) << '\n';
  return 0;
}

int cmd_decompose(const Globals& g, const std::string& source, std::ostream& out) {
  const MatrixRecord r = load_record(source);
  if (g.json) {
    json terms = json::object();
    for (const auto& [t, c] : pauli_decompose(r.matrix, r.layout)) terms[t.label()] = c;
    out << terms.dump() << '\n';
  } else {
    write_pauli(out, r);
  }
  return 0;
}

int cmd_write(const std::string& source, const std::string& format, const std::string& path, std::ostream& out) {
  const MatrixRecord r = load_record(source);
  std::ostringstream text;
  write_matrix(text, r, format == "dense" ? MatrixFormat::Dense : MatrixFormat::Pauli);
  emit(path, out, text.str());
  return 0;
}

}  // namespace

bool is_builtin_name(const std::string& name) {
  return name == "w_ocb" || name == "ordered_ab" || name == "ordered_ba" || name == "identity" ||
         name.rfind("w_beta@", 0) == 0 || name.rfind("mix@", 0) == 0;
}

ProcessMatrix builtin_process(const std::string& name) {
  if (name == "w_ocb") return w_ocb();
  if (name == "ordered_ab") return ordered_identity_channel_process(Direction::AToB);
  if (name == "ordered_ba") return ordered_identity_channel_process(Direction::BToA);
  if (name == "identity") return identity_process();
  if (name.rfind("w_beta@", 0) == 0) return w_beta(parse_real(name.substr(7), "beta"));
  if (name.rfind("mix@", 0) == 0)
    return causal_mixture(ordered_identity_channel_process(Direction::AToB),
                          ordered_identity_channel_process(Direction::BToA), parse_real(name.substr(4), "q"));
  throw FormatError("unknown built-in process '" + name + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Process-matrix causal game laboratory", "pmlab"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "machine-readable output");
  app.add_option("--seed", g.seed, "optimizer seed")->capture_default_str();
  app.add_option("--tol", g.tol, "causal membership tolerance")->capture_default_str()->check(CLI::PositiveNumber);

  std::string source;
  Real alpha = 0.5, beta = 0.5;

  auto* validate_cmd = app.add_subcommand("validate", "check a process file or built-in name");
  validate_cmd->add_option("process", source, "file or built-in name")->required();

  std::string t_text = "1,0,0";
  auto* game_cmd = app.add_subcommand("game", "run the biased game with the measure-and-reprepare instruments");
  game_cmd->add_option("--process", source, "file or built-in name")->required();
  game_cmd->add_option("--alpha", alpha)->capture_default_str();
  game_cmd->add_option("--beta", beta)->capture_default_str();
  game_cmd->add_option("--t-vector", t_text, "Bob's decoding axis x,y,z")->capture_default_str();

  Real from = 0.5, to = 0.99;
  int steps = 50;
  std::string out_path = "-";
  auto* sweep_cmd = app.add_subcommand("sweep-beta", "CSV of the W_beta success probability against beta");
  sweep_cmd->add_option("--from", from)->capture_default_str();
  sweep_cmd->add_option("--to", to)->capture_default_str();
  sweep_cmd->add_option("--steps", steps)->capture_default_str();
  sweep_cmd->add_option("--out", out_path, "output path, - for stdout")->capture_default_str();

  std::string table_path;
  auto* oracle_cmd = app.add_subcommand("oracle", "causal bound by strategy enumeration, or table membership");
  oracle_cmd->add_option("--alpha", alpha)->capture_default_str();
  oracle_cmd->add_option("--beta", beta)->capture_default_str();
  oracle_cmd->add_option("--table", table_path, "correlation table CSV to test for membership");

  std::string mode;
  OptimizerConfig opt_config;
  auto* optimize_cmd = app.add_subcommand("optimize", "numerical maximization of the success probability");
  optimize_cmd->add_option("--mode", mode, "dbit (instruments) or ibit (reprepare family)")
      ->required()
      ->check(CLI::IsMember({"dbit", "ibit"}));
  optimize_cmd->add_option("--process", source, "process for dbit mode")->default_str("w_ocb");
  optimize_cmd->add_option("--alpha", alpha, "input bias for ibit mode")->capture_default_str();
  optimize_cmd->add_option("--beta", beta, "decision bias for dbit mode")->capture_default_str();
  add_config_options(optimize_cmd, opt_config);

  auto* witness_cmd = app.add_subcommand("witness", "Tr[S W] for the causal witness S");
  witness_cmd->add_option("--process", source, "file or built-in name")->required();

  OptimizerConfig threshold_cfg = threshold_config();
  auto* threshold_cmd = app.add_subcommand("threshold", "input bias where the reprepare family stops violating");
  add_config_options(threshold_cmd, threshold_cfg);

  auto* decompose_cmd = app.add_subcommand("decompose", "Pauli coefficients of a process");
  decompose_cmd->add_option("process", source, "file or built-in name")->required();

  std::string format = "pauli";
  auto* write_cmd = app.add_subcommand("write", "write a process to a file");
  write_cmd->add_option("--process", source, "file or built-in name")->required();
  write_cmd->add_option("--format", format)->check(CLI::IsMember({"dense", "pauli"}))->capture_default_str();
  write_cmd->add_option("--out", out_path, "output path, - for stdout")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(g, source, out);
    if (game_cmd->parsed()) return cmd_game(g, source, alpha, beta, t_text, out);
    if (sweep_cmd->parsed()) return cmd_sweep(g, from, to, steps, out_path, out);
    if (oracle_cmd->parsed()) return cmd_oracle(g, alpha, beta, table_path, out);
    if (optimize_cmd->parsed()) {
      if (source.empty()) source = "w_ocb";
      return cmd_optimize(g, mode, source, alpha, beta, opt_config, out);
    }
    if (witness_cmd->parsed()) return cmd_witness(g, source, out);
    if (threshold_cmd->parsed()) return cmd_threshold(g, threshold_cfg, out);
    if (decompose_cmd->parsed()) return cmd_decompose(g, source, out);
    if (write_cmd->parsed()) return cmd_write(source, format, out_path, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalIntegrityError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace pmlab::cli
