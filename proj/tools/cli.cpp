#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>

#include "fplb/fp.hpp"
#include "fplb/instance.hpp"
#include "fplb/json_io.hpp"
#include "fplb/search.hpp"
#include "fplb/verify.hpp"

namespace fplb::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    write_file(path, content);
  }
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

struct GameChoice {
  std::string name;
  Matrix matrix;
  Vector init;  // symmetric initialization
};

GameChoice resolve_game(const std::string& builtin, const std::string& path, const std::string& init,
                        const InstanceBundle* bundle) {
  GameChoice g;
  if (!path.empty()) {
    g.name = path;
    g.matrix = matrix_from_json(read_json(path));
  } else if (builtin == "rps") {
    g.name = "rps";
    g.matrix = rps_matrix();
  } else if (builtin == "m") {
    g.name = "m";
    g.matrix = bundle->m;
  } else {
    g.name = "m_aug";
    g.matrix = bundle->m_aug;
  }
  g.init = Vector(g.matrix.rows());
  if (init == "u0") {
    if (g.name != "m") throw std::invalid_argument("--init u0 applies to --game m only");
    g.init = bundle->u0;
  } else if (!init.empty() && init != "zero") {
    g.init = vector_from_json(read_json(init));
    if (g.init.size() != g.matrix.rows()) throw DimensionError("--init length does not match the game");
  }
  return g;
}

Json meta_json(const std::string& command, const std::vector<std::string>& args) {
  return Json{{"tool", "fplb"}, {"version", kVersion}, {"command", command}, {"args", args}};
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string game = "rps";
  std::string game_file;
  std::string init;
  std::uint64_t steps = 1000;
  std::string policy = "lex";
  std::optional<std::uint64_t> seed;
  std::string stride = "geometric";
  double ratio = 1.1;
  std::vector<std::uint64_t> checkpoints;
  std::string out = "fplb-run";
};

int cmd_simulate(const SimulateOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  if (o.seed && o.policy != "adversarial") throw CLI::ValidationError("--seed", "only valid with --policy adversarial");
  const InstanceBundle bundle = canonical_constants();
  const GameChoice game = resolve_game(o.game, o.game_file, o.init, &bundle);

  TieBreakPolicy policy = TieBreakPolicy::lexicographic();
  if (o.policy == "strict") {
    policy = TieBreakPolicy::strict();
  } else if (o.policy == "adversarial") {
    auto rng = std::make_shared<std::mt19937_64>(o.seed.value_or(0));
    policy = TieBreakPolicy::adversarial([rng](std::span<const std::size_t> tied, std::uint64_t, const Vector&) {
      std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
      return tied[pick(*rng)];
    });
  }

  const bool symmetric = game.matrix.is_skew_symmetric();
  if (!symmetric && !o.init.empty() && o.init != "zero") {
    throw std::invalid_argument("--init needs a skew-symmetric game");
  }
  FpState state = symmetric ? FpState::symmetric(game.init, policy)
                            : FpState::general(game.matrix.rows(), game.matrix.cols(), policy);

  RunOptions ro;
  ro.checkpoints.insert(o.checkpoints.begin(), o.checkpoints.end());
  if (o.stride == "every") {
    ro.stride = SampleStride::every();
  } else if (o.stride == "none") {
    ro.stride = SampleStride::none();
  } else {
    ro.stride = SampleStride::geometric(o.ratio);
  }

  const Trajectory traj = run(state, game.matrix, o.steps, ro);

  std::ostringstream csv;
  write_trajectory_csv(csv, traj);

  Json checkpoints = Json::object();
  for (const auto& [t, cp] : traj.checkpoints) {
    checkpoints[std::to_string(t)] = {{"x", to_json(cp.x)}, {"U", to_json(cp.U)}};
  }
  Json report{{"game", game.name},
              {"mode", symmetric ? "symmetric" : "general"},
              {"policy", o.policy},
              {"steps", o.steps},
              {"t", state.t},
              {"x", to_json(state.x)}};
  if (state.y) report["y"] = to_json(*state.y);
  report["U"] = to_json(state.U);
  const Rational max_u = state.U.max();
  report["max_U"] = to_json(max_u);
  report["gap"] = to_json(symmetric ? 2 * max_u / Rational(mpz_class(std::to_string(state.t)))
                                    : duality_gap_counts(game.matrix, state.x, *state.y, state.t));
  report["checkpoints"] = std::move(checkpoints);
  report["fallback_events"] = traj.fallback_events;

  const std::filesystem::path dir(o.out);
  write_file(dir / "trajectory.csv", csv.str());
  write_file(dir / "report.json", report.dump(2) + "\n");
  write_file(dir / "meta.json", meta_json("simulate", args).dump(2) + "\n");
  out << "t=" << state.t << " x=" << state.x << " max_U=" << to_string(max_u) << "\n";
  return kPass;
}

// ---------------------------------------------------------------- construct

struct ConstructOptions {
  std::string delta = "1/2700";
  std::string emit;
  std::string format = "json";
  std::string out;
};

int cmd_construct(const ConstructOptions& o, std::ostream& out) {
  const InstanceBundle canon = canonical_constants();
  const Rational shift = parse_rational(o.delta);
  const InstanceBundle bundle = make_bundle(canon.q0, canon.q1, canon.b, canon.delta, shift);
  if (!o.emit.empty()) {
    const Matrix& m = lower(o.emit) == "m" ? bundle.m : bundle.m_aug;
    emit(o.out, o.format == "text" ? format_matrix_text(m) : to_json(m).dump() + "\n", out);
    return kPass;
  }
  Json doc = bundle.to_json();
  doc["checks"] = Json::array({check_blocks(bundle.vs, bundle.b, bundle.q).to_json(),
                               check_key_equation(bundle.b, bundle.delta, bundle.q0, bundle.q1).to_json(),
                               transcription_report(bundle).to_json()});
  emit(o.out, doc.dump(2) + "\n", out);
  return kPass;
}

// ---------------------------------------------------------------- solve

struct SolveOptions {
  std::string q0;
  std::string q1;
  std::string b;
  std::string delta;
  bool check = false;
  std::string json_out;
};

QuadMatrix load_quad(const std::string& path, const QuadMatrix& fallback) {
  return path.empty() ? fallback : QuadMatrix(matrix_from_json(read_json(path)));
}

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  const InstanceBundle canon = canonical_constants();
  const QuadMatrix q0 = load_quad(o.q0, canon.q0);
  const QuadMatrix q1 = load_quad(o.q1, canon.q1);
  const bool canonical_pair = q0 == canon.q0 && q1 == canon.q1;
  const KeySolution family = solve_key_equation(q0, q1);

  Json doc{{"Q0", to_json(q0.matrix())}, {"Q1", to_json(q1.matrix())}, {"solution", family.to_json()}};
  Json warnings = Json::array();
  if (q0 == q1) warnings.push_back("degenerate window: Q1 = Q0, so Q = 0 and no phase has any steps");
  for (const auto* q : {&q0, &q1}) {
    const char* name = q == &q0 ? "Q0" : "Q1";
    try {
      if (!is_admissible(*q, {1, 10}).passed()) warnings.push_back(std::string(name) + " is not admissible on k=1..10");
    } catch (const std::invalid_argument& e) {
      warnings.push_back(std::string(name) + " is not admissible: " + e.what());
    }
  }
  doc["warnings"] = warnings;

  int code = kPass;
  if (!family.consistent()) {
    err << "inconsistent system; residual " << to_string(family.system.residual) << "\n";
    code = kVerificationFailure;
  } else {
    std::optional<InteractionMatrix> b;
    Vector delta;
    if (!o.b.empty() || !o.delta.empty()) {
      if (o.b.empty() || o.delta.empty()) throw CLI::ValidationError("--b/--delta", "give both or neither");
      b.emplace(matrix_from_json(read_json(o.b)));
      delta = vector_from_json(read_json(o.delta));
    } else if (canonical_pair) {
      b.emplace(canon.b);
      delta = canon.delta;
    } else {
      b.emplace(family.particular_b());
      delta = family.particular_delta();
    }
    doc["candidate"] = {{"B", to_json(b->matrix())}, {"Delta", to_json(delta)}, {"in_solution_set", family.contains(*b, delta)}};
    if (canonical_pair) doc["contains_canonical"] = family.contains(canon.b, canon.delta);

    if (o.check) {
      VerificationReport gate("solve-check", "candidate (B, Delta)");
      gate.expect_equal("key equation membership", Rational(1), Rational(family.contains(*b, delta) ? 1 : 0));
      if (b->strictly_negative()) {
        gate.witness("B strictly negative", Rational(0), b->matrix().max());
      } else {
        gate.fail("B strictly negative", Rational(0), b->matrix().max());
      }
      const StateMatrices vs = derive_vs_unchecked(*b, delta, q0, q1 - q0);
      const KeyInequalityResult ineq = check_key_inequality(vs.v1, vs.v3, *b);
      if (ineq.constant_difference && ineq.differences.front() > 0) {
        gate.witness("d(k) constant and positive", Rational(0), ineq.differences.front());
      } else {
        gate.fail("d(k) constant and positive", Rational(0), ineq.differences.front());
      }
      gate.note(std::string("literal bound d(k) < -max{B}: ") + (ineq.report.passed() ? "holds" : "fails"));
      doc["check"] = gate.to_json();
      doc["key_inequality"] = ineq.report.to_json();
      if (!gate.passed()) code = kVerificationFailure;
    }
  }
  emit(o.json_out, doc.dump(2) + "\n", out);
  return code;
}

// ---------------------------------------------------------------- search

struct SearchOptions {
  SearchBounds bounds;
  bool pin_q0 = false;
  bool pin_q1 = false;
  bool serial = false;
  std::string json_out;
};

int cmd_search(SearchOptions o, std::ostream& out, std::ostream& err) {
  if (o.pin_q0) o.bounds.q0 = canonical_q0_spec();
  if (o.pin_q1) o.bounds.q1 = canonical_q1_spec();
  const SearchResult result = search_instances(o.bounds, o.serial ? Execution::serial : Execution::parallel);
  emit(o.json_out, result.to_json().dump(2) + "\n", out);
  err << "candidates " << result.stats.candidates << ", pairs " << result.stats.pairs << ", hits "
      << result.stats.hits << "\n";
  return result.hits.empty() ? kVerificationFailure : kPass;
}

// ---------------------------------------------------------------- verify

struct VerifyOptions {
  std::vector<std::string> claims;
  bool all = false;
  std::optional<std::int64_t> k;
  std::optional<std::uint64_t> t_max;
  std::uint64_t fit_min = 1000;
  std::optional<std::uint64_t> fit_max;
  std::string json_out;
};

const std::vector<std::string> kClaims = {"rps", "phase", "theorem", "aug-offset", "no-tie", "rate"};

VerificationReport run_claim(const std::string& claim, const VerifyOptions& o, const InstanceBundle& bundle) {
  if (claim == "rps") return verify_rps_periodicity(o.k.value_or(50));
  if (claim == "phase") return verify_phases({1, o.k.value_or(6)}, bundle, Execution::serial);
  if (claim == "theorem") return verify_theorem(o.k.value_or(6), bundle);
  if (claim == "aug-offset") return verify_aug_offset(o.t_max.value_or(100000), bundle);
  if (claim == "no-tie") return verify_no_tie(o.t_max.value_or(1000000), bundle);
  const std::uint64_t t_max = o.t_max.value_or(1000000);
  return verify_rate(t_max, o.fit_min, o.fit_max.value_or(t_max), bundle).report;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  std::vector<std::string> claims = o.all ? kClaims : o.claims;
  if (claims.empty()) throw CLI::ValidationError("--claim", "give --claim or --all");
  const InstanceBundle bundle = canonical_constants();

  std::vector<std::optional<VerificationReport>> reports(claims.size());
  std::vector<std::string> errors(claims.size());
  for_each_index(claims.size(), o.all ? Execution::parallel : Execution::serial, [&](std::size_t i) {
    try {
      reports[i].emplace(run_claim(claims[i], o, bundle));
    } catch (const std::invalid_argument& e) {
      errors[i] = e.what();
    }
  });

  Json doc = Json::array();
  bool all_pass = true;
  for (std::size_t i = 0; i < claims.size(); ++i) {
    if (!reports[i]) throw std::invalid_argument(claims[i] + ": " + errors[i]);
    const VerificationReport& r = *reports[i];
    all_pass &= r.passed();
    out << (r.passed() ? "PASS " : "FAIL ") << r.claim() << " [" << r.range() << "]";
    if (const Witness* w = r.first_failure()) {
      out << " at " << w->location << ": expected " << w->expected << ", got " << w->actual;
    }
    out << "\n";
    for (const auto& n : r.notes()) out << "  " << n << "\n";
    doc.push_back(r.to_json());
  }
  if (!o.json_out.empty()) write_file(o.json_out, doc.dump(2) + "\n");
  return all_pass ? kPass : kVerificationFailure;
}

// ---------------------------------------------------------------- rate

struct RateOptions {
  std::string game = "m_aug";
  std::uint64_t t_max = 1000000;
  double ratio = 1.1;
  std::uint64_t fit_min = 1000;
  std::optional<std::uint64_t> fit_max;
  std::string out;
  std::string fit_json;
};

int cmd_rate(const RateOptions& o, std::ostream& out, std::ostream& err) {
  const InstanceBundle bundle = canonical_constants();
  const GameChoice game = resolve_game(o.game, "", o.game == "m" ? "u0" : "", &bundle);
  const std::vector<GapPoint> curve = gap_curve(game.matrix, game.init, o.t_max, SampleStride::geometric(o.ratio));

  std::ostringstream csv;
  csv << "t,gap_exact,gap_decimal\n";
  for (const auto& p : curve) csv << p.t << ',' << to_string(p.gap) << ',' << to_decimal(p.gap) << '\n';
  emit(o.out, csv.str(), out);

  try {
    const RateFit fit = fit_rate(curve, o.fit_min, o.fit_max.value_or(o.t_max));
    const Json doc{{"exponent", fit.exponent}, {"coefficient", fit.coefficient}, {"residual", fit.residual},
                   {"t_min", fit.t_min},       {"t_max", fit.t_max},             {"samples", fit.samples}};
    if (!o.fit_json.empty()) write_file(o.fit_json, doc.dump(2) + "\n");
    err << "fit: gap ~ " << fit.coefficient << " * t^" << fit.exponent << " over [" << fit.t_min << ", "
        << fit.t_max << "]\n";
  } catch (const std::invalid_argument& e) {
    err << "no fit: " << e.what() << "\n";
  }
  return kPass;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fictitious play lower-bound instance: simulation, construction and verification", "fplb"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "TOML config with one table per subcommand, e.g. [simulate]; flags take precedence");
  app.fallthrough();
  app.allow_config_extras(CLI::config_extras_mode::error);

  const std::vector<std::string> builtin_games = {"rps", "m", "m_aug"};

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run fictitious play and write trajectory.csv, report.json, meta.json");
  auto* game_opt = simulate->add_option("--game", sim.game, "Builtin game")->check(CLI::IsMember(builtin_games, CLI::ignore_case));
  simulate->add_option("--game-file", sim.game_file, "Game JSON {rows, cols, entries}")->excludes(game_opt);
  simulate->add_option("--init", sim.init, "Initial utility: zero, u0 (game m) or a JSON vector path");
  simulate->add_option("--steps", sim.steps, "Number of rounds")->check(CLI::PositiveNumber);
  simulate->add_option("--policy", sim.policy, "Tie-breaking")->check(CLI::IsMember({"lex", "strict", "adversarial"}));
  simulate->add_option("--seed", sim.seed, "Seed for the adversarial tie-breaker");
  simulate->add_option("--stride", sim.stride, "Trace sampling")->check(CLI::IsMember({"geometric", "every", "none"}));
  simulate->add_option("--ratio", sim.ratio, "Geometric sampling ratio");
  simulate->add_option("--checkpoint", sim.checkpoints, "Times at which to record x and U");
  simulate->add_option("--out", sim.out, "Output directory");

  ConstructOptions con;
  auto* construct = app.add_subcommand("construct", "Build the 9x9 game M and its 10x10 augmentation");
  construct->add_option("--delta", con.delta, "Augmentation shift, in (0, 1/1800)");
  construct->add_option("--emit-matrix", con.emit, "Print only M or M_aug")
      ->check(CLI::IsMember({"m", "m_aug"}, CLI::ignore_case));
  construct->add_option("--format", con.format, "Matrix output format")->check(CLI::IsMember({"json", "text"}));
  construct->add_option("--out", con.out, "Output file (default stdout)");

  SolveOptions sol;
  auto* solve = app.add_subcommand("solve", "Solve the key equation for (B, Delta) given Q0, Q1");
  solve->add_option("--q0", sol.q0, "Q0 as JSON (default: canonical)");
  solve->add_option("--q1", sol.q1, "Q1 as JSON (default: canonical)");
  solve->add_option("--b", sol.b, "Candidate B as JSON, for --check");
  solve->add_option("--delta", sol.delta, "Candidate Delta as a JSON vector, for --check");
  solve->add_flag("--check", sol.check, "Gate on membership, symmetry, negativity and d(k) > 0");
  solve->add_option("--json-out", sol.json_out, "Output file (default stdout)");

  SearchOptions sea;
  auto* search = app.add_subcommand("search", "Brute-force search for admissible pairs and interaction matrices");
  search->add_option("--max-a", sea.bounds.max_a, "Largest k multiplier a")->check(CLI::PositiveNumber);
  search->add_option("--max-b", sea.bounds.max_b, "Largest |b| in the shift k -> ak + b")->check(CLI::NonNegativeNumber);
  search->add_flag("--interpolate", sea.bounds.interpolate, "Include points along constant-action runs");
  search->add_flag("--pin-q0", sea.pin_q0, "Fix Q0 to the canonical matrix");
  search->add_flag("--pin-q1", sea.pin_q1, "Fix Q1 to the canonical matrix");
  search->add_option("--delta1-max", sea.bounds.delta1_max, "Delta1 grid 1..N")->check(CLI::PositiveNumber);
  search->add_option("--b22-steps", sea.bounds.b22_steps, "B22 grid -1/900..-N/900")->check(CLI::PositiveNumber);
  search->add_option("--phase-k", sea.bounds.phase_k, "Phases replayed per survivor")->check(CLI::PositiveNumber);
  search->add_option("--max-hits", sea.bounds.max_hits, "Hits kept in the output");
  search->add_flag("--serial", sea.serial, "Use the serial reference path");
  search->add_option("--json-out", sea.json_out, "Output file (default stdout)");

  VerifyOptions ver;
  auto* verify = app.add_subcommand("verify", "Replay and certify claims; exit 0 iff all selected claims pass");
  auto* claim_opt = verify->add_option("--claim", ver.claims, "Claim to check (repeatable)")->check(CLI::IsMember(kClaims));
  verify->add_flag("--all", ver.all, "Check every claim, fanned out across threads")->excludes(claim_opt);
  verify->add_option("--k", ver.k, "K for rps/theorem, last phase for phase")->check(CLI::PositiveNumber);
  verify->add_option("--t-max", ver.t_max, "Horizon for aug-offset, no-tie, rate")->check(CLI::Range(2ULL, 1ULL << 40));
  verify->add_option("--fit-min", ver.fit_min, "Rate fit window start");
  verify->add_option("--fit-max", ver.fit_max, "Rate fit window end (default t-max)");
  verify->add_option("--json-out", ver.json_out, "Write the reports as JSON");

  RateOptions rat;
  auto* rate = app.add_subcommand("rate", "Sample the duality gap and write CSV t,gap_exact,gap_decimal");
  rate->add_option("--game", rat.game, "Builtin game (m starts from U0)")->check(CLI::IsMember(builtin_games, CLI::ignore_case));
  rate->add_option("--t-max", rat.t_max, "Horizon")->check(CLI::PositiveNumber);
  rate->add_option("--ratio", rat.ratio, "Geometric sampling ratio");
  rate->add_option("--fit-min", rat.fit_min, "Fit window start");
  rate->add_option("--fit-max", rat.fit_max, "Fit window end (default t-max)");
  rate->add_option("--out", rat.out, "CSV output file (default stdout)");
  rate->add_option("--fit-json", rat.fit_json, "Write the log-log fit as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    sim.game = lower(sim.game);
    rat.game = lower(rat.game);
    if (*simulate) return cmd_simulate(sim, args, out);
    if (*construct) return cmd_construct(con, out);
    if (*solve) return cmd_solve(sol, out, err);
    if (*search) return cmd_search(sea, out, err);
    if (*verify) return cmd_verify(ver, out);
    if (*rate) return cmd_rate(rat, out, err);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::FileError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const TieEncountered& e) {
    err << "strict tie-breaking: " << e.what() << "\n";
    return kVerificationFailure;
  } catch (const InconsistentInstance& e) {
    err << "inconsistent instance: " << e.what() << "\n";
    return kVerificationFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace fplb::cli
