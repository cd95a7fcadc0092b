#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "qpower/capacity.hpp"
#include "qpower/classical.hpp"
#include "qpower/io.hpp"
#include "qpower/randstates.hpp"
#include "qpower/verify.hpp"

namespace qpower::cli {

namespace {

using io::format_real;
using io::Json;

constexpr const char* kSchema = "qpower/1";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void config_error(const std::string& msg) { throw Error(Errc::ConfigError, msg); }

struct Options {
  std::string channel;
  std::string ensemble;
  std::string hamiltonian;
  std::string levels;
  std::string kind = "noiseless";
  std::string objective = "holevo";
  std::string units = "nats";
  std::string format = "csv";
  std::string out;
  std::string lambda_grid;
  std::string std_dims;
  std::vector<std::string> suites;
  double b_min = kNaN;
  double b_max = kNaN;
  double b = kNaN;
  double p = 0.0;
  int b_points = 21;
  int restarts = 64;
  int letters = 2;
  int mc = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool strict = false;
  bool clamp_nonnegative = false;
  bool expect_piecewise = false;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      config_error(std::string("cannot parse ") + what + " '" + text + "'");
    }
  }
  if (values.empty()) config_error(std::string("empty ") + what);
  return values;
}

double in_units(double nats, const Options& o) { return o.units == "bits" ? nats_to_bits(nats) : nats; }

std::vector<double> threshold_grid(const Options& o, double lo, double hi) {
  const double a = std::isnan(o.b_min) ? lo : o.b_min;
  const double z = std::isnan(o.b_max) ? hi : o.b_max;
  if (o.b_points < 1) config_error("--B-points must be at least 1");
  if (o.b_points == 1) return {a};
  if (!(a < z)) config_error("grid requires --B-min < --B-max");
  return linear_grid(a, z, o.b_points);
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) config_error("cannot write '" + o.out + "'");
  file << text;
}

Json vector_json(const RealVector& v) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

Json result_json(double b, const CapacityResult& r, const Options& o) {
  Json j;
  j["B"] = b;
  j["value"] = in_units(r.value, o);
  j["value_nats"] = r.value;
  j["value_bits"] = nats_to_bits(r.value);
  j["achieved_energy"] = vector_json(r.achieved_energy);
  Json active = Json::array();
  for (bool a : r.active) active.push_back(a);
  j["active_constraints"] = active;
  j["status"] = std::string(to_string(r.status));
  Json states = Json::array();
  for (const auto& s : r.argmax_states) states.push_back(io::matrix_to_json(s));
  j["argmax"] = {{"probs", vector_json(r.argmax_probs)}, {"states", states}};
  return j;
}

// ---------------------------------------------------------------------------
// Problem construction shared by `curve` and `point`

struct Problem {
  std::vector<double> lambdas;  // empty: no sweep
  std::function<PointSolver(double lambda)> solver;
  std::function<std::pair<double, double>(double lambda)> range;
};

std::vector<ComplexMatrix> named_or_json_states(const std::string& arg, std::uint64_t seed) {
  if (arg == "computational") {
    ComplexVector k0(2), k1(2);
    k0 << 1.0, 0.0;
    k1 << 0.0, 1.0;
    return {projector(k0), projector(k1)};
  }
  if (arg == "trine") return trine_ensemble().states;
  if (arg == "cq-random") return random_cq_instance(seed, 0).states;
  return io::states_from_json(io::load_json_arg(arg));
}

std::pair<double, double> energy_span(const std::vector<ComplexMatrix>& states, const KrausChannel& ch,
                                      const ComplexMatrix& h) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& rho : states) {
    const double e = expectation(h, ch(rho));
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return {lo, hi};
}

ComplexMatrix resolve_hamiltonian(const Options& o, Eigen::Index dim) {
  if (!o.hamiltonian.empty()) return io::hamiltonian_from_arg(o.hamiltonian, dim);
  return io::hamiltonian_from_arg(dim == 2 ? "sigma_z" : "number_operator", dim);
}

Problem build_problem(const Options& o) {
  if (o.objective != "holevo" && o.objective != "private") config_error("--objective must be holevo or private");
  const bool is_private = o.objective == "private";
  if (o.channel.empty()) config_error("--channel is required");
  Problem prob;
  if (!o.lambda_grid.empty()) prob.lambdas = parse_list(o.lambda_grid, "--lambda-grid");

  if (o.channel == "cq-random") {
    if (!prob.lambdas.empty()) config_error("cq-random has no lambda parameter");
    const auto inst = random_cq_instance(o.seed, 0);
    const auto states = o.ensemble.empty() ? inst.states : named_or_json_states(o.ensemble, o.seed);
    const ComplexMatrix h = o.hamiltonian.empty() ? inst.hamiltonian : resolve_hamiltonian(o, 2);
    prob.solver = [=](double) {
      return is_private ? private_cq_point_solver(states, inst.channel, h) : cq_point_solver(states, inst.channel, h);
    };
    prob.range = [=](double) { return energy_span(states, inst.channel, h); };
    return prob;
  }

  const Json spec = io::load_json_arg(o.channel);
  const bool sweeps = !prob.lambdas.empty();

  if (io::channel_kind(spec) == "beam_splitter") {
    if (is_private) config_error("private objective is not available for the beam splitter");
    const Json ens = o.ensemble.empty() ? Json() : io::load_json_arg(o.ensemble);
    if (!ens.is_object() || !ens.contains("amplitudes"))
      config_error("beam splitter needs --ensemble {\"amplitudes\": [...]}");
    std::vector<cplx> amps;
    for (const auto& a : ens.at("amplitudes")) amps.push_back(io::scalar_from_json(a));
    const double fixed_pb = spec.value("p_b", 0.0);
    prob.solver = [=](double lambda) { return coherent_point_solver(amps, sweeps ? lambda : fixed_pb); };
    prob.range = [=](double lambda) {
      const CoherentEnsemble ce(amps, RealVector::Constant(static_cast<Eigen::Index>(amps.size()), 1.0 / amps.size()),
                                sweeps ? lambda : fixed_pb);
      const auto e = beam_splitter_output(ce).letter_energy;
      return std::pair{e.minCoeff(), e.maxCoeff()};
    };
    return prob;
  }

  if (sweeps && io::channel_kind(spec) == "kraus") config_error("--lambda-grid needs a parameterized channel kind");
  auto make_channel = [spec, sweeps](double lambda) {
    return sweeps ? io::channel_from_json(spec, lambda) : io::channel_from_json(spec);
  };
  const KrausChannel probe = make_channel(sweeps ? prob.lambdas.front() : 0.0);
  const ComplexMatrix h = resolve_hamiltonian(o, probe.dim_out());

  if (!o.ensemble.empty()) {
    const auto states = named_or_json_states(o.ensemble, o.seed);
    prob.solver = [=](double lambda) {
      const auto ch = make_channel(lambda);
      return is_private ? private_cq_point_solver(states, ch, h) : cq_point_solver(states, ch, h);
    };
    prob.range = [=](double lambda) { return energy_span(states, make_channel(lambda), h); };
    return prob;
  }

  if (o.restarts > 0 && !o.seed_given) config_error("--seed is required when --restarts > 0");
  if (o.restarts < 0) config_error("--restarts must be nonnegative");
  if (o.letters < 1) config_error("--letters must be positive");
  GeneralOptions opts;
  opts.restarts = o.restarts;
  opts.seed = o.seed;
  const int letters = o.letters;
  prob.solver = [=](double lambda) {
    const auto ch = make_channel(lambda);
    return is_private ? private_general_point_solver(ch, letters, h, opts)
                      : general_point_solver(ch, letters, h, opts);
  };
  prob.range = [=](double lambda) {
    const auto spectrum = hermitian_eigenvalues(make_channel(lambda).adjoint(h));
    return std::pair{spectrum.minCoeff(), spectrum.maxCoeff()};
  };
  return prob;
}

struct CurveRow {
  double lambda;
  double b;
  CapacityResult result;
};

int curve_exit(const std::vector<CurveRow>& rows, const Options& o) {
  bool maxiter = false, infeasible = false;
  for (const auto& r : rows) {
    maxiter |= r.result.status == SolveStatus::MaxIter;
    infeasible |= r.result.status == SolveStatus::Infeasible;
  }
  if (maxiter) return kNoConvergence;
  if (o.strict && infeasible) return kPropertyFailure;
  return kOk;
}

std::string render_curve(const std::vector<CurveRow>& rows, bool with_lambda, const Options& o,
                         const char* command) {
  if (o.format == "json") {
    Json points = Json::array();
    for (const auto& r : rows) {
      Json j = result_json(r.b, r.result, o);
      if (with_lambda) j["lambda"] = r.lambda;
      points.push_back(j);
    }
    Json doc{{"schema", kSchema}, {"command", command}, {"units", o.units}, {"points", points}};
    return doc.dump(2) + "\n";
  }
  std::ostringstream s;
  if (with_lambda) s << "lambda,";
  s << "B,capacity_nats,capacity_bits,achieved_energy,status\n";
  for (const auto& r : rows) {
    if (with_lambda) s << format_real(r.lambda) << ',';
    const double energy = r.result.achieved_energy.size() ? r.result.achieved_energy(0) : kNaN;
    s << format_real(r.b) << ',' << format_real(r.result.value) << ','
      << format_real(nats_to_bits(r.result.value)) << ',' << format_real(energy) << ','
      << to_string(r.result.status) << '\n';
  }
  return s.str();
}

int cmd_curve(const Options& o, std::ostream& out) {
  const Problem prob = build_problem(o);
  const bool with_lambda = !prob.lambdas.empty();
  const std::vector<double> lambdas = with_lambda ? prob.lambdas : std::vector<double>{0.0};
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  if (std::isnan(o.b_min) || std::isnan(o.b_max))
    for (double l : lambdas) {
      const auto [a, z] = prob.range(l);
      lo = std::min(lo, a);
      hi = std::max(hi, z);
    }
  const auto grid = threshold_grid(o, lo, hi);
  std::vector<CurveRow> rows;
  for (double l : lambdas) {
    const auto curve = sweep_curve(prob.solver(l), grid);
    for (std::size_t k = 0; k < grid.size(); ++k) rows.push_back({l, grid[k], curve.points[k]});
  }
  emit(o, render_curve(rows, with_lambda, o, "curve"), out);
  return curve_exit(rows, o);
}

int cmd_point(const Options& o, std::ostream& out) {
  if (std::isnan(o.b)) config_error("point needs --B");
  if (!o.lambda_grid.empty()) config_error("point takes a single channel; drop --lambda-grid");
  const Problem prob = build_problem(o);
  CapacityResult r;
  try {
    r = prob.solver(0.0)(o.b, nullptr);
  } catch (const Error& e) {
    if (e.code() != Errc::Infeasible) throw;
    r.status = SolveStatus::Infeasible;
  }
  std::vector<CurveRow> rows{{0.0, o.b, r}};
  if (o.format == "json") {
    Json doc = result_json(o.b, r, o);
    doc["schema"] = kSchema;
    doc["command"] = "point";
    doc["units"] = o.units;
    emit(o, doc.dump(2) + "\n", out);
  } else if (o.format == "csv") {
    emit(o, render_curve(rows, false, o, "point"), out);
  } else {
    std::ostringstream s;
    s << "B " << format_real(o.b) << "\nvalue " << format_real(in_units(r.value, o)) << ' ' << o.units
      << "\nstatus " << to_string(r.status) << "\nprobs";
    for (Eigen::Index k = 0; k < r.argmax_probs.size(); ++k) s << ' ' << format_real(r.argmax_probs(k));
    s << '\n';
    emit(o, s.str(), out);
  }
  return curve_exit(rows, o);
}

EnergySpectrum resolve_spectrum(const Options& o) {
  if (!o.levels.empty()) {
    const auto first = o.levels.find_first_not_of(" \t");
    if (first != std::string::npos && (o.levels[first] == '{' || o.levels[first] == '['))
      return io::spectrum_from_json(io::load_json_arg(o.levels));
    const auto values = parse_list(o.levels, "--levels");
    return EnergySpectrum(Eigen::Map<const RealVector>(values.data(), static_cast<Eigen::Index>(values.size())));
  }
  if (!o.hamiltonian.empty() && o.hamiltonian != "sigma_z" && o.hamiltonian != "number_operator") {
    const Json j = o.hamiltonian.find('[') == std::string::npos ? Json() : io::load_json_arg(o.hamiltonian);
    if (j.is_array() && !j.empty() && j[0].is_array())
      return EnergySpectrum(hermitian_eigenvalues(io::matrix_from_json(j)));
    const auto values = j.is_array() ? j.get<std::vector<double>>() : parse_list(o.hamiltonian, "--hamiltonian");
    return EnergySpectrum(Eigen::Map<const RealVector>(values.data(), static_cast<Eigen::Index>(values.size())));
  }
  if (o.hamiltonian == "sigma_z") return EnergySpectrum((RealVector(2) << -1.0, 1.0).finished());
  config_error("randstates needs --levels or a diagonal --hamiltonian");
}

int cmd_randstates(const Options& o, std::ostream& out) {
  if (!o.std_dims.empty()) {
    std::vector<int> dims;
    for (double d : parse_list(o.std_dims, "--std-dims")) {
      if (d < 1 || d != std::floor(d)) config_error("--std-dims entries must be positive integers");
      dims.push_back(static_cast<int>(d));
    }
    const int samples = o.mc > 0 ? o.mc : 10000;
    const auto curve = entropy_std_curve(dims, samples, o.seed);
    std::ostringstream s;
    if (o.format == "json") {
      Json pts = Json::array();
      for (const auto& p : curve) pts.push_back({{"N", p.n}, {"entropy_std", in_units(p.entropy_std, o)}});
      s << Json{{"schema", kSchema}, {"command", "randstates"}, {"units", o.units}, {"std_curve", pts}}.dump(2) << '\n';
    } else {
      s << "N,entropy_std\n";
      for (const auto& p : curve) s << p.n << ',' << format_real(p.entropy_std) << '\n';
    }
    emit(o, s.str(), out);
    return kOk;
  }

  const EnergySpectrum spectrum = resolve_spectrum(o);
  if (o.mc != 0 && o.mc < 100) config_error("--mc needs at least 100 samples");
  const auto grid = threshold_grid(o, spectrum.levels.minCoeff(), spectrum.levels.maxCoeff());
  struct Row {
    double b, analytic, mc_mean, mc_stderr;
    std::string status;
  };
  std::vector<Row> rows;
  bool all_ok = true;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    Row row{grid[k], kNaN, kNaN, kNaN, "OK"};
    try {
      row.analytic = noiseless_capacity_power(spectrum, grid[k], o.clamp_nonnegative);
      if (o.mc > 0) {
        const auto est = mc_constrained_entropy(spectrum, grid[k], o.mc, o.seed + k);
        row.mc_mean = est.mean;
        row.mc_stderr = est.standard_error;
      }
    } catch (const Error& e) {
      if (e.code() == Errc::ConfigError) throw;
      row.status = std::string(to_string(e.code()));
      all_ok = false;
    }
    rows.push_back(row);
  }
  std::ostringstream s;
  if (o.format == "json") {
    Json pts = Json::array();
    for (const auto& r : rows) {
      Json j{{"B", r.b}, {"value", in_units(r.analytic, o)}, {"analytic_nats", r.analytic}, {"status", r.status}};
      if (o.mc > 0) {
        j["mc_mean_nats"] = r.mc_mean;
        j["mc_stderr"] = r.mc_stderr;
      }
      pts.push_back(j);
    }
    s << Json{{"schema", kSchema}, {"command", "randstates"}, {"units", o.units}, {"points", pts}}.dump(2) << '\n';
  } else {
    s << (o.mc > 0 ? "B,analytic_nats,mc_mean_nats,mc_stderr,status\n" : "B,analytic_nats,status\n");
    for (const auto& r : rows) {
      s << format_real(r.b) << ',' << format_real(r.analytic) << ',';
      if (o.mc > 0) s << format_real(r.mc_mean) << ',' << format_real(r.mc_stderr) << ',';
      s << r.status << '\n';
    }
  }
  emit(o, s.str(), out);
  return o.strict && !all_ok ? kPropertyFailure : kOk;
}

int cmd_classical(const Options& o, std::ostream& out) {
  std::optional<DiscreteChannel> ch;
  std::function<double(double)> closed_form = [](double) { return kNaN; };
  if (o.kind == "noiseless") {
    ch = binary_noiseless();
    closed_form = [](double b) { return binary_noiseless_cb(b); };
  } else if (o.kind == "bsc") {
    ch = binary_symmetric(o.p);
    closed_form = [p = o.p](double b) { return bsc_cb(p, b); };
  } else if (o.kind == "bec") {
    ch = binary_erasure(o.p);
    closed_form = [p = o.p](double b) { return bec_cb(p, b); };
  } else if (o.kind == "custom") {
    if (o.channel.empty()) config_error("custom classical channel needs --channel {\"Q\":..., \"b\":...}");
    ch = io::discrete_channel_from_json(io::load_json_arg(o.channel));
  } else {
    config_error("--kind must be noiseless, bsc, bec or custom");
  }
  const RealVector e = ch->input_energies();
  const auto grid = threshold_grid(o, e.minCoeff(), e.maxCoeff());
  std::vector<CurveRow> rows;
  std::vector<double> closed;
  for (double b : grid) {
    CapacityResult r;
    try {
      r = capacity_power_ba(*ch, b);
    } catch (const Error& err) {
      if (err.code() != Errc::Infeasible) throw;
      r.status = SolveStatus::Infeasible;
    }
    rows.push_back({0.0, b, r});
    double cf = kNaN;
    try {
      cf = closed_form(b);
    } catch (const Error&) {
    }
    closed.push_back(cf);
  }
  std::string text;
  if (o.format == "json") {
    Json pts = Json::array();
    for (std::size_t k = 0; k < rows.size(); ++k) {
      Json j = result_json(rows[k].b, rows[k].result, o);
      j["closed_form_nats"] = closed[k];
      pts.push_back(j);
    }
    text = Json{{"schema", kSchema}, {"command", "classical"}, {"units", o.units}, {"points", pts}}.dump(2) + "\n";
  } else {
    std::ostringstream s;
    s << "B,capacity_nats,capacity_bits,achieved_energy,status,closed_form_nats\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto& r = rows[k].result;
      const double energy = r.achieved_energy.size() ? r.achieved_energy(0) : kNaN;
      s << format_real(rows[k].b) << ',' << format_real(r.value) << ',' << format_real(nats_to_bits(r.value))
        << ',' << format_real(energy) << ',' << to_string(r.status) << ',' << format_real(closed[k]) << '\n';
    }
    text = s.str();
  }
  emit(o, text, out);
  return curve_exit(rows, o);
}

int cmd_verify(const Options& o, std::ostream& out) {
  std::vector<std::string> names;
  for (const auto& s : o.suites) {
    if (s == "all") {
      names.insert(names.end(), suite_names().begin(), suite_names().end());
      continue;
    }
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      config_error("unknown suite '" + s + "'");
    names.push_back(s);
  }
  if (names.empty()) config_error("verify needs at least one suite name");

  VerifyConfig cfg;
  cfg.seed = o.seed_given ? o.seed : cfg.seed;
  cfg.restarts = o.restarts;
  cfg.letters = o.letters;
  cfg.expect_piecewise = o.expect_piecewise;
  if (!o.channel.empty() && o.channel != "cq-random") {
    cfg.channel = io::channel_from_json(io::load_json_arg(o.channel));
    cfg.hamiltonian = resolve_hamiltonian(o, cfg.channel->dim_out());
  }
  if (!std::isnan(o.b_min) && !std::isnan(o.b_max)) cfg.grid = threshold_grid(o, o.b_min, o.b_max);

  bool all = true;
  Json suites = Json::array();
  std::ostringstream s;
  for (const auto& name : names) {
    const auto res = run_suite(name, cfg);
    all &= res.passed;
    s << (res.passed ? "PASS " : "FAIL ") << res.name << " metric=" << format_real(res.metric) << '\n';
    for (const auto& line : res.lines) s << line << '\n';
    suites.push_back({{"name", res.name}, {"passed", res.passed}, {"metric", res.metric}, {"details", res.lines}});
  }
  if (o.format == "json")
    emit(o, Json{{"schema", kSchema}, {"command", "verify"}, {"suites", suites}}.dump(2) + "\n", out);
  else
    emit(o, s.str(), out);
  return all ? kOk : kPropertyFailure;
}

void add_output_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--units", o.units, "nats or bits")->check(CLI::IsMember({"nats", "bits"}));
  cmd->add_option("--out", o.out, "output file (default stdout)");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json", "text"}));
  cmd->add_flag("--strict", o.strict, "nonzero exit on infeasible or out-of-range points");
}

void add_grid_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--B-min", o.b_min, "smallest threshold");
  cmd->add_option("--B-max", o.b_max, "largest threshold");
  cmd->add_option("--B-points", o.b_points, "number of thresholds");
}

void add_seed_flag(CLI::App* cmd, Options& o) {
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&o](const std::uint64_t& s) { o.seed = s, o.seed_given = true; }, "random seed");
}

void add_problem_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--channel", o.channel, "channel JSON (path or inline) or cq-random");
  cmd->add_option("--ensemble", o.ensemble, "signal states: JSON, computational, trine or cq-random");
  cmd->add_option("--hamiltonian", o.hamiltonian, "sigma_z, number_operator, matrix or diagonal list");
  cmd->add_option("--restarts", o.restarts, "random state sets for state optimization");
  cmd->add_option("--letters", o.letters, "number of signal states for state optimization");
  cmd->add_option("--objective", o.objective, "holevo or private")->check(CLI::IsMember({"holevo", "private"}));
  add_seed_flag(cmd, o);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Capacity-power functions of quantum and classical channels", "qpower"};
  app.require_subcommand(1, 1);

  auto* curve = app.add_subcommand("curve", "trace C1(B) or P1(B) over a threshold grid");
  add_problem_flags(curve, o);
  add_grid_flags(curve, o);
  add_output_flags(curve, o);
  curve->add_option("--lambda-grid", o.lambda_grid, "comma-separated channel parameters");

  auto* point = app.add_subcommand("point", "solve a single threshold");
  add_problem_flags(point, o);
  add_output_flags(point, o);
  point->add_option("--B", o.b, "energy threshold")->required();
  point->add_option("--lambda-grid", o.lambda_grid, "not supported for single points");

  auto* verify = app.add_subcommand("verify", "run named property suites");
  verify->add_option("suites", o.suites, "suite names or all");
  verify->add_option("--channel", o.channel, "channel JSON or cq-random");
  verify->add_option("--hamiltonian", o.hamiltonian, "Hamiltonian for a supplied channel");
  verify->add_option("--restarts", o.restarts, "random state sets for state optimization");
  verify->add_option("--letters", o.letters, "number of signal states");
  verify->add_flag("--expect-piecewise", o.expect_piecewise, "report concavity violations without failing");
  add_seed_flag(verify, o);
  add_grid_flags(verify, o);
  add_output_flags(verify, o);

  auto* rand = app.add_subcommand("randstates", "random-state entropy and the noiseless capacity-power curve");
  rand->add_option("--levels", o.levels, "energy levels: list, JSON array or {\"levels\": [...]}");
  rand->add_option("--hamiltonian", o.hamiltonian, "diagonal list or matrix supplying the levels");
  rand->add_option("--mc", o.mc, "Monte Carlo samples per point");
  rand->add_option("--std-dims", o.std_dims, "dimensions for the entropy standard deviation curve");
  rand->add_flag("--clamp-nonnegative", o.clamp_nonnegative, "clamp the analytic curve at zero");
  add_seed_flag(rand, o);
  add_grid_flags(rand, o);
  add_output_flags(rand, o);

  auto* classical = app.add_subcommand("classical", "classical capacity-power baselines");
  classical->add_option("--kind", o.kind, "noiseless, bsc, bec or custom");
  classical->add_option("--p", o.p, "crossover or erasure probability");
  classical->add_option("--channel", o.channel, "custom channel JSON {\"Q\": ..., \"b\": ...}");
  add_grid_flags(classical, o);
  add_output_flags(classical, o);

  std::vector<const char*> argv{"qpower"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "ConfigError: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (curve->parsed()) return cmd_curve(o, out);
    if (point->parsed()) return cmd_point(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (rand->parsed()) return cmd_randstates(o, out);
    return cmd_classical(o, out);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return e.code() == Errc::NoConvergence ? kNoConvergence : kConfigError;
  } catch (const std::exception& e) {
    err << "ConfigError: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace qpower::cli
