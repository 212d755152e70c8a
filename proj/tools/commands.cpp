// Copyright 2026 The adiaerr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "adiaerr/errors.hpp"
#include "adiaerr/experiment.hpp"
#include "adiaerr/io.hpp"
#include "adiaerr/randomcircuit.hpp"

namespace adiaerr::cli {

namespace {

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string engine;
  std::string format;
};

ExperimentConfig default_config(const std::string& command) {
  ExperimentConfig c;
  c.name = command;
  c.record_every = 10;
  if (command == "scaling") {
    c.vertices = paths::tfim_sweep();
    c.sizes = {20, 40, 80};
    c.duration = *DurationRule::parse("n^2/40");
    c.engine = Engine::FreeFermion;
    c.engine_name = "freefermion";
    c.record_every = 100;
  } else if (command == "loop") {
    c.vertices = paths::disordered_loop();
    c.duration = *DurationRule::parse("150");
    c.observe_populations = true;
  } else if (command == "afm") {
    c.vertices = paths::afm_loop();
    c.duration = *DurationRule::parse("150");
    c.initial_state = "neel";
    c.reference_state = "neel";
    c.observe_populations = true;
  } else {
    c.vertices = paths::zzxz_sweep();
    c.duration = *DurationRule::parse("10");
  }
  return c;
}

ExperimentConfig resolve_config(const std::string& command, const Globals& g) {
  ExperimentConfig c = g.config_path.empty() ? default_config(command) : io::load_config(g.config_path);
  if (g.seed) c.seed = *g.seed;
  if (!g.out_dir.empty()) c.output_dir = g.out_dir;
  if (!g.engine.empty()) {
    c.engine_name = g.engine;
    c.engine = engine_from_string(g.engine);
  }
  if (!g.format.empty()) c.output_format = g.format;
  require_valid(c);
  return c;
}

std::string fmt(double x) { return io::format_double(x); }

void write_plot_stub(const std::string& dir, const std::vector<std::string>& files) {
  std::ostringstream gp;
  gp << "# gnuplot script: plot energy (column 5) and delta_e (column 6) against t\n"
     << "set datafile separator ','\nset key autotitle columnhead\nset xlabel 't'\n";
  std::string sep = "plot ";
  for (const auto& f : files) {
    if (f.size() < 4 || f.substr(f.size() - 4) != ".csv") continue;
    gp << sep << "'" << std::filesystem::path(f).filename().string() << "' using 1:5 with lines";
    sep = ", \\\n     ";
  }
  gp << "\n";
  io::write_text((std::filesystem::path(dir) / "plot.gp").string(), gp.str());
}

void export_all(const ExperimentConfig& c, const std::vector<ResultRecord>& records,
                const std::string& dir, std::ostream& out) {
  const auto files = io::export_records(records, io::config_to_json(c), dir, c.output_format);
  if (c.output_format == "csv") write_plot_stub(dir, files);
  out << "wrote " << files.size() << " files to " << dir << "\n";
}

void print_record_summary(const ResultRecord& r, std::ostream& out) {
  const Row& f = r.final_row();
  out << "n=" << r.info.n << " T=" << fmt(r.info.duration) << " " << r.info.label
      << " E=" << fmt(f.energy);
  if (f.delta_e) out << " delta_e=" << fmt(*f.delta_e);
  if (!f.p.empty()) {
    for (std::size_t k = 0; k < f.p.size(); ++k) out << " p" << k << "=" << fmt(f.p[k]);
    out << " p_rest=" << fmt(f.p_rest.value_or(0.0));
  }
  if (r.info.truncation_flagged) out << " [truncation above " << fmt(kTruncationFlag) << "]";
  out << "\n";
}

int cmd_sweep(const Globals& g, const std::vector<double>& durations, std::ostream& out) {
  ExperimentConfig c = resolve_config("sweep", g);
  std::vector<double> ts = durations;
  if (ts.empty()) ts.push_back(c.duration(c.sizes.front()));
  const std::string base = c.output_dir;
  for (double T : ts) {
    ExperimentConfig ct = c;
    ct.duration = DurationRule{T, 0.0, fmt(T)};
    require_valid(ct);
    const auto records = run_experiment(ct);
    for (const auto& r : records) print_record_summary(r, out);
    export_all(ct, records, (std::filesystem::path(base) / (c.name + "_T" + fmt(T))).string(), out);
  }
  return kExitOk;
}

int cmd_scaling(const Globals& g, std::ostream& out) {
  const ExperimentConfig c = resolve_config("scaling", g);
  const auto records = run_experiment(c);
  std::vector<double> ns, des;
  for (const auto& r : records) {
    print_record_summary(r, out);
    if (r.final_delta_e()) {
      ns.push_back(r.info.n);
      des.push_back(*r.final_delta_e());
    }
  }
  if (ns.size() >= 2) {
    const LineFit lin = fit_line(ns, des);
    out << "linear slope d(delta_e)/dn=" << fmt(lin.slope) << " +- " << fmt(lin.slope_error) << "\n";
    bool positive = true;
    for (double d : des) positive = positive && d > 0.0;
    if (positive) out << "log-log exponent=" << fmt(loglog_exponent(ns, des)) << "\n";
  }
  export_all(c, records, c.output_dir, out);
  return kExitOk;
}

int cmd_loop(const Globals& g, std::ostream& out) {
  ExperimentConfig c = resolve_config("loop", g);
  c.observe_populations = true;
  const auto records = run_experiment(c);
  for (const auto& r : records) print_record_summary(r, out);
  export_all(c, records, c.output_dir, out);
  return kExitOk;
}

int cmd_afm(const Globals& g, std::ostream& out) {
  ExperimentConfig c = resolve_config("afm", g);
  c.observe_populations = true;
  std::vector<ResultRecord> all;
  for (int n : c.sizes) {
    AfmStudy s = afm_parity_study(c, n);
    for (const auto* r : {&s.clean, &s.left_site, &s.right_site}) print_record_summary(*r, out);
    auto levels = [&](const char* which, const std::optional<ExcitationPopulations>& p) {
      if (!p) return;
      out << "  levels " << which;
      for (std::size_t k = 0; k < p->p.size(); ++k) out << " L" << k << "=" << fmt(p->p[k]);
      out << " rest=" << fmt(p->rest) << "\n";
    };
    levels(s.left_site.info.label.c_str(), s.left_levels);
    levels(s.right_site.info.label.c_str(), s.right_levels);
    all.push_back(std::move(s.clean));
    all.push_back(std::move(s.left_site));
    all.push_back(std::move(s.right_site));
  }
  export_all(c, all, c.output_dir, out);
  return kExitOk;
}

int cmd_markov(const Globals& g, randomcircuit::MarkovQuery q, std::ostream& out) {
  if (g.seed) q.seed = *g.seed;
  const randomcircuit::MarkovStats st = randomcircuit::simulate(q);
  std::string csv = "t,mean_q,stderr_q,p_return,p_return_lower,p_return_upper,p_full,p_unresolved\n";
  for (int t = 0; t <= q.t_layers; ++t) {
    const auto w = randomcircuit::wilson(st.zero_count[t], st.samples);
    csv += std::to_string(t) + "," + fmt(st.mean(t)) + "," + fmt(st.standard_error(t)) + "," +
           fmt(w.estimate) + "," + fmt(w.lower) + "," + fmt(w.upper) + "," +
           fmt(st.fraction_full(t)) + "," + fmt(st.fraction_unresolved(t)) + "\n";
  }
  const int t = q.t_layers;
  out << "n=" << q.n << " layers=" << t << " samples=" << q.samples << " <q>=" << fmt(st.mean(t))
      << " +- " << fmt(st.standard_error(t)) << " Pr(X=0)=" << fmt(st.fraction_zero(t))
      << " Pr(X=n)=" << fmt(st.fraction_full(t)) << "\n";
  const std::string dir = g.out_dir.empty() ? "out" : g.out_dir;
  const std::string fmt_name = g.format.empty() ? "csv" : g.format;
  if (fmt_name == "json") {
    nlohmann::json j = {{"n", q.n}, {"layers", q.t_layers}, {"samples", q.samples},
                        {"seed", q.seed}, {"version", version()}};
    for (int u = 0; u <= q.t_layers; ++u) {
      j["mean_q"].push_back(st.mean(u));
      j["stderr_q"].push_back(st.standard_error(u));
      j["p_return"].push_back(st.fraction_zero(u));
    }
    io::write_text((std::filesystem::path(dir) / "markov.json").string(), j.dump(2) + "\n");
  } else if (fmt_name == "csv") {
    io::write_text((std::filesystem::path(dir) / "markov.csv").string(), csv);
  } else {
    throw InputError("unknown output format '" + fmt_name + "'");
  }
  return kExitOk;
}

int cmd_bound(const Globals& g, const BoundQuery& q, std::ostream& out) {
  const BoundResult r = concentration_bound(q);
  if (g.format == "json") {
    out << nlohmann::json{{"bound", r.bound}, {"valid", r.valid}}.dump() << "\n";
  } else {
    out << "sqrt(p_f) <= " << fmt(r.bound) << " (condition " << (r.valid ? "holds" : "fails")
        << ")\n";
  }
  return kExitOk;
}

int cmd_validate(const Globals& g, int n, std::ostream& out) {
  if (!g.config_path.empty()) {
    ExperimentConfig c = io::load_config(g.config_path);
    if (!g.engine.empty()) {
      c.engine_name = g.engine;
      c.engine = engine_from_string(g.engine);
    }
    const auto problems = validate(c);
    for (const auto& p : problems) out << "config: " << p << "\n";
    if (!problems.empty()) return kExitValidation;
    out << "config: ok\n";
  }
  if (n < 2 || n > 10) throw InputError("validate runs engine cross-checks at 2 <= n <= 10");
  bool ok = true;
  for (const auto& c : cross_validate(n)) {
    out << (c.passed() ? "ok   " : "FAIL ") << c.name << " diff=" << fmt(c.difference())
        << " tol=" << fmt(c.tolerance) << "\n";
    ok = ok && c.passed();
  }
  return ok ? kExitOk : kExitNumerical;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adiabatic evolution under local errors: engines and experiment drivers"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config_path, "JSON experiment config");
  auto* seed_opt = app.add_option("--seed", seed, "Master seed");
  app.add_option("--out", g.out_dir, "Output directory");
  app.add_option("--engine", g.engine, "exact, mps or freefermion");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::vector<double> durations;
  auto* sweep = app.add_subcommand("sweep", "Clean and noisy sweeps over a list of durations");
  sweep->add_option("--durations", durations, "Total durations T")->delimiter(',');
  auto* scaling = app.add_subcommand("scaling", "delta_e against system size");
  auto* loop = app.add_subcommand("loop", "Closed loops with excitation populations");
  auto* afm = app.add_subcommand("afm", "Error-site parity study in the antiferromagnetic phase");

  randomcircuit::MarkovQuery mq;
  mq.t_layers = 200;
  auto* markov = app.add_subcommand("markov", "Error spreading in a brick-wall random circuit");
  markov->add_option("--n", mq.n, "Number of qubits");
  markov->add_option("--layers", mq.t_layers, "Circuit depth");
  markov->add_option("--samples", mq.samples, "Monte Carlo trajectories");
  markov->add_option("--start", mq.start_site, "Seed site (default n/2)");
  markov->add_option("--parity", mq.first_parity, "Bond parity of the first layer")
      ->check(CLI::Range(0, 1));

  BoundQuery bq;
  auto* bound = app.add_subcommand("bound", "Concentration bound on the overlap with a far eigenspace");
  bound->add_option("--lambda", bq.lambda, "Energy before the error")->required();
  bound->add_option("--c", bq.c, "Largest single-error energy change")->required();
  bound->add_option("--f", bq.f, "Target eigenspace energy")->required();
  bound->add_option("--D", bq.D, "Lattice dimension");
  bound->add_option("--sigma", bq.sigma, "Correlation length");
  bound->add_option("--m", bq.m, "Number of local terms")->required();

  int validate_n = 8;
  auto* validate_cmd = app.add_subcommand("validate", "Config checks and engine cross-validation");
  validate_cmd->add_option("--n", validate_n, "Chain length for the cross-checks (<= 10)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitValidation;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (*sweep) return cmd_sweep(g, durations, out);
    if (*scaling) return cmd_scaling(g, out);
    if (*loop) return cmd_loop(g, out);
    if (*afm) return cmd_afm(g, out);
    if (*markov) return cmd_markov(g, mq, out);
    if (*bound) return cmd_bound(g, bq, out);
    if (*validate_cmd) return cmd_validate(g, validate_n, out);
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what();
    if (e.time() > 0.0) err << " at t=" << fmt(e.time());
    err << "\n";
    return kExitCapacity;
  } catch (const NumericalError& e) {
    err << "numerical: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitValidation;
}

}  // namespace adiaerr::cli
