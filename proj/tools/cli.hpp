#pragma once

// Command-line front end. Everything numeric goes through the library; this
// file only parses flags, builds channels and encodings, and prints.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subchan.hpp"

namespace subchan::cli {

struct Options {
  std::string channel = "pd";
  std::optional<double> eta;
  std::optional<double> p;
  std::size_t dim = 32;
  std::string kraus_file;
  std::vector<std::size_t> levels;
  std::string encoding_file;
  bool quadrature = false;
  std::size_t n_theta = 16;
  std::size_t n_phi = 16;
  std::size_t restarts = 20;
  std::optional<std::uint64_t> seed;
  double eta_start = 0.0;
  double eta_end = 1.0;
  std::size_t steps = 11;
  std::string out;
  std::optional<std::size_t> block;
  double tol = default_tolerances.hull_leakage;
};

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Splits a key=value file into "--key value" tokens. Blank lines and # comments
// are skipped; a bare key becomes a flag.
inline std::vector<std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    const auto eq = line.find('=');
    std::string key = CLI::detail::trim_copy(line.substr(0, eq));
    if (key.empty()) continue;
    out.push_back("--" + key);
    if (eq != std::string::npos) out.push_back(CLI::detail::trim_copy(line.substr(eq + 1)));
  }
  return out;
}

inline KrausChannel make_channel(const Options& o, std::optional<double> eta_override = std::nullopt) {
  const auto need = [](const std::optional<double>& v, const char* flag) {
    if (!v) throw CLI::RequiredError(flag);
    return *v;
  };
  if (o.channel == "pd") return phase_damping(eta_override ? *eta_override : need(o.eta, "--eta"), o.dim);
  if (o.channel == "ad") return amplitude_damping(eta_override ? *eta_override : need(o.eta, "--eta"), o.dim);
  if (o.channel == "dep") return depolarizing(eta_override ? *eta_override : need(o.p, "--p"), o.dim);
  if (o.kraus_file.empty()) throw CLI::RequiredError("--kraus-file");
  return load_channel(o.kraus_file);
}

struct Encoding {
  Subspace subspace;
  std::string label;
};

inline Encoding make_encoding(const Options& o, std::size_t dim) {
  if (!o.encoding_file.empty()) {
    const EncodingCoefficients e = load_encoding(o.encoding_file);
    return {encoding_from_coefficients(e.c, e.d, dim), "file:" + o.encoding_file};
  }
  if (o.levels.empty()) throw CLI::RequiredError("--levels or --encoding-file");
  std::string label = "levels:";
  for (std::size_t i = 0; i < o.levels.size(); ++i) label += (i ? ";" : "") + std::to_string(o.levels[i]);
  return {Subspace::from_levels(std::span<const std::size_t>(o.levels), dim), label};
}

inline void print_channel(std::ostream& out, const KrausChannel& ch) {
  out << "channel: " << to_string(ch.family());
  if (ch.parameter()) out << " (" << fmt(*ch.parameter()) << ")";
  out << ", dim " << ch.dim() << ", " << ch.kraus_truncation() << " Kraus operators\n";
  out << "unitality defect: " << sci(tp_defect(ch)) << '\n';
}

inline int cmd_fidelity(const Options& o, std::ostream& out) {
  const KrausChannel ch = make_channel(o);
  const Encoding enc = make_encoding(o, ch.dim());
  print_channel(out, ch);
  out << "encoding: " << enc.label << '\n';
  if (o.quadrature) {
    const FidelityReport r = average_fidelity(ch, enc.subspace, o.n_theta, o.n_phi);
    out << "average fidelity: " << fmt(r.value) << '\n';
    out << "quadrature gap: " << sci(*r.cross_check_gap) << " (" << o.n_theta << "x" << o.n_phi << " nodes)\n";
  } else {
    out << "average fidelity: " << fmt(average_fidelity_closed(ch, enc.subspace).value) << '\n';
  }
  return 0;
}

inline int cmd_hull_check(const Options& o, std::ostream& out) {
  const KrausChannel ch = make_channel(o);
  const Encoding enc = make_encoding(o, ch.dim());
  print_channel(out, ch);
  out << "subspace: " << enc.label << '\n';
  Tolerances tol;
  tol.hull_leakage = o.tol;
  const HullReport r = invariant_hull_check(ch, enc.subspace, tol);
  out << (r.is_invariant_hull ? "invariant hull" : "not an invariant hull") << '\n';
  out << "max leakage: " << sci(r.max_leakage) << " over " << r.probed_inputs << " inputs\n";
  out << "subchannel: " << (r.is_subchannel ? "yes" : "no") << " (defect " << sci(r.subchannel_defect) << ")\n";
  out << "unital subchannel: " << (r.is_unital_subchannel ? "yes" : "no") << " (defect "
      << sci(r.unitality_defect) << ")\n";
  return 0;
}

inline int cmd_fixed_points(const Options& o, std::ostream& out) {
  const KrausChannel ch = make_channel(o);
  print_channel(out, ch);
  const auto fp = fixed_point_space(ch, default_tolerances.fixed_point);
  out << "fixed-point space dimension: " << fp.size() << '\n';
  for (std::size_t i = 0; i < fp.size(); ++i) {
    out << "  [" << i << "]";
    for (Eigen::Index r = 0; r < fp[i].rows(); ++r)
      for (Eigen::Index c = 0; c < fp[i].cols(); ++c)
        if (std::abs(fp[i](r, c)) > 1e-8) out << " (" << r << "," << c << ")=" << format_complex(fp[i](r, c));
    out << '\n';
  }
  return 0;
}

inline int cmd_optimize(const Options& o, std::ostream& out) {
  const KrausChannel ch = make_channel(o);
  std::uint64_t seed = 1;
  if (o.seed) {
    seed = *o.seed;
  } else if (const char* env = std::getenv("SUBCHAN_SEED")) {
    try {
      seed = std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError("SUBCHAN_SEED", std::string("not an unsigned integer: ") + env);
    }
  }
  std::vector<std::size_t> levels = o.levels.empty() ? std::vector<std::size_t>{0, 1, 2} : o.levels;
  const OptimizationResult r = optimize_encoding(ch, levels, o.restarts, seed);
  print_channel(out, ch);
  out << "levels:";
  for (auto l : levels) out << ' ' << l;
  out << "\nrestarts: " << r.restarts_run << ", seed " << seed << '\n';
  out << "best fidelity: " << fmt(r.best_fidelity) << " (restart " << r.best_restart << ")\n";
  for (std::size_t v = 0; v < 2; ++v) {
    out << "psi_" << v << ":";
    for (auto l : levels) out << ' ' << fmt(r.best_encoding.vector(v)(static_cast<Eigen::Index>(l)).real());
    out << '\n';
  }
  return 0;
}

inline int cmd_sweep(const Options& o, std::ostream& out) {
  if (o.channel == "custom") throw DomainError("sweep: needs a parametrized channel (pd, ad or dep)");
  const auto grid = eta_grid(o.eta_start, o.eta_end, o.steps);
  const Encoding enc = make_encoding(o, o.dim);
  const auto rows = run_sweep([&](double v) { return make_channel(o, v); }, grid, enc.subspace, enc.label,
                              o.n_theta, o.n_phi);
  out << "channel: " << o.channel << ", dim " << o.dim << ", encoding " << enc.label << '\n';
  double worst = 0.0;
  for (const auto& r : rows) {
    out << "  " << fmt(r.eta) << "  " << fmt(r.fidelity_closed) << '\n';
    worst = std::max(worst, r.gap);
  }
  out << "max quadrature gap: " << sci(worst) << '\n';
  if (!o.out.empty()) {
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw std::runtime_error("sweep: cannot write " + o.out);
    write_sweep_csv(file, rows);
    if (!file.flush()) throw std::runtime_error("sweep: write failed for " + o.out);
    out << "wrote " << rows.size() << " rows to " << o.out << '\n';
  }
  return 0;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  const KrausChannel ch = make_channel(o);
  print_channel(out, ch);
  const std::size_t block = o.block.value_or(ch.dim());
  const VerificationReport r = verify_channel(ch, block);
  out << "block: " << r.block << ", samples " << r.samples << ", seed " << r.seed << '\n';
  out << "trace preserving: " << (r.trace_preserving ? "yes" : "no") << " (defect " << sci(r.tp_defect) << ")\n";
  out << "hermiticity preserving: " << (r.hermiticity_preserving ? "yes" : "no") << " (defect "
      << sci(r.hermiticity_defect) << ")\n";
  out << "positivity preserving: " << (r.positivity_preserving ? "yes" : "no") << " (min eigenvalue "
      << sci(r.min_output_eigenvalue) << ")\n";
  return r.ok() ? 0 : 1;
}

inline void add_shared(CLI::App& sub, Options& o) {
  sub.add_option("--channel", o.channel, "pd, ad, dep or custom")
      ->check(CLI::IsMember({"pd", "ad", "dep", "custom"}));
  sub.add_option("--eta", o.eta, "damping parameter");
  sub.add_option("--p", o.p, "depolarizing parameter");
  sub.add_option("--dim", o.dim, "Fock truncation")->check(CLI::PositiveNumber);
  sub.add_option("--kraus-file", o.kraus_file, "Kraus operator file for --channel custom");
  sub.add_option("--config", "key=value file with default flag values");
  sub.add_option("--tol", o.tol, "hull leakage tolerance");
}

inline void add_encoding(CLI::App& sub, Options& o) {
  sub.add_option("--levels", o.levels, "Fock levels, comma separated")->delimiter(',');
  sub.add_option("--encoding-file", o.encoding_file, "two coefficient rows");
}

inline void add_quadrature(CLI::App& sub, Options& o) {
  sub.add_option("--n-theta", o.n_theta, "Gauss-Legendre nodes in cos(theta)");
  sub.add_option("--n-phi", o.n_phi, "trapezoid nodes in phi");
}

// Moves the contents of any --config file in front of the explicit flags of
// the subcommand so that the flags win.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path || args.empty()) return args;
  auto extra = read_config(*path);
  args.insert(args.begin() + 1, extra.begin(), extra.end());
  return args;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Invariant subchannels of bosonic channels in a truncated Fock space", "subchan"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto* fid = app.add_subcommand("fidelity", "average fidelity of a qubit encoding");
  add_shared(*fid, o);
  add_encoding(*fid, o);
  add_quadrature(*fid, o);
  fid->add_flag("--quadrature", o.quadrature, "cross-check against the quadrature oracle");

  auto* hull = app.add_subcommand("hull-check", "invariant-hull and subchannel checks");
  add_shared(*hull, o);
  add_encoding(*hull, o);

  auto* fixed = app.add_subcommand("fixed-points", "fixed-point space of the channel");
  add_shared(*fixed, o);

  auto* opt = app.add_subcommand("optimize", "search for the best qubit encoding");
  add_shared(*opt, o);
  add_encoding(*opt, o);
  opt->add_option("--restarts", o.restarts, "random restarts")->check(CLI::PositiveNumber);
  opt->add_option("--seed", o.seed, "RNG seed (falls back to SUBCHAN_SEED)");

  auto* sweep = app.add_subcommand("sweep", "fidelity over a grid of eta");
  add_shared(*sweep, o);
  add_encoding(*sweep, o);
  add_quadrature(*sweep, o);
  sweep->add_option("--eta-start", o.eta_start, "first grid point");
  sweep->add_option("--eta-end", o.eta_end, "last grid point");
  sweep->add_option("--steps", o.steps, "number of grid points");
  sweep->add_option("--out", o.out, "CSV output path");

  auto* verify = app.add_subcommand("verify", "trace, hermiticity and positivity checks");
  add_shared(*verify, o);
  verify->add_option("--block", o.block, "number of lowest levels to check");

  std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
  try {
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (fid->parsed()) return cmd_fidelity(o, out);
    if (hull->parsed()) return cmd_hull_check(o, out);
    if (fixed->parsed()) return cmd_fixed_points(o, out);
    if (opt->parsed()) return cmd_optimize(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
    return cmd_verify(o, out);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace subchan::cli
