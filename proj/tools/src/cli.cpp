#include "cvkey/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "cvkey/analysis.hpp"
#include "cvkey/errors.hpp"
#include "cvkey/fock_oracle.hpp"

namespace cvkey::cli {

namespace {

std::string sci9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

unsigned thread_budget() {
  if (const char* env = std::getenv("CVKEY_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

struct Options {
  std::string kind = "tmsv";
  double r = 0;
  double cosh2r = 50;
  double t_bs = 0.9;
  int k = 1;
  double loss_p = 0;

  double delta = 0.01;
  int n_unmatched = 0;
  int m_matched = 1;
  double epsilon = 0;
  double alpha = 1;
  double nbar = 0;

  double length_km = 15;
  double loss_coeff = 0.02;
  double eta = 1;
  double beta = 0.95;

  double start = 0, stop = 0, step = 0;
  double tol_km = 0.01;
  double tol_eta = 1e-4;
  int cutoff = 60;
  std::string output_path;

  CLI::Option* r_opt = nullptr;
  CLI::Option* cosh2r_opt = nullptr;
  CLI::Option* loss_p_opt = nullptr;
  CLI::Option* delta_opt = nullptr;
  CLI::Option* n_opt = nullptr;
  CLI::Option* m_opt = nullptr;
  CLI::Option* eps_opt = nullptr;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* nbar_opt = nullptr;
  CLI::Option* start_opt = nullptr;
  CLI::Option* stop_opt = nullptr;
  CLI::Option* step_opt = nullptr;
};

void add_resource_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--resource,--resource.kind", o.kind,
                  "Source state: tmsv, subtracted, or zpc")
      ->check(CLI::IsMember({"tmsv", "subtracted", "zpc"}))
      ->capture_default_str();
  o.r_opt = cmd->add_option("--r,--resource.r", o.r, "Squeezing parameter r (> 0)");
  o.cosh2r_opt = cmd->add_option("--cosh2r,--resource.cosh2r", o.cosh2r,
                                 "Squeezing via cosh 2r (> 1); default 50")
                     ->capture_default_str();
  o.r_opt->excludes(o.cosh2r_opt);
  o.cosh2r_opt->excludes(o.r_opt);
  cmd->add_option("--tbs,--resource.tbs", o.t_bs,
                  "Ancilla beamsplitter transmittance in (0, 1]")
      ->capture_default_str();
  cmd->add_option("--k,--resource.k", o.k,
                  "Subtracted photon number (subtracted resource, 0..20)")
      ->capture_default_str();
  o.loss_p_opt = cmd->add_option("--loss-p,--resource.loss-p", o.loss_p,
                                 "Ancilla loss probability in [0, 1] (zpc resource)")
                     ->capture_default_str();
}

void add_mismatch_options(CLI::App* cmd, Options& o) {
  o.delta_opt = cmd->add_option("--delta,--mismatch.delta", o.delta,
                                "Mode-mismatch noise delta (overrides the "
                                "multimode parameters); default 0.01")
                    ->capture_default_str();
  o.n_opt = cmd->add_option("--n-unmatched,--mismatch.n-unmatched", o.n_unmatched,
                            "Unmatched thermal mode count N");
  o.m_opt = cmd->add_option("--m-matched,--mismatch.m-matched", o.m_matched,
                            "Matched signal mode count M");
  o.eps_opt = cmd->add_option("--epsilon,--mismatch.epsilon", o.epsilon,
                              "Per-mode detection amplitude in [0, 1]");
  o.alpha_opt = cmd->add_option("--alpha,--mismatch.alpha", o.alpha,
                                "Local-oscillator amplitude (> 0)");
  o.nbar_opt = cmd->add_option("--nbar,--mismatch.nbar", o.nbar,
                               "Mean thermal photons per unmatched mode");
}

void add_channel_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--length-km,--channel.length-km", o.length_km,
                  "Fiber length L in km")
      ->capture_default_str();
  cmd->add_option("--loss-coeff,--channel.loss-coeff", o.loss_coeff,
                  "Per-km loss exponent l: T = 0.5*10^(-l L)")
      ->capture_default_str();
  cmd->add_option("--eta,--channel.eta", o.eta,
                  "Homodyne detector efficiency in (0, 1]")
      ->capture_default_str();
  cmd->add_option("--beta,--channel.beta", o.beta,
                  "Reconciliation efficiency in (0, 1]")
      ->capture_default_str();
}

void add_common_options(CLI::App* cmd, Options& o) {
  add_resource_options(cmd, o);
  add_mismatch_options(cmd, o);
  add_channel_options(cmd, o);
  cmd->add_option("-o,--output", o.output_path,
                  "Write CSV to this file instead of standard output");
  cmd->set_config("--config", "", "Read options from a TOML config file");
}

void add_sweep_options(CLI::App* cmd, Options& o) {
  o.start_opt = cmd->add_option("--start,--sweep.start", o.start, "Grid start");
  o.stop_opt = cmd->add_option("--stop,--sweep.stop", o.stop,
                               "Grid stop (exclusive)");
  o.step_opt = cmd->add_option("--step,--sweep.step", o.step, "Grid step (> 0)");
}

ResourceSpec resource_from(const Options& o) {
  ResourceSpec spec;
  if (o.kind == "tmsv") {
    spec.kind = ResourceKind::Tmsv;
  } else if (o.kind == "subtracted") {
    spec.kind = ResourceKind::Subtracted;
  } else {
    spec.kind = o.loss_p > 0 ? ResourceKind::ZpcWithLoss
                             : ResourceKind::ZeroPhotonCatalysis;
  }
  if (o.loss_p_opt->count() && o.loss_p > 0 && o.kind != "zpc")
    throw config_error("--loss-p applies to --resource zpc only");
  spec.r = o.r_opt->count() ? o.r : squeezing_from_cosh2r(o.cosh2r);
  spec.t_bs = o.t_bs;
  spec.k = o.kind == "subtracted" ? o.k : 0;
  spec.loss_p = o.loss_p;
  return spec;
}

MismatchParams mismatch_from(const Options& o) {
  if (o.delta_opt->count()) return MismatchParams::direct(o.delta);
  const bool multimode = o.n_opt->count() || o.m_opt->count() ||
                         o.eps_opt->count() || o.alpha_opt->count() ||
                         o.nbar_opt->count();
  if (!multimode) return MismatchParams::direct(0.01);
  MismatchParams mm;
  mm.n_unmatched = o.n_unmatched;
  mm.m_matched = o.m_matched;
  mm.epsilon = o.epsilon;
  mm.alpha = o.alpha;
  mm.nbar = o.nbar;
  return mm;
}

ChannelParams channel_from(const Options& o) {
  return {o.length_km, o.loss_coeff, o.eta, o.beta};
}

// CLI11 reads --config only on the root command, never on subcommands, so the
// file is applied here after parsing: file values fill options the command
// line left empty (flags override the file). Section names dot-join with keys
// and resolve through the dotted aliases registered above.
void apply_config_file(CLI::App* cmd) {
  CLI::Option* copt = cmd->get_option_no_throw("--config");
  if (copt == nullptr || copt->empty()) return;
  const std::string path = copt->as<std::string>();
  std::vector<CLI::ConfigItem> items;
  try {
    items = cmd->get_config_formatter()->from_file(path);
  } catch (const CLI::FileError&) {
    throw config_error("cannot open config file: " + path);
  }
  bool file_r = false, file_cosh2r = false;
  for (const CLI::ConfigItem& item : items) {
    file_r = file_r || item.fullname() == "resource.r";
    file_cosh2r = file_cosh2r || item.fullname() == "resource.cosh2r";
  }
  if (file_r && file_cosh2r)
    throw config_error("config file sets both resource.r and resource.cosh2r");
  for (const CLI::ConfigItem& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    const std::string key = item.fullname();
    CLI::Option* op = cmd->get_option_no_throw("--" + key);
    if (op == nullptr) throw config_error("unknown config key: " + key);
    if (op == copt || op->count() > 0) continue;
    // Either squeezing flag on the command line overrides both file spellings.
    if ((key == "resource.r" || key == "resource.cosh2r") &&
        (cmd->count("--r") > 0 || cmd->count("--cosh2r") > 0))
      continue;
    for (const std::string& v : item.inputs) op->add_result(v);
    try {
      op->run_callback();
    } catch (const CLI::ParseError& e) {
      throw config_error("config file: " + std::string(e.what()));
    }
  }
}

// Resolves the CSV target: --output file or the provided stream.
class Sink {
 public:
  Sink(const Options& o, std::ostream& fallback) {
    if (o.output_path.empty()) {
      os_ = &fallback;
      return;
    }
    file_.open(o.output_path);
    if (!file_) throw config_error("cannot open output file: " + o.output_path);
    os_ = &file_;
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ostream* os_ = nullptr;
  std::ofstream file_;
};

int run_rate(const Options& o, std::ostream& out, std::ostream& err) {
  const RateBreakdown b =
      secret_key_rate(resource_from(o), mismatch_from(o), channel_from(o));
  const double beta = channel_from(o).beta;
  const double raw = beta * b.i_ab - b.chi_be;
  const bool entangled = log_negativity(b.v_shared) > 0;
  Sink sink(o, out);
  sink.stream() << "key_rate_bits,i_ab_bits,chi_be_bits,entangled,raw_rate\n"
                << sci9(b.key_rate) << ',' << sci9(b.i_ab) << ','
                << sci9(b.chi_be) << ',' << (entangled ? '1' : '0') << ','
                << sci9(raw) << '\n';
  err << "K = " << sci9(b.key_rate) << " bits/pulse  (I_AB = " << sci9(b.i_ab)
      << ", chi_BE = " << sci9(b.chi_be) << ", raw = " << sci9(raw) << ")\n";
  return 0;
}

int run_sweep(const Options& o, SweepAxis axis, std::ostream& out,
              std::ostream& err) {
  SweepSpec spec;
  spec.axis = axis;
  spec.resource = resource_from(o);
  spec.mismatch = mismatch_from(o);
  spec.channel = channel_from(o);
  const bool distance = axis == SweepAxis::DistanceKm;
  spec.start = o.start_opt->count() ? o.start : (distance ? 0.0 : 0.9);
  spec.stop = o.stop_opt->count() ? o.stop : (distance ? 200.0 : 1.0);
  spec.step = o.step_opt->count() ? o.step : (distance ? 0.5 : 0.0005);

  const auto rows = sweep(spec, thread_budget());
  Sink sink(o, out);
  sink.stream() << (distance ? "L_km" : "eta")
                << ",key_rate_bits,i_ab_bits,chi_be_bits,entangled,raw_rate\n";
  const double beta = spec.channel.beta;
  for (const SweepRow& row : rows) {
    sink.stream() << sci9(row.axis_value) << ',' << sci9(row.key_rate) << ','
                  << sci9(row.i_ab) << ',' << sci9(row.chi_be) << ','
                  << (row.entangled ? '1' : '0') << ','
                  << sci9(beta * row.i_ab - row.chi_be) << '\n';
  }
  err << rows.size() << " rows swept\n";
  return 0;
}

int run_max_distance(const Options& o, std::ostream& out, std::ostream& err) {
  const double l =
      max_distance(resource_from(o), mismatch_from(o), channel_from(o), o.tol_km);
  Sink sink(o, out);
  sink.stream() << "max_distance_km\n" << sci9(l) << '\n';
  err << "max distance = " << sci9(l) << " km\n";
  return 0;
}

int run_min_eta(const Options& o, std::ostream& out, std::ostream& err) {
  const double eta = min_efficiency(resource_from(o), mismatch_from(o),
                                    channel_from(o), o.tol_eta);
  Sink sink(o, out);
  sink.stream() << "min_eta\n" << sci9(eta) << '\n';
  err << "minimum detector efficiency = " << sci9(eta) << "\n";
  return 0;
}

int run_entanglement(const Options& o, std::ostream& out, std::ostream& err) {
  const ResourceSpec spec = resource_from(o);
  const double delta = delta_from_multimode(mismatch_from(o));
  const TwoModeCM noisy = apply_mode_mismatch(build_source(spec), delta);
  const double lmin = pt_min_symplectic(noisy);
  const double en = log_negativity(noisy);
  // Closed-form separability threshold of a TMSV source at the same r.
  const double dstar = separability_threshold(spec.r);
  Sink sink(o, out);
  sink.stream() << "log_negativity_bits,pt_min,entangled,tmsv_delta_star\n"
                << sci9(en) << ',' << sci9(lmin) << ',' << (en > 0 ? '1' : '0')
                << ',' << sci9(dstar) << '\n';
  err << "E_N = " << sci9(en) << " bits (l_min = " << sci9(lmin) << ")\n";
  return 0;
}

int run_oracle_check(const Options& o, std::ostream& out, std::ostream& err) {
  struct Case {
    double r, t_bs;
    int k;
  };
  std::vector<Case> cases;
  if (o.r_opt->count() || o.cosh2r_opt->count()) {
    cases.push_back({o.r_opt->count() ? o.r : squeezing_from_cosh2r(o.cosh2r),
                     o.t_bs, o.k});
  } else {
    for (double r : {0.3, 0.5, 0.8})
      for (double t : {0.7, 0.9})
        for (int k : {0, 1, 2}) cases.push_back({r, t, k});
  }

  Sink sink(o, out);
  sink.stream() << "r,t_bs,k,prob_closed,prob_fock,prob_err,cm_err\n";
  double worst_prob = 0, worst_cm = 0;
  for (const Case& c : cases) {
    const OracleComparison cmp =
        compare_with_closed_form(c.r, c.t_bs, c.k, o.cutoff);
    worst_prob = std::max(worst_prob, cmp.probability_err);
    worst_cm = std::max(worst_cm, cmp.cm_err);
    sink.stream() << sci9(c.r) << ',' << sci9(c.t_bs) << ',' << c.k << ','
                  << sci9(cmp.probability_closed) << ','
                  << sci9(cmp.probability_fock) << ','
                  << sci9(cmp.probability_err) << ',' << sci9(cmp.cm_err)
                  << '\n';
  }
  err << cases.size() << " oracle cases; worst probability error "
      << sci9(worst_prob) << ", worst CM error " << sci9(worst_cm) << "\n";
  if (worst_prob > 1e-8 || worst_cm > 1e-6)
    throw numerical_error("Fock oracle disagrees with the closed forms");
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"cvkey: secret key rates for no-switching CV-QKD with "
               "photon-subtracted and zero-photon-catalysed sources"};
  app.require_subcommand(1);
  // One Options block per subcommand: the CLI::Option* handles recorded by
  // add_*_options belong to that subcommand and must not be overwritten by a
  // later registration.
  Options o_rate, o_sweep_l, o_sweep_e, o_maxd, o_mine, o_ent, o_oracle;
  std::function<int()> action;

  auto* rate =
      app.add_subcommand("rate", "Key-rate breakdown at one operating point");
  add_common_options(rate, o_rate);
  rate->callback([&] { action = [&] { return run_rate(o_rate, out, err); }; });

  auto* sweep_l =
      app.add_subcommand("sweep-distance", "Key rate vs fiber length CSV "
                         "(default grid [0, 200) km, step 0.5)");
  add_common_options(sweep_l, o_sweep_l);
  add_sweep_options(sweep_l, o_sweep_l);
  sweep_l->callback([&] {
    action = [&] { return run_sweep(o_sweep_l, SweepAxis::DistanceKm, out, err); };
  });

  auto* sweep_e =
      app.add_subcommand("sweep-eta", "Key rate vs detector efficiency CSV "
                         "(default grid [0.9, 1.0), step 0.0005)");
  add_common_options(sweep_e, o_sweep_e);
  add_sweep_options(sweep_e, o_sweep_e);
  sweep_e->callback([&] {
    action = [&] { return run_sweep(o_sweep_e, SweepAxis::DetectorEta, out, err); };
  });

  auto* maxd = app.add_subcommand(
      "max-distance", "Bisection for the farthest distance with positive key");
  add_common_options(maxd, o_maxd);
  maxd->add_option("--tol-km", o_maxd.tol_km, "Bisection tolerance in km")
      ->capture_default_str();
  maxd->callback(
      [&] { action = [&] { return run_max_distance(o_maxd, out, err); }; });

  auto* mine = app.add_subcommand(
      "min-eta", "Bisection for the lowest detector efficiency with positive key");
  add_common_options(mine, o_mine);
  mine->add_option("--tol-eta", o_mine.tol_eta, "Bisection tolerance in eta")
      ->capture_default_str();
  mine->callback([&] { action = [&] { return run_min_eta(o_mine, out, err); }; });

  auto* ent = app.add_subcommand(
      "entanglement", "Logarithmic negativity of the mismatch-corrupted source");
  add_common_options(ent, o_ent);
  ent->callback([&] { action = [&] { return run_entanglement(o_ent, out, err); }; });

  auto* oracle = app.add_subcommand(
      "oracle-check", "Compare closed-form subtracted/catalysed CMs against a "
                      "Fock-basis simulation");
  add_common_options(oracle, o_oracle);
  oracle->add_option("--cutoff", o_oracle.cutoff, "Fock truncation dimension")
      ->capture_default_str();
  oracle->callback(
      [&] { action = [&] { return run_oracle_check(o_oracle, out, err); }; });

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("cvkey");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n"
        << "run 'cvkey --help' for usage\n";
    return 2;
  }

  try {
    for (CLI::App* sub : app.get_subcommands()) apply_config_file(sub);
    return action ? action() : 2;
  } catch (const config_error& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const no_key_error& e) {
    err << "no key: " << e.what() << '\n';
    return 4;
  } catch (const numerical_error& e) {
    err << "numerical error: " << e.what() << '\n';
    return 3;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? argc - 1 : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace cvkey::cli
