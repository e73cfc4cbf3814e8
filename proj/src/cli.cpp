#include "mubpp/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mubpp/bounds.hpp"
#include "mubpp/errors.hpp"
#include "mubpp/mub.hpp"
#include "mubpp/protocol.hpp"

namespace mubpp::cli {

namespace {

struct Options {
  unsigned n = 0;
  std::vector<unsigned> n_list;
  std::string bases = "all";
  std::vector<double> weights;
  std::uint64_t cycles = 10'000;
  double control_fraction = 0.5;
  std::optional<std::uint64_t> seed;
  double tol = 1e-10;
  std::string in;
  std::string config;
  std::string attack = "none";
  std::string out;
  std::string format;
};

// Writes to --out when given, otherwise to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot open output file '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void require_format(const std::string& format) {
  if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
}

int cmd_gen_mub(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.n == 0) throw UsageError("gen-mub needs --n");
  MubSet set;
  try {
    set = build_mub_set(o.n);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  Sink sink(o.out, out);
  sink.get() << mub_to_json(set).dump() << '\n';
  err << "wrote " << set.size() << " bases of dimension " << set.dim << '\n';
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  if (o.in.empty()) throw UsageError("verify needs an input file");
  if (!(o.tol >= 0.0)) throw UsageError("--tol must be non-negative");
  const MubSet set = mub_from_json(read_json(o.in));
  const MubCheck check = verify_mub(set, o.tol);
  Sink sink(o.out, out);
  std::ostream& s = sink.get();
  s.precision(6);
  if (o.format == "json") {
    s << nlohmann::json{{"dim", set.dim},
                        {"bases", set.size()},
                        {"max_deviation", check.max_deviation},
                        {"max_unitarity_error", check.max_unitarity_error},
                        {"tol", o.tol},
                        {"pass", check.pass}}
             .dump()
      << '\n';
  } else {
    s << (check.pass ? "PASS" : "FAIL") << " dim=" << set.dim << " bases=" << set.size()
      << " max_deviation=" << std::scientific << check.max_deviation << " tol=" << o.tol << '\n';
  }
  return check.pass ? kOk : kCheckFailed;
}

std::string failed_row(unsigned n, const std::string& subset) {
  std::string row = std::to_string(n) + ",0," + subset;
  for (int i = 0; i < 8; ++i) row += ",error";
  return row;
}

int cmd_bounds_table(const Options& o, std::vector<unsigned> dims, std::ostream& out, std::ostream& err) {
  if (dims.empty()) throw UsageError("bounds-table needs --n-list");
  const BasisSubset subset = BasisSubset::parse(o.bases);
  Sink sink(o.out, out);
  std::ostream& s = sink.get();
  bool failed = false;
  nlohmann::json rows = nlohmann::json::array();
  if (o.format != "json") s << report_csv_header() << '\n';
  for (unsigned n : dims) {
    try {
      const BoundReport r = build_report(build_mub_set(n), subset);
      if (r.d_exact > r.tightest_analytic() + 1e-9) {
        failed = true;
        err << "N=" << n << ": exact optimum " << r.d_exact << " exceeds analytic bound " << r.tightest_analytic()
            << '\n';
      }
      if (o.format == "json") rows.push_back(report_to_json(r));
      else s << report_csv_row(r) << '\n';
    } catch (const std::exception& e) {
      failed = true;
      err << "N=" << n << ": " << e.what() << '\n';
      if (o.format == "json") rows.push_back({{"N", n}, {"error", e.what()}});
      else s << failed_row(n, subset.descriptor()) << '\n';
    }
  }
  if (o.format == "json") s << rows.dump(2) << '\n';
  return failed ? kCheckFailed : kOk;
}

std::vector<double> parse_weights(const std::vector<double>& w, std::size_t count) {
  if (w.empty()) return std::vector<double>(count, 1.0 / static_cast<double>(count));
  return w;
}

int cmd_simulate(const Options& o, const CLI::App& sub, std::ostream& out) {
  SessionConfig cfg;
  if (!o.config.empty()) {
    cfg = session_config_from_json(read_json(o.config));
  } else {
    if (o.n == 0) throw UsageError("simulate needs --config or --n");
    nlohmann::json j = {{"N", o.n}, {"cycles", o.cycles}, {"control_fraction", o.control_fraction}};
    const std::size_t set_size = o.n == 2 ? 3 : o.n + 1;
    const auto bases = BasisSubset::parse(o.bases).resolve(set_size);
    j["bases"] = bases;
    j["weights"] = parse_weights(o.weights, bases.size());
    j["attack"] = o.attack;
    cfg = session_config_from_json(j);
  }
  // Flags given explicitly on the command line override the file.
  if (!o.config.empty()) {
    if (sub.count("--cycles") > 0) cfg.params.cycles = o.cycles;
    if (sub.count("--control-fraction") > 0) cfg.params.control_fraction = o.control_fraction;
  }
  if (o.seed && (!cfg.seed_given || sub.count("--seed") > 0)) {
    cfg.params.seed = *o.seed;
    cfg.seed_given = true;
  }

  const MubSet set = build_mub_set(cfg.dim);
  const auto attack = resolve_attack(cfg, set);
  const SessionStats stats = run_session(set, cfg.control, attack, cfg.params);

  std::optional<double> analytic;
  if (attack) {
    double sum = 0.0;
    for (std::size_t alpha = 0; alpha < set.dim; ++alpha) {
      sum += average_nondetection(alpha, (*attack)[alpha], cfg.control, set);
    }
    analytic = sum / static_cast<double>(set.dim);
  } else {
    analytic = 1.0;
  }

  Sink sink(o.out, out);
  std::ostream& s = sink.get();
  if (o.format == "csv") {
    s << stats_csv_header() << '\n' << stats_csv_row(stats) << '\n';
  } else {
    nlohmann::json j = stats_to_json(stats);
    j["N"] = cfg.dim;
    j["seed"] = cfg.params.seed;
    j["analytic_nondetection"] = *analytic;
    s << j.dump(2) << '\n';
  }
  return kOk;
}

}  // namespace

std::vector<unsigned> default_fig1_dims() { return {3, 5, 7, 9, 11, 13}; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mutually unbiased bases and ping-pong protocol eavesdropping bounds", "mubpp"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen-mub", "Write the MUB family for dimension N as JSON");
  gen->add_option("--n", o.n, "Dimension (prime or odd prime power)")->required();
  gen->add_option("--out", o.out, "Output file (default: stdout)");

  auto* verify = app.add_subcommand("verify", "Check a MUB JSON file against the unbiasedness condition");
  verify->add_option("input", o.in, "MUB JSON file")->required();
  verify->add_option("--tol", o.tol, "Allowed deviation")->capture_default_str();
  verify->add_option("--format", o.format, "Report format: csv (text) or json");
  verify->add_option("--out", o.out, "Output file (default: stdout)");

  auto add_table_flags = [&](CLI::App* cmd) {
    cmd->add_option("--n-list", o.n_list, "Dimensions, comma separated")->delimiter(',');
    cmd->add_option("--bases", o.bases, "all | no-computational | comma-separated indices");
    cmd->add_option("--format", o.format, "csv or json");
    cmd->add_option("--out", o.out, "Output file (default: stdout)");
  };
  auto* table = app.add_subcommand("bounds-table", "Exact optimum and analytic bounds, one row per N");
  add_table_flags(table);
  auto* fig1 = app.add_subcommand("fig1", "bounds-table over the default dimension list with every basis");
  add_table_flags(fig1);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo run of the protocol");
  sim->add_option("--config", o.config, "Session config JSON");
  sim->add_option("--n", o.n, "Dimension");
  sim->add_option("--bases", o.bases, "all | no-computational | comma-separated indices");
  sim->add_option("--weights", o.weights, "Basis selection weights, comma separated")->delimiter(',');
  sim->add_option("--attack", o.attack, "none | optimal");
  sim->add_option("--cycles", o.cycles, "Protocol cycles");
  sim->add_option("--control-fraction", o.control_fraction, "Probability of a control round");
  sim->add_option("--seed", o.seed, "RNG seed")->envname("MUBPP_SEED");
  sim->add_option("--format", o.format, "json or csv");
  sim->add_option("--out", o.out, "Output file (default: stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return cmd_gen_mub(o, out, err);
    if (*verify) {
      if (o.format.empty()) o.format = "csv";
      require_format(o.format);
      return cmd_verify(o, out);
    }
    if (*table || *fig1) {
      if (o.format.empty()) o.format = "csv";
      require_format(o.format);
      if (*fig1 && o.n_list.empty()) o.n_list = default_fig1_dims();
      return cmd_bounds_table(o, o.n_list, out, err);
    }
    if (*sim) {
      if (o.format.empty()) o.format = "json";
      require_format(o.format);
      return cmd_simulate(o, *sim, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}

}  // namespace mubpp::cli
