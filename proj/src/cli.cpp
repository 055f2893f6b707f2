#include "crossplace/cli.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "crossplace/approx_engine.hpp"
#include "crossplace/errors.hpp"
#include "crossplace/experiments.hpp"
#include "crossplace/farey.hpp"
#include "crossplace/hausdorff.hpp"
#include "crossplace/serialize.hpp"

#ifndef CROSSPLACE_VERSION
#define CROSSPLACE_VERSION "0.0.0"
#endif

namespace crossplace {

namespace fs = std::filesystem;

namespace {

constexpr const char* kOutputRootEnv = "CROSSPLACE_OUTPUT_ROOT";
constexpr std::int64_t kDefaultFractionLimit = 2000;

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const PrecisionInsufficient*>(&e)) return kExitPrecision;
  if (dynamic_cast<const BudgetExceeded*>(&e)) return kExitBudget;
  if (dynamic_cast<const IdentityFailure*>(&e)) return kExitIdentity;
  if (dynamic_cast<const Error*>(&e)) return kExitUsage;
  return kExitFailure;
}

template <class F>
auto flag_context(const std::string& flag, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw InvalidArgument(flag + ": " + e.what());
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& flag, const std::string& text) {
  return flag_context(flag, [&] {
    std::vector<std::int64_t> out;
    const auto dash = text.find('-');
    if (dash != std::string::npos && text.find(',') == std::string::npos) {
      const auto lo = to_int64(Rational::parse(text.substr(0, dash)).num());
      const auto hi = to_int64(Rational::parse(text.substr(dash + 1)).num());
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
      return out;
    }
    for (const auto& item : split(text, ',')) {
      const Rational v = Rational::parse(item);
      if (!v.is_integer()) throw InvalidArgument("'" + item + "' is not an integer");
      out.push_back(to_int64(v.num()));
    }
    if (out.empty()) throw InvalidArgument("empty list");
    return out;
  });
}

std::vector<Rational> parse_rational_list(const std::string& flag, const std::string& text) {
  return flag_context(flag, [&] {
    std::vector<Rational> out;
    for (const auto& item : split(text, ',')) out.push_back(Rational::parse(item));
    if (out.empty()) throw InvalidArgument("empty list");
    return out;
  });
}

// ---------------------------------------------------------------------------

struct SourceFlags {
  std::string ball;
  std::string arc;
  std::string target;
  bool no_filter = false;

  void attach(CLI::App* cmd) {
    auto* b = cmd->add_option("--source-ball", ball, "p-adic source ball p<prime>:<num>/<den>:k<exp>");
    auto* a = cmd->add_option("--source-arc", arc, "source arc <left>:<length> of R/Z");
    b->excludes(a);
    cmd->add_option("--target", target, "target place p<prime> or inf")->required();
    cmd->add_flag("--no-filter", no_filter, "keep denominators divisible by the target prime");
  }

  SourceSpec build() const {
    if (ball.empty() == arc.empty()) throw InvalidArgument("--source-ball/--source-arc: give exactly one source");
    const Ball source = ball.empty() ? flag_context("--source-arc", [&] { return Ball::parse_arc(arc); })
                                     : flag_context("--source-ball", [&] { return Ball::parse_padic(ball); });
    const Place t = flag_context("--target", [&] { return Place::parse(target); });
    return flag_context("--target", [&] { return SourceSpec::make(source, t, !no_filter); });
  }
};

ApproxFunction build_psi(const std::string& text) {
  return flag_context("--psi", [&] { return ApproxFunction::parse(text); });
}

// One output directory per run. Every file is digested as written; the
// manifest goes last, through a temporary file and a rename.
class RunWriter {
 public:
  RunWriter(fs::path dir, std::string command, std::vector<std::string> argv, Json config, unsigned workers)
      : dir_(std::move(dir)),
        command_(std::move(command)),
        argv_(std::move(argv)),
        config_(std::move(config)),
        workers_(workers),
        started_(utc_now()) {
    fs::create_directories(dir_);
    fs::remove(dir_ / "manifest.json");
    write("config.json", config_.dump(2) + "\n");
  }

  const fs::path& dir() const { return dir_; }

  void write(const std::string& name, const std::string& content) {
    std::ofstream f(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + (dir_ / name).string());
    f << content;
    f.close();
    if (!f) throw Error("failed writing " + (dir_ / name).string());
    digests_[name] = sha256_hex(content);
  }

  void finish(std::optional<std::uint64_t> seed) {
    Json files = Json::object();
    for (const auto& [name, digest] : digests_) files[name] = Json{{"sha256", digest}};
    Json argv = Json::array();
    for (const auto& a : argv_) argv.push_back(a);
    Json manifest{{"command", command_},
                  {"argv", argv},
                  {"config", config_},
                  {"version", CROSSPLACE_VERSION},
                  {"seed", seed ? Json(*seed) : Json(nullptr)},
                  {"workers", workers_},
                  {"started_at", started_},
                  {"finished_at", utc_now()},
                  {"files", files}};
    const fs::path tmp = dir_ / "manifest.json.tmp";
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      f << manifest.dump(2) << "\n";
      if (!f) throw Error("cannot write manifest");
    }
    fs::rename(tmp, dir_ / "manifest.json");
  }

 private:
  fs::path dir_;
  std::string command_;
  std::vector<std::string> argv_;
  Json config_;
  unsigned workers_;
  std::string started_;
  std::map<std::string, std::string> digests_;
};

struct Globals {
  std::string out_dir;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::string> argv;  // invocation minus the program name and --out
};

fs::path resolve_dir(const Globals& g, const std::string& command, const Json& config) {
  if (!g.out_dir.empty()) return g.out_dir;
  const char* root = std::getenv(kOutputRootEnv);
  const fs::path base = root && *root ? fs::path(root) : fs::path("runs");
  return base / (command + "-" + sha256_hex(config.dump()).substr(0, 12));
}

std::string csv_of(const std::function<void(std::ostream&)>& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

// ---------------------------------------------------------------------------
// enumerate

struct EnumerateFlags {
  SourceFlags source;
  std::int64_t max_n = 0;
  std::int64_t fraction_limit = kDefaultFractionLimit;
};

int cmd_enumerate(const EnumerateFlags& f, const Globals& g, std::ostream& out) {
  const SourceSpec spec = f.source.build();
  if (f.max_n < 1) throw InvalidArgument("--max-n: must be >= 1");
  Json config{{"command", "enumerate"}, {"spec", to_json(spec)}, {"max_n", f.max_n}, {"fraction_limit", f.fraction_limit}};
  RunWriter run(resolve_dir(g, "enumerate", config), "enumerate", g.argv, config, g.workers);

  const auto table = totient_table(spec, f.max_n, g.workers);
  run.write("data.csv", csv_of([&](std::ostream& os) { write_totient_csv(os, table.rows); }));
  const bool with_fractions = f.max_n <= f.fraction_limit;
  std::uint64_t fraction_rows = 0;
  if (with_fractions) {
    run.write("fractions.csv", csv_of([&](std::ostream& os) {
                os << "n,a,fraction\n";
                for (std::int64_t n = 1; n <= f.max_n; ++n) {
                  for (auto a : numerators_at_level(spec, n)) {
                    os << n << ',' << a << ',' << Rational(a, n).to_string() << '\n';
                    ++fraction_rows;
                  }
                }
              }));
  }
  Json report{{"max_n", f.max_n},
              {"restricted_sum", table.restricted_sum},
              {"fractions_written", with_fractions},
              {"fraction_rows", with_fractions ? Json(fraction_rows) : Json(nullptr)}};
  run.write("report.json", report.dump(2) + "\n");
  run.finish(std::nullopt);
  out << "rows=" << table.rows.size() << " restricted_sum=" << table.restricted_sum;
  if (with_fractions) out << " fractions=" << fraction_rows;
  out << "\nwrote " << run.dir().string() << "\n";
  if (with_fractions && fraction_rows != table.restricted_sum) {
    throw IdentityFailure("fraction list has " + std::to_string(fraction_rows) + " rows but the totient sum is " +
                          std::to_string(table.restricted_sum));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// moments

struct MomentsFlags {
  SourceFlags source;
  std::string psi;
  std::int64_t N = 0;
  std::int64_t pair_guard = 300;
  std::int64_t integral_guard = 10'000;
};

int cmd_moments(const MomentsFlags& f, const Globals& g, std::ostream& out) {
  const SourceSpec spec = f.source.build();
  const ApproxFunction psi = build_psi(f.psi);
  if (f.N < 1) throw InvalidArgument("--N: must be >= 1");
  const MomentOptions opts{f.integral_guard, f.pair_guard};
  Json config{{"command", "moments"},          {"spec", to_json(spec)},          {"psi", psi.to_string()},
              {"N", f.N},                      {"pair_guard", f.pair_guard},     {"integral_guard", f.integral_guard}};
  if (f.N > f.pair_guard) {
    throw BudgetExceeded("N=" + std::to_string(f.N) + " exceeds the pair-enumeration guard " +
                         std::to_string(f.pair_guard));
  }
  RunWriter run(resolve_dir(g, "moments", config), "moments", g.argv, config, g.workers);

  const MomentReport report = moment_report(f.N, psi, spec, opts);
  const Rational via_integral = m1_via_integral(f.N, psi, spec, opts);
  const Rational lemma = m2sq_lemma_form(f.N, psi, spec, opts);
  const bool m1_match = via_integral == report.M1;

  Json j = to_json(report);
  j["M2sq_lemma_form"] = to_json(lemma);
  j["identity"] = Json{{"m1_via_integral", to_json(via_integral)}, {"m1_match", m1_match}};
  Json checks{{"M2sq_ge_M1sq", report.M2sq >= report.M1 * report.M1}};
  if (report.Psi) {
    checks["M1_le_Psi"] = report.M1 <= *report.Psi;
    checks["M2sq_le_Psi_plus_4Psi2"] = report.M2sq <= *report.Psi + Rational(4) * *report.Psi * *report.Psi;
  }
  j["checks"] = checks;
  run.write("report.json", j.dump(2) + "\n");
  run.write("data.csv", csv_of([&](std::ostream& os) {
              os << "n,excluded,phi_b,closed_exponent,psi_star\n";
              for (std::int64_t n = 1; n <= f.N; ++n) {
                const bool excluded = spec.excludes(n);
                const auto t = psi.closed_exponent(n, spec.target.p());
                os << n << ',' << (excluded ? 1 : 0) << ',' << (excluded ? 0 : restricted_totient(spec, n)) << ','
                   << t << ',' << Rational::power(static_cast<std::int64_t>(spec.target.p()), -t).to_string() << '\n';
              }
            }));
  if (!m1_match) {
    throw IdentityFailure("M1 " + report.M1.to_string() + " differs from the ball-measure sum " +
                          via_integral.to_string());
  }
  run.finish(std::nullopt);
  out << "N=" << f.N << " M1=" << report.M1.to_string() << " M2sq=" << report.M2sq.to_string()
      << " Psi=" << (report.Psi ? report.Psi->to_string() : std::string("irrational")) << "\n";
  out << "wrote " << run.dir().string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// experiment dichotomy / pz / dimension / cover

struct DichotomyFlags {
  SourceFlags source;
  std::string psi;
  std::int64_t samples = 500;
  std::optional<std::uint64_t> seed;
  std::string grid = "100,1000,10000";
  std::int64_t precision = 0;
  std::string mode = "auto";
};

SamplingMode parse_mode(const std::string& m) {
  if (m == "auto") return SamplingMode::Auto;
  if (m == "sampled") return SamplingMode::Sampled;
  if (m == "exhaustive") return SamplingMode::Exhaustive;
  throw InvalidArgument("--mode: expected auto, sampled or exhaustive");
}

int cmd_dichotomy(const DichotomyFlags& f, const Globals& g, std::ostream& out) {
  TrialConfig cfg{f.source.build(), build_psi(f.psi), 1, {}};
  cfg.sample_count = f.samples;
  cfg.n_grid = parse_int_list("--grid", f.grid);
  cfg.mode = parse_mode(f.mode);
  cfg.workers = g.workers;
  cfg.precision = f.precision;
  if (cfg.precision == 0) {
    cfg.precision = cfg.target().is_prime() ? recommended_precision(cfg.psi, cfg.spec, cfg.n_grid.back()) : 40;
  }
  flag_context("--grid/--samples/--precision", [&] { cfg.validate(); });
  if (!cfg.exhaustive() && !f.seed) throw InvalidArgument("--seed: required for sampled runs");
  cfg.seed = f.seed.value_or(0);

  Json config = to_json(cfg);
  config["command"] = "experiment dichotomy";
  RunWriter run(resolve_dir(g, "dichotomy", config), "experiment dichotomy", g.argv, config, g.workers);
  const auto report = run_dichotomy(cfg);
  run.write("report.json", to_json(report).dump(2) + "\n");
  run.write("data.csv", csv_of([&](std::ostream& os) { write_dichotomy_csv(os, report, cfg.n_grid); }));
  run.finish(f.seed);
  out << "verdict=" << to_string(report.verdict) << " samples=" << report.samples << "\n";
  for (const auto& row : report.rows) {
    out << "N=" << row.N << " mean=" << row.mean << " tail>=10=" << row.tail_fraction[2] << "\n";
  }
  out << "wrote " << run.dir().string() << "\n";
  return kExitOk;
}

struct PzFlags {
  SourceFlags source;
  std::string psi;
  std::int64_t N = 0;
  std::int64_t precision = 0;
  std::string lambdas = "0,1/4,1/2,3/4";
  std::int64_t pair_guard = 300;
};

int cmd_pz(const PzFlags& f, const Globals& g, std::ostream& out) {
  TrialConfig cfg{f.source.build(), build_psi(f.psi), 1, {}};
  if (f.N < 1) throw InvalidArgument("--N: must be >= 1");
  if (!cfg.target().is_prime()) throw InvalidArgument("--target: the Paley-Zygmund check needs a prime target");
  cfg.n_grid = {f.N};
  cfg.mode = SamplingMode::Exhaustive;
  cfg.workers = g.workers;
  cfg.precision = f.precision == 0 ? required_precision(cfg.psi, cfg.spec, f.N) : f.precision;
  const auto lambdas = parse_rational_list("--lambdas", f.lambdas);
  Json config = to_json(cfg);
  config["command"] = "experiment pz";
  Json lj = Json::array();
  for (const auto& l : lambdas) lj.push_back(to_json(l));
  config["lambdas"] = lj;
  config["pair_guard"] = f.pair_guard;
  MomentOptions opts;
  opts.pair_guard = f.pair_guard;
  RunWriter run(resolve_dir(g, "pz", config), "experiment pz", g.argv, config, g.workers);
  const auto report = run_paley_zygmund(cfg, lambdas, opts);
  run.write("report.json", to_json(report).dump(2) + "\n");
  run.write("data.csv", csv_of([&](std::ostream& os) { write_paley_zygmund_csv(os, report); }));
  run.finish(std::nullopt);
  for (const auto& row : report.rows) {
    out << "lambda=" << row.lambda.to_string() << " predicted=" << row.predicted.to_string()
        << " empirical=" << row.empirical.to_string() << (row.holds ? " holds" : " FAILS") << "\n";
  }
  out << "wrote " << run.dir().string() << "\n";
  return report.all_hold ? kExitOk : kExitIdentity;
}

struct DimensionFlags {
  SourceFlags source;
  std::string tau;
  std::string levels;
  double lower_factor = BoxWindow{}.lower_factor;
  double upper_factor = BoxWindow{}.upper_factor;
  double upper_power = 1.0;
  std::string fixed_window;
};

int cmd_dimension(const DimensionFlags& f, const Globals& g, std::ostream& out) {
  const SourceSpec spec = f.source.build();
  const Rational tau = flag_context("--tau", [&] { return Rational::parse(f.tau); });
  const auto levels = f.levels.empty() ? default_box_levels(spec.target) : parse_int_list("--levels", f.levels);
  BoxWindow window{f.lower_factor, f.upper_factor, f.upper_power, std::nullopt};
  if (!f.fixed_window.empty()) {
    const auto bounds = parse_int_list("--window", f.fixed_window.substr(0, f.fixed_window.find(':')) + "," +
                                                       f.fixed_window.substr(f.fixed_window.find(':') + 1));
    if (bounds.size() != 2) throw InvalidArgument("--window: expected H0:H");
    window.fixed = std::pair{bounds[0], bounds[1]};
  }
  Json lv = Json::array();
  for (auto l : levels) lv.push_back(l);
  Json config{{"command", "experiment dimension"},
              {"spec", to_json(spec)},
              {"tau", to_json(tau)},
              {"levels", lv},
              {"lower_factor", window.lower_factor},
              {"upper_factor", window.upper_factor},
              {"upper_power", window.upper_power},
              {"window", f.fixed_window.empty() ? Json(nullptr) : Json(f.fixed_window)}};
  const Rational dim = flag_context("--tau", [&] { return jb_exponent(tau); });
  RunWriter run(resolve_dir(g, "dimension", config), "experiment dimension", g.argv, config, g.workers);
  const auto report = box_count(tau, spec, levels, window, g.workers);
  Json j = to_json(report);
  j["target_dim_exact"] = to_json(dim);
  run.write("report.json", j.dump(2) + "\n");
  run.write("data.csv", csv_of([&](std::ostream& os) { write_box_count_csv(os, report); }));
  run.finish(std::nullopt);
  out << "slope=" << report.fit.slope << " target=" << dim.to_string() << " r2=" << report.fit.r_squared << "\n";
  out << "wrote " << run.dir().string() << "\n";
  return kExitOk;
}

struct CoverFlags {
  std::string psi;
  std::string s;
  std::string N = "100,1000,10000";
  std::int64_t span = 10;
};

int cmd_cover(const CoverFlags& f, const Globals& g, std::ostream& out) {
  const ApproxFunction psi = build_psi(f.psi);
  const Rational s = flag_context("--s", [&] { return Rational::parse(f.s); });
  const auto dim = flag_context("--s", [&] { return DimensionFunction::power(s); });
  const auto Ns = parse_int_list("--N", f.N);
  if (f.span < 1) throw InvalidArgument("--span: must be >= 1");
  Json nj = Json::array();
  for (auto n : Ns) nj.push_back(n);
  Json config{{"command", "experiment cover"}, {"psi", psi.to_string()}, {"s", to_json(s)}, {"N", nj}, {"span", f.span}};
  RunWriter run(resolve_dir(g, "cover", config), "experiment cover", g.argv, config, g.workers);
  std::vector<CoverSumReport> rows;
  Json reports = Json::array();
  for (auto n : Ns) {
    rows.push_back(cover_sum(n, n * f.span, psi, dim));
    reports.push_back(to_json(rows.back()));
  }
  run.write("report.json", Json{{"rows", reports}}.dump(2) + "\n");
  run.write("data.csv", csv_of([&](std::ostream& os) { write_cover_csv(os, rows); }));
  run.finish(std::nullopt);
  for (const auto& r : rows) {
    const auto total = r.total();
    out << "N=" << r.N << " bound=" << (total ? std::to_string(*total) : std::string(r.divergent ? "divergent" : "none"))
        << "\n";
  }
  out << "wrote " << run.dir().string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_replay(const std::string& manifest_path, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  std::ifstream in(manifest_path);
  if (!in) throw InvalidArgument("replay: cannot open " + manifest_path);
  const Json manifest = Json::parse(in);
  if (!manifest.contains("argv") || !manifest["argv"].is_array()) throw InvalidArgument("replay: manifest has no argv");
  const fs::path dir = out_dir.empty() ? fs::path(manifest_path).parent_path() : fs::path(out_dir);
  std::vector<std::string> args{"crossplace", "--out", dir.string()};
  for (const auto& a : manifest["argv"]) args.push_back(a.get<std::string>());
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != kExitOk) return code;
  std::ifstream again(dir / "manifest.json");
  const Json fresh = Json::parse(again);
  if (fresh["files"] != manifest["files"]) {
    err << "replay: output digests differ from the manifest\n";
    return kExitIdentity;
  }
  out << "replay: all " << manifest["files"].size() << " digests match\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-place Diophantine approximation experiments", "crossplace"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out", g.out_dir, "output directory (default: $CROSSPLACE_OUTPUT_ROOT/<command>-<digest>)");
  app.add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
  app.set_version_flag("--version", CROSSPLACE_VERSION);

  EnumerateFlags ef;
  auto* enumerate = app.add_subcommand("enumerate", "fraction lists and restricted totient tables");
  ef.source.attach(enumerate);
  enumerate->add_option("--max-n", ef.max_n, "largest denominator")->required();
  enumerate->add_option("--fraction-limit", ef.fraction_limit, "write fractions.csv only up to this max-n");

  MomentsFlags mf;
  auto* moments = app.add_subcommand("moments", "exact first and second moments");
  mf.source.attach(moments);
  moments->add_option("--psi", mf.psi, "pow:<tau> | powlog:<sigma> | table:<path>")->required();
  moments->add_option("--N", mf.N, "height bound")->required();
  moments->add_option("--pair-guard", mf.pair_guard, "largest N for the second moment");
  moments->add_option("--integral-guard", mf.integral_guard, "largest N for the ball-measure sum");

  auto* experiment = app.add_subcommand("experiment", "experiment harnesses");
  experiment->require_subcommand(1);
  experiment->fallthrough();

  DichotomyFlags df;
  auto* dichotomy = experiment->add_subcommand("dichotomy", "growth of the solution count against Psi(N)");
  df.source.attach(dichotomy);
  dichotomy->add_option("--psi", df.psi)->required();
  dichotomy->add_option("--samples", df.samples, "number of sampled targets");
  dichotomy->add_option("--seed", df.seed, "RNG seed (required when sampling)");
  dichotomy->add_option("--grid", df.grid, "increasing N values, comma separated");
  dichotomy->add_option("--precision", df.precision, "digits L or dyadic resolution R (0: automatic)");
  dichotomy->add_option("--mode", df.mode, "auto | sampled | exhaustive");

  PzFlags pf;
  auto* pz = experiment->add_subcommand("pz", "exhaustive Paley-Zygmund check");
  pf.source.attach(pz);
  pz->add_option("--psi", pf.psi)->required();
  pz->add_option("--N", pf.N)->required();
  pz->add_option("--precision", pf.precision, "residue depth L (0: least resolving depth)");
  pz->add_option("--lambdas", pf.lambdas, "c2 / c1 values, comma separated rationals");
  pz->add_option("--pair-guard", pf.pair_guard);

  DimensionFlags mfl;
  auto* dimension = experiment->add_subcommand("dimension", "box-counting dimension of the tau-approximable set");
  mfl.source.attach(dimension);
  dimension->add_option("--tau", mfl.tau)->required();
  dimension->add_option("--levels", mfl.levels, "scale levels, e.g. 6-18 or 4,5,6");
  dimension->add_option("--h0-factor", mfl.lower_factor);
  dimension->add_option("--h-factor", mfl.upper_factor);
  dimension->add_option("--h-power", mfl.upper_power);
  dimension->add_option("--window", mfl.fixed_window, "fixed height window H0:H for every scale");

  CoverFlags cf;
  auto* cover = experiment->add_subcommand("cover", "f-volume cover sums with tail bounds");
  cover->add_option("--psi", cf.psi)->required();
  cover->add_option("--s", cf.s, "exponent of f(r) = r^s")->required();
  cover->add_option("--N", cf.N, "starting heights, comma separated");
  cover->add_option("--span", cf.span, "partial sums run to span * N");

  std::string manifest_path, replay_out;
  auto* replay = app.add_subcommand("replay", "re-execute a run manifest and compare digests");
  replay->add_option("manifest", manifest_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << CROSSPLACE_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out") {
      ++i;
      continue;
    }
    if (a.rfind("--out=", 0) == 0) continue;
    g.argv.push_back(a);
  }

  try {
    if (*enumerate) return cmd_enumerate(ef, g, out);
    if (*moments) return cmd_moments(mf, g, out);
    if (*dichotomy) return cmd_dichotomy(df, g, out);
    if (*pz) return cmd_pz(pf, g, out);
    if (*dimension) return cmd_dimension(mfl, g, out);
    if (*cover) return cmd_cover(cf, g, out);
    if (*replay) return cmd_replay(manifest_path, g.out_dir, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kExitUsage;
}

}  // namespace crossplace
