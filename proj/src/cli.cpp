#include "qbs/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qbs/metrics.hpp"

namespace qbs::cli {

namespace {

using nlohmann::json;

constexpr const char* kSchemaLine = "# schema=1\n";

template <class T>
void read_key(const json& doc, const char* key, std::optional<T>& dst) {
  auto it = doc.find(key);
  if (it == doc.end()) return;
  try {
    dst = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

template <class T>
void take(std::optional<T>& dst, const std::optional<T>& src) {
  if (src) dst = src;
}

AncillaOutcome parse_outcome(const std::string& s) {
  std::string lower = s;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "b") return AncillaOutcome::B;
  if (lower == "bperp" || lower == "b_perp" || lower == "b-perp") return AncillaOutcome::BPerp;
  throw ConfigError("outcome must be 'B' or 'Bperp', got '" + s + "'");
}

double finite_angle(double x, const char* name) {
  if (!std::isfinite(x)) throw ConfigError(std::string(name) + " must be finite");
  return x;
}

std::vector<double> linspace(double start, double stop, int steps) {
  std::vector<double> v(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    v[static_cast<std::size_t>(k)] = start + (stop - start) * k / (steps - 1);
  }
  std::sort(v.begin(), v.end());
  return v;
}

void append_row(std::string& s, std::initializer_list<double> values) {
  bool first = true;
  for (double x : values) {
    if (!first) s += ',';
    s += format_double(x);
    first = false;
  }
  s += '\n';
}

std::string duality_header() { return "beta_rad,V,D,V2_plus_D2,Vg,Dg,Vg2_plus_Dg2\n"; }

void append_duality_row(std::string& s, const DeviceSettings& device, AncillaOutcome outcome) {
  const DualityReport r = full_report(device, outcome);
  append_row(s, {device.beta, r.V.value, r.D.value, r.sumVD.value, r.Vg.value, r.Dg.value,
                 r.sumG.value});
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void add_common_options(CLI::App& sub, ConfigLayer& flags, std::string& config_path,
                        bool& degrees_flag) {
  sub.add_option("--alpha", flags.alpha, "q-BS preparation angle");
  sub.add_option("--beta", flags.beta, "detection basis angle");
  sub.add_option("--delta1", flags.delta1, "output phase on path 1");
  sub.add_option("--delta2", flags.delta2, "output phase on path 2");
  sub.add_option("--outcome", flags.outcome, "ancilla outcome: B or Bperp");
  sub.add_option("--points", flags.points, "phase grid points");
  sub.add_option("--beta-start", flags.beta_start);
  sub.add_option("--beta-stop", flags.beta_stop);
  sub.add_option("--alpha-start", flags.alpha_start);
  sub.add_option("--alpha-stop", flags.alpha_stop);
  sub.add_option("--steps", flags.steps, "sweep steps (>= 2)");
  sub.add_option("--shots", flags.shots, "shots per grid point");
  sub.add_option("--seed", flags.seed, "master RNG seed");
  sub.add_option("--dark-rate", flags.dark_rate, "mean dark counts per cell per grid point");
  sub.add_option("--contrast", flags.contrast, "path coherence factor in [0, 1]");
  sub.add_option("--jitter", flags.jitter, "per-shot phase jitter sigma");
  sub.add_option("--efficiency", flags.efficiency, "detection efficiency in (0, 1]");
  sub.add_option("--out", flags.out, "output CSV path (stdout if omitted)");
  sub.add_option("--config", config_path, "JSON config file");
  sub.add_flag("--degrees", degrees_flag, "angles are given in degrees");
}

}  // namespace

ConfigLayer parse_config_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  static const std::vector<std::string> kKnown{
      "mode",       "alpha",     "beta",     "delta1",      "delta2",     "outcome",
      "points",     "beta_start", "beta_stop", "alpha_start", "alpha_stop", "steps",
      "shots",      "seed",      "dark_rate", "contrast",    "jitter",     "efficiency",
      "out",        "degrees"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  ConfigLayer l;
  read_key(doc, "mode", l.mode);
  read_key(doc, "alpha", l.alpha);
  read_key(doc, "beta", l.beta);
  read_key(doc, "delta1", l.delta1);
  read_key(doc, "delta2", l.delta2);
  read_key(doc, "outcome", l.outcome);
  read_key(doc, "points", l.points);
  read_key(doc, "beta_start", l.beta_start);
  read_key(doc, "beta_stop", l.beta_stop);
  read_key(doc, "alpha_start", l.alpha_start);
  read_key(doc, "alpha_stop", l.alpha_stop);
  read_key(doc, "steps", l.steps);
  read_key(doc, "shots", l.shots);
  read_key(doc, "seed", l.seed);
  read_key(doc, "dark_rate", l.dark_rate);
  read_key(doc, "contrast", l.contrast);
  read_key(doc, "jitter", l.jitter);
  read_key(doc, "efficiency", l.efficiency);
  read_key(doc, "out", l.out);
  read_key(doc, "degrees", l.degrees);
  return l;
}

ConfigLayer overlay(const ConfigLayer& base, const ConfigLayer& top) {
  ConfigLayer r = base;
  take(r.mode, top.mode);
  take(r.alpha, top.alpha);
  take(r.beta, top.beta);
  take(r.delta1, top.delta1);
  take(r.delta2, top.delta2);
  take(r.outcome, top.outcome);
  take(r.points, top.points);
  take(r.beta_start, top.beta_start);
  take(r.beta_stop, top.beta_stop);
  take(r.alpha_start, top.alpha_start);
  take(r.alpha_stop, top.alpha_stop);
  take(r.steps, top.steps);
  take(r.shots, top.shots);
  take(r.seed, top.seed);
  take(r.dark_rate, top.dark_rate);
  take(r.contrast, top.contrast);
  take(r.jitter, top.jitter);
  take(r.efficiency, top.efficiency);
  take(r.out, top.out);
  take(r.degrees, top.degrees);
  return r;
}

Mode parse_mode(const std::string& name) {
  if (name == "fringe") return Mode::Fringe;
  if (name == "duality") return Mode::Duality;
  if (name == "sweep-beta") return Mode::SweepBeta;
  if (name == "sweep-alpha") return Mode::SweepAlpha;
  if (name == "mc") return Mode::Mc;
  throw ConfigError("unknown mode '" + name + "'");
}

RunConfig resolve(Mode mode, const ConfigLayer& l) {
  if (l.mode && parse_mode(*l.mode) != mode) {
    throw ConfigError("config mode '" + *l.mode + "' does not match the subcommand");
  }
  const double unit = l.degrees.value_or(false) ? std::numbers::pi / 180.0 : 1.0;
  auto angle = [unit](const std::optional<double>& v, double fallback, const char* name) {
    return v ? finite_angle(*v * unit, name) : fallback;
  };

  RunConfig c;
  c.mode = mode;
  c.device.alpha = angle(l.alpha, std::numbers::pi / 4, "alpha");
  c.device.beta = angle(l.beta, 0.0, "beta");
  c.device.delta1 = angle(l.delta1, 0.0, "delta1");
  c.device.delta2 = angle(l.delta2, 0.0, "delta2");
  if (l.outcome) c.outcome = parse_outcome(*l.outcome);
  c.points = l.points.value_or(mode == Mode::Mc ? 16 : 360);
  c.beta_start = angle(l.beta_start, 0.0, "beta_start");
  c.beta_stop = angle(l.beta_stop, std::numbers::pi / 2, "beta_stop");
  c.alpha_start = angle(l.alpha_start, 0.0, "alpha_start");
  c.alpha_stop = angle(l.alpha_stop, std::numbers::pi / 2, "alpha_stop");
  c.steps = l.steps.value_or(33);
  c.noise.dark_rate = l.dark_rate.value_or(0.0);
  c.noise.contrast = l.contrast.value_or(1.0);
  c.noise.phase_jitter_sigma = angle(l.jitter, 0.0, "jitter");
  c.noise.efficiency = l.efficiency.value_or(1.0);
  c.shots = l.shots.value_or(100000);
  c.seed = l.seed.value_or(1);
  c.out = l.out;

  if ((mode == Mode::Fringe || mode == Mode::Mc) && c.points < 8) {
    throw ConfigError("points must be >= 8");
  }
  if ((mode == Mode::SweepBeta || mode == Mode::SweepAlpha) && c.steps < 2) {
    throw ConfigError("steps must be >= 2");
  }
  if (mode == Mode::Mc) {
    if (c.shots < 1) throw ConfigError("shots must be >= 1");
    if (!c.out) throw ConfigError("mc needs --out for the counts and estimates files");
    try {
      c.noise.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return c;
}

std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string fringe_csv(const RunConfig& cfg) {
  const FringeScan scan = fringe_scan(cfg.device, cfg.outcome, cfg.points);
  std::string s = kSchemaLine;
  s += "phi_rad,p2_cond,p1_cond,success_prob\n";
  for (const auto& e : scan.entries) append_row(s, {e.phi, e.p2_cond, e.p1_cond, e.success_prob});
  return s;
}

std::string duality_csv(const RunConfig& cfg) {
  std::string s = kSchemaLine;
  s += duality_header();
  append_duality_row(s, cfg.device, cfg.outcome);
  return s;
}

std::string sweep_beta_csv(const RunConfig& cfg) {
  std::string s = kSchemaLine;
  s += duality_header();
  for (double beta : linspace(cfg.beta_start, cfg.beta_stop, cfg.steps)) {
    DeviceSettings d = cfg.device;
    d.beta = beta;
    append_duality_row(s, d, cfg.outcome);
  }
  return s;
}

std::string sweep_alpha_csv(const RunConfig& cfg) {
  std::string s = kSchemaLine;
  s += "alpha_rad,Vg,Dg,Vg2_plus_Dg2\n";
  for (double alpha : linspace(cfg.alpha_start, cfg.alpha_stop, cfg.steps)) {
    DeviceSettings d = cfg.device;
    d.alpha = alpha;
    const DualityReport r = generalized_metrics(d);
    append_row(s, {alpha, r.Vg.value, r.Dg.value, r.sumG.value});
  }
  return s;
}

McOutput mc_csv(const RunConfig& cfg) {
  ShotPlan plan;
  plan.shots_per_point = cfg.shots;
  plan.phi_grid = ShotPlan::uniform_grid(cfg.points);
  plan.seed = cfg.seed;
  const ExperimentCounts counts = sample_experiment(cfg.device, cfg.noise, plan);

  McOutput out;
  std::string& c = out.counts_csv;
  c = kSchemaLine;
  c += "phi_rad,n1_B,n2_B,n1_Bperp,n2_Bperp,n_lost\n";
  const std::pair<const char*, const CountsTable*> tables[] = {
      {"open", &counts.open},
      {"block_path1", &counts.block_path1},
      {"block_path2", &counts.block_path2}};
  for (const auto& [name, table] : tables) {
    c += "# table=";
    c += name;
    c += '\n';
    for (const auto& row : table->rows) {
      c += format_double(row.phi);
      for (auto n : row.n) {
        c += ',';
        c += std::to_string(n);
      }
      c += ',';
      c += std::to_string(row.lost);
      c += '\n';
    }
  }

  const DualityReport r = estimate_metrics(counts, cfg.outcome);
  std::string& e = out.estimates_csv;
  e = kSchemaLine;
  e += "metric,value,stderr\n";
  const std::pair<const char*, const Estimate*> rows[] = {
      {"V", &r.V},   {"D", &r.D},   {"V2_plus_D2", &r.sumVD},
      {"Vg", &r.Vg}, {"Dg", &r.Dg}, {"Vg2_plus_Dg2", &r.sumG}};
  for (const auto& [name, est] : rows) {
    e += name;
    e += ',';
    e += format_double(est->value);
    e += ',';
    e += format_double(est->stderr_.value_or(0.0));
    e += '\n';
  }
  return out;
}

std::string estimates_path(const std::string& out) {
  constexpr std::string_view kExt = ".csv";
  if (out.size() > kExt.size() && out.compare(out.size() - kExt.size(), kExt.size(), kExt) == 0) {
    return out.substr(0, out.size() - kExt.size()) + "_estimates.csv";
  }
  return out + "_estimates.csv";
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mach-Zehnder interferometer with a quantum-controlled beam splitter"};
  app.require_subcommand(1);

  struct Sub {
    Mode mode;
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {Mode::Fringe, "fringe", "conditional detection probabilities over the phase"},
      {Mode::Duality, "duality", "V, D and generalized metrics at one setting"},
      {Mode::SweepBeta, "sweep-beta", "duality metrics over the detection basis angle"},
      {Mode::SweepAlpha, "sweep-alpha", "generalized metrics over the preparation angle"},
      {Mode::Mc, "mc", "Monte Carlo photon counting with noise"}};

  ConfigLayer flags;
  std::string config_path;
  bool degrees_flag = false;
  std::vector<CLI::App*> handles;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common_options(*sub, flags, config_path, degrees_flag);
    handles.push_back(sub);
  }

  std::vector<const char*> argv{"qbs"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  Mode mode = Mode::Fringe;
  for (std::size_t i = 0; i < handles.size(); ++i) {
    if (handles[i]->parsed()) mode = subs[i].mode;
  }
  if (degrees_flag) flags.degrees = true;

  try {
    ConfigLayer layer = flags;
    if (!config_path.empty()) layer = overlay(parse_config_json(read_file(config_path)), flags);
    const RunConfig cfg = resolve(mode, layer);

    auto emit = [&](const std::string& content) {
      if (cfg.out) {
        write_file(*cfg.out, content);
      } else {
        out << content;
      }
    };
    switch (mode) {
      case Mode::Fringe:
        emit(fringe_csv(cfg));
        break;
      case Mode::Duality:
        emit(duality_csv(cfg));
        break;
      case Mode::SweepBeta:
        emit(sweep_beta_csv(cfg));
        break;
      case Mode::SweepAlpha:
        emit(sweep_alpha_csv(cfg));
        break;
      case Mode::Mc: {
        const McOutput mc = mc_csv(cfg);
        write_file(*cfg.out, mc.counts_csv);
        write_file(estimates_path(*cfg.out), mc.estimates_csv);
        break;
      }
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace qbs::cli
