// Batch front end: every subcommand reads a JSON config (file + --set
// overrides), runs the requested computation and writes CSV/JSON files whose
// headers embed the fully resolved config.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "nhjj/csv.hpp"
#include "nhjj/qcc.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace nhjj;

namespace {

constexpr const char* kFormatVersion = "nhjj-csv-1";

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Merge `patch` into `base`, refusing keys that the defaults do not declare so
// that typos surface as config errors instead of silently doing nothing.
void merge_checked(json& base, const json& patch, const std::string& prefix) {
  if (!patch.is_object())
    throw config_error("config: expected an object at '" + prefix + "'");
  for (const auto& [key, value] : patch.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) throw config_error("config: unknown key '" + path + "'");
    if (base[key].is_object() && !base[key].empty() && value.is_object())
      merge_checked(base[key], value, path);
    else
      base[key] = value;
  }
}

json resolve_config(const json& defaults, const std::string& config_path,
                    const std::vector<std::string>& overrides) {
  json cfg = defaults;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw config_error("config: cannot open '" + config_path + "'");
    json file;
    try {
      in >> file;
    } catch (const json::exception& e) {
      throw config_error("config: parse failure in '" + config_path + "': " + e.what());
    }
    merge_checked(cfg, file, "");
  }
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw config_error("--set expects key=value, got '" + kv + "'");
    const std::string path = kv.substr(0, eq);
    const std::string raw = kv.substr(eq + 1);
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::exception&) {
      value = raw;  // bare strings need no quoting
    }
    // Build a nested single-key patch from the dotted path.
    json patch = value;
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
      const auto dot = path.find('.', pos);
      parts.push_back(path.substr(pos, dot - pos));
      if (dot == std::string::npos) break;
      pos = dot + 1;
    }
    for (auto it = parts.rbegin(); it != parts.rend(); ++it)
      patch = json{{*it, patch}};
    merge_checked(cfg, patch, "");
  }
  return cfg;
}

ModelParams model_from(const json& m) {
  ModelParams p;
  p.hopping = m.at("hopping").get<double>();
  p.raman = m.at("raman").get<double>();
  p.soc = m.at("soc").get<double>();
  p.interaction = m.at("interaction").get<double>();
  p.loss = m.at("loss").get<double>();
  p.n_particles = m.at("n_particles").get<int>();
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  return p;
}

Amplitudes x0_from(const json& arr) {
  if (!arr.is_array() || arr.size() != 4)
    throw config_error("config: x0 must be an array of 4 [re, im] pairs");
  Amplitudes x;
  for (int m = 0; m < 4; ++m) {
    const auto& pair = arr[m];
    if (!pair.is_array() || pair.size() != 2)
      throw config_error("config: x0 entries must be [re, im] pairs");
    x[m] = Complex(pair[0].get<double>(), pair[1].get<double>());
  }
  if (!(x.squaredNorm() > 0)) throw config_error("config: x0 must be nonzero");
  return x;
}

std::vector<double> grid_from(const json& g, const std::string& name) {
  std::vector<double> out;
  if (g.is_array()) {
    for (const auto& v : g) out.push_back(v.get<double>());
  } else if (g.is_object()) {
    const double lo = g.at("min").get<double>();
    const double hi = g.at("max").get<double>();
    const int count = g.at("count").get<int>();
    if (count < 1) throw config_error("config: " + name + ".count must be >= 1");
    for (int k = 0; k < count; ++k)
      out.push_back(count == 1 ? lo : lo + (hi - lo) * k / (count - 1));
  } else {
    throw config_error("config: " + name + " must be a list or a {min,max,count} range");
  }
  if (out.empty()) throw config_error("config: " + name + " must be non-empty");
  return out;
}

std::ofstream open_output(const fs::path& out_dir, const std::string& name,
                          const std::string& command, const json& cfg) {
  fs::create_directories(out_dir);
  std::ofstream os(out_dir / name, std::ios::binary);
  if (!os) throw config_error("cannot open output file '" + (out_dir / name).string() + "'");
  CsvWriter w(os);
  w.comment(std::string("format ") + kFormatVersion);
  w.comment("command " + command);
  w.comment("config " + cfg.dump());
  return os;
}

// Deterministic fan-out: tasks run on up to `jobs` workers, results land in
// task order no matter which worker finishes first.
void run_parallel(std::size_t n_tasks, int jobs, const std::function<void(std::size_t)>& task) {
  if (jobs < 1) throw config_error("--jobs must be >= 1");
  const std::size_t workers = std::min<std::size_t>(jobs, n_tasks);
  if (workers <= 1) {
    for (std::size_t k = 0; k < n_tasks; ++k) task(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = next.fetch_add(1); k < n_tasks; k = next.fetch_add(1))
          task(k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

json default_model() {
  return json{{"hopping", 1.0}, {"raman", 1.0},       {"soc", 0.0},
              {"interaction", 0.0}, {"loss", 0.0},    {"n_particles", 1}};
}

json default_x0() {
  return json::array({{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}});
}

// --- subcommands ---

int cmd_spectrum(const json& cfg, const fs::path& out_dir, int) {
  const auto params = model_from(cfg.at("model"));
  FockBasis basis(params.n_particles, params.n_modes);
  const auto lossy = eigendecompose(build_many_body(params, basis, false));
  const auto pt = eigendecompose(build_many_body(params, basis, true));

  // Pair each lossy eigenvalue with its nearest shifted partner so the
  // row-wise identity Ept = E + i beta N / 2 is visible in the output.
  const Complex shift(0, params.loss * params.n_particles / 2.0);
  const auto d = lossy.eigenvalues.size();
  std::vector<bool> used(d, false);
  std::vector<Complex> matched(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::Index best = -1;
    double best_dist = 1e300;
    for (Eigen::Index l = 0; l < d; ++l) {
      if (used[l]) continue;
      const double dist = std::abs(pt.eigenvalues[l] - (lossy.eigenvalues[k] + shift));
      if (dist < best_dist) {
        best_dist = dist;
        best = l;
      }
    }
    used[best] = true;
    matched[k] = pt.eigenvalues[best];
  }

  auto os = open_output(out_dir, "spectrum.csv", "spectrum", cfg);
  CsvWriter w(os);
  w.header("index,re_E,im_E,re_Ept,im_Ept");
  for (Eigen::Index k = 0; k < d; ++k) {
    w.field(static_cast<long long>(k))
        .field(lossy.eigenvalues[k].real())
        .field(lossy.eigenvalues[k].imag())
        .field(matched[k].real())
        .field(matched[k].imag());
    w.end_row();
  }
  return 0;
}

int cmd_threshold(const json& cfg, const fs::path& out_dir, int jobs) {
  ModelParams base;
  base.hopping = cfg.at("model").at("hopping").get<double>();
  base.raman = cfg.at("model").at("raman").get<double>();
  const auto gammas = grid_from(cfg.at("gamma"), "gamma");
  const auto gs = grid_from(cfg.at("g"), "g");
  std::vector<int> ns;
  for (const auto& v : cfg.at("n")) ns.push_back(v.get<int>());
  if (ns.empty()) throw config_error("config: n must be non-empty");
  const double beta_max = cfg.at("beta_max").get<double>();
  const double tol = cfg.at("tol").get<double>();

  struct Point {
    double gamma, g;
    int n;
    ThresholdResult res;
  };
  std::vector<Point> points;
  for (double gamma : gammas)
    for (double g : gs)
      for (int n : ns) points.push_back({gamma, g, n, {}});

  run_parallel(points.size(), jobs, [&](std::size_t k) {
    ModelParams p = base;
    p.soc = points[k].gamma;
    p.interaction = points[k].g;
    p.n_particles = points[k].n;
    FockBasis basis(p.n_particles, p.n_modes);
    points[k].res = breaking_threshold(p, basis, beta_max, tol);
  });

  auto os = open_output(out_dir, "threshold.csv", "threshold", cfg);
  CsvWriter w(os);
  w.header("gamma,g,N,beta_c,broken_at_min");
  for (const auto& pt : points) {
    w.field(pt.gamma).field(pt.g).field(pt.n).field(pt.res.beta_c)
        .field(pt.res.broken_at_min);
    w.end_row();
  }
  return 0;
}

int cmd_phase_diagram(const json& cfg, const fs::path& out_dir, int) {
  const auto gammas = grid_from(cfg.at("gamma"), "gamma");
  const auto betas = grid_from(cfg.at("beta"), "beta");
  const double raman = cfg.at("model").at("raman").get<double>();
  const double hopping = cfg.at("model").at("hopping").get<double>();
  const auto grid = single_particle_phase_diagram(gammas, betas, raman, hopping);

  auto os = open_output(out_dir, "phase_diagram.csv", "phase-diagram", cfg);
  CsvWriter w(os);
  w.header("gamma,beta,max_im_eps");
  for (std::size_t i = 0; i < gammas.size(); ++i)
    for (std::size_t j = 0; j < betas.size(); ++j) {
      w.field(gammas[i]).field(betas[j]).field(grid(i, j));
      w.end_row();
    }
  return 0;
}

std::vector<double> time_grid(const json& cfg) {
  const double t0 = cfg.at("t0").get<double>();
  const double t1 = cfg.at("t1").get<double>();
  const int samples = cfg.at("samples").get<int>();
  if (!(t1 > t0) || samples < 1)
    throw config_error("config: need t1 > t0 and samples >= 1");
  return linspace(t0, t1, samples);
}

void write_quantum_trajectory(std::ofstream& os, const std::vector<ObservableRecord>& recs) {
  CsvWriter w(os);
  w.header("t,survival,z,i_spin,i_up,i_down,pL_up,pL_dn,pR_up,pR_dn");
  for (const auto& r : recs) {
    w.field(r.time).field(r.survival).field(r.z).field(r.i_spin).field(r.i_up)
        .field(r.i_down).field(r.mode_populations[0]).field(r.mode_populations[1])
        .field(r.mode_populations[2]).field(r.mode_populations[3]);
    w.end_row();
  }
}

void write_meanfield_trajectory(std::ofstream& os, const MeanFieldTrajectory& traj) {
  CsvWriter w(os);
  w.header("t,n,re_x1,re_x2,re_x3,re_x4,im_x1,im_x2,im_x3,im_x4,z,i_spin,i_up,i_down");
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto rec = meanfield_observables(traj.times[k], traj.states[k]);
    const Amplitudes& x = traj.states[k];
    w.field(rec.time).field(rec.n);
    for (int m = 0; m < 4; ++m) w.field(x[m].real());
    for (int m = 0; m < 4; ++m) w.field(x[m].imag());
    w.field(rec.z).field(rec.i_spin).field(rec.i_up).field(rec.i_down);
    w.end_row();
  }
}

int cmd_evolve(const json& cfg, const fs::path& out_dir, int) {
  const auto params = model_from(cfg.at("model"));
  const auto x0 = x0_from(cfg.at("x0"));
  const auto grid = time_grid(cfg);
  const std::string side = cfg.at("side").get<std::string>();
  if (side != "quantum" && side != "meanfield" && side != "both")
    throw config_error("config: side must be quantum, meanfield or both");
  const OdeTolerances tol{cfg.at("rtol").get<double>(), cfg.at("atol").get<double>()};

  if (side != "meanfield") {
    const std::string method = cfg.at("method").get<std::string>();
    if (method != "spectral" && method != "rk")
      throw config_error("config: method must be spectral or rk");
    FockBasis basis(params.n_particles, params.n_modes);
    const auto h = build_many_body(params, basis);
    const auto psi0 = coherent_state(x0, basis);
    const auto states = evolve_quantum(h, psi0, grid,
                                       method == "spectral"
                                           ? PropagationMethod::Spectral
                                           : PropagationMethod::RkAdaptive,
                                       tol);
    std::vector<ObservableRecord> recs;
    recs.reserve(states.size());
    for (const auto& s : states) recs.push_back(observables(s, basis));
    auto os = open_output(out_dir, "trajectory_quantum.csv", "evolve", cfg);
    write_quantum_trajectory(os, recs);
  }
  if (side != "quantum") {
    const std::string form = cfg.at("gpe_form").get<std::string>();
    if (form != "gauged" && form != "ungauged")
      throw config_error("config: gpe_form must be gauged or ungauged");
    const auto traj = evolve_meanfield(x0, params, grid,
                                       form == "gauged" ? GpeForm::Gauged
                                                        : GpeForm::Ungauged,
                                       tol);
    auto os = open_output(out_dir, "trajectory_meanfield.csv", "evolve", cfg);
    write_meanfield_trajectory(os, traj);
  }
  return 0;
}

int cmd_compare(const json& cfg, const fs::path& out_dir, int) {
  const auto params = model_from(cfg.at("model"));
  Amplitudes x0 = x0_from(cfg.at("x0"));
  if (std::abs(x0.squaredNorm() - 1.0) > 1e-9)
    throw config_error("config: compare needs a unit-norm x0");
  const auto grid = time_grid(cfg);
  const double w0 = cfg.at("window").at(0).get<double>();
  const double w1 = cfg.at("window").at(1).get<double>();

  const auto run = run_comparison(params, x0, grid);
  const auto breakdown = breakdown_detector(run, w0, w1);
  const auto sync_q = synchronization_metrics(run.quantum, w0, w1);
  const auto sync_mf = synchronization_metrics(run.meanfield, w0, w1);

  auto os = open_output(out_dir, "comparison.csv", "compare", cfg);
  CsvWriter w(os);
  w.header("t,z_q,z_mf,i_q,i_mf,iu_q,id_q,iu_mf,id_mf,eps_n");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    w.field(grid[k]).field(run.quantum[k].z).field(run.meanfield[k].z)
        .field(run.quantum[k].i_spin).field(run.meanfield[k].i_spin)
        .field(run.quantum[k].i_up).field(run.quantum[k].i_down)
        .field(run.meanfield[k].i_up).field(run.meanfield[k].i_down)
        .field(run.deviation[k].eps_n);
    w.end_row();
  }

  double max_eps = 0, max_dz = 0;
  for (const auto& d : run.deviation) {
    max_eps = std::max(max_eps, d.eps_n);
    max_dz = std::max(max_dz, d.dz);
  }
  json report{
      {"format", kFormatVersion},
      {"command", "compare"},
      {"config", cfg},
      {"max_eps_n", max_eps},
      {"max_dz", max_dz},
      {"breakdown",
       {{"quantum_variance", breakdown.quantum_variance},
        {"meanfield_variance", breakdown.meanfield_variance},
        {"quantum_oscillates", breakdown.quantum_oscillates},
        {"meanfield_oscillates", breakdown.meanfield_oscillates},
        {"breakdown", breakdown.breakdown}}},
      {"synchronization_quantum",
       {{"amplitude_ratio", sync_q.amplitude_ratio},
        {"range_overlap", sync_q.range_overlap},
        {"antiphase_corr", sync_q.antiphase_corr},
        {"synchronized", sync_q.synchronized}}},
      {"synchronization_meanfield",
       {{"amplitude_ratio", sync_mf.amplitude_ratio},
        {"range_overlap", sync_mf.range_overlap},
        {"antiphase_corr", sync_mf.antiphase_corr},
        {"synchronized", sync_mf.synchronized}}}};
  std::ofstream ros(out_dir / "report.json", std::ios::binary);
  ros << report.dump(2) << '\n';
  return 0;
}

int cmd_sweep_zbar(const json& cfg, const fs::path& out_dir, int jobs) {
  ModelParams base = model_from(cfg.at("model"));
  const auto gs = grid_from(cfg.at("g"), "g");
  std::vector<int> ns;
  for (const auto& v : cfg.at("n")) ns.push_back(v.get<int>());
  if (ns.empty()) throw config_error("config: n must be non-empty");
  const auto x0 = x0_from(cfg.at("x0"));
  const double horizon = cfg.at("horizon").get<double>();
  const double burn_in = cfg.at("burn_in").get<double>();
  const double dt = cfg.at("dt").get<double>();

  struct Point {
    double g;
    int n;
    TimeAverageResult res;
  };
  std::vector<Point> points;
  for (double g : gs)
    for (int n : ns) points.push_back({g, n, {}});

  run_parallel(points.size(), jobs, [&](std::size_t k) {
    ModelParams p = base;
    p.interaction = points[k].g;
    p.n_particles = points[k].n;
    FockBasis basis(p.n_particles, p.n_modes);
    const auto h = build_many_body(p, basis);
    points[k].res = time_averaged_z(h, coherent_state(x0, basis), horizon, burn_in, dt);
  });

  auto os = open_output(out_dir, "zbar.csv", "sweep-zbar", cfg);
  CsvWriter w(os);
  w.header("gamma,beta,g,N,zbar,converged");
  for (const auto& pt : points) {
    w.field(base.soc).field(base.loss).field(pt.g).field(pt.n).field(pt.res.zbar)
        .field(pt.res.converged);
    w.end_row();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"non-Hermitian spin-orbit coupled bosonic junction simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  int jobs = 1;
  std::string out_dir = ".";
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--set", overrides, "override a config key (dotted.path=value)");
  app.add_option("--jobs", jobs, "worker threads for grid sweeps");
  app.add_option("--out", out_dir, "output directory");

  struct Command {
    const char* name;
    const char* help;
    json defaults;
    int (*run)(const json&, const fs::path&, int);
  };
  const json model = default_model();
  std::vector<Command> commands{
      {"spectrum", "complex eigenvalues of the lossy and shifted Hamiltonians",
       json{{"model", model}}, cmd_spectrum},
      {"threshold", "symmetry-breaking threshold over a (gamma, g, N) grid",
       json{{"model", model}, {"gamma", json::array({0.0})}, {"g", json::array({0.0})},
            {"n", json::array({2})}, {"beta_max", 3.0}, {"tol", 1e-3}},
       cmd_threshold},
      {"phase-diagram", "single-particle max Im(eps) over a (gamma, beta) grid",
       json{{"model", model},
            {"gamma", json{{"min", 0.0}, {"max", 1.0}, {"count", 21}}},
            {"beta", json{{"min", 0.0}, {"max", 1.0}, {"count", 21}}}},
       cmd_phase_diagram},
      {"evolve", "time evolution of the quantum and/or mean-field state",
       json{{"model", model}, {"side", "both"}, {"x0", default_x0()}, {"t0", 0.0},
            {"t1", 100.0}, {"samples", 400}, {"method", "spectral"},
            {"gpe_form", "gauged"}, {"rtol", 1e-10}, {"atol", 1e-12}},
       cmd_evolve},
      {"compare", "matched quantum vs mean-field run with deviation metrics",
       json{{"model", model}, {"x0", default_x0()}, {"t0", 0.0}, {"t1", 300.0},
            {"samples", 1200}, {"window", json::array({100.0, 300.0})}},
       cmd_compare},
      {"sweep-zbar", "time-averaged imbalance over a (g, N) grid",
       json{{"model", model}, {"g", json::array({0.1})}, {"n", json::array({4})},
            {"x0", default_x0()}, {"horizon", 400.0}, {"burn_in", 200.0}, {"dt", 0.25}},
       cmd_sweep_zbar},
  };

  const Command* selected = nullptr;
  for (auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->fallthrough();
    sub->callback([&selected, &c] { selected = &c; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const json cfg = resolve_config(selected->defaults, config_path, overrides);
    return selected->run(cfg, fs::path(out_dir), jobs);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const capacity_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}
