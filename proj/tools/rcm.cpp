// rcm: marked random connection model simulator CLI.
//
// Subcommands: build | render | sweep | betac | decay | osss | explore.
// Exit codes: 0 success, 2 configuration validation failure, 3 runtime error
// (e.g. "no crossing in bracket").

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "rcm/config.hpp"
#include "rcm/estimate.hpp"
#include "rcm/explore.hpp"
#include "rcm/io.hpp"
#include "rcm/svg.hpp"

namespace {

using nlohmann::ordered_json;

struct Overrides {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<std::string> family;
  std::optional<double> beta;
  std::optional<double> r;
  std::optional<double> s;
  std::optional<int> q;
  std::optional<std::int64_t> n;
  bool with_trace = false;
};

rcm::RunConfig resolve_config(const Overrides& ov) {
  rcm::RunConfig cfg;
  if (ov.config_path) cfg = rcm::load_config_file(*ov.config_path);
  if (ov.seed) cfg.seed = *ov.seed;
  else if (!ov.config_path) {
    if (const char* env = std::getenv("RCM_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
  }
  if (ov.out) cfg.out = *ov.out;
  if (ov.threads) cfg.threads = *ov.threads;
  if (ov.family) cfg.family = *ov.family;
  if (ov.beta) cfg.beta = *ov.beta;
  if (ov.r) cfg.r = *ov.r;
  if (ov.s) cfg.s = *ov.s;
  if (ov.q) cfg.q = *ov.q;
  if (ov.n) cfg.n = *ov.n;
  return cfg;
}

int fail_validation(const std::vector<std::string>& errors) {
  for (const auto& e : errors) std::cerr << "config error: " << e << "\n";
  return 2;
}

ordered_json artifact_header(const char* command, const rcm::RunConfig& cfg) {
  ordered_json j;
  j["version"] = rcm::kVersion;
  j["command"] = command;
  j["master_seed"] = cfg.seed;
  j["config_hash"] = rcm::config_hash(cfg);
  return j;
}

void write_artifact(const rcm::RunConfig& cfg, const std::string& name, const std::string& body) {
  std::filesystem::create_directories(cfg.out);
  rcm::atomic_write_file(cfg.out + "/" + name, body);
}

std::string csv_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double require(const std::optional<double>& v, const char* what) {
  if (!v) throw std::invalid_argument(std::string("missing required parameter: ") + what);
  return *v;
}

// ---------------------------------------------------------------------------

int cmd_build(const rcm::RunConfig& cfg) {
  const rcm::ConnectionFamily family = rcm::family_from_config(cfg);
  const double r = require(cfg.r, "r");
  const rcm::CubeGrid grid(cfg.d, family.D);
  const rcm::Window window = rcm::window_for_radius(r, grid, family.D);
  const rcm::Realization rz =
      rcm::sample_realization(cfg.seed, require(cfg.beta, "beta"), window, family.mark_law, true);
  const rcm::Complex cx = rcm::build_complex(rz, family);

  ordered_json j = artifact_header("build", cfg);
  j["complex"] = rcm::complex_to_json(cx);
  write_artifact(cfg, "complex.json", j.dump(2) + "\n");

  const rcm::QGraph g = rcm::up_graph(cx, cfg.q);
  const rcm::ComponentSummary comps = rcm::components(g);
  std::string csv = "component_size,count\n";
  for (const auto& [size, count] : comps.histogram)
    csv += std::to_string(size) + "," + std::to_string(count) + "\n";
  write_artifact(cfg, "components.csv", csv);

  std::cout << "build: " << cx.verts.size() << " vertices";
  for (int dim = 1; dim <= cx.alpha; ++dim)
    std::cout << ", F_" << dim << "=" << cx.count_faces(dim);
  std::cout << " -> " << cfg.out << "/complex.json\n";
  return 0;
}

int cmd_render(const rcm::RunConfig& cfg, bool with_trace) {
  if (cfg.d != 2) {
    std::cerr << "config error: rendering is 2-D only\n";
    return 2;
  }
  const rcm::ConnectionFamily family = rcm::family_from_config(cfg);
  const double r = require(cfg.r, "r");
  const rcm::CubeGrid grid(cfg.d, family.D);
  const rcm::Window window = rcm::window_for_radius(r, grid, family.D);
  const rcm::Realization rz =
      rcm::sample_realization(cfg.seed, require(cfg.beta, "beta"), window, family.mark_law, true);
  const rcm::Complex cx = rcm::build_complex(rz, family);

  rcm::RenderStyle style;
  style.r = r;
  style.s = cfg.s.value_or(0.0);
  style.q = cfg.q;

  std::string svg;
  if (with_trace) {
    const rcm::ExplorationTrace trace =
        rcm::explore(rz, family, cfg.q, r, require(cfg.s, "s"));
    svg = rcm::render_svg(cx, style, &trace);
  } else {
    svg = rcm::render_svg(cx, style);
  }
  write_artifact(cfg, "render.svg", svg);
  std::cout << "render -> " << cfg.out << "/render.svg\n";
  return 0;
}

int cmd_sweep(const rcm::RunConfig& cfg) {
  const rcm::ConnectionFamily family = rcm::family_from_config(cfg);
  std::vector<double> betas = cfg.betas;
  if (betas.empty() && cfg.beta) betas.push_back(*cfg.beta);
  if (betas.empty()) throw std::invalid_argument("missing required parameter: beta or betas");
  const double r = require(cfg.r, "r");
  const rcm::SweepResult sweep =
      rcm::theta_sweep(cfg.d, family, cfg.q, betas, r, cfg.n, cfg.seed, cfg.threads);

  std::string csv = "beta,r,q,n,theta_hat,ci_lo,ci_hi\n";
  for (const auto& c : sweep.cells)
    csv += csv_num(c.beta) + "," + csv_num(c.r) + "," + std::to_string(c.q) + "," +
           std::to_string(c.n) + "," + csv_num(c.theta) + "," + csv_num(c.ci.lo) + "," +
           csv_num(c.ci.hi) + "\n";
  write_artifact(cfg, "sweep.csv", csv);

  ordered_json j = artifact_header("sweep", cfg);
  j["family"] = family.kind_name();
  j["result"] = rcm::sweep_to_json(sweep);
  write_artifact(cfg, "sweep.json", j.dump(2) + "\n");
  std::cout << "sweep: " << sweep.cells.size() << " cells, n=" << cfg.n << " -> " << cfg.out
            << "/sweep.csv\n";
  return 0;
}

int cmd_betac(const rcm::RunConfig& cfg) {
  const rcm::ConnectionFamily family = rcm::family_from_config(cfg);
  const double r_small = require(cfg.r_small, "r_small");
  const double r_large = require(cfg.r_large, "r_large");
  const double beta_lo = require(cfg.beta_min, "beta_min");
  const double beta_hi = require(cfg.beta_max, "beta_max");
  const rcm::CriticalEstimate est =
      rcm::estimate_beta_c(cfg.d, family, cfg.q, r_small, r_large, beta_lo, beta_hi,
                           cfg.grid_steps, cfg.n, cfg.seed, cfg.threads, cfg.tau, cfg.bootstrap);

  std::string csv = "beta,n,theta_small,small_lo,small_hi,theta_large,large_lo,large_hi\n";
  for (const auto& cell : est.grid)
    csv += csv_num(cell.beta) + "," + std::to_string(cell.small.n) + "," +
           csv_num(cell.small.theta) + "," + csv_num(cell.small.ci.lo) + "," +
           csv_num(cell.small.ci.hi) + "," + csv_num(cell.large.theta) + "," +
           csv_num(cell.large.ci.lo) + "," + csv_num(cell.large.ci.hi) + "\n";
  write_artifact(cfg, "betac_grid.csv", csv);

  ordered_json j = artifact_header("betac", cfg);
  j["family"] = family.kind_name();
  j["result"] = rcm::betac_to_json(est);
  write_artifact(cfg, "betac.json", j.dump(2) + "\n");
  std::printf("betac: crossing %.4f [%.4f, %.4f], bisection %.4f [%.4f, %.4f]\n", est.crossing,
              est.crossing_ci.lo, est.crossing_ci.hi, est.bisection, est.bisection_ci.lo,
              est.bisection_ci.hi);
  return 0;
}

int cmd_decay(const rcm::RunConfig& cfg) {
  const rcm::ConnectionFamily family = rcm::family_from_config(cfg);
  if (cfg.r_grid.empty()) throw std::invalid_argument("missing required parameter: r_grid");
  const rcm::DecayFit fit = rcm::decay_fit(cfg.d, family, cfg.q, require(cfg.beta, "beta"),
                                           cfg.r_grid, cfg.n, cfg.seed, cfg.threads);

  std::string csv = "r,n,theta_hat,ci_lo,ci_hi,used\n";
  for (const auto& p : fit.points)
    csv += csv_num(p.r) + "," + std::to_string(p.n) + "," + csv_num(p.theta) + "," +
           csv_num(p.ci.lo) + "," + csv_num(p.ci.hi) + "," + (p.used ? "1" : "0") + "\n";
  write_artifact(cfg, "decay.csv", csv);

  ordered_json j = artifact_header("decay", cfg);
  j["family"] = family.kind_name();
  j["result"] = rcm::decay_to_json(fit, *cfg.beta);
  write_artifact(cfg, "decay.json", j.dump(2) + "\n");
  if (fit.degenerate)
    std::cout << "decay: degenerate (fewer than two nonzero cells)\n";
  else
    std::printf("decay: slope %.4f (c=%.4f), R^2 %.4f\n", fit.slope, -fit.slope, fit.r2);
  return 0;
}

int cmd_osss(const rcm::RunConfig& cfg) {
  const rcm::ConnectionFamily family = rcm::family_from_config(cfg);
  const double r = require(cfg.r, "r");
  const double s = require(cfg.s, "s");
  const rcm::OsssCheck check = rcm::osss_check(cfg.d, require(cfg.beta, "beta"), family, cfg.q, r,
                                               s, cfg.n, cfg.seed, cfg.threads);

  std::string csv = "cube,delta_hat,delta_lo,delta_hi,zeta_hat,zeta_lo,zeta_hi,product\n";
  for (const auto& term : check.cubes)
    csv += std::to_string(term.cube) + "," + csv_num(term.delta.value) + "," +
           csv_num(term.delta.ci.lo) + "," + csv_num(term.delta.ci.hi) + "," +
           csv_num(term.zeta.value) + "," + csv_num(term.zeta.ci.lo) + "," +
           csv_num(term.zeta.ci.hi) + "," + csv_num(term.delta.value * term.zeta.value) + "\n";
  write_artifact(cfg, "osss.csv", csv);

  ordered_json j = artifact_header("osss", cfg);
  j["family"] = family.kind_name();
  j["result"] = rcm::osss_to_json(check);
  write_artifact(cfg, "osss.json", j.dump(2) + "\n");
  std::printf("osss: lhs %.5f rhs %.5f margin %.5f (se %.5f)\n", check.lhs, check.rhs,
              check.margin, check.se_margin);
  return 0;
}

int cmd_explore(const rcm::RunConfig& cfg) {
  const rcm::ConnectionFamily family = rcm::family_from_config(cfg);
  const double r = require(cfg.r, "r");
  const double s = require(cfg.s, "s");
  const rcm::CubeGrid grid(cfg.d, family.D);
  const rcm::Window window = rcm::window_for_radius(r, grid, family.D);
  const rcm::Realization rz =
      rcm::sample_realization(cfg.seed, require(cfg.beta, "beta"), window, family.mark_law, true);
  const rcm::ExplorationTrace trace = rcm::explore(rz, family, cfg.q, r, s);

  ordered_json j = artifact_header("explore", cfg);
  j["family"] = family.kind_name();
  j["result"] = rcm::trace_to_json(trace);
  write_artifact(cfg, "trace.json", j.dump(2) + "\n");
  std::cout << "explore: revealed " << trace.revealed.size() << " cubes, decision "
            << (trace.decision ? "true" : "false") << " -> " << cfg.out << "/trace.json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"marked random connection model on random simplicial complexes"};
  app.require_subcommand(1);

  Overrides ov;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", ov.config_path, "config file (key = value)");
    sub->add_option("--seed", ov.seed, "master seed (fallback: RCM_SEED)");
    sub->add_option("--out", ov.out, "output directory");
    sub->add_option("--threads", ov.threads, "worker threads");
    sub->add_option("--family", ov.family, "family kind");
    sub->add_option("--beta", ov.beta, "intensity");
    sub->add_option("--r", ov.r, "percolation radius");
    sub->add_option("--s", ov.s, "exploration sphere radius");
    sub->add_option("--q", ov.q, "connectivity level");
    sub->add_option("--n", ov.n, "replications");
  };

  CLI::App* build = app.add_subcommand("build", "sample one realization and build the complex");
  CLI::App* render = app.add_subcommand("render", "SVG rendering of a realization (d=2)");
  render->add_flag("--trace", ov.with_trace, "run the exploration and shade revealed cubes");
  CLI::App* sweep = app.add_subcommand("sweep", "theta_r over a beta grid");
  CLI::App* betac = app.add_subcommand("betac", "critical intensity estimates");
  CLI::App* decay = app.add_subcommand("decay", "subcritical decay fit of theta_r over r");
  CLI::App* osss = app.add_subcommand("osss", "empirical OSSS inequality terms");
  CLI::App* explore = app.add_subcommand("explore", "one exploration trace");
  for (CLI::App* sub : {build, render, sweep, betac, decay, osss, explore}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  rcm::RunConfig cfg;
  try {
    cfg = resolve_config(ov);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  const std::vector<std::string> errors = rcm::validate_config(cfg);
  if (!errors.empty()) return fail_validation(errors);

  try {
    if (build->parsed()) return cmd_build(cfg);
    if (render->parsed()) return cmd_render(cfg, ov.with_trace);
    if (sweep->parsed()) return cmd_sweep(cfg);
    if (betac->parsed()) return cmd_betac(cfg);
    if (decay->parsed()) return cmd_decay(cfg);
    if (osss->parsed()) return cmd_osss(cfg);
    if (explore->parsed()) return cmd_explore(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
