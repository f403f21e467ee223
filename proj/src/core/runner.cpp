#include "core/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "core/moving_solver.hpp"

namespace mlswe {

namespace fs = std::filesystem;

void RunConfig::set(const std::string &key, const std::string &value) {
  auto to_int = [&](const std::string &v) {
    std::size_t pos = 0;
    int r = 0;
    try {
      r = std::stoi(v, &pos);
    } catch (...) {
      throw UsageError("invalid integer for " + key + ": '" + v + "'");
    }
    if (pos != v.size())
      throw UsageError("invalid integer for " + key + ": '" + v + "'");
    return r;
  };
  auto to_double = [&](const std::string &v) {
    std::size_t pos = 0;
    double r = 0;
    try {
      r = std::stod(v, &pos);
    } catch (...) {
      throw UsageError("invalid number for " + key + ": '" + v + "'");
    }
    if (pos != v.size())
      throw UsageError("invalid number for " + key + ": '" + v + "'");
    return r;
  };
  auto to_bool = [&](const std::string &v) {
    if (v == "on" || v == "true" || v == "1")
      return true;
    if (v == "off" || v == "false" || v == "0")
      return false;
    throw UsageError("invalid boolean for " + key + ": '" + v + "'");
  };

  if (key == "case")
    case_name = value;
  else if (key == "layers" || key == "m")
    layers = to_int(value);
  else if (key == "rho") {
    rho.clear();
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ','))
      rho.push_back(to_double(tok));
    if (rho.empty())
      throw UsageError("rho: empty density list");
  } else if (key == "n1")
    n1 = to_int(value);
  else if (key == "n2")
    n2 = to_int(value);
  else if (key == "cfl")
    cfl = to_double(value);
  else if (key == "t_end")
    t_end = to_double(value);
  else if (key == "mesh") {
    if (value == "moving")
      moving = true;
    else if (value == "fixed")
      moving = false;
    else
      throw UsageError("mesh must be 'fixed' or 'moving'");
  } else if (key == "dissipation")
    dissipation = to_bool(value);
  else if (key == "p")
    p = to_int(value);
  else if (key == "gamma")
    gamma = to_double(value);
  else if (key == "theta")
    theta = to_double(value);
  else if (key == "mesh_sweeps")
    mesh_sweeps = to_int(value);
  else if (key == "dt_policy") {
    if (value != "standard" && value != "accuracy")
      throw UsageError("dt_policy must be 'standard' or 'accuracy'");
    dt_policy = value;
  } else if (key == "wave_speed") {
    if (value != "auto" && value != "numeric")
      throw UsageError("wave_speed must be 'auto' or 'numeric'");
    wave_speed = value;
  } else if (key == "outdir")
    outdir = value;
  else if (key == "snapshot_stride")
    snapshot_stride = to_int(value);
  else if (key == "energy_ledger")
    energy_ledger = to_bool(value);
  else if (key == "compare_reference")
    compare_reference = to_bool(value);
  else if (key == "reference_n")
    reference_n = to_int(value);
  else
    throw UsageError("unknown configuration key '" + key + "'");
}

void RunConfig::load_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw UsageError("cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line = line.substr(0, hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) +
                       ": expected key=value");
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void RunConfig::validate() const {
  if (case_name.empty())
    throw UsageError("no case selected");
  if (!(cfl > 0.0 && cfl <= 1.0))
    throw UsageError("cfl must lie in (0, 1]");
  if (p < 1 || p > 3)
    throw UsageError("p must be 1, 2 or 3");
  try {
    validate_resolved();
  } catch (const UsageError &) {
    throw;
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
}

void RunConfig::validate_resolved() const {
  CaseSetup setup = make_case(case_name, layers);
  std::vector<double> densities =
      rho.empty() ? std::vector<double>(setup.sys.densities().begin(),
                                        setup.sys.densities().end())
                  : rho;
  LayerSystem sys(densities, setup.sys.g()); // validates the ordering
  const double gam = gamma < 0.0 ? default_gamma(sys) : gamma;
  if (moving)
    check_gamma(sys, gam);
  else if (gamma >= 0.0)
    check_gamma(sys, gam); // explicit gamma is validated either way
  const int minn = dissipation ? 2 * p + 5 : 2 * p + 1;
  const int rn1 = n1 > 0 ? n1 : setup.default_n1;
  const int rn2 = setup.dim == 2 ? (n2 > 0 ? n2 : setup.default_n2) : 1;
  if (rn1 < minn || (setup.dim == 2 && rn2 < minn))
    throw UsageError("grid too small for the p=" + std::to_string(p) +
                     " stencil (need at least " + std::to_string(minn) +
                     " nodes per direction)");
  if (theta >= 0.0 && !(theta >= 0.0))
    throw UsageError("theta must be nonnegative");
}

namespace {

struct OutputWriter {
  fs::path dir;
  std::string header;
  int snapshot_index = 0;

  void write_snapshot(const Grid &g, const State &s, const MovingMesh *mesh,
                      double t) {
    char name[64];
    std::snprintf(name, sizeof(name), "snap_%04d.txt", snapshot_index++);
    std::ofstream out(dir / name);
    out << header;
    out << "# t= " << fmt(t) << "\n";
    out << "# columns: x1 x2 b J";
    for (int m = 1; m <= s.M; ++m)
      out << " h" << m << " u" << m << " v" << m;
    out << "\n";
    const Grid *wg = mesh ? &mesh->coord_grid() : nullptr;
    for (int j = 0; j < g.n2(); ++j) {
      for (int i = 0; i < g.n1(); ++i) {
        const double x1 = mesh ? mesh->x1(*wg, i, j) : g.x1(i);
        const double x2 = mesh ? mesh->x2(*wg, i, j) : g.x2(j);
        const double J = mesh ? mesh->J(g, i, j) : 1.0;
        out << fmt(x1) << ' ' << fmt(x2) << ' ' << fmt(s.b(g, i, j)) << ' '
            << fmt(J);
        for (int m = 0; m < s.M; ++m) {
          const double h = s.h[m](g, i, j);
          out << ' ' << fmt(h) << ' ' << fmt(s.hu[m](g, i, j) / h) << ' '
              << fmt(s.hv[m](g, i, j) / h);
        }
        out << '\n';
      }
    }
  }

  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }
};

std::string config_header(const RunConfig &cfg, const CaseSetup &setup,
                          int n1, int n2) {
  std::ostringstream os;
  os << "# mlswe run case=" << setup.name << " layers=" << setup.sys.layers()
     << " n1=" << n1 << " n2=" << n2 << " mesh="
     << (cfg.moving ? "moving" : "fixed") << " p=" << cfg.p
     << " cfl=" << cfg.cfl << " dissipation="
     << (cfg.dissipation ? "on" : "off") << " dt_policy=" << cfg.dt_policy
     << "\n";
  return os.str();
}

struct PreparedRun {
  CaseSetup setup;
  Grid grid;
  SchemeConfig scheme;
  double gamma = 0.0;
  MonitorConfig monitor;
};

PreparedRun prepare(const RunConfig &cfg) {
  CaseSetup setup = make_case(cfg.case_name, cfg.layers);
  if (!cfg.rho.empty()) {
    if (static_cast<int>(cfg.rho.size()) != setup.sys.layers())
      throw UsageError("rho override must list one density per layer");
    setup.sys = LayerSystem(cfg.rho, setup.sys.g());
  }
  const int n1 = cfg.n1 > 0 ? cfg.n1 : setup.default_n1;
  const int n2 = setup.dim == 2 ? (cfg.n2 > 0 ? cfg.n2 : setup.default_n2) : 1;
  Grid grid(n1, n2, setup.x1lo, setup.x1hi, setup.x2lo, setup.x2hi, setup.bc1,
            setup.bc2);
  SchemeConfig scheme;
  scheme.oc = order_coeffs(cfg.p);
  scheme.dissipation = cfg.dissipation;
  scheme.energy_ledger = cfg.energy_ledger;
  scheme.cfl = cfg.cfl;
  scheme.accuracy_dt = (cfg.dt_policy == "accuracy");
  scheme.wave_speed = (cfg.wave_speed == "numeric") ? WaveSpeedMode::numeric
                                                    : WaveSpeedMode::automatic;
  MonitorConfig monitor = setup.monitor;
  if (cfg.theta >= 0.0)
    monitor.theta = cfg.theta;
  if (cfg.mesh_sweeps > 0)
    monitor.sweeps = cfg.mesh_sweeps;
  if (cfg.t_end >= 0.0)
    setup.t_end = cfg.t_end;
  const double gamma =
      cfg.gamma < 0.0 ? default_gamma(setup.sys) : cfg.gamma;
  check_gamma(setup.sys, gamma);
  return PreparedRun{std::move(setup), grid, scheme, gamma, monitor};
}

void set_initial(const CaseSetup &setup, const Grid &grid, State &s) {
  if (setup.wb_case) {
    Field b;
    b.resize(grid);
    for (int j = 0; j < grid.n2(); ++j)
      for (int i = 0; i < grid.n1(); ++i)
        b(grid, i, j) = setup.bathymetry(grid.x1(i), grid.x2(j));
    fill_ghosts_scalar(grid, b);
    s = lake_at_rest(setup.sys, grid, b, setup.surface_levels);
    return;
  }
  NodeState n(setup.sys.layers());
  for (int j = 0; j < grid.n2(); ++j) {
    for (int i = 0; i < grid.n1(); ++i) {
      setup.initial(grid.x1(i), grid.x2(j), n);
      s.set_node(grid, i, j, n);
    }
  }
  s.fill_ghosts(grid);
}

void resample_on_mesh(const CaseSetup &setup, const Grid &grid,
                      const MovingMesh &mesh, State &s) {
  const Grid &wg = mesh.coord_grid();
  NodeState n(setup.sys.layers());
  for (int j = 0; j < grid.n2(); ++j) {
    for (int i = 0; i < grid.n1(); ++i) {
      setup.initial(mesh.x1(wg, i, j), mesh.x2(wg, i, j), n);
      s.set_node(grid, i, j, n);
    }
  }
  s.fill_ghosts(grid);
}

/// Piecewise-linear sample of a 1D reference profile.
double interp1(const std::vector<double> &x, const std::vector<double> &f,
               double xq) {
  if (xq <= x.front())
    return f.front();
  if (xq >= x.back())
    return f.back();
  const auto it = std::upper_bound(x.begin(), x.end(), xq);
  const std::size_t k = static_cast<std::size_t>(it - x.begin());
  const double w = (xq - x[k - 1]) / (x[k] - x[k - 1]);
  return (1.0 - w) * f[k - 1] + w * f[k];
}

} // namespace

std::vector<double> convergence_orders(const std::vector<int> &n,
                                       const std::vector<double> &err) {
  std::vector<double> orders;
  for (std::size_t k = 0; k + 1 < err.size(); ++k) {
    if (err[k] == err[k + 1]) {
      orders.push_back(0.0);
      continue;
    }
    const double ratio = std::log(err[k] / err[k + 1]);
    // doubling sequences by node count use log2; otherwise the spacing ratio
    const double hratio = (n[k + 1] == 2 * n[k])
                              ? std::log(2.0)
                              : std::log(static_cast<double>(n[k + 1] - 1) /
                                         (n[k] - 1));
    orders.push_back(ratio / hratio);
  }
  return orders;
}

RunResult run(const RunConfig &cfg) {
  cfg.validate();
  PreparedRun pr = prepare(cfg);
  const CaseSetup &setup = pr.setup;
  const Grid &grid = pr.grid;
  const int M = setup.sys.layers();

  fs::create_directories(cfg.outdir);
  OutputWriter out;
  out.dir = cfg.outdir;
  out.header = config_header(cfg, setup, grid.n1(), grid.n2());

  std::unique_ptr<FixedSolver> fixed;
  std::unique_ptr<MovingSolver> moving;
  State *state = nullptr;
  if (cfg.moving) {
    moving = std::make_unique<MovingSolver>(setup.sys, grid, pr.scheme,
                                            pr.gamma);
    state = &moving->phys();
  } else {
    fixed = std::make_unique<FixedSolver>(setup.sys, grid, pr.scheme);
    state = &fixed->state();
  }
  set_initial(setup, grid, *state);

  if (cfg.moving) {
    // Initial adaptation: the damped Jacobi relaxation needs O(N^2) sweeps
    // to equidistribute, so iterate until the mesh stops moving (monitor
    // re-evaluated on the resampled data every few iterations).
    MovingMesh &mesh = moving->mesh();
    const int nmax = std::max(grid.n1(), grid.n2());
    const int outer = std::clamp(nmax * nmax / (2 * pr.monitor.sweeps), 10,
                                 4000);
    Field omega;
    const double tol =
        1e-12 * std::max(grid.x1hi() - grid.x1lo(), grid.x2hi() - grid.x2lo());
    for (int it = 0; it < outer; ++it) {
      if (it < 20 || it % 10 == 0) {
        resample_on_mesh(setup, grid, mesh, *state);
        compute_monitor(grid, setup.sys, *state, pr.monitor, omega);
      }
      Field before = mesh.x1;
      relax_mesh(mesh, omega, pr.monitor, mesh.x1, mesh.x2);
      mesh.fill_coordinate_ghosts();
      double moved = 0.0;
      for (std::size_t k = 0; k < before.a.size(); ++k)
        moved = std::max(moved, std::abs(mesh.x1.a[k] - before.a[k]));
      if (moved < tol)
        break;
    }
    resample_on_mesh(setup, grid, mesh, *state);
    moving->sync_from_phys();
    if (setup.source)
      moving->set_source(setup.source);
  } else {
    if (setup.source)
      fixed->set_source(setup.source);
  }

  // Event times: snapshots plus the end time.
  std::vector<double> events = setup.snapshot_times;
  events.push_back(setup.t_end);
  std::sort(events.begin(), events.end());

  std::ofstream elog(fs::path(cfg.outdir) / "energy.txt");
  elog << out.header << "# columns: t dt total_energy\n";
  auto total_energy = [&] {
    return cfg.moving ? moving->total_energy() : fixed->total_energy();
  };
  double E = total_energy();
  bool energy_monotone = true;
  double worst_growth = 0.0;
  elog << OutputWriter::fmt(0.0) << ' ' << OutputWriter::fmt(0.0) << ' '
       << OutputWriter::fmt(E) << '\n';

  out.write_snapshot(grid, *state, cfg.moving ? &moving->mesh() : nullptr,
                     0.0);
  double last_snap_t = 0.0;

  double t = 0.0;
  std::size_t next_event = 0;
  int steps = 0;
  const Grid &wg = cfg.moving ? moving->mesh().coord_grid() : grid;
  Field xn1, xn2, omega;
  while (t < setup.t_end - 1e-14 * std::max(1.0, setup.t_end)) {
    double dt;
    if (cfg.moving) {
      MovingMesh &mesh = moving->mesh();
      compute_monitor(grid, setup.sys, *state, pr.monitor, omega);
      xn1 = mesh.x1;
      xn2 = mesh.x2;
      relax_mesh(mesh, omega, pr.monitor, xn1, xn2);
      const double dt0 = moving->suggest_dt(false);
      // Cap the step's mesh displacement at a fraction of the smallest
      // local spacing so the relaxation cannot outrun the flow.
      double dmax = 0.0, smin = grid.x1hi() - grid.x1lo();
      for (int j = 0; j < grid.n2(); ++j) {
        for (int i = 0; i < grid.n1(); ++i) {
          const std::size_t k = wg.idx(i, j);
          const double d = std::hypot(xn1.a[k] - mesh.x1.a[k],
                                      xn2.a[k] - mesh.x2.a[k]);
          dmax = std::max(dmax, d);
          if (i + 1 < grid.n1())
            smin = std::min(smin, std::hypot(mesh.x1(wg, i + 1, j) -
                                                 mesh.x1(wg, i, j),
                                             mesh.x2(wg, i + 1, j) -
                                                 mesh.x2(wg, i, j)));
          if (j + 1 < grid.n2())
            smin = std::min(smin, std::hypot(mesh.x1(wg, i, j + 1) -
                                                 mesh.x1(wg, i, j),
                                             mesh.x2(wg, i, j + 1) -
                                                 mesh.x2(wg, i, j)));
        }
      }
      const double scale = (dmax > 0.4 * smin) ? 0.4 * smin / dmax : 1.0;
      for (int j = 0; j < grid.n2(); ++j) {
        for (int i = 0; i < grid.n1(); ++i) {
          const std::size_t k = wg.idx(i, j);
          mesh.xdot1.a[k] = scale * (xn1.a[k] - mesh.x1.a[k]) / dt0;
          mesh.xdot2.a[k] = scale * (xn2.a[k] - mesh.x2.a[k]) / dt0;
        }
      }
      dt = std::min(dt0, moving->suggest_dt(true));
    } else {
      dt = fixed->suggest_dt();
    }
    while (next_event < events.size() &&
           events[next_event] <= t + 1e-14 * std::max(1.0, setup.t_end))
      ++next_event;
    const double target =
        next_event < events.size() ? events[next_event] : setup.t_end;
    bool at_event = false;
    if (t + dt >= target - 1e-14 * std::max(1.0, setup.t_end)) {
      dt = target - t;
      at_event = true;
    }
    if (cfg.moving)
      moving->step(dt);
    else
      fixed->step(dt);
    t = cfg.moving ? moving->time() : fixed->time();
    ++steps;

    const double Enew = total_energy();
    const double growth = (Enew - E) / std::max(1.0, std::abs(E));
    worst_growth = std::max(worst_growth, growth);
    if (growth > 1e-8)
      energy_monotone = false;
    E = Enew;
    elog << OutputWriter::fmt(t) << ' ' << OutputWriter::fmt(dt) << ' '
         << OutputWriter::fmt(E) << '\n';
    const bool stride_hit =
        cfg.snapshot_stride > 0 && steps % cfg.snapshot_stride == 0;
    if (at_event || stride_hit) {
      out.write_snapshot(grid, *state,
                         cfg.moving ? &moving->mesh() : nullptr, t);
      last_snap_t = t;
    }
  }

  RunResult res;
  res.metrics["steps"] = steps;
  res.metrics["total_energy_final"] = E;
  res.metrics["energy_monotone"] = energy_monotone ? 1.0 : 0.0;
  res.metrics["energy_worst_growth"] = worst_growth;
  res.metrics["hyperbolicity_warnings"] =
      cfg.moving ? moving->hyperbolicity_warnings()
                 : fixed->hyperbolicity_warnings();

  std::ofstream report(fs::path(cfg.outdir) / "report.txt");
  report << out.header;

  double max_surface_err = std::nan("");
  if (setup.wb_case) {
    // l1 / linf errors of every plain surface level plus the velocity bound.
    max_surface_err = 0.0;
    double max_vel = 0.0;
    const double measure = grid.cell_measure();
    for (int m0 = 1; m0 <= M; ++m0) {
      double l1 = 0.0, linf = 0.0;
      for (int j = 0; j < grid.n2(); ++j) {
        for (int i = 0; i < grid.n1(); ++i) {
          double S = state->b(grid, i, j);
          for (int m = m0; m <= M; ++m)
            S += state->h[m - 1](grid, i, j);
          const double e = std::abs(S - setup.surface_levels[m0 - 1]);
          const double w =
              cfg.moving ? moving->mesh().J(grid, i, j) * measure : measure;
          l1 += e * w;
          linf = std::max(linf, e);
        }
      }
      report << "surface_level_" << m0 << " l1= " << OutputWriter::fmt(l1)
             << " linf= " << OutputWriter::fmt(linf) << "\n";
      max_surface_err = std::max(max_surface_err, std::max(l1, linf));
    }
    for (int j = 0; j < grid.n2(); ++j) {
      for (int i = 0; i < grid.n1(); ++i) {
        for (int m = 0; m < M; ++m) {
          const double h = state->h[m](grid, i, j);
          max_vel = std::max(max_vel,
                             std::abs(state->hu[m](grid, i, j) / h));
          max_vel = std::max(max_vel,
                             std::abs(state->hv[m](grid, i, j) / h));
        }
      }
    }
    report << "max_velocity= " << OutputWriter::fmt(max_vel) << "\n";
    res.metrics["max_surface_err"] = max_surface_err;
    res.metrics["max_velocity"] = max_vel;
    const double tol = cfg.moving ? 1e-11 : 1e-12;
    if (max_surface_err > tol || max_vel > 1e-12)
      res.status = 1;
  }

  if (setup.exact) {
    // Error norms in u2 (and the full set per layer) against the exact
    // solution at the end time.
    const double measure = grid.cell_measure();
    std::vector<double> h(M), u(M), v(M);
    double bex;
    double l1 = 0.0, linf = 0.0;
    for (int j = 0; j < grid.n2_unique(); ++j) {
      for (int i = 0; i < grid.n1_unique(); ++i) {
        const double x1 =
            cfg.moving ? moving->mesh().x1(wg, i, j) : grid.x1(i);
        const double x2 =
            cfg.moving ? moving->mesh().x2(wg, i, j) : grid.x2(j);
        setup.exact->eval_real(x1, x2, setup.t_end, h.data(), u.data(),
                               v.data(), bex);
        const int m = std::min(2, M) - 1; // u2 (or u1 for one layer)
        const double num =
            state->hu[m](grid, i, j) / state->h[m](grid, i, j);
        const double e = std::abs(num - u[m]);
        const double w =
            cfg.moving ? moving->mesh().J(grid, i, j) * measure : measure;
        l1 += e * w;
        linf = std::max(linf, e);
      }
    }
    report << "l1_err_u2= " << OutputWriter::fmt(l1)
           << " linf_err_u2= " << OutputWriter::fmt(linf) << "\n";
    res.metrics["l1_err_u2"] = l1;
    res.metrics["linf_err_u2"] = linf;
  }

  if (setup.check_energy_monotone) {
    report << "energy_monotone= " << (energy_monotone ? "true" : "false")
           << " worst_growth= " << OutputWriter::fmt(worst_growth) << "\n";
    if (!energy_monotone)
      res.status = 1;
  }

  if (cfg.compare_reference && setup.has_reference && setup.dim == 1) {
    // Self-generated fine-grid reference (fixed mesh), cached on disk.
    fs::path cache = fs::path(cfg.outdir) / "refcache";
    fs::create_directories(cache);
    std::ostringstream key;
    key << "ref_" << setup.name << "_" << M << "L_UM-ES_N" << cfg.reference_n
        << "_t" << setup.t_end << ".txt";
    const fs::path ref_file = cache / key.str();
    std::vector<double> rx, rs;
    if (fs::exists(ref_file)) {
      std::ifstream in(ref_file);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
          continue;
        std::istringstream ls(line);
        double a, bv;
        ls >> a >> bv;
        rx.push_back(a);
        rs.push_back(bv);
      }
    } else {
      RunConfig rc = cfg;
      rc.moving = false;
      rc.n1 = cfg.reference_n;
      rc.compare_reference = false;
      rc.outdir = (fs::path(cfg.outdir) / "refrun").string();
      PreparedRun rpr = prepare(rc);
      FixedSolver ref(rpr.setup.sys, rpr.grid, rpr.scheme);
      set_initial(rpr.setup, rpr.grid, ref.state());
      if (rpr.setup.source)
        ref.set_source(rpr.setup.source);
      double rt = 0.0;
      while (rt < rpr.setup.t_end - 1e-14) {
        double dt = ref.suggest_dt();
        if (rt + dt > rpr.setup.t_end)
          dt = rpr.setup.t_end - rt;
        ref.step(dt);
        rt = ref.time();
      }
      std::ofstream rf(ref_file);
      rf << "# reference case=" << setup.name << " layers=" << M
         << " scheme=UM-ES n=" << cfg.reference_n << " t=" << rpr.setup.t_end
         << "\n";
      for (int i = 0; i < rpr.grid.n1(); ++i) {
        double S = ref.state().b(rpr.grid, i, 0);
        for (int m = 0; m < M; ++m)
          S += ref.state().h[m](rpr.grid, i, 0);
        rf << OutputWriter::fmt(rpr.grid.x1(i)) << ' ' << OutputWriter::fmt(S)
           << '\n';
        rx.push_back(rpr.grid.x1(i));
        rs.push_back(S);
      }
    }
    double dist = 0.0;
    for (int i = 0; i < grid.n1(); ++i) {
      const double x = cfg.moving ? moving->mesh().x1(wg, i, 0) : grid.x1(i);
      double S = state->b(grid, i, 0);
      for (int m = 0; m < M; ++m)
        S += state->h[m](grid, i, 0);
      dist += std::abs(S - interp1(rx, rs, x)) * grid.dx1();
    }
    report << "ref_l1_dist_surface= " << OutputWriter::fmt(dist) << "\n";
    res.metrics["ref_l1_dist_surface"] = dist;
  }

  if (t != last_snap_t)
    out.write_snapshot(grid, *state, cfg.moving ? &moving->mesh() : nullptr,
                       t);

  std::ostringstream sum;
  sum << "case=" << setup.name << " status=" << (res.status == 0 ? "ok" : "fail")
      << " max_surface_err=";
  if (std::isnan(max_surface_err))
    sum << "na";
  else
    sum << OutputWriter::fmt(max_surface_err);
  sum << " energy_monotone=" << (energy_monotone ? "true" : "false");
  res.summary = sum.str();
  return res;
}

} // namespace mlswe
