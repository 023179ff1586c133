#include "mptcplab/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mptcplab {

std::vector<double> source_totals(const Network& net,
                                  const RateAllocation& alloc) {
  if (alloc.rates.size() != net.paths().size())
    throw AllocationMismatch("allocation does not match network path count");
  std::vector<double> totals(net.sources().size(), 0.0);
  for (std::size_t s = 0; s < net.sources().size(); ++s)
    for (std::size_t p : net.source_paths(s)) totals[s] += alloc.rates[p];
  return totals;
}

std::vector<double> link_loads(const Network& net,
                               const RateAllocation& alloc) {
  if (alloc.rates.size() != net.paths().size())
    throw AllocationMismatch("allocation does not match network path count");
  std::vector<double> loads(net.links().size(), 0.0);
  for (std::size_t p = 0; p < net.paths().size(); ++p)
    for (std::size_t l : net.path_links(p)) loads[l] += alloc.rates[p];
  return loads;
}

namespace {

constexpr int kMaxIterations = 100000;
constexpr int kMaxBacktracks = 60;
constexpr double kArmijoSigma = 1e-4;
constexpr int kMaxProjectionSweeps = 20000;
constexpr int kMaxPolishIterations = 2000;

// Utility of a group total with the boundary convention U(0) = lim U(x):
// -inf for alpha >= 1, 0 for alpha < 1. Keeps grid oracles total on rates
// that include exact zeros.
double group_value(const UtilitySpec& u, double s) {
  if (s <= 0.0)
    return u.alpha < 1.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (u.alpha == 1.0) return u.weight * std::log(s);
  return u.weight * std::pow(s, 1.0 - u.alpha) / (1.0 - u.alpha);
}

// One concave utility term over a set of decision slots.
struct Group {
  std::vector<std::size_t> members;  // positions in the active slot list
  UtilitySpec util;
  std::vector<double> energy_rate;  // gamma * energy_cost per member
};

struct LinkConstraint {
  double capacity = 0.0;
  std::vector<std::size_t> members;  // active slots crossing this link
};

enum class ProgramMode { Baseline, Coupled, Uncoupled };

// The concave program: maximize sum of group utilities minus energy terms
// over {r : link loads <= capacity, r >= floor}.
struct Program {
  std::vector<std::size_t> active;  // network path index per slot
  std::vector<double> floor;        // per slot
  std::vector<Group> groups;
  std::vector<LinkConstraint> cons;
  std::vector<std::vector<std::size_t>> slot_cons;  // constraints per slot
  double cap_scale = 1.0;
};

Program make_program(const Network& net, ProgramMode mode, double floor_value) {
  Program prog;
  std::vector<std::size_t> slot_of_path(net.paths().size(),
                                        std::numeric_limits<std::size_t>::max());
  if (mode == ProgramMode::Baseline) {
    for (std::size_t s = 0; s < net.sources().size(); ++s) {
      std::size_t p = net.primary_path(s);
      slot_of_path[p] = prog.active.size();
      prog.active.push_back(p);
    }
  } else {
    prog.active.resize(net.paths().size());
    for (std::size_t p = 0; p < net.paths().size(); ++p) {
      prog.active[p] = p;
      slot_of_path[p] = p;
    }
  }
  prog.floor.assign(prog.active.size(), floor_value);

  auto energy_of = [&](std::size_t s, std::size_t p) {
    return net.sources()[s].utility.energy_weight * net.paths()[p].energy_cost;
  };
  if (mode == ProgramMode::Uncoupled) {
    for (std::size_t slot = 0; slot < prog.active.size(); ++slot) {
      std::size_t p = prog.active[slot];
      std::size_t s = net.source_of_path(p);
      prog.groups.push_back({{slot}, net.sources()[s].utility, {energy_of(s, p)}});
    }
  } else {
    for (std::size_t s = 0; s < net.sources().size(); ++s) {
      Group g;
      g.util = net.sources()[s].utility;
      if (mode == ProgramMode::Baseline) {
        std::size_t p = net.primary_path(s);
        g.members = {slot_of_path[p]};
        g.energy_rate = {energy_of(s, p)};
      } else {
        for (std::size_t p : net.source_paths(s)) {
          g.members.push_back(slot_of_path[p]);
          g.energy_rate.push_back(energy_of(s, p));
        }
      }
      prog.groups.push_back(std::move(g));
    }
  }

  for (std::size_t l = 0; l < net.links().size(); ++l) {
    LinkConstraint c;
    c.capacity = net.links()[l].capacity;
    for (std::size_t p : net.paths_on_link(l)) {
      if (slot_of_path[p] != std::numeric_limits<std::size_t>::max())
        c.members.push_back(slot_of_path[p]);
    }
    if (!c.members.empty()) prog.cons.push_back(std::move(c));
  }
  prog.slot_cons.assign(prog.active.size(), {});
  for (std::size_t ci = 0; ci < prog.cons.size(); ++ci)
    for (std::size_t m : prog.cons[ci].members) prog.slot_cons[m].push_back(ci);
  prog.cap_scale = net.max_capacity();
  return prog;
}

void check_floor_feasible(const Program& prog, bool multipath) {
  for (const LinkConstraint& c : prog.cons) {
    double floor_load = 0.0;
    for (std::size_t m : c.members) floor_load += prog.floor[m];
    if (floor_load > c.capacity * (1.0 + 1e-12)) {
      if (multipath)
        throw InfeasibleFloor(
            "rate floors alone exceed a link capacity (sum eps = " +
            std::to_string(floor_load) + " > " + std::to_string(c.capacity) + ")");
      throw Infeasible("baseline floors exceed a link capacity");
    }
  }
}

double objective(const Program& prog, const std::vector<double>& r) {
  double total = 0.0;
  for (const Group& g : prog.groups) {
    double s = 0.0;
    for (std::size_t m : g.members) s += r[m];
    total += group_value(g.util, s);
    for (std::size_t j = 0; j < g.members.size(); ++j)
      total -= g.energy_rate[j] * r[g.members[j]];
  }
  return total;
}

void gradient(const Program& prog, const std::vector<double>& r,
              std::vector<double>& g_out) {
  for (const Group& g : prog.groups) {
    double s = 0.0;
    for (std::size_t m : g.members) s += r[m];
    double d = g.util.weight * std::pow(s, -g.util.alpha);
    for (std::size_t j = 0; j < g.members.size(); ++j)
      g_out[g.members[j]] = d - g.energy_rate[j];
  }
}

// Euclidean projection onto {r >= floor} intersected with the per-link
// halfspaces, via Dykstra's alternating projections plus a floor-preserving
// repair pass that restores exact feasibility.
class Projector {
 public:
  explicit Projector(const Program& prog) : prog_(prog) {
    box_corr_.resize(prog.active.size());
    link_corr_.resize(prog.cons.size());
    std::size_t widest = 0;
    for (std::size_t ci = 0; ci < prog.cons.size(); ++ci) {
      link_corr_[ci].resize(prog.cons[ci].members.size());
      widest = std::max(widest, prog.cons[ci].members.size());
    }
    y_.resize(widest);
  }

  void operator()(std::vector<double>& r) {
    const double sweep_tol = 1e-13 * (1.0 + prog_.cap_scale);
    std::fill(box_corr_.begin(), box_corr_.end(), 0.0);
    for (auto& v : link_corr_) std::fill(v.begin(), v.end(), 0.0);

    for (int sweep = 0; sweep < kMaxProjectionSweeps; ++sweep) {
      double moved = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        double y = r[i] + box_corr_[i];
        double x = std::max(y, prog_.floor[i]);
        box_corr_[i] = y - x;
        moved = std::max(moved, std::abs(x - r[i]));
        r[i] = x;
      }
      for (std::size_t ci = 0; ci < prog_.cons.size(); ++ci) {
        const LinkConstraint& c = prog_.cons[ci];
        double s = 0.0;
        for (std::size_t j = 0; j < c.members.size(); ++j) {
          y_[j] = r[c.members[j]] + link_corr_[ci][j];
          s += y_[j];
        }
        double share =
            s > c.capacity ? (s - c.capacity) / static_cast<double>(c.members.size())
                           : 0.0;
        for (std::size_t j = 0; j < c.members.size(); ++j) {
          double x = y_[j] - share;
          link_corr_[ci][j] = y_[j] - x;
          moved = std::max(moved, std::abs(x - r[c.members[j]]));
          r[c.members[j]] = x;
        }
      }
      if (moved < sweep_tol) break;
    }

    // Repair: floors first, then drain any residual link excess from
    // above-floor mass only. Reductions never raise another link's load, so
    // one pass leaves every constraint satisfied.
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i] < prog_.floor[i]) r[i] = prog_.floor[i];
    for (const LinkConstraint& c : prog_.cons) {
      double load = 0.0;
      for (std::size_t m : c.members) load += r[m];
      double excess = load - c.capacity;
      if (excess <= 0.0) continue;
      double slack_mass = 0.0;
      for (std::size_t m : c.members) slack_mass += r[m] - prog_.floor[m];
      if (slack_mass <= excess) {
        for (std::size_t m : c.members) r[m] = prog_.floor[m];
      } else {
        double keep = 1.0 - excess / slack_mass;
        for (std::size_t m : c.members)
          r[m] = prog_.floor[m] + (r[m] - prog_.floor[m]) * keep;
      }
    }
  }

 private:
  const Program& prog_;
  std::vector<double> box_corr_;
  std::vector<std::vector<double>> link_corr_;
  std::vector<double> y_;
};

std::vector<double> initial_point(const Program& prog) {
  // Floors plus half of the most constrained per-slot headroom: feasible-ish,
  // symmetric for symmetric instances, strictly positive.
  std::vector<double> floor_load(prog.cons.size(), 0.0);
  for (std::size_t ci = 0; ci < prog.cons.size(); ++ci)
    for (std::size_t m : prog.cons[ci].members)
      floor_load[ci] += prog.floor[m];
  std::vector<double> r(prog.active.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    double head = std::numeric_limits<double>::infinity();
    for (std::size_t ci : prog.slot_cons[i]) {
      const LinkConstraint& c = prog.cons[ci];
      head = std::min(head, (c.capacity - floor_load[ci]) /
                                static_cast<double>(c.members.size()));
    }
    if (!std::isfinite(head)) head = prog.cap_scale;
    r[i] = prog.floor[i] + 0.5 * std::max(head, 0.0);
  }
  return r;
}

double l2_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

std::string format_resid(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

SolverReport run_projected_gradient(const Network& net, const Program& prog,
                                    double tol, bool multipath,
                                    std::vector<double>* trace) {
  if (!(tol > 0.0)) throw InvalidSpec("solver: tol must be positive");
  check_floor_feasible(prog, multipath);

  const std::size_t n = prog.active.size();
  Projector project(prog);
  std::vector<double> r = initial_point(prog);
  project(r);
  double f = objective(prog, r);
  if (trace) trace->push_back(f);

  std::vector<double> g(n), trial(n), g_trial(n);
  auto unit_residual = [&](const std::vector<double>& at,
                           const std::vector<double>& grad) {
    trial = at;
    for (std::size_t i = 0; i < n; ++i) trial[i] += grad[i];
    project(trial);
    return l2_distance(trial, at);
  };

  double step = 1.0;
  double resid = std::numeric_limits<double>::infinity();
  bool converged = false;
  bool stalled = false;
  int iter = 0;

  // Phase 1: Armijo-backtracked projected gradient ascent. Globally
  // convergent and monotone, but objective differences drown in rounding
  // once the iterate is within ~sqrt(machine eps) of the optimum.
  for (; iter < kMaxIterations; ++iter) {
    gradient(prog, r, g);

    // KKT residual: unit-step projected-gradient mapping, zero exactly at a
    // KKT point of the constrained program.
    resid = unit_residual(r, g);
    if (resid <= tol) {
      converged = true;
      break;
    }

    step = std::min(step * 2.0, 1e8);
    bool accepted = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = r[i] + step * g[i];
      project(trial);
      double dir = 0.0;
      for (std::size_t i = 0; i < n; ++i) dir += g[i] * (trial[i] - r[i]);
      if (!(dir > 0.0)) break;  // pinned by the constraints at this scale
      double ft = objective(prog, trial);
      if (ft >= f + kArmijoSigma * dir) {
        r.swap(trial);
        f = ft;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (trace) trace->push_back(f);
    if (!accepted) {
      stalled = true;
      break;
    }
  }

  // Phase 2: curvature-stepped polish. A step below 1/L keeps plain
  // projected gradient contractive near the optimum without consulting the
  // (rounding-dominated) objective for progress. L is seeded from the
  // gradient change over a unit probe step, and any step that measurably
  // lowers the objective (beyond rounding noise) is rejected and halved:
  // the probe's estimate undershoots where the utilities steepen.
  if (stalled && !converged) {
    gradient(prog, r, g);
    trial = r;
    for (std::size_t i = 0; i < n; ++i) trial[i] += g[i];
    project(trial);
    double dist = l2_distance(trial, r);
    if (dist > 0.0) {
      gradient(prog, trial, g_trial);
      double gdiff = l2_distance(g_trial, g);
      double pstep = gdiff > 0.0 ? 0.5 * dist / gdiff : 1.0;
      pstep = std::min(std::max(pstep, 1e-12), 1e9);
      const double noise = 1e-13 * (1.0 + std::abs(f));
      for (int k = 0; k < kMaxPolishIterations && iter < kMaxIterations;
           ++k, ++iter) {
        gradient(prog, r, g);
        resid = unit_residual(r, g);
        if (resid <= tol) {
          converged = true;
          break;
        }
        for (std::size_t i = 0; i < n; ++i) trial[i] = r[i] + pstep * g[i];
        project(trial);
        double ft = objective(prog, trial);
        if (ft < f - noise) {
          pstep *= 0.5;
          continue;
        }
        r.swap(trial);
        f = ft;
        if (trace) trace->push_back(f);
      }
    }
  }

  if (!converged) {
    gradient(prog, r, g);
    resid = unit_residual(r, g);
    converged = resid <= tol;
    if (!converged)
      throw NoConvergence("projected gradient stopped at KKT residual " +
                          format_resid(resid) + " > tol after " +
                          std::to_string(iter) + " iterations");
  }

  SolverReport report;
  report.allocation.rates.assign(net.paths().size(), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    report.allocation.rates[prog.active[i]] = r[i];
  report.iterations = iter;
  report.kkt_residual = resid;
  report.converged = true;
  return report;
}

}  // namespace

double allocation_objective(const Network& net, const RateAllocation& alloc) {
  if (alloc.rates.size() != net.paths().size())
    throw AllocationMismatch("allocation does not match network path count");
  double total = 0.0;
  for (std::size_t s = 0; s < net.sources().size(); ++s) {
    const Source& src = net.sources()[s];
    double sum = 0.0;
    for (std::size_t p : net.source_paths(s)) sum += alloc.rates[p];
    total += group_value(src.utility, sum);
    if (src.utility.energy_weight > 0.0) {
      for (std::size_t p : net.source_paths(s))
        total -= src.utility.energy_weight * net.paths()[p].energy_cost *
                 alloc.rates[p];
    }
  }
  return total;
}

SolverReport solve_baseline(const Network& net, double tol,
                            std::vector<double>* objective_trace) {
  // A tiny positive floor keeps every iterate inside the utility domain; the
  // optimum is interior for any alpha-fair source, so it never binds there.
  double floor = 1e-12 * net.min_capacity();
  Program prog = make_program(net, ProgramMode::Baseline, floor);
  return run_projected_gradient(net, prog, tol, false, objective_trace);
}

SolverReport solve_multipath(const Network& net, double eps, double tol,
                             std::vector<double>* objective_trace) {
  if (!(eps > 0.0)) throw InvalidSpec("solve_multipath: eps must be positive");
  for (std::size_t s = 0; s < net.sources().size(); ++s) {
    if (net.source_paths(s).size() < 2)
      throw InvalidSpec("solve_multipath: source '" + net.sources()[s].id +
                        "' has fewer than 2 paths");
  }
  Program prog = make_program(net, ProgramMode::Coupled, eps);
  return run_projected_gradient(net, prog, tol, true, objective_trace);
}

SolverReport solve_multipath_uncoupled(const Network& net, double eps,
                                       double tol,
                                       std::vector<double>* objective_trace) {
  if (!(eps > 0.0))
    throw InvalidSpec("solve_multipath_uncoupled: eps must be positive");
  for (std::size_t s = 0; s < net.sources().size(); ++s) {
    if (net.source_paths(s).size() < 2)
      throw InvalidSpec("solve_multipath_uncoupled: source '" +
                        net.sources()[s].id + "' has fewer than 2 paths");
  }
  Program prog = make_program(net, ProgramMode::Uncoupled, eps);
  return run_projected_gradient(net, prog, tol, true, objective_trace);
}

RateAllocation brute_force_equilibrium(const Network& net, double grid_step,
                                       double floor, int refine_levels) {
  if (net.paths().size() > 4)
    throw TooLarge("brute_force_equilibrium: more than 4 paths");
  if (!(grid_step > 0.0))
    throw InvalidSpec("brute_force_equilibrium: grid_step must be positive");
  if (floor < 0.0)
    throw InvalidSpec("brute_force_equilibrium: floor must be nonnegative");

  const std::size_t n = net.paths().size();
  std::vector<double> bottleneck(n);
  for (std::size_t p = 0; p < n; ++p) {
    double cap = std::numeric_limits<double>::infinity();
    for (std::size_t l : net.path_links(p))
      cap = std::min(cap, net.links()[l].capacity);
    bottleneck[p] = cap;
  }

  RateAllocation best;
  best.rates.assign(n, 0.0);
  double best_obj = allocation_objective(net, best);

  auto search = [&](const std::vector<double>& lo, const std::vector<double>& hi,
                    double step) {
    std::vector<std::vector<double>> axes(n);
    for (std::size_t p = 0; p < n; ++p) {
      for (double v = lo[p]; v <= hi[p] + 1e-12 * (1.0 + hi[p]); v += step)
        axes[p].push_back(v);
      if (axes[p].empty()) return;  // floor above bottleneck: nothing feasible
    }
    std::vector<std::size_t> idx(n, 0);
    RateAllocation point;
    point.rates.assign(n, 0.0);
    while (true) {
      for (std::size_t p = 0; p < n; ++p) point.rates[p] = axes[p][idx[p]];
      bool feasible = true;
      for (std::size_t l = 0; l < net.links().size() && feasible; ++l) {
        double load = 0.0;
        for (std::size_t p : net.paths_on_link(l)) load += point.rates[p];
        feasible = load <= net.links()[l].capacity * (1.0 + 1e-12);
      }
      if (feasible) {
        double obj = allocation_objective(net, point);
        if (obj > best_obj) {
          best_obj = obj;
          best = point;
        }
      }
      std::size_t p = 0;
      for (; p < n; ++p) {
        if (++idx[p] < axes[p].size()) break;
        idx[p] = 0;
      }
      if (p == n) break;
    }
  };

  std::vector<double> lo(n, floor), hi = bottleneck;
  search(lo, hi, grid_step);

  // Optional nested refinement: re-grid around the incumbent with a finer
  // step. The first level keeps a two-cell radius, later ones one cell.
  double step = grid_step;
  for (int level = 0; level < refine_levels; ++level) {
    double radius = (level == 0 ? 2.0 : 1.0) * step;
    double fine = step / 5.0;
    for (std::size_t p = 0; p < n; ++p) {
      lo[p] = std::max(floor, best.rates[p] - radius);
      hi[p] = std::min(bottleneck[p], best.rates[p] + radius);
    }
    search(lo, hi, fine);
    step = fine;
  }
  return best;
}

}  // namespace mptcplab
