#include "stratwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stratwave/analysis.hpp"
#include "stratwave/error.hpp"

namespace stratwave {

std::string to_string(SolverMode m) { return m == SolverMode::etd ? "etd" : "picard"; }

SolverMode parse_solver_mode(const std::string& s) {
  if (s == "etd") return SolverMode::etd;
  if (s == "picard") return SolverMode::picard;
  throw Error(ErrorCode::BadParameter, "unknown solver mode '" + s + "'");
}

void validate(const SolverConfig& cfg) {
  std::ostringstream msg;
  if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) msg << "T must be finite and > 0; ";
  if (!(cfg.dt > 0.0) || !(cfg.dt <= cfg.T)) msg << "need 0 < dt <= T; ";
  if (!(cfg.picard_tol > 0.0)) msg << "picard_tol must be > 0; ";
  if (cfg.picard_max_iter < 1) msg << "picard_max_iter must be >= 1; ";
  if (cfg.dealias_k < 0) msg << "dealias_k must be >= 0; ";
  if (cfg.max_halvings < 0) msg << "max_halvings must be >= 0; ";
  for (double s : cfg.snapshot_times) {
    if (!(s >= 0.0) || s > cfg.T * (1.0 + 1e-12)) msg << "snapshot time " << s << " outside [0, T]; ";
  }
  if (!msg.str().empty()) throw Error(ErrorCode::BadParameter, msg.str());
}

std::string to_string(InitialDatum::Kind k) {
  switch (k) {
    case InitialDatum::Kind::algebraic: return "algebraic";
    case InitialDatum::Kind::zero_mean_algebraic: return "zero_mean_algebraic";
    case InitialDatum::Kind::gaussian: return "gaussian";
    case InitialDatum::Kind::growth: return "growth";
  }
  return "?";
}

InitialDatum::Kind parse_datum_kind(const std::string& s) {
  if (s == "algebraic") return InitialDatum::Kind::algebraic;
  if (s == "zero_mean_algebraic") return InitialDatum::Kind::zero_mean_algebraic;
  if (s == "gaussian") return InitialDatum::Kind::gaussian;
  if (s == "growth") return InitialDatum::Kind::growth;
  throw Error(ErrorCode::BadParameter, "unknown datum kind '" + s + "'");
}

double smooth_step(double y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / y);
  const double b = std::exp(-1.0 / (1.0 - y));
  return a / (a + b);
}

Field make_datum(const InitialDatum& d, const Grid& grid) {
  using K = InitialDatum::Kind;
  switch (d.kind) {
    case K::algebraic:
    case K::zero_mean_algebraic: {
      if (!(d.gamma > 0.0)) throw Error(ErrorCode::BadParameter, "algebraic datum needs gamma > 0");
      if (!std::isfinite(d.c)) throw Error(ErrorCode::BadParameter, "algebraic amplitude must be finite");
      const double g = d.gamma, c = d.c;
      Field u = Field::sample(grid, [g, c](double x) { return c * std::pow(1.0 + x * x, -0.5 * g); });
      return d.kind == K::algebraic ? u : zero_mean_project(u);
    }
    case K::gaussian: {
      if (!(d.sigma > 0.0)) throw Error(ErrorCode::BadParameter, "gaussian datum needs sigma > 0");
      const double s = d.sigma, c = d.c;
      return Field::sample(grid, [s, c](double x) { return c * std::exp(-x * x / (2.0 * s * s)); });
    }
    case K::growth: {
      if (!(d.gamma > 0.0 && d.gamma < 0.5)) {
        throw Error(ErrorCode::BadParameter, "growth datum needs gamma in (0, 1/2)");
      }
      if (!(d.c >= 0.0)) throw Error(ErrorCode::BadParameter, "growth datum needs C0 >= 0");
      const double L = grid.half_length();
      if (L < 8.0) throw Error(ErrorCode::BadParameter, "growth datum needs L >= 8");
      const double g = d.gamma, c = d.c;
      return Field::sample(grid, [g, c, L](double x) {
        if (x <= -1.0) return 0.0;
        const double roll = 1.0 - smooth_step((x - 0.75 * L) / (0.2 * L));
        return c * std::pow(1.0 + x, g) * smooth_step(x + 1.0) * roll;
      });
    }
  }
  throw Error(ErrorCode::BadParameter, "unknown datum kind");
}

std::pair<cplx, cplx> phi_functions(cplx z) {
  if (std::abs(z) < 0.5) {
    // phi_1 = sum z^j/(j+1)!, phi_2 = sum z^j/(j+2)!
    cplx p1 = 0.0, p2 = 0.0, term = 1.0;
    double f1 = 1.0, f2 = 2.0;
    for (int j = 0; j < 20; ++j) {
      p1 += term / f1;
      p2 += term / f2;
      term *= z;
      f1 *= (j + 2);
      f2 *= (j + 3);
    }
    return {p1, p2};
  }
  const cplx e = std::exp(z);
  return {(e - 1.0) / z, (e - 1.0 - z) / (z * z)};
}

EtdStepper::EtdStepper(const Model& model, const Grid& grid, int dealias_k, bool nonlinear, bool real_valued)
    : model_(model),
      grid_(grid),
      k_dealias_(dealias_k > 0 ? dealias_k : model.params.k),
      nonlinear_(nonlinear),
      real_(real_valued),
      lin_(grid.size()),
      nl_mult_(grid.size()) {
  const std::size_t n = grid.size();
  for (std::size_t q = 0; q < n; ++q) lin_[q] = model.multiplier(grid.frequency(q));
  // -(1/(k+1)) i xi, restricted to the dealiased band; the Nyquist mode is dropped
  const long cut = dealias_cutoff(n, k_dealias_);
  const double inv = 1.0 / (model.params.k + 1);
  for (std::size_t q = 0; q < n; ++q) {
    const bool keep = q != n / 2 && std::labs(grid.mode(q)) <= cut;
    nl_mult_[q] = keep ? cplx(0.0, -grid.frequency(q) * inv) : cplx(0.0);
  }
}

const EtdStepper::Table& EtdStepper::table(double h) {
  for (const auto& t : tables_) {
    if (t.h == h) return t;
  }
  Table t{h, {}, {}, {}};
  const std::size_t n = grid_.size();
  t.e.resize(n);
  t.phi1.resize(n);
  t.phi2.resize(n);
  for (std::size_t q = 0; q < n; ++q) {
    const cplx z = lin_[q] * h;
    t.e[q] = std::exp(z);
    const auto [p1, p2] = phi_functions(z);
    t.phi1[q] = p1;
    t.phi2[q] = p2;
  }
  if (tables_.size() >= 4) tables_.erase(tables_.begin());
  tables_.push_back(std::move(t));
  return tables_.back();
}

void EtdStepper::nonlinear_term(const std::vector<cplx>& v, std::vector<cplx>& out) {
  const std::size_t n = grid_.size();
  inverse_transform(grid_, v, phys_);
  const int p = model_.params.k + 1;
  for (auto& u : phys_) {
    if (real_) u = u.real();
    cplx w = u;
    for (int i = 1; i < p; ++i) w *= u;
    u = w;
  }
  forward_transform(grid_, phys_, out);
  for (std::size_t q = 0; q < n; ++q) out[q] *= nl_mult_[q];
}

void EtdStepper::propagate(std::vector<cplx>& v, double h) {
  const Table& t = table(h);
  for (std::size_t q = 0; q < v.size(); ++q) v[q] *= t.e[q];
}

void EtdStepper::step(std::vector<cplx>& v, double h) {
  if (!nonlinear_) {
    propagate(v, h);
    return;
  }
  const Table& t = table(h);
  const std::size_t n = v.size();
  nonlinear_term(v, n0_);
  a_.resize(n);
  for (std::size_t q = 0; q < n; ++q) a_[q] = t.e[q] * v[q] + h * t.phi1[q] * n0_[q];
  nonlinear_term(a_, n1_);
  for (std::size_t q = 0; q < n; ++q) v[q] = a_[q] + h * t.phi2[q] * (n1_[q] - n0_[q]);
}

namespace {

bool finite_spectrum(const std::vector<cplx>& v) {
  for (const auto& c : v) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

Field physical(const Grid& g, const std::vector<cplx>& v, bool real) {
  Field f(g, real);
  inverse_transform(g, v, f.values);
  if (real) {
    for (auto& x : f.values) x = x.real();
  }
  return f;
}

bool is_real_problem(const Model& model, const Field& u0) { return u0.is_real && model.symbol.is_even(); }

// Advances by h, retrying on non-finite output with up to `halvings` levels of
// step halving. Returns the number of halvings used or -1 on failure.
int guarded_step(EtdStepper& st, std::vector<cplx>& v, double h, int halvings) {
  std::vector<cplx> saved;
  if (halvings > 0) saved = v;
  st.step(v, h);
  if (finite_spectrum(v)) return 0;
  if (halvings == 0) return -1;
  v = saved;
  const int a = guarded_step(st, v, 0.5 * h, halvings - 1);
  if (a < 0) return -1;
  const int b = guarded_step(st, v, 0.5 * h, halvings - 1);
  if (b < 0) return -1;
  return 1 + std::max(a, b);
}

}  // namespace

double spectral_l2(const std::vector<cplx>& v, const Grid& g) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return std::sqrt(s * g.dxi() / (2.0 * std::numbers::pi));
}

double energy(const Field& u) { return l2_norm(u); }

double dissipation_rate(const SpectralField& U, const Model& model) {
  double s = 0.0;
  for (std::size_t q = 0; q < U.coeffs.size(); ++q) {
    s += dissipation_symbol(U.grid.frequency(q), model.params).real() * std::norm(U.coeffs[q]);
  }
  return s * U.grid.dxi() / (2.0 * std::numbers::pi);
}

Field etd_step(const Field& u, double dt, const Model& model, int dealias_k, bool nonlinear) {
  if (!(dt > 0.0)) throw Error(ErrorCode::BadParameter, "dt must be > 0");
  const bool real = is_real_problem(model, u);
  EtdStepper st(model, u.grid, dealias_k, nonlinear, real);
  std::vector<cplx> v;
  forward_transform(u.grid, u.values, v);
  st.step(v, dt);
  if (!finite_spectrum(v)) throw NonFiniteError(dt, "etd step produced non-finite values");
  return physical(u.grid, v, real);
}

namespace {

std::vector<double> snapshot_targets(const SolverConfig& cfg) {
  std::vector<double> s = cfg.snapshot_times;
  if (s.empty()) s.push_back(cfg.T);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end(), [](double a, double b) { return std::abs(a - b) <= 1e-12; }), s.end());
  return s;
}

std::vector<double> real_dissipation(const Grid& g, const Model& model) {
  std::vector<double> out(g.size());
  for (std::size_t q = 0; q < g.size(); ++q) out[q] = dissipation_symbol(g.frequency(q), model.params).real();
  return out;
}

void record(Trajectory& tr, double t, const std::vector<cplx>& v, const Grid& g, const std::vector<double>& re_phi) {
  double e = 0.0, d = 0.0;
  for (std::size_t q = 0; q < v.size(); ++q) {
    const double a = std::norm(v[q]);
    e += a;
    d += re_phi[q] * a;
  }
  const double w = g.dxi() / (2.0 * std::numbers::pi);
  tr.step_times.push_back(t);
  tr.energy_series.push_back(std::sqrt(e * w));
  tr.dissipation_series.push_back(d * w);
}

Trajectory solve_etd(const Model& model, const Field& u0, const SolverConfig& cfg) {
  const Grid& g = u0.grid;
  const bool real = is_real_problem(model, u0);
  EtdStepper st(model, g, cfg.dealias_k, cfg.nonlinear, real);
  std::vector<cplx> v;
  forward_transform(g, u0.values, v);
  if (cfg.nonlinear) dealias_inplace(v, g.size(), st.dealias_k());
  if (!finite_spectrum(v)) throw NonFiniteError(0.0, "initial datum is not finite");

  Trajectory tr;
  const auto targets = snapshot_targets(cfg);
  const auto re_phi = real_dissipation(g, model);
  double t = 0.0;
  record(tr, t, v, g, re_phi);
  std::vector<double> stops = targets;
  if (stops.back() < cfg.T - 1e-12) stops.push_back(cfg.T);
  for (double stop : stops) {
    const double span = stop - t;
    if (span > 1e-12 * cfg.T) {
      // uniform steps that land exactly on the stop
      const auto steps = static_cast<long>(std::ceil(span / cfg.dt - 1e-9));
      const double h = span / static_cast<double>(steps);
      const double t0 = t;
      for (long i = 0; i < steps; ++i) {
        const int used = guarded_step(st, v, h, cfg.max_halvings);
        if (used < 0) throw NonFiniteError(t + h, "ETD integration produced non-finite values");
        tr.halvings += static_cast<std::size_t>(used);
        t = i + 1 == steps ? stop : t0 + static_cast<double>(i + 1) * h;
        record(tr, t, v, g, re_phi);
      }
    }
    if (std::find(targets.begin(), targets.end(), stop) != targets.end()) {
      tr.times.push_back(stop);
      tr.snapshots.push_back(physical(g, v, real));
    }
  }
  return tr;
}

struct PicardRun {
  std::vector<std::vector<cplx>> nodes;
  double h;
  PicardReport report;
};

PicardRun picard_iterate(const Model& model, const Field& u0, const SolverConfig& cfg) {
  const Grid& g = u0.grid;
  const bool real = is_real_problem(model, u0);
  EtdStepper st(model, g, cfg.dealias_k, cfg.nonlinear, real);
  auto steps = static_cast<long>(std::llround(cfg.T / cfg.dt));
  if (steps < 1 || std::abs(static_cast<double>(steps) * cfg.dt - cfg.T) > 1e-9 * cfg.T) {
    steps = static_cast<long>(std::ceil(cfg.T / cfg.dt));
  }
  const double h = cfg.T / static_cast<double>(steps);
  const std::size_t n = g.size();

  PicardRun run;
  run.h = h;
  run.nodes.resize(static_cast<std::size_t>(steps) + 1);
  forward_transform(g, u0.values, run.nodes[0]);
  if (cfg.nonlinear) dealias_inplace(run.nodes[0], n, st.dealias_k());
  if (!finite_spectrum(run.nodes[0])) throw NonFiniteError(0.0, "initial datum is not finite");
  for (long i = 1; i <= steps; ++i) {
    run.nodes[i] = run.nodes[i - 1];
    st.propagate(run.nodes[i], h);
  }

  std::vector<cplx> e_half(n);
  for (std::size_t q = 0; q < n; ++q) e_half[q] = std::exp(model.multiplier(g.frequency(q)) * (0.5 * h));

  const double scale = std::max(1.0, spectral_l2(run.nodes[0], g));
  const double tol = cfg.picard_tol * scale;
  PicardReport& rep = run.report;
  std::vector<cplx> free_part, duhamel(n), mid(n), nl, prev_old, diff(n);
  int rising = 0;
  for (int it = 1; it <= cfg.picard_max_iter; ++it) {
    free_part = run.nodes[0];
    std::fill(duhamel.begin(), duhamel.end(), cplx(0.0));
    prev_old = run.nodes[0];
    double max_diff = 0.0;
    for (long i = 0; i < steps; ++i) {
      auto& next = run.nodes[i + 1];
      if (cfg.nonlinear) {
        for (std::size_t q = 0; q < n; ++q) mid[q] = 0.5 * (prev_old[q] + next[q]);
        st.nonlinear_term(mid, nl);
      }
      st.propagate(duhamel, h);
      st.propagate(free_part, h);
      if (cfg.nonlinear) {
        for (std::size_t q = 0; q < n; ++q) duhamel[q] += h * e_half[q] * nl[q];
      }
      prev_old = next;
      for (std::size_t q = 0; q < n; ++q) {
        const cplx updated = free_part[q] + duhamel[q];
        diff[q] = updated - next[q];
        next[q] = updated;
      }
      max_diff = std::max(max_diff, spectral_l2(diff, g));
      if (!std::isfinite(max_diff)) break;
    }
    rep.iterations = it;
    if (!rep.differences.empty()) rep.contraction_factors.push_back(max_diff / rep.differences.back());
    rep.differences.push_back(max_diff);
    if (!std::isfinite(max_diff)) {
      throw Error(ErrorCode::NoContraction, "Picard iterates became non-finite at iteration " + std::to_string(it) +
                                                "; T is too large for this datum");
    }
    if (max_diff < tol) {
      rep.converged = true;
      return run;
    }
    if (!rep.contraction_factors.empty() && rep.contraction_factors.back() > 1.0) {
      if (++rising >= 3) {
        std::ostringstream msg;
        msg << "contraction factor above 1 for 3 consecutive iterations (last " << rep.contraction_factors.back()
            << ", difference " << max_diff << "); T is too large for this datum";
        throw Error(ErrorCode::NoContraction, msg.str());
      }
    } else {
      rising = 0;
    }
  }
  std::ostringstream msg;
  msg << "no convergence to " << tol << " within " << cfg.picard_max_iter << " iterations (last difference "
      << rep.differences.back() << ")";
  throw Error(ErrorCode::NoContraction, msg.str());
}

}  // namespace

Trajectory solve(const Model& model, const Field& u0, const SolverConfig& cfg) {
  validate(cfg);
  if (cfg.mode == SolverMode::etd) return solve_etd(model, u0, cfg);

  const Grid& g = u0.grid;
  const bool real = is_real_problem(model, u0);
  PicardRun run = picard_iterate(model, u0, cfg);
  Trajectory tr;
  const auto re_phi = real_dissipation(g, model);
  for (std::size_t i = 0; i < run.nodes.size(); ++i) {
    record(tr, static_cast<double>(i) * run.h, run.nodes[i], g, re_phi);
  }
  tr.step_times.back() = cfg.T;
  for (double s : snapshot_targets(cfg)) {
    const auto i = static_cast<std::size_t>(std::llround(s / run.h));
    tr.times.push_back(s);
    tr.snapshots.push_back(physical(g, run.nodes[std::min(i, run.nodes.size() - 1)], real));
  }
  return tr;
}

std::pair<Field, PicardReport> picard_solve(const Model& model, const Field& u0, const SolverConfig& cfg) {
  validate(cfg);
  PicardRun run = picard_iterate(model, u0, cfg);
  return {physical(u0.grid, run.nodes.back(), is_real_problem(model, u0)), std::move(run.report)};
}

}  // namespace stratwave
