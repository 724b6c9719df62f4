#include "verbs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "cli.hpp"
#include "formbound/constants.hpp"
#include "formbound/errors.hpp"
#include "formbound/form_io.hpp"
#include "formbound/homotopy.hpp"
#include "formbound/il_operator.hpp"
#include "formbound/map_io.hpp"
#include "formbound/pharmonic.hpp"
#include "formbound/pullback.hpp"
#include "formbound/quadrature.hpp"
#include "formbound/random_forms.hpp"
#include "formbound/transfer.hpp"

namespace formbound::cli {
namespace {

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string fixed4(double v) { return fmt("%.4f", v); }

std::string p_label(double p) { return fmt("p=%g", p); }

Domain centered(int n, double r) { return n == 1 ? Domain::interval(r) : Domain::ball(n, r); }

// ---- constants ------------------------------------------------------------

void appendix(const ConstantsArgs& a, Format format, std::ostream& out, Report& report) {
  const std::vector<int> ns =
      a.n.empty() ? std::vector<int>{2, 3, 4, 5, 6, 7, 10} : parse_dimension_list(a.n);
  const std::vector<double> ps = a.p.empty() ? std::vector<double>{2, 2.5, 10} : a.p;
  json rows = json::array();
  if (format == Format::csv) out << "n,k,p,admissible,value\n";
  for (int n : ns) {
    const AppendixTable t = appendix_table(n, ps);
    if (format == Format::pretty) {
      out << "Dimension n = " << n << '\n' << fmt("%-4s", "k");
      for (double p : ps) out << fmt("%-10s", p_label(p).c_str());
      out << '\n';
    }
    for (int k = 1; k <= n; ++k) {
      if (format == Format::pretty) out << fmt("%-4d", k);
      for (std::size_t c = 0; c < ps.size(); ++c) {
        const auto& cell = t.rows[k - 1][c];
        switch (format) {
          case Format::pretty:
            out << fmt("%-10s", cell ? fixed4(*cell).c_str() : "---");
            break;
          case Format::csv:
            out << n << ',' << k << ',' << csv_number(ps[c]) << ',' << (cell ? "true" : "false") << ','
                << (cell ? csv_number(*cell) : "") << '\n';
            break;
          case Format::json:
            rows.push_back({{"n", n}, {"k", k}, {"p", ps[c]}, {"value", cell ? json(*cell) : json(nullptr)}});
            break;
        }
      }
      if (format == Format::pretty) out << '\n';
    }
    if (format == Format::pretty) out << '\n';
  }
  if (format == Format::json) out << json{{"table", "appendix"}, {"rows", rows}}.dump(2) << '\n';
  report.parameters["n"] = ns;
  report.parameters["p"] = ps;
}

void sphere(const ConstantsArgs& a, Format format, std::ostream& out, Report& report) {
  std::vector<int> ns = a.n.empty() ? std::vector<int>{} : parse_dimension_list(a.n);
  if (ns.empty()) {
    for (int n = 2; n <= 10; ++n) ns.push_back(n);
  }
  json rows = json::array();
  if (format == Format::csv) out << "n,r,value\n";
  if (format == Format::pretty) out << fmt("%-4s%s\n", "n", "2 pi^(n/2) r / Gamma(n/2)");
  for (int n : ns) {
    const double v = gt06_sphere_constant(n, a.r);
    switch (format) {
      case Format::pretty:
        out << fmt("%-4d", n) << fixed4(v) << '\n';
        break;
      case Format::csv:
        out << n << ',' << csv_number(a.r) << ',' << csv_number(v) << '\n';
        break;
      case Format::json:
        rows.push_back({{"n", n}, {"r", a.r}, {"value", v}});
        break;
    }
  }
  if (format == Format::json) out << json{{"table", "gt06"}, {"rows", rows}}.dump(2) << '\n';
  report.parameters["n"] = ns;
  report.parameters["r"] = a.r;
}

void asymptotic(const ConstantsArgs& a, Format format, std::ostream& out, Report& report) {
  const std::vector<int> ns = a.n.empty() ? std::vector<int>{10, 20, 50, 100} : parse_dimension_list(a.n);
  const std::vector<double> ps = a.p.empty() ? std::vector<double>{10} : a.p;
  json rows = json::array();
  if (format == Format::csv) out << "n,k,p,constant,estimate,ratio\n";
  if (format == Format::pretty) {
    out << fmt("%-6s%-6s%-8s%-16s%-16s%s\n", "n", "k", "p", "constant", "estimate", "ratio");
  }
  for (int n : ns) {
    std::vector<int> ks = a.k;
    if (ks.empty()) {
      for (int k = 1; k <= n; ++k) ks.push_back(k);
    }
    for (double p : ps) {
      for (int k : ks) {
        if (k < 1 || k > n || p * k - n <= 0) continue;
        const AsymptoticRow row = asymptotic_row(n, k, p);
        const double ratio = row.constant / row.estimate;
        switch (format) {
          case Format::pretty:
            out << fmt("%-6d%-6d%-8g%-16.6g%-16.6g%.6f\n", n, k, p, row.constant, row.estimate, ratio);
            break;
          case Format::csv:
            out << n << ',' << k << ',' << csv_number(p) << ',' << csv_number(row.constant) << ','
                << csv_number(row.estimate) << ',' << csv_number(ratio) << '\n';
            break;
          case Format::json:
            rows.push_back({{"n", n}, {"k", k}, {"p", p}, {"constant", row.constant},
                            {"estimate", row.estimate}, {"ratio", ratio}});
            break;
        }
      }
    }
  }
  if (format == Format::json) out << json{{"table", "asymptotic"}, {"rows", rows}}.dump(2) << '\n';
  report.parameters["n"] = ns;
  report.parameters["p"] = ps;
  report.parameters["k"] = a.k;
}

// ---- verify ---------------------------------------------------------------

Report verify_poincare(const VerifyArgs& a, const QuadratureConfig& cfg) {
  Report r;
  const int n = a.n > 0 ? a.n : 3;
  const int count = a.count > 0 ? a.count : 100;
  if (a.k < 0 || a.k > n) throw DegreeError("verify poincare: k must be in 1..n");
  r.parameters = {{"n", n}, {"k", a.k}, {"max_degree", a.max_degree}, {"count", count}};
  std::mt19937_64 rng(cfg.seed);
  RandomFormOptions opt;
  opt.max_degree = a.max_degree;
  int zero = 0;
  for (int i = 0; i < count; ++i) {
    const int k = a.k > 0 ? a.k : 1 + i % n;
    if (poincare_residual(random_form(n, k, opt, rng)).is_zero()) ++zero;
  }
  r.add({"exact_zero_residuals", zero == count, static_cast<double>(zero), static_cast<double>(count),
         fmt("%d/%d", zero, count)});
  return r;
}

Report verify_bound(const VerifyArgs& a, const QuadratureConfig& cfg) {
  Report r;
  const int n = a.n > 0 ? a.n : 3;
  const int k = a.k > 0 ? a.k : std::min(2, n);
  const double p = a.p.empty() ? 4.0 : a.p.front();
  const int count = a.count > 0 ? a.count : 50;
  r.parameters = {{"n", n}, {"k", k}, {"p", p}, {"r", a.r}, {"count", count}, {"max_degree", a.max_degree}};
  const double constant = homotopy_bound(n, k, p, a.r);
  const Domain dom = centered(n, a.r);
  const bool exact = is_even_integer(p);
  PointSet pts;
  if (!exact) pts = sample_domain(dom, cfg);
  std::mt19937_64 rng(cfg.seed);
  RandomFormOptions opt;
  opt.max_degree = a.max_degree;
  double worst = 0;
  int violations = 0;
  for (int i = 0; i < count; ++i) {
    const KForm w = random_form(n, k, opt, rng);
    const KForm s = homotopy_S(w);
    Estimate lhs, rhs;
    if (exact) {
      lhs = lp_norm(s, dom, p, cfg, NormPath::exact);
      rhs = lp_norm(w, dom, p, cfg, NormPath::exact);
    } else {
      lhs = lp_norm(NumericForm(s), pts, p);
      rhs = lp_norm(NumericForm(w), pts, p);
    }
    if (rhs.value == 0) continue;
    const double margin = exact ? 0.0 : 4 * (lhs.std_error + constant * rhs.std_error);
    if (lhs.value > constant * rhs.value + margin) ++violations;
    worst = std::max(worst, lhs.value / rhs.value);
  }
  const char* name = n == 1 ? "interval_bound" : (k == 1 ? "one_form_bound" : "ball_bound");
  r.add({name, violations == 0, worst, constant,
         fmt("max ratio %.6g over %d forms, constant %.6g, %d violations (%s)", worst, count, constant,
             violations, exact ? "exact moments" : "Monte Carlo, 4 sigma margin")});
  r.data = {{"max_ratio", worst}, {"constant", constant}, {"violations", violations}, {"exact", exact}};
  return r;
}

Report verify_pullback(const VerifyArgs& a, const QuadratureConfig& cfg) {
  Report r;
  const int n = a.n > 0 ? a.n : 2;
  const std::vector<double> Cs = a.C.empty() ? std::vector<double>{0.5, 1, 2} : a.C;
  r.parameters = {{"n", n}, {"C", Cs}, {"points", a.points}, {"max_degree", a.max_degree}};
  QuadratureConfig sampling = cfg;
  sampling.sample_count = static_cast<std::size_t>(a.points);
  const PointSet pts = sample_domain(Domain::ball(n, 1), sampling);
  std::mt19937_64 rng(cfg.seed);
  RandomFormOptions opt;
  opt.max_degree = a.max_degree;
  int d_checks = 0, d_ok = 0;
  for (double C : Cs) {
    const LipschitzMap phi = random_affine_map(n, C, rng);
    double worst = 0;
    for (int k = 0; k <= n; ++k) {
      const KForm w = random_form(n, k, opt, rng);
      if (k < n) {
        ++d_checks;
        if (pullback(phi, exterior_derivative(w)) == exterior_derivative(pullback(phi, w))) ++d_ok;
      }
      if (k == 0) continue;  // |f o phi| = |f| o phi, nothing to bound
      const NumericForm nw(w);
      const double bound = pullback_pointwise_bound(n, k, C);
      std::vector<double> vals(nw.size());
      for (std::size_t i = 0; i < pts.size(); ++i) {
        pullback_at(phi, nw, pts.point(i), vals);
        double sq = 0;
        for (double v : vals) sq += v * v;
        const double target = bound * nw.norm_at(phi.apply(pts.point(i)));
        if (target > 0) worst = std::max(worst, std::sqrt(sq) / target);
      }
    }
    r.add({fmt("pointwise_C=%g", C), worst <= 1 + 1e-12, worst, 1.0,
           fmt("max |phi*w| / (n! C^k/(n-k)! |w|) = %.6g over %zu points, k = 1..%d", worst, pts.size(), n)});
  }
  r.add({"d_commutes", d_ok == d_checks, static_cast<double>(d_ok), static_cast<double>(d_checks),
         fmt("pullback(phi, dw) == d pullback(phi, w): %d/%d", d_ok, d_checks)});
  return r;
}

struct NamedPair {
  std::string name;
  LipschitzMap alpha, beta;
  double inner_radius;
};

std::vector<NamedPair> standard_pairs(int n) {
  std::vector<std::vector<Rational>> shear(n, std::vector<Rational>(n, Rational(0))), unshear = shear;
  for (int i = 0; i < n; ++i) shear[i][i] = unshear[i][i] = 1;
  if (n >= 2) {
    shear[0][1] = Rational(-1, 2);
    unshear[0][1] = Rational(1, 2);
  }
  const std::vector<Rational> zero(n, Rational(0));
  return {{"identity", LipschitzMap::identity(n), LipschitzMap::identity(n), 1.0},
          {"scaling", LipschitzMap::scaling(n, 2), LipschitzMap::scaling(n, Rational(1, 2)), 0.5},
          {"shear", LipschitzMap::affine(shear, zero), LipschitzMap::affine(unshear, zero), 1.0}};
}

Report verify_transfer(const VerifyArgs& a, const QuadratureConfig& cfg) {
  Report r;
  const int n = a.n > 0 ? a.n : 2;
  const double p = a.p.empty() ? 4.0 : a.p.front();
  const int count = a.count > 0 ? a.count : 20;
  r.parameters = {{"n", n}, {"p", p}, {"count", count}, {"max_degree", a.max_degree}};
  std::mt19937_64 rng(cfg.seed);
  RandomFormOptions opt;
  opt.max_degree = a.max_degree;
  for (const NamedPair& pair : standard_pairs(n)) {
    const TransferOperator t = make_transfer(pair.alpha, pair.beta, pair.inner_radius);
    const Domain U = t.outer();
    int exact_ok = 0, exact_total = 0;
    for (int k = 1; k <= n; ++k) {
      const bool with_ratio = n >= 2 && k >= 2 && ball_admissible(n, k, p);
      const double bound = with_ratio ? transfer_bound(t, k, p) : 0.0;
      double worst = 0;
      for (int i = 0; i < count; ++i) {
        const KForm w = random_closed_form(n, k, opt, rng);
        const KForm g = transfer_gamma(t, w);
        ++exact_total;
        if (exterior_derivative(g) == w) ++exact_ok;
        if (with_ratio) worst = std::max(worst, lp_norm(g, U, p, cfg).value / lp_norm(w, U, p, cfg).value);
      }
      if (with_ratio) {
        r.add({fmt("%s_bound_k=%d", pair.name.c_str(), k), worst <= bound, worst, bound,
               fmt("max ||gamma w|| / ||w|| = %.6g, constant %.6g", worst, bound)});
      }
    }
    r.add({pair.name + "_primitive", exact_ok == exact_total, static_cast<double>(exact_ok),
           static_cast<double>(exact_total), fmt("d(gamma w) == w: %d/%d", exact_ok, exact_total)});
  }
  return r;
}

Report verify_il(const VerifyArgs& a, const QuadratureConfig& cfg, std::vector<double>& spectrum) {
  Report r;
  const int n = a.n > 0 ? a.n : 2;
  const int k = a.k > 0 ? a.k : 1;
  const double p = a.p.empty() ? 2.0 : a.p.front();
  r.parameters = {{"n", n},         {"k", k},
                  {"p", p},         {"q", a.q},
                  {"grid", a.grid}, {"decay_index", a.decay_index},
                  {"decay_ratio", a.decay_ratio}, {"residual_tol", a.residual_tol}};
  const Domain dom = Domain::ball(n, a.r);
  const Mollifier phi = Mollifier::for_domain(dom);
  double worst = 0;
  json residuals = json::object();
  for (const auto& c : smooth_form_suite(n)) {
    const double res = il_homotopy_residual(c, phi, dom, cfg);
    residuals[c.name] = res;
    worst = std::max(worst, res);
  }
  r.add({"homotopy_residual", worst <= a.residual_tol, worst, a.residual_tol,
         fmt("max relative |w - dTw - Tdw| over %zu smooth forms = %.3g", residuals.size(), worst)});
  spectrum = singular_values(discretize_T(n, k, p, a.q, a.grid, phi, dom, cfg).matrix);
  const auto idx = static_cast<std::size_t>(std::max(a.decay_index, 1));
  const bool enough = spectrum.size() >= idx && spectrum.front() > 0;
  const double ratio = enough ? spectrum[idx - 1] / spectrum.front() : 1.0;
  r.add({"decay", enough && ratio < a.decay_ratio, ratio, a.decay_ratio,
         enough ? fmt("sigma%zu/sigma1 = %.4f at grid %d", idx, ratio, a.grid)
                : fmt("only %zu singular values", spectrum.size())});
  r.data = {{"residuals", residuals}, {"sigma", spectrum}};
  return r;
}

Report verify_pharmonic(const VerifyArgs& a, const QuadratureConfig& cfg) {
  Report r;
  const std::vector<double> ps = a.p.empty() ? std::vector<double>{2, 3, 4} : a.p;
  r.parameters = {{"p", ps}, {"max_degree", a.max_degree}};
  const Domain disk = Domain::ball(2, 1);
  const KForm vol = KForm::basis(2, {0, 1});
  std::mt19937_64 rng(cfg.seed);
  RandomFormOptions opt;
  opt.max_degree = 2;

  const KForm omega = random_closed_form(2, 2, opt, rng) + vol;
  PHarmonicOptions iterative;
  iterative.force_iterative = true;
  iterative.tol = 1e-10;
  const double direct = p_harmonic_representative(omega, disk, 2, a.max_degree, cfg).energy;
  const double descent = p_harmonic_representative(omega, disk, 2, a.max_degree, cfg, iterative).energy;
  const double gap = std::abs(descent - direct) / direct;
  r.add({"quadratic_gap", gap <= 1e-8, gap, 1e-8, fmt("relative energy gap descent vs direct = %.3g", gap)});

  iterative.tol = 1e-6;
  const PHarmonicResult vr = p_harmonic_representative(vol, disk, 2, a.max_degree, cfg, iterative);
  const double correction = lp_norm(vr.eta - homotopy_S(vol), disk, 2, cfg, NormPath::exact).value;
  r.add({"coclosed_correction", correction <= 1e-5, correction, 1e-5,
         fmt("||eta - S(dx1 dx2)||_2 = %.3g", correction)});

  for (double p : ps) {
    const SolutionSpace space(homotopy_S(random_closed_form(2, 2, opt, rng) + vol), a.max_degree, disk, p, cfg);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<double> c(space.size());
    for (auto& v : c) v = u(rng);
    const auto grad = space.gradient(c);
    double scale = 0, worst = 0;
    for (double g : grad) scale = std::max(scale, std::abs(g));
    for (std::size_t b = 0; b < c.size(); ++b) {
      auto cp = c, cm = c;
      cp[b] += 1e-5;
      cm[b] -= 1e-5;
      const double fd = (space.energy(cp) - space.energy(cm)) / 2e-5;
      worst = std::max(worst, std::abs(grad[b] - fd) / std::max(std::abs(grad[b]), scale));
    }
    r.add({fmt("gradient_fd_p=%g", p), worst <= 1e-4, worst, 1e-4,
           fmt("max relative |analytic - central difference| = %.3g over %zu directions", worst, c.size())});
  }
  return r;
}

}  // namespace

Report cmd_constants(const ConstantsArgs& a, Format format, std::ostream& out) {
  Report r;
  r.command = "constants";
  if (a.table == "appendix") {
    appendix(a, format, out, r);
  } else if (a.table == "gt06") {
    sphere(a, format, out, r);
  } else if (a.table == "asymptotic") {
    asymptotic(a, format, out, r);
  } else {
    throw ParameterError("unknown table '" + a.table + "'");
  }
  r.parameters["table"] = a.table;
  return r;
}

Report cmd_verify(const VerifyArgs& a, const QuadratureConfig& cfg, Format format, std::ostream& out) {
  Report r;
  std::vector<double> spectrum;
  if (a.suite == "poincare") {
    r = verify_poincare(a, cfg);
  } else if (a.suite == "bound") {
    r = verify_bound(a, cfg);
  } else if (a.suite == "pullback") {
    r = verify_pullback(a, cfg);
  } else if (a.suite == "transfer") {
    r = verify_transfer(a, cfg);
  } else if (a.suite == "il") {
    r = verify_il(a, cfg, spectrum);
  } else if (a.suite == "pharmonic") {
    r = verify_pharmonic(a, cfg);
  } else {
    throw ParameterError("unknown suite '" + a.suite + "'");
  }
  r.command = "verify " + a.suite;
  if (a.suite == "il" && format != Format::json) {
    out << "index,sigma\n";
    for (std::size_t i = 0; i < spectrum.size(); ++i) out << i + 1 << ',' << csv_number(spectrum[i]) << '\n';
    if (format == Format::csv) return r;  // the decay flag is the exit code
    out << '\n';
  }
  write_report(r, format, out);
  return r;
}

Report cmd_transfer_check(const TransferCheckArgs& a, const QuadratureConfig& cfg, Format format,
                          std::ostream& out) {
  Report r;
  r.command = "transfer-check";
  r.parameters = {{"map", a.map_path}, {"form", a.form_path}, {"p", a.p}, {"radius", a.radius}, {"points", a.points}};
  const MapSpec spec = read_map_file(a.map_path);
  const KForm w = read_form_file(a.form_path);
  const LipschitzMap& phi = spec.map;
  const int n = phi.dimension();
  const int k = w.degree();
  if (w.dimension() != n) throw DimensionError("transfer-check: form and map dimensions differ");
  const Domain V = centered(n, a.radius);
  const double C = phi.lipschitz_constant();

  const double quotient = sampled_lipschitz_quotient(phi, V, static_cast<std::size_t>(a.points), cfg.seed);
  r.add({"lipschitz_sampled", quotient <= C * (1 + 1e-12), quotient, C,
         fmt("max |phi(u) - phi(v)| / |u - v| over %d pairs = %.6g", a.points, quotient)});

  QuadratureConfig sampling = cfg;
  sampling.sample_count = static_cast<std::size_t>(a.points);
  const PointSet pts = sample_domain(V, sampling);
  const NumericForm nw(w);
  const double bound = pullback_pointwise_bound(n, k, C);
  std::vector<double> vals(nw.size());
  double worst = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pullback_at(phi, nw, pts.point(i), vals);
    double sq = 0;
    for (double v : vals) sq += v * v;
    const double target = bound * nw.norm_at(phi.apply(pts.point(i)));
    if (target > 0) worst = std::max(worst, std::sqrt(sq) / target);
  }
  r.add({"pointwise_pullback", worst <= 1 + 1e-12, worst, 1.0,
         fmt("max |phi*w|_x / (%.6g |w|_phi(x)) over %zu points = %.6g", bound, pts.size(), worst)});
  if (k < n) {
    const bool commutes = pullback(phi, exterior_derivative(w)) == exterior_derivative(pullback(phi, w));
    r.add({"d_commutes", commutes, commutes ? 1.0 : 0.0, 1.0, "pullback(phi, dw) == d pullback(phi, w)"});
  }

  const bool closed = k == n || exterior_derivative(w).is_zero();
  r.data["closed"] = closed;
  if (spec.inverse) {
    std::optional<TransferOperator> t;
    try {
      t = make_transfer(phi, *spec.inverse, a.radius);
      r.add({"inverse_exact", true, 1.0, 1.0, "phi(inv(y)) == y exactly"});
    } catch (const ParameterError& e) {
      r.add({"inverse_exact", false, 0.0, 1.0, e.what()});
    }
    if (t && closed && k >= 1) {
      const KForm g = transfer_gamma(*t, w);
      const bool primitive = exterior_derivative(g) == w;
      r.add({"gamma_primitive", primitive, primitive ? 1.0 : 0.0, 1.0, "d(gamma w) == w"});
      r.data["gamma"] = format_form(g);
      if (k >= 2 && n >= 2 && ball_admissible(n, k, a.p) && !w.is_zero()) {
        const Domain U = t->outer();
        const double ratio = lp_norm(g, U, a.p, cfg).value / lp_norm(w, U, a.p, cfg).value;
        const double constant = transfer_bound(*t, k, a.p);
        r.add({"transfer_bound", ratio <= constant, ratio, constant,
               fmt("||gamma w||_p / ||w||_p = %.6g, constant %.6g", ratio, constant)});
      }
    }
  }
  write_report(r, format, out);
  return r;
}

Report cmd_il_compactness(const IlArgs& a, const QuadratureConfig& cfg, Format format, std::ostream& out) {
  Report r;
  r.command = "il-compactness";
  r.parameters = {{"n", a.n},       {"k", a.k},       {"p", a.p},
                  {"q", a.q},       {"grid", a.grid}, {"allow_inadmissible", a.allow_inadmissible}};
  const Domain dom = Domain::ball(a.n, 1);
  const Mollifier phi = Mollifier::for_domain(dom);
  const DiscretizedT d = discretize_T(a.n, a.k, a.p, a.q, a.grid, phi, dom, cfg, a.allow_inadmissible);
  const auto sigma = singular_values(d.matrix);
  if (format == Format::json) {
    out << json{{"sigma", sigma},
                {"rows", d.matrix.rows()},
                {"cols", d.matrix.cols()},
                {"trial_nodes", d.trial_nodes},
                {"quadrature_points", d.quadrature_points}}
               .dump(2)
        << '\n';
  } else {
    out << "index,sigma\n";
    for (std::size_t i = 0; i < sigma.size(); ++i) out << i + 1 << ',' << csv_number(sigma[i]) << '\n';
  }
  r.data = {{"count", sigma.size()}, {"sigma1", sigma.empty() ? 0.0 : sigma.front()}};
  return r;
}

Report cmd_pharmonic(const PharmonicArgs& a, const QuadratureConfig& cfg, std::ostream& out) {
  Report r;
  r.command = "pharmonic";
  r.parameters = {{"form", a.form_path},   {"p", a.p},         {"max_degree", a.max_degree},
                  {"tol", a.tol},          {"radius", a.radius}, {"max_iterations", a.max_iterations},
                  {"force_iterative", a.force_iterative}};
  const KForm omega = read_form_file(a.form_path);
  const Domain dom = centered(omega.dimension(), a.radius);
  PHarmonicOptions opt;
  opt.tol = a.tol;
  opt.max_iterations = a.max_iterations;
  opt.force_iterative = a.force_iterative;
  try {
    const PHarmonicResult res = p_harmonic_representative(omega, dom, a.p, a.max_degree, cfg, opt);
    out << json{{"energy", res.energy},
                {"el_residual", res.el_residual},
                {"iterations", res.iterations},
                {"coefficients", res.coefficients},
                {"converged", true},
                {"eta", format_form(res.eta)}}
               .dump(2)
        << '\n';
    r.add({"converged", true, res.el_residual, a.tol, fmt("el_residual %.3g after %d iterations", res.el_residual,
                                                          res.iterations)});
  } catch (const ConvergenceError& e) {
    out << json{{"energy", e.best_energy()},
                {"coefficients", e.best_coefficients()},
                {"iterations", a.max_iterations},
                {"converged", false},
                {"message", e.what()}}
               .dump(2)
        << '\n';
    r.add({"converged", false, 0.0, a.tol, e.what()});
  }
  return r;
}

}  // namespace formbound::cli
