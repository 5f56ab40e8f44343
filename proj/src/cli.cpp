#include "kaft/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <variant>

#include <CLI11.hpp>

#include "kaft/acceptance.hpp"
#include "kaft/genkernel.hpp"
#include "kaft/harness.hpp"
#include "kaft/parallel.hpp"

namespace kaft::cli {

namespace {

using Cell = std::variant<double, std::string>;
using Row = std::vector<Cell>;
using harness::ResidualReport;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<Row> rows;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) o += c == '"' ? std::string("\"\"") : std::string(1, c);
  return o + '"';
}

void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const Row& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << ',';
      if (auto d = std::get_if<double>(&r[i]))
        os << num(*d);
      else
        os << csv_field(std::get<std::string>(r[i]));
    }
    os << '\n';
  }
}

std::string json_string(const std::string& s) {
  std::string o = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') o += '\\';
    o += c;
  }
  return o + '"';
}

void write_json(const std::string& command, const Table& t, std::ostream& os) {
  os << "{\"command\":" << json_string(command) << ",\"rows\":[";
  for (std::size_t j = 0; j < t.rows.size(); ++j) {
    os << (j ? "," : "") << "\n{";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      os << (i ? "," : "") << json_string(t.columns[i]) << ':';
      if (auto d = std::get_if<double>(&t.rows[j][i]))
        os << (std::isfinite(*d) ? num(*d) : "null");
      else
        os << json_string(std::get<std::string>(t.rows[j][i]));
    }
    os << '}';
  }
  os << "\n]}\n";
}

double parse_double(const std::string& s, const std::string& what) {
  if (s == "inf" || s == "Inf" || s == "infinity") return kInf;
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw DomainError(what + ": cannot parse '" + s + "' as a number");
  return v;
}

harness::Axis parse_axis(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() < 4 || parts.size() > 5)
    throw DomainError("grid '" + spec + "': expected name:min:max:count[:log|lin]");
  harness::Axis a;
  a.name = parts[0];
  a.min = parse_double(parts[1], "grid " + a.name);
  a.max = parse_double(parts[2], "grid " + a.name);
  double c = parse_double(parts[3], "grid " + a.name);
  if (c != std::floor(c) || c < 1 || c > 1e6) throw DomainError("grid " + a.name + ": count must be a positive integer");
  a.count = static_cast<int>(c);
  if (parts.size() == 5) {
    if (parts[4] == "log")
      a.spacing = harness::Spacing::Log;
    else if (parts[4] != "lin" && parts[4] != "linear")
      throw DomainError("grid " + a.name + ": spacing must be log or lin");
  }
  return a;
}

std::optional<double> scalar(const RunConfig& c, const std::string& n) {
  if (n == "k") return c.k;
  if (n == "a") return c.a;
  if (n == "lambda") return c.lambda;
  if (n == "x") return c.x;
  if (n == "y") return c.y;
  if (n == "z") return c.z;
  if (n == "t") return c.t;
  if (n == "mu") return c.mu;
  if (n == "nu") return c.nu;
  return std::nullopt;
}

using Point = std::map<std::string, double>;

// Grid points (sorted by grid coordinates) with the remaining inputs taken
// from the scalar flags.
std::vector<Point> expand(const RunConfig& c, const std::vector<std::string>& inputs,
                          const harness::SweepGrid& grid) {
  for (const auto& ax : grid.axes)
    if (std::find(inputs.begin(), inputs.end(), ax.name) == inputs.end())
      throw DomainError(c.command + ": grid axis '" + ax.name + "' is not an input of this command");
  std::map<std::string, double> fixed;
  for (const auto& n : inputs) {
    if (grid.find(n)) continue;
    auto v = scalar(c, n);
    if (!v) throw DomainError(c.command + " needs --" + n + " (or a grid axis named " + n + ")");
    if (!std::isfinite(*v)) throw DomainError(c.command + ": --" + n + " must be finite");
    fixed[n] = *v;
  }
  auto coords = grid.points();
  std::sort(coords.begin(), coords.end());
  std::vector<Point> pts;
  for (const auto& row : coords) {
    Point p = fixed;
    for (std::size_t i = 0; i < grid.axes.size(); ++i) p[grid.axes[i].name] = row[i];
    pts.push_back(std::move(p));
  }
  return pts;
}

struct Job {
  std::vector<std::string> prefix_cols;  // string-valued leading columns (eq, kind)
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::vector<std::string>> variants{{}};  // values of the prefix columns
  // returns output values and whether the asserted tolerance was met
  std::function<std::pair<std::vector<double>, bool>(const Point&, const std::vector<std::string>&)> eval;
  std::function<void(const Point&)> validate;
};

const std::vector<std::string> kResidualCols{"lhs_re", "lhs_im",   "rhs_re",  "rhs_im",
                                              "abs_res", "rel_res", "quad_err", "wall_ms"};

std::vector<double> residual_cols(const ResidualReport& r, bool timing) {
  return {r.lhs.real(),    r.lhs.imag(),    r.rhs.real(), r.rhs.imag(),
          r.abs_residual, r.rel_residual, r.quad_error, timing ? r.wall_ms : 0.0};
}

genkernel::Params params_at(const Point& p) { return genkernel::Params::make(p.at("k"), p.at("a")); }

harness::TestFunction load_function(const RunConfig& c) {
  if (!(c.f_scale > 0.0)) throw DomainError("--f-scale must be > 0");
  if (c.f == "gaussian") return harness::TestFunction::gaussian(c.f_scale);
  if (c.f == "bump") return harness::TestFunction::bump(c.f_scale);
  if (c.f == "constant") return harness::TestFunction::constant(c.f_scale);
  if (c.f == "samples") {
    if (c.samples.empty()) throw DomainError("--f samples needs --samples FILE");
    std::ifstream in(c.samples);
    if (!in) throw DomainError("cannot open samples file " + c.samples);
    std::vector<double> xs, ys;
    for (std::string line; std::getline(in, line);) {
      if (line.empty() || line[0] == '#') continue;
      auto comma = line.find(',');
      if (comma == std::string::npos) throw DomainError("samples file: expected x,y per line");
      std::string xs_s = line.substr(0, comma), ys_s = line.substr(comma + 1);
      if (xs.empty() && ys.empty() && (xs_s == "x")) continue;  // header
      xs.push_back(parse_double(xs_s, "samples x"));
      ys.push_back(parse_double(ys_s, "samples y"));
    }
    return harness::TestFunction::samples(std::move(xs), std::move(ys));
  }
  throw DomainError("--f must be gaussian, bump, constant or samples");
}

Job make_job(const RunConfig& c) {
  Job j;
  const bool timing = c.timing;
  const auto spec = c.spec;
  if (c.command == "eval-kernel") {
    j.inputs = {"k", "a", "lambda", "x"};
    j.outputs = {"re", "im", "quad_error"};
    j.validate = [](const Point& p) { params_at(p); };
    j.eval = [](const Point& p, const auto&) {
      ComplexValue b = genkernel::b_kernel(params_at(p), p.at("lambda"), p.at("x"));
      return std::pair{std::vector<double>{b.real(), b.imag(), 0.0}, true};
    };
  } else if (c.command == "eval-density") {
    if (c.measure != "gamma" && c.measure != "sigma") throw DomainError("--measure must be gamma or sigma");
    const bool sigma = c.measure == "sigma";
    j.inputs = {"k", "a", "x", "y", "z"};
    j.outputs = {"re", "im", "quad_error"};
    j.validate = [](const Point& p) { params_at(p).require_density(); };
    j.eval = [sigma](const Point& p, const auto&) {
      auto prm = params_at(p);
      auto m = sigma ? genkernel::sigma_measure(prm, p.at("x"), p.at("y"))
                     : genkernel::gamma_measure(prm, p.at("x"), p.at("y"));
      if (m.kind != genkernel::MeasureKind::Density)
        throw DomainError("measure is a Dirac mass at " + num(m.atom()) + "; no density");
      ComplexValue d = m.density(p.at("z"));
      return std::pair{std::vector<double>{d.real(), d.imag(), 0.0}, true};
    };
  } else if (c.command == "verify-product") {
    const double tol = c.max_rel.value_or(1e-5);
    j.inputs = {"k", "a", "lambda", "x", "y"};
    j.outputs = kResidualCols;
    j.validate = [](const Point& p) { params_at(p).require_density(); };
    j.eval = [=](const Point& p, const auto&) {
      auto r = harness::product_residual(params_at(p), p.at("lambda"), p.at("x"), p.at("y"), spec);
      return std::pair{residual_cols(r, timing), r.rel_residual <= tol};
    };
  } else if (c.command == "tv-sweep") {
    j.inputs = {"k", "a", "x", "y"};
    j.outputs = {"tv", "inner", "band", "outer", "est_error", "truncation_bound", "wall_ms"};
    j.validate = [](const Point& p) { params_at(p).require_density(); };
    j.eval = [=](const Point& p, const auto&) {
      auto t0 = std::chrono::steady_clock::now();
      auto r = harness::tv_norm_report(params_at(p), p.at("x"), p.at("y"), spec);
      double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      std::vector<double> v{r.total, r.inner, r.band, r.outer, r.est_error, r.truncation_bound, timing ? ms : 0.0};
      return std::pair{v, std::isfinite(r.total)};
    };
  } else if (c.command == "hankel-check") {
    const double tol = c.max_rel.value_or(1e-5);
    j.prefix_cols = {"eq"};
    if (c.eq == "both")
      j.variants = {{"1"}, {"2"}};
    else if (c.eq == "1" || c.eq == "2")
      j.variants = {{c.eq}};
    else
      throw DomainError("--eq must be 1, 2 or both");
    j.inputs = {"mu", "nu", "x", "y", "t"};
    j.outputs = kResidualCols;
    j.validate = [](const Point& p) { macdonald::MacdonaldOrders::make(p.at("mu"), p.at("nu")); };
    j.eval = [=](const Point& p, const std::vector<std::string>& v) {
      Order mu{p.at("mu")}, nu{p.at("nu")};
      auto r = v[0] == "1" ? harness::hankel_identity_eq1(mu, nu, p.at("x"), p.at("y"), p.at("t"), spec)
                           : harness::hankel_identity_eq2(mu, nu, p.at("x"), p.at("y"), p.at("t"), spec);
      return std::pair{residual_cols(r, timing), r.rel_residual <= tol};
    };
  } else if (c.command == "legendre-check") {
    const double tol = c.max_rel.value_or(1e-6);
    j.prefix_cols = {"kind"};
    if (c.kind == "both")
      j.variants = {{"P"}, {"Q"}};
    else if (c.kind == "P" || c.kind == "Q")
      j.variants = {{c.kind}};
    else
      throw DomainError("--kind must be P, Q or both");
    j.inputs = {"mu", "nu"};
    j.outputs = kResidualCols;
    j.validate = [](const Point&) {};
    j.eval = [=](const Point& p, const std::vector<std::string>& v) {
      Order mu{p.at("mu")}, nu{p.at("nu")};
      auto r = v[0] == "P" ? harness::legendre_p_integral_check(mu, nu, spec)
                           : harness::legendre_q_integral_check(mu, nu, spec);
      return std::pair{residual_cols(r, timing), r.rel_residual <= tol};
    };
  } else if (c.command == "translate") {
    auto f = std::make_shared<harness::TestFunction>(load_function(c));
    j.inputs = {"k", "a", "y", "z"};
    j.outputs = {"re", "im", "quad_error"};
    j.validate = [](const Point& p) { params_at(p).require_density(); };
    j.eval = [=](const Point& p, const auto&) {
      auto r = harness::translate_report(params_at(p), p.at("y"), *f, p.at("z"), spec);
      return std::pair{std::vector<double>{r.value.real(), r.value.imag(), r.est_error}, true};
    };
  } else {
    throw DomainError("unknown command '" + c.command + "'");
  }
  return j;
}

void emit(const RunConfig& c, const Table& t, std::ostream& out) {
  auto write = [&](std::ostream& os) {
    if (c.format == "json")
      write_json(c.command, t, os);
    else
      write_csv(t, os);
  };
  if (c.out.empty()) {
    write(out);
    return;
  }
  std::ofstream os(c.out, std::ios::binary);
  if (!os) throw DomainError("cannot open output file " + c.out);
  write(os);
}

int run_lp_probe(const RunConfig& c, const harness::SweepGrid& grid, Table& t) {
  for (const auto& ax : grid.axes)
    if (ax.name != "y") throw DomainError("translate --lp: the grid may only have a y axis");
  if (!grid.find("y")) throw DomainError("translate --lp needs a grid axis named y");
  if (!c.k || !c.a) throw DomainError("translate --lp needs --k and --a");
  auto p = genkernel::Params::make(*c.k, *c.a);
  p.require_density();
  std::vector<double> exps;
  for (const auto& s : c.p_exps) exps.push_back(parse_double(s, "--p-exp"));
  auto f = load_function(c);
  auto probes = harness::lp_bound_probe_report(p, exps, f, grid, c.spec, c.jobs);
  t.columns = {"k", "a", "p_exp", "y", "ratio"};
  bool ok = true;
  for (const auto& pr : probes)
    for (std::size_t i = 0; i < pr.y.size(); ++i) {
      t.rows.push_back({*c.k, *c.a, pr.p_exp, pr.y[i], pr.ratio[i]});
      ok = ok && std::isfinite(pr.ratio[i]);
    }
  return ok ? 0 : 3;
}

int run_selftest(const RunConfig& c, Table& t, std::ostream& err) {
  acceptance::Options opt;
  opt.seed = c.seed;
  opt.jobs = c.jobs;
  opt.only = c.only;
  t.columns = {"criterion", "name", "status", "detail"};
  bool ok = true;
  acceptance::run_all(opt, [&](const acceptance::Outcome& o) {
    err << acceptance::format_line(o) << '\n';
    t.rows.push_back({static_cast<double>(o.id), o.name, std::string(o.pass ? "PASS" : "FAIL"), o.detail});
    ok = ok && o.pass;
  });
  return ok ? 0 : 3;
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    c.spec.validate();
    if (c.format != "csv" && c.format != "json") throw DomainError("--format must be csv or json");
    if (c.jobs < 1) throw DomainError("--jobs must be >= 1");
    harness::SweepGrid grid;
    for (const auto& g : c.grid) grid.axes.push_back(parse_axis(g));
    grid.validate();

    Table t;
    int status = 0;
    if (c.command == "selftest") {
      status = run_selftest(c, t, err);
    } else if (c.command == "translate" && c.lp) {
      status = run_lp_probe(c, grid, t);
    } else {
      if (c.command == "tv-sweep" && grid.axes.empty() && !c.x && !c.y)
        grid.axes = {{"x", 0.1, 10.0, 9, harness::Spacing::Log}, {"y", 0.1, 10.0, 9, harness::Spacing::Log}};
      Job j = make_job(c);
      auto pts = expand(c, j.inputs, grid);
      for (const auto& p : pts) j.validate(p);
      const std::size_t nv = j.variants.size();
      std::vector<Row> rows(pts.size() * nv);
      std::vector<char> pass(rows.size(), 1);
      parallel_for(rows.size(), c.jobs, [&](std::size_t i) {
        const Point& p = pts[i / nv];
        const auto& var = j.variants[i % nv];
        auto [vals, ok] = j.eval(p, var);
        Row r;
        for (const auto& s : var) r.push_back(s);
        for (const auto& n : j.inputs) r.push_back(p.at(n));
        for (double v : vals) r.push_back(v);
        rows[i] = std::move(r);
        pass[i] = ok;
      });
      t.columns = j.prefix_cols;
      t.columns.insert(t.columns.end(), j.inputs.begin(), j.inputs.end());
      t.columns.insert(t.columns.end(), j.outputs.begin(), j.outputs.end());
      t.rows = std::move(rows);
      for (std::size_t i = 0; i < pass.size(); ++i)
        if (!pass[i]) {
          err << c.command << ": tolerance not met in row " << i + 1 << '\n';
          status = 3;
        }
    }
    emit(c, t, out);
    return status;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"kaft: (k,a)-generalized Fourier kernel, Macdonald kernel and product-formula checks"};
  app.set_config("--config", "", "TOML/INI file with long option names as keys; flags win");
  app.require_subcommand(1, 1);
  app.fallthrough();
  RunConfig c;
  const std::pair<const char*, const char*> commands[] = {
      {"eval-kernel", "B(lambda, x)"},
      {"eval-density", "density of gamma_{x,y} (or sigma) at z, weight included"},
      {"verify-product", "product formula residual"},
      {"tv-sweep", "total variation of gamma_{x,y} over a grid"},
      {"hankel-check", "Hankel identities for R_{mu,nu}"},
      {"legendre-check", "Legendre integral identities"},
      {"translate", "generalized translation tau_y f(z), or its L^p probe"},
      {"selftest", "run the acceptance suite"}};
  for (auto [name, help] : commands) app.add_subcommand(name, help);

  std::map<std::string, double> vals;
  std::map<std::string, CLI::Option*> opts;
  for (const char* n : {"k", "a", "lambda", "x", "y", "z", "t", "mu", "nu"})
    opts[n] = app.add_option(std::string("--") + n, vals[n]);
  double max_rel = 0.0;
  auto* max_rel_opt = app.add_option("--max-rel", max_rel, "asserted rel_residual bound");
  app.add_option("--grid", c.grid, "axis name:min:max:count[:log|lin], repeatable");
  app.add_option("--abs-tol", c.spec.abs_tol);
  app.add_option("--rel-tol", c.spec.rel_tol);
  app.add_option("--max-levels", c.spec.max_levels);
  app.add_option("--osc-max-zeros", c.spec.osc_max_zeros);
  app.add_option("--accel-terms", c.spec.accel_terms);
  std::string tail = "exponent";
  app.add_option("--tail-policy", tail, "exponent or fixed")->check(CLI::IsMember({"exponent", "fixed"}));
  app.add_option("--fixed-z", c.spec.fixed_z);
  app.add_option("--out,-o", c.out, "output file (default stdout)");
  app.add_option("--format", c.format)->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", c.seed);
  app.add_option("--jobs,-j", c.jobs);
  app.add_flag("--timing", c.timing, "write measured wall_ms instead of 0");
  app.add_option("--eq", c.eq);
  app.add_option("--kind", c.kind);
  app.add_option("--measure", c.measure);
  app.add_option("--f", c.f);
  app.add_option("--f-scale", c.f_scale);
  app.add_option("--samples", c.samples);
  app.add_flag("--lp", c.lp);
  app.add_option("--p-exp", c.p_exps);
  app.add_option("--only", c.only, "selftest: criterion ids to run")->check(CLI::Range(1, 10));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  c.command = app.get_subcommands().front()->get_name();
  for (auto& [n, o] : opts) {
    if (o->count() == 0) continue;
    double v = vals[n];
    if (n == "k") c.k = v;
    if (n == "a") c.a = v;
    if (n == "lambda") c.lambda = v;
    if (n == "x") c.x = v;
    if (n == "y") c.y = v;
    if (n == "z") c.z = v;
    if (n == "t") c.t = v;
    if (n == "mu") c.mu = v;
    if (n == "nu") c.nu = v;
  }
  if (max_rel_opt->count()) c.max_rel = max_rel;
  c.spec.tail_policy = tail == "fixed" ? quadrature::TailPolicy::FixedZ : quadrature::TailPolicy::ExponentBased;
  return run(c, out, err);
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> storage{"kaft"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  return main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace kaft::cli
