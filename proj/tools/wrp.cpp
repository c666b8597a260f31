#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wrp/config.hpp"
#include "wrp/density.hpp"
#include "wrp/errors.hpp"
#include "wrp/mc.hpp"
#include "wrp/parallel.hpp"
#include "wrp/symmetry.hpp"
#include "wrp/verify.hpp"

using namespace wrp;

namespace {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };
Level g_level = Level::Warn;

void log(Level l, const std::string& msg) {
  static const char* names[] = {"error", "warn", "info", "debug"};
  if (l <= g_level) std::cerr << "[" << names[static_cast<int>(l)] << "] " << msg << '\n';
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

void emit(const Table& t, const std::string& out, const std::string& format) {
  if (format == "csv") {
    if (!out.empty()) {
      write_csv(out, t.header, t.columns);
      return;
    }
    for (std::size_t k = 0; k < t.header.size(); ++k) std::cout << (k ? "," : "") << t.header[k];
    std::cout << '\n';
    const std::size_t n = t.columns.empty() ? 0 : t.columns[0].size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < t.columns.size(); ++k) {
        std::cout << (k ? "," : "") << format_double(t.columns[k][i]);
      }
      std::cout << '\n';
    }
    return;
  }
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  const std::size_t n = t.columns.empty() ? 0 : t.columns[0].size();
  for (std::size_t i = 0; i < n; ++i) {
    nlohmann::ordered_json row;
    for (std::size_t k = 0; k < t.columns.size(); ++k) {
      const double v = t.columns[k][i];
      row[t.header[k]] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json();
    }
    rows.push_back(row);
  }
  const std::string text = rows.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out, std::ios::binary);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + out + " for writing");
  os << text;
}

void emit_object(const nlohmann::ordered_json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out, std::ios::binary);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + out + " for writing");
  os << text;
}

std::string hint_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::RequiresL1:
      return "the symmetry image needs an integrable preimage; use a put or custom payoff, "
             "or 'wrp joint' for indicators";
    case ErrorCode::DenominatorUnderflow: return "increase --gamma";
    case ErrorCode::OverflowGuard: return "reduce x or T, or lower --gamma";
    case ErrorCode::TruncationCapExceeded: return "relax --target-err or pass fixed --r and --R";
    case ErrorCode::InsufficientGrid: return "widen or refine the x grid";
    case ErrorCode::AdmissibilityViolation: return "choose zeta below the jump decay rate alpha";
    case ErrorCode::BranchCutViolation: return "keep arguments to the right of -alpha";
    case ErrorCode::InvalidStrike: return "the strike must be negative (payoff supported below the barrier)";
    case ErrorCode::NonIntegrable: return "the payoff must vanish on [0, inf) and decay on the left";
    case ErrorCode::TailUnbounded: return "give the process a positive zeta or use a bounded payoff";
    case ErrorCode::CacheMismatch: return "rebuild the cache for this model, payoff and (x, T) range";
    case ErrorCode::UnsupportedJumpKind: return "Monte Carlo supports Gamma jumps or none";
    case ErrorCode::GridExtrapolation: return "extend the grid to cover all terminal values";
    case ErrorCode::ConfigError: return "check the JSON schema (schema_version 1)";
    case ErrorCode::IoError: return "check that the file exists and is writable";
    case ErrorCode::InvalidArgument: return "see 'wrp <command> --help'";
  }
  return "";
}

void report_error(const std::string& error, const std::string& message, const std::string& hint) {
  nlohmann::ordered_json j;
  j["error"] = error;
  j["message"] = message;
  j["hint"] = hint;
  std::cerr << j.dump() << '\n';
}

LevyTriplet model_from(const std::string& path) {
  if (path.empty()) return reference_model();
  return load_model(path);
}

double payoff_zeta(const LevyTriplet& tri) { return tri.zeta() > 0.0 ? tri.zeta() : 0.9; }

std::size_t count_from(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e12) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak symmetry maps for spectrally negative Levy processes"};
  app.require_subcommand(1);

  int threads = 1;
  std::string format = "csv";
  std::string log_level = "warn";
  app.add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 1024));
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--log-level", log_level, "Log level")
      ->check(CLI::IsMember({"error", "warn", "info", "debug"}));

  std::string model_path, payoff_path, out, x_spec, t_spec;
  double gamma = 4.0, r = 60.0, R = 60.0, K = -0.2;
  std::optional<double> target_err, zeta;

  auto* sym = app.add_subcommand("symmetry", "Evaluate g = W+ h on an x grid");
  sym->add_option("--model", model_path, "Model JSON (default: sigma = alpha = beta = 1)");
  sym->add_option("--payoff", payoff_path, "Payoff JSON")->required();
  sym->add_option("--x", x_spec, "x grid a:b:n, x > 0")->required();
  sym->add_option("--gamma", gamma, "Bromwich abscissa");
  sym->add_option("--r", r, "Outer truncation");
  sym->add_option("--R", R, "Inner truncation");
  sym->add_option("--target-err", target_err, "Choose r = R per point for this error bound");
  sym->add_option("--out", out, "Output file (default stdout)");

  auto* hedge = app.add_subcommand("hedge", "Static hedge payoff h - g");
  hedge->add_option("--model", model_path, "Model JSON");
  hedge->add_option("--payoff", payoff_path, "Payoff JSON")->required();
  hedge->add_option("--x", x_spec, "x grid a:b:n")->required();
  hedge->add_option("--gamma", gamma, "Bromwich abscissa");
  double hedge_target = 1e-2;
  hedge->add_option("--target-err", hedge_target, "Error bound target for g");
  hedge->add_option("--out", out, "Output file");

  auto* joint = app.add_subcommand("joint", "P(X_T <= K + x, sup X >= x) on an (x, T) grid");
  joint->add_option("--model", model_path, "Model JSON");
  joint->add_option("--K", K, "Strike (< 0)");
  joint->add_option("--x", x_spec, "x grid a:b:n, x >= 0")->required();
  joint->add_option("--T", t_spec, "T grid a:b:n")->required();
  joint->add_option("--gamma", gamma, "Bromwich abscissa");
  joint->add_option("--zeta", zeta, "Preimage abscissa of the indicator");
  joint->add_option("--out", out, "Output file");

  auto* dens = app.add_subcommand("density", "Transition density p_t on a grid");
  dens->add_option("--model", model_path, "Model JSON");
  dens->add_option("--t", t_spec, "Time or grid a:b:n")->required();
  dens->add_option("--x", x_spec, "x grid a:b:n")->required();
  dens->add_option("--out", out, "Output file");

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimates");
  double T = 1.0, paths = 1e5, steps = 1e3, x = 0.1, x0 = -0.1;
  std::uint64_t seed = 42;
  std::string estimate = "joint", batch_out;
  bool no_bridge = false;
  mc->add_option("--model", model_path, "Model JSON");
  mc->add_option("--T", T, "Horizon");
  mc->add_option("--paths", paths, "Number of paths");
  mc->add_option("--steps", steps, "Steps per path");
  mc->add_option("--seed", seed, "Seed");
  mc->add_option("--estimate", estimate, "joint | barrier | european")
      ->check(CLI::IsMember({"joint", "barrier", "european"}));
  mc->add_option("--K", K, "Strike for the joint estimate");
  mc->add_option("--x", x, "Level for the joint estimate");
  mc->add_option("--x0", x0, "Start level for barrier / european estimates");
  mc->add_option("--payoff", payoff_path, "Payoff JSON for barrier / european estimates");
  mc->add_flag("--no-bridge", no_bridge, "Disable the Brownian-bridge maximum");
  mc->add_option("--batch-out", batch_out, "Write the path batch to this file");
  mc->add_option("--out", out, "Output file");

  auto* ver = app.add_subcommand("verify", "Run the verification suite");
  std::string suite = "quick";
  std::vector<std::string> only;
  ver->add_option("--suite", suite, "quick | full")->check(CLI::IsMember({"quick", "full"}));
  ver->add_option("--check", only, "Run only these checks");
  ver->add_option("--seed", seed, "Monte Carlo seed");
  ver->add_option("--out", out, "Report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("UsageError", e.what(), "see 'wrp --help'");
    return 2;
  }

  static const std::map<std::string, Level> levels{
      {"error", Level::Error}, {"warn", Level::Warn}, {"info", Level::Info}, {"debug", Level::Debug}};
  g_level = levels.at(log_level);
  set_threads(threads);

  try {
    if (*sym) {
      const auto tri = model_from(model_path);
      const auto payoff = load_payoff(payoff_path, payoff_zeta(tri));
      const auto xs = parse_grid(x_spec);
      ContourParams p;
      p.gamma = gamma;
      p.r = r;
      p.R = R;
      const auto img = target_err ? compute_g_curve(tri, payoff, xs, *target_err, p)
                                  : compute_g_curve(tri, payoff, xs, p);
      emit({{"x", "g", "err_bound", "im_residual", "r", "R"},
            {img.x_grid, img.g_values, img.error_bounds, img.im_residuals, img.r_used, img.R_used}},
           out, format);
    } else if (*hedge) {
      const auto tri = model_from(model_path);
      const auto payoff = load_payoff(payoff_path, payoff_zeta(tri));
      ContourParams p;
      p.gamma = gamma;
      const auto pts = static_hedge_payoff(tri, payoff, parse_grid(x_spec), hedge_target, p);
      Table t{{"x", "value", "err_bound"}, {{}, {}, {}}};
      for (const auto& q : pts) {
        t.columns[0].push_back(q.x);
        t.columns[1].push_back(q.value);
        t.columns[2].push_back(q.err_bound);
      }
      emit(t, out, format);
    } else if (*joint) {
      const auto tri = model_from(model_path);
      const auto xs = parse_grid(x_spec);
      const auto ts = parse_grid(t_spec);
      CacheParams p;
      p.gamma = gamma;
      Table t{{"x", "T", "prob"}, {{}, {}, {}}};
      if (zeta) {
        const auto ind = make_indicator(K, *zeta);
        double xmax = 0.0, tmin = ts.front(), tmax = ts.front();
        for (double v : xs) xmax = std::max(xmax, v);
        for (double v : ts) tmin = std::min(tmin, v), tmax = std::max(tmax, v);
        p.x_max = xmax;
        p.T_min = tmin;
        p.T_max = tmax;
        const auto cache = build_cache(tri, ind, p);
        for (double tv : ts) {
          for (double xv : xs) {
            t.columns[0].push_back(xv);
            t.columns[1].push_back(tv);
            t.columns[2].push_back(joint_probability(tri, ind, {K, xv, tv}, cache).prob);
          }
        }
      } else {
        const auto s = joint_surface(tri, K, xs, ts, p);
        log(Level::Info, "cache build " + format_double(s.build_seconds) + " s, evaluation " +
                             format_double(s.eval_seconds) + " s");
        for (std::size_t i = 0; i < ts.size(); ++i) {
          for (std::size_t j = 0; j < xs.size(); ++j) {
            t.columns[0].push_back(xs[j]);
            t.columns[1].push_back(ts[i]);
            t.columns[2].push_back(s.prob[i * xs.size() + j]);
          }
        }
      }
      emit(t, out, format);
    } else if (*dens) {
      const auto tri = model_from(model_path);
      const auto xs = parse_grid(x_spec);
      Table t{{"t", "x", "p"}, {{}, {}, {}}};
      for (double tv : parse_grid(t_spec)) {
        const auto s = density(tri, tv, xs);
        log(Level::Info, "t = " + format_double(tv) + ": normalization defect " +
                             format_double(s.normalization_defect));
        for (std::size_t i = 0; i < xs.size(); ++i) {
          t.columns[0].push_back(tv);
          t.columns[1].push_back(xs[i]);
          t.columns[2].push_back(s.p_values[i]);
        }
      }
      emit(t, out, format);
    } else if (*mc) {
      const auto tri = model_from(model_path);
      SimConfig cfg;
      cfg.n_paths = count_from(paths, "--paths");
      cfg.n_steps = count_from(steps, "--steps");
      cfg.T = T;
      cfg.seed = seed;
      cfg.bridge_correction = !no_bridge;
      const auto batch = simulate(tri, cfg);
      log(Level::Info, "simulated in " + format_double(batch.seconds) + " s");
      if (!batch_out.empty()) write_batch(batch, batch_out);
      Estimate e;
      if (estimate == "joint") {
        e = estimate_joint(batch, K, x);
      } else {
        if (payoff_path.empty()) {
          throw Error(ErrorCode::InvalidArgument, "--payoff is required for --estimate " + estimate);
        }
        const auto payoff = load_payoff(payoff_path, payoff_zeta(tri));
        if (estimate == "barrier") {
          e = estimate_barrier_price(batch, payoff, x0);
        } else {
          e = estimate_european(batch, [&](double s) { return payoff.h(s); }, x0);
        }
      }
      emit({{"estimate", "se", "paths", "steps"},
            {{e.value}, {e.se}, {static_cast<double>(cfg.n_paths)}, {static_cast<double>(cfg.n_steps)}}},
           out, format);
    } else if (*ver) {
      VerifyOptions o;
      o.suite = suite == "full" ? Suite::Full : Suite::Quick;
      o.seed = seed;
      o.only = only;
      const auto rep = run_verify(o);
      for (const auto& c : rep.checks) {
        log(Level::Info, c.name + (c.passed ? " PASS " : " FAIL ") + format_double(c.value));
      }
      emit_object(nlohmann::ordered_json::parse(rep.to_json()), out);
      return rep.passed() ? 0 : 1;
    }
  } catch (const Error& e) {
    report_error(std::string(to_string(e.code())), e.what(), hint_for(e.code()));
    return 2;
  } catch (const std::exception& e) {
    report_error("InternalError", e.what(), "");
    return 2;
  }
  return 0;
}
