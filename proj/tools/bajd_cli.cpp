// Command-line front end: density/transform/invariant evaluation, exact
// sampling, path simulation, ergodicity reports, and the validation suite.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 validation
// failure.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bajd/bajd.hpp"

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  }
  return xs;
}

// "lo:hi:count" or a comma-separated list of values
std::vector<double> parse_grid(const std::string& spec) {
  if (spec.find(':') != std::string::npos) {
    double lo, hi;
    int n;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || n < 1) {
      throw std::invalid_argument("grid spec must be lo:hi:count, got: " + spec);
    }
    return linspace(lo, hi, n);
  }
  std::vector<double> xs;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = spec.find(',', pos);
    const std::string token = spec.substr(pos, comma == std::string::npos ? spec.size() - pos
                                                                          : comma - pos);
    if (token.empty()) throw std::invalid_argument("empty grid entry in: " + spec);
    xs.push_back(std::stod(token));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("grid must be ascending: " + spec);
  }
  return xs;
}

std::vector<double> midpoint_grid(double y_max, int n) {
  std::vector<double> ys(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    ys[static_cast<std::size_t>(i)] = (i + 0.5) * y_max / n;
  }
  return ys;
}

std::string format_x_tag(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

struct CommandContext {
  bajd::BajdParams params;
  std::filesystem::path out_dir;
  std::string format;
  unsigned threads;
};

void run_density(const CommandContext& ctx, double t, double x, const std::string& y_grid) {
  const bajd::TransitionDensity density(ctx.params, t, x);
  std::vector<double> ys =
      y_grid.empty() ? midpoint_grid(density.upper_cutoff(), 800) : parse_grid(y_grid);
  std::vector<double> values(ys.size());
  bajd::detail::parallel_for(ys.size(), ctx.threads,
                             [&](std::size_t i) { values[i] = density(ys[i]); });
  bajd::DensityGrid grid{t, x, std::move(ys), std::move(values)};
  if (ctx.format == "json") {
    bajd::write_density_json(ctx.out_dir / "density.json", grid);
  } else {
    bajd::write_density_csv(ctx.out_dir / "density.csv", grid);
  }
}

void run_cf(const CommandContext& ctx, double t, double x, const std::string& u_grid) {
  const std::vector<double> omegas = u_grid.empty() ? linspace(0.0, 10.0, 101)
                                                    : parse_grid(u_grid);
  std::vector<double> res(omegas.size());
  std::vector<double> ims(omegas.size());
  bajd::detail::parallel_for(omegas.size(), ctx.threads, [&](std::size_t i) {
    const auto value = bajd::bajd_cf(ctx.params, t, x, {0.0, omegas[i]});
    res[i] = value.real();
    ims[i] = value.imag();
  });
  if (ctx.format == "json") {
    nlohmann::json j{{"t", t}, {"x", x}, {"omega", omegas}, {"re", res}, {"im", ims}};
    auto out = bajd::detail::open_for_write(ctx.out_dir / "cf.json");
    out << j.dump(2) << "\n";
  } else {
    auto out = bajd::detail::open_for_write(ctx.out_dir / "cf.csv");
    out << "omega,re,im\n";
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      out << bajd::detail::format_double(omegas[i]) << ","
          << bajd::detail::format_double(res[i]) << "," << bajd::detail::format_double(ims[i])
          << "\n";
    }
  }
}

void run_invariant(const CommandContext& ctx, const std::string& y_grid) {
  const bajd::InvariantDensity density(ctx.params);
  std::vector<double> ys =
      y_grid.empty() ? midpoint_grid(density.upper_cutoff(), 800) : parse_grid(y_grid);
  std::vector<double> values(ys.size());
  bajd::detail::parallel_for(ys.size(), ctx.threads,
                             [&](std::size_t i) { values[i] = density(ys[i]); });
  bajd::DensityGrid grid{0.0, 0.0, std::move(ys), std::move(values)};
  if (ctx.format == "json") {
    nlohmann::json j{{"y", grid.ys}, {"density", grid.values}};
    auto out = bajd::detail::open_for_write(ctx.out_dir / "invariant.json");
    out << j.dump(2) << "\n";
  } else {
    bajd::write_density_csv(ctx.out_dir / "invariant.csv", grid);
  }
}

void run_sample(const CommandContext& ctx, int n, double t, double x, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> draws(static_cast<std::size_t>(n));
  for (auto& v : draws) v = bajd::sample_bajd(ctx.params, t, x, rng);
  if (ctx.format == "json") {
    bajd::write_samples_json(ctx.out_dir / "samples.json", draws);
  } else {
    bajd::write_samples_csv(ctx.out_dir / "samples.csv", draws);
  }
}

void run_simulate(const CommandContext& ctx, double dt, double horizon, double x0,
                  std::uint64_t seed, double delta) {
  const bajd::PathConfig cfg{dt, horizon, x0, seed};
  const auto path = bajd::euler_path(ctx.params, cfg);
  bajd::write_path_csv(ctx.out_dir / "path.csv", path);
  bajd::write_jumps_csv(ctx.out_dir / "jumps.csv", path);
  if (delta > 0.0) {
    const auto chain = bajd::skeleton(path, delta);
    auto out = bajd::detail::open_for_write(ctx.out_dir / "skeleton.csv");
    out << "time,state\n";
    for (std::size_t i = 0; i < chain.size(); ++i) {
      out << bajd::detail::format_double((i + 1) * delta) << ","
          << bajd::detail::format_double(chain[i]) << "\n";
    }
  }
}

void run_ergodicity(const CommandContext& ctx, std::vector<double> xs, std::vector<double> ts) {
  if (xs.empty()) xs = {0.0, 2.0, 5.0};
  if (ts.empty()) ts = {0.5, 1.0, 2.0, 4.0, 6.0, 8.0};
  const auto cert =
      bajd::build_certificate(ctx.params, bajd::default_drift_exponent(ctx.params));
  // one flat (x, t) task list so the grid parallelizes evenly
  std::vector<double> tvs(xs.size() * ts.size());
  bajd::detail::parallel_for(tvs.size(), ctx.threads, [&](std::size_t k) {
    const double x = xs[k / ts.size()];
    const double t = ts[k % ts.size()];
    tvs[k] = bajd::tv_distance(ctx.params, t, x);
  });
  std::vector<bajd::DecayFit> fits;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::vector<double> slice(tvs.begin() + static_cast<std::ptrdiff_t>(i * ts.size()),
                              tvs.begin() + static_cast<std::ptrdiff_t>((i + 1) * ts.size()));
    auto fit = bajd::fit_decay_from_values(ts, std::move(slice));
    if (fit.excluded > 0) {
      std::fprintf(stderr, "warning: %zu nonpositive TV values excluded at x = %g\n",
                   fit.excluded, xs[i]);
    }
    bajd::write_tv_csv(ctx.out_dir / ("tv_x" + format_x_tag(xs[i]) + ".csv"), fit.t_grid,
                       fit.tv_values);
    fits.push_back(std::move(fit));
  }
  const auto report = bajd::ergodicity_report(ctx.params, cert, xs, fits);
  auto out = bajd::detail::open_for_write(ctx.out_dir / "report.json");
  out << report.dump(2) << "\n";
}

int run_validate(const CommandContext& ctx) {
  bajd::ValidationConfig cfg;
  cfg.params = ctx.params;
  cfg.threads = ctx.threads;
  const auto results = bajd::run_validation(cfg);
  for (const auto& r : results) {
    std::printf("%s\n", bajd::format_criterion_line(r).c_str());
  }
  if (!bajd::all_passed(results)) {
    std::printf("FAILURES PRESENT\n");
    return 3;
  }
  std::printf("ALL PASS: %zu criteria\n", results.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transition densities, transforms, exact samplers, and ergodicity "
               "diagnostics of the basic affine jump-diffusion"};
  app.require_subcommand(1);

  std::string params_path;
  std::string out_dir = ".";
  std::string format = "csv";
  std::uint64_t seed = 0;
  std::vector<double> t_values;
  std::vector<double> x_values;
  std::string u_grid;
  std::string y_grid;
  int n_samples = 1000;
  double dt = 1e-3;
  double horizon = 1.0;
  double delta = 0.0;

  app.add_option("--params", params_path, "JSON file with model constants a, theta, sigma, c, d")
      ->required();
  app.add_option("--out", out_dir, "output directory (default: current)");
  app.add_option("--format", format, "output format for grids and samples")
      ->check(CLI::IsMember({"csv", "json"}));
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (required for stochastic commands)");
  app.add_option("--t", t_values, "time argument(s)");
  app.add_option("--x", x_values, "initial state(s)");
  app.add_option("--u-grid", u_grid, "frequency grid, lo:hi:count or comma list");
  app.add_option("--y-grid", y_grid, "state grid, lo:hi:count or comma list");
  app.add_option("--n", n_samples, "number of draws")->check(CLI::PositiveNumber);
  app.add_option("--dt", dt, "Euler step")->check(CLI::PositiveNumber);
  app.add_option("--horizon", horizon, "simulation horizon")->check(CLI::PositiveNumber);
  app.add_option("--delta", delta, "skeleton sampling interval (simulate)");

  auto* cmd_density = app.add_subcommand("density", "transition density on a state grid");
  auto* cmd_cf = app.add_subcommand("cf", "characteristic function on a frequency grid");
  auto* cmd_invariant = app.add_subcommand("invariant", "invariant density on a state grid");
  auto* cmd_sample = app.add_subcommand("sample", "exact transition draws");
  auto* cmd_simulate = app.add_subcommand("simulate", "Euler path with exact jumps");
  auto* cmd_ergodicity =
      app.add_subcommand("ergodicity", "drift certificate and TV decay report");
  auto* cmd_validate = app.add_subcommand("validate", "run the acceptance suite");
  for (auto* sub : {cmd_density, cmd_cf, cmd_invariant, cmd_sample, cmd_simulate,
                    cmd_ergodicity, cmd_validate}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    CommandContext ctx{bajd::load_params(params_path), out_dir, format,
                       bajd::detail::thread_budget(0)};
    std::filesystem::create_directories(ctx.out_dir);

    auto single = [&](const std::vector<double>& vs, double fallback, const char* what) {
      if (vs.empty()) return fallback;
      if (vs.size() > 1) {
        throw std::invalid_argument(std::string("exactly one ") + what +
                                    " expected for this command");
      }
      return vs.front();
    };
    auto require_seed = [&]() {
      if (seed_opt->count() == 0) {
        throw std::invalid_argument("--seed is required for stochastic commands");
      }
    };

    if (cmd_density->parsed()) {
      run_density(ctx, single(t_values, 1.0, "--t"), single(x_values, 1.0, "--x"), y_grid);
    } else if (cmd_cf->parsed()) {
      run_cf(ctx, single(t_values, 1.0, "--t"), single(x_values, 1.0, "--x"), u_grid);
    } else if (cmd_invariant->parsed()) {
      run_invariant(ctx, y_grid);
    } else if (cmd_sample->parsed()) {
      require_seed();
      run_sample(ctx, n_samples, single(t_values, 1.0, "--t"), single(x_values, 1.0, "--x"),
                 seed);
    } else if (cmd_simulate->parsed()) {
      require_seed();
      run_simulate(ctx, dt, horizon, single(x_values, 1.0, "--x"), seed, delta);
    } else if (cmd_ergodicity->parsed()) {
      run_ergodicity(ctx, x_values, t_values);
    } else if (cmd_validate->parsed()) {
      return run_validate(ctx);
    }
    return 0;
  } catch (const bajd::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  }
}
