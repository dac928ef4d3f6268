#include "cli/commands.hpp"

#include "mvop/errors.hpp"
#include "mvop/gram.hpp"
#include "mvop/spectral.hpp"
#include "mvop/timeband.hpp"
#include "mvop/verify.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace mvop::cli {
namespace {

using json = nlohmann::ordered_json;

struct RunConfig {
  double alpha = 0.0;
  double beta = 0.0;
  int order_n = 0;
  double omega = 1.0;
  std::optional<int> quad_order;
  double tol = 1e-10;
  int grid_points = 201;
  int top_k = 4;
  std::string format;
  std::string output;
  unsigned long long seed = kDefaultSeed;
  bool check = false;
  double x_min = -1.0;
  double x_max = 1.0;
  double y_min = -1.0;
  double y_max = 1.0;
  std::vector<double> fault;  // row, col, delta

  ModelParams params() const {
    return ModelParams::make(alpha, beta, order_n, omega, quad_order, tol);
  }
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void add_model_options(CLI::App& cmd, RunConfig& cfg, const std::string& default_format) {
  cfg.format = default_format;
  cmd.add_option("--alpha", cfg.alpha, "Jacobi exponent alpha (> -1)")->required();
  cmd.add_option("--beta", cfg.beta, "Jacobi exponent beta (> -1)")->required();
  cmd.add_option("--order-n", cfg.order_n, "time-limit level N (>= 0)")->required();
  cmd.add_option("--omega", cfg.omega, "band edge Omega in (-1, 1]")->required();
  cmd.add_option("--quad-order", cfg.quad_order, "Gauss-Jacobi points (default max(64, 2N+16))");
  cmd.add_option("--tol", cfg.tol, "quadrature self-convergence tolerance")
      ->capture_default_str();
  cmd.add_option("--format", cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd.add_option("--output", cfg.output, "output file (default: standard output)");
  cmd.add_option("--seed", cfg.seed, "seed for randomized sample points")->capture_default_str();
}

json params_json(const ModelParams& p) {
  return json{{"alpha", p.alpha()},   {"beta", p.beta()},
              {"N", p.N()},           {"Omega", p.omega()},
              {"quad_order", p.quad_order()}, {"tol", p.tol()}};
}

// JSON has no NaN or infinity; non-finite values become an error marker.
json number(double v) {
  if (std::isfinite(v)) return v;
  return json{{"status", "error"}};
}

json number_array(const std::vector<double>& vs) {
  json arr = json::array();
  for (double v : vs) arr.push_back(number(v));
  return arr;
}

std::string csv_number(double v) { return fmt::format("{:.17g}", v); }

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty() || cfg.output == "-") {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open output file '" + cfg.output + "' for writing");
  f << text;
  f.close();
  if (!f) throw IoError("failed writing output file '" + cfg.output + "'");
}

void emit_sidecar(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open output file '" + path + "' for writing");
  f << text;
  if (!f) throw IoError("failed writing output file '" + path + "'");
}

std::vector<double> uniform_grid(double lo, double hi, int count) {
  std::vector<double> xs(static_cast<std::size_t>(count));
  if (count == 1) {
    xs[0] = 0.5 * (lo + hi);
    return xs;
  }
  for (int i = 0; i < count; ++i) xs[i] = lo + (hi - lo) * i / (count - 1);
  return xs;
}

// --- verify ---------------------------------------------------------------------

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const ModelParams params = cfg.params();
  VerifyOptions opts;
  opts.seed = cfg.seed;
  if (!cfg.fault.empty()) {
    if (cfg.fault.size() != 3) throw ParameterError("fault injection takes ROW COL DELTA");
    opts.ltilde_fault =
        LtildeFault{static_cast<int>(cfg.fault[0]), static_cast<int>(cfg.fault[1]), cfg.fault[2]};
  }
  const VerifyReport rep = run_verify(params, opts);

  json checks = json::array();
  for (const CheckResult& c : rep.checks) {
    json entry{{"name", c.name}};
    if (c.error) {
      entry["status"] = "error";
      entry["message"] = c.detail;
      entry["threshold"] = number(c.threshold);
    } else {
      entry["residual"] = number(c.residual);
      entry["threshold"] = number(c.threshold);
      entry["pass"] = c.passed;
    }
    checks.push_back(std::move(entry));
  }
  json doc{{"command", "verify"},
           {"params", params_json(params)},
           {"seed", cfg.seed},
           {"checks", std::move(checks)},
           {"status", rep.all_passed() ? "pass" : "fail"}};
  emit(cfg, doc.dump(2) + "\n", out);
  return rep.all_passed() ? kPass : kCheckFailure;
}

// --- spectrum -------------------------------------------------------------------

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const ModelParams params = cfg.params();
  const std::vector<ProlatePair> pairs = prolate_eigenpairs(params);
  const SpectrumReport report = spectrum_report(params);

  if (cfg.format == "json") {
    json sectors = json::array();
    for (const SectorSpectrum& s : report.sectors) {
      std::vector<double> lambda, chi;
      for (const ProlatePair& p : pairs) {
        if (p.sector != s.sector) continue;
        lambda.push_back(p.lambda);
        chi.push_back(p.chi);
      }
      json gaps{{"M", number(s.gap_M)},
                {"Ltilde", number(s.gap_Ltilde)},
                {"ratio", s.ratio ? number(*s.ratio) : json(nullptr)},
                {"M_unresolved", s.m_gap_unresolved},
                {"chi_monotone_in_lambda", s.chi_monotone_in_lambda}};
      sectors.push_back(json{{"sector", s.sector},
                             {"lambda", number_array(lambda)},
                             {"chi", number_array(chi)},
                             {"eigenvalues_M", number_array(s.lambda)},
                             {"eigenvalues_Ltilde", number_array(s.chi)},
                             {"gaps", std::move(gaps)}});
    }
    json doc{{"params", params_json(params)}, {"sectors", std::move(sectors)}};
    emit(cfg, doc.dump(2) + "\n", out);
    return kPass;
  }

  std::string csv = "sector,index,lambda,chi\n";
  for (int sector : {1, -1}) {
    int index = 0;
    for (const ProlatePair& p : pairs) {
      if (p.sector != sector) continue;
      csv += fmt::format("{},{},{},{}\n", sector, index++, csv_number(p.lambda), csv_number(p.chi));
    }
  }
  emit(cfg, csv, out);
  if (!cfg.output.empty() && cfg.output != "-") {
    std::string gaps = "sector,gap_M,gap_Ltilde,ratio,M_unresolved\n";
    for (const SectorSpectrum& s : report.sectors) {
      gaps += fmt::format("{},{},{},{},{}\n", s.sector, csv_number(s.gap_M),
                          csv_number(s.gap_Ltilde), s.ratio ? csv_number(*s.ratio) : "",
                          s.m_gap_unresolved ? 1 : 0);
    }
    emit_sidecar(cfg.output + ".gaps.csv", gaps);
  }
  return kPass;
}

// --- eigenfunctions -------------------------------------------------------------

constexpr double kGridInset = 1e-6;
constexpr double kIntegralResidualBound = 1e-8;

int cmd_eigenfunctions(const RunConfig& cfg, std::ostream& out) {
  const ModelParams params = cfg.params();
  if (cfg.grid_points < 1) throw ParameterError("--grid-points must be at least 1");
  if (cfg.top_k < 1) throw ParameterError("--top-k must be at least 1");
  const std::vector<ProlatePair> pairs = prolate_eigenpairs(params);
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(cfg.top_k), pairs.size());
  const std::vector<double> grid =
      uniform_grid(-1.0 + kGridInset, params.omega() - kGridInset, cfg.grid_points);

  std::vector<std::vector<Eigen::RowVector2d>> samples;
  for (std::size_t j = 0; j < k; ++j) samples.push_back(eigenfunction_sample(params, pairs[j], grid));

  std::vector<double> residual;
  double worst = 0.0;
  if (cfg.check) {
    for (double x : grid) {
      double r = 0.0;
      for (std::size_t j = 0; j < k; ++j) r = std::max(r, integral_equation_residual(params, pairs[j], x));
      residual.push_back(r);
      worst = std::max(worst, r);
    }
  }

  if (cfg.format == "json") {
    json fns = json::array();
    for (std::size_t j = 0; j < k; ++j) {
      json values = json::array();
      for (const auto& v : samples[j]) values.push_back(json::array({number(v(0)), number(v(1))}));
      fns.push_back(json{{"index", j},
                         {"sector", pairs[j].sector},
                         {"lambda", number(pairs[j].lambda)},
                         {"chi", number(pairs[j].chi)},
                         {"values", std::move(values)}});
    }
    json doc{{"params", params_json(params)}, {"x", number_array(grid)}, {"eigenfunctions", std::move(fns)}};
    if (cfg.check) {
      doc["residual"] = number_array(residual);
      doc["residual_bound"] = kIntegralResidualBound;
    }
    emit(cfg, doc.dump(2) + "\n", out);
  } else {
    std::string csv = "x";
    for (std::size_t j = 0; j < k; ++j) csv += fmt::format(",phi{}_1,phi{}_2", j, j);
    if (cfg.check) csv += ",residual";
    csv += "\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      csv += csv_number(grid[i]);
      for (std::size_t j = 0; j < k; ++j) {
        csv += "," + csv_number(samples[j][i](0)) + "," + csv_number(samples[j][i](1));
      }
      if (cfg.check) csv += "," + csv_number(residual[i]);
      csv += "\n";
    }
    emit(cfg, csv, out);
  }
  return cfg.check && !(worst <= kIntegralResidualBound) ? kCheckFailure : kPass;
}

// --- kernel ---------------------------------------------------------------------

int cmd_kernel(const RunConfig& cfg, std::ostream& out) {
  const ModelParams params = cfg.params();
  if (cfg.grid_points < 1) throw ParameterError("--grid-points must be at least 1");
  if (!(cfg.x_min <= cfg.x_max) || !(cfg.y_min <= cfg.y_max)) {
    throw ParameterError("kernel ranges need min <= max");
  }
  const std::vector<double> xs = uniform_grid(cfg.x_min, cfg.x_max, cfg.grid_points);
  const std::vector<double> ys = uniform_grid(cfg.y_min, cfg.y_max, cfg.grid_points);

  if (cfg.format == "json") {
    json rows = json::array();
    for (double x : xs) {
      for (double y : ys) {
        const Matrix2 k = kernel_k(params, x, y);
        rows.push_back(json{{"x", number(x)},
                            {"y", number(y)},
                            {"k", json::array({json::array({number(k(0, 0)), number(k(0, 1))}),
                                               json::array({number(k(1, 0)), number(k(1, 1))})})}});
      }
    }
    json doc{{"params", params_json(params)}, {"rows", std::move(rows)}};
    emit(cfg, doc.dump(2) + "\n", out);
    return kPass;
  }
  std::string csv = "x,y,k11,k12,k21,k22\n";
  for (double x : xs) {
    for (double y : ys) {
      const Matrix2 k = kernel_k(params, x, y);
      csv += fmt::format("{},{},{},{},{},{}\n", csv_number(x), csv_number(y), csv_number(k(0, 0)),
                         csv_number(k(0, 1)), csv_number(k(1, 0)), csv_number(k(1, 1)));
    }
  }
  emit(cfg, csv, out);
  return kPass;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matrix-valued Jacobi time-and-band limiting toolkit"};
  app.require_subcommand(1);

  RunConfig verify_cfg, spectrum_cfg, eig_cfg, kernel_cfg;

  CLI::App* verify = app.add_subcommand("verify", "run all identity and commutation checks");
  add_model_options(*verify, verify_cfg, "json");
  verify->add_option("--inject-ltilde-fault", verify_cfg.fault,
                     "testing hook: ROW COL DELTA added to the flattened L~")
      ->expected(3)
      ->group("");

  CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues of M and L~ per T-sector");
  add_model_options(*spectrum, spectrum_cfg, "csv");

  CLI::App* eig = app.add_subcommand("eigenfunctions", "sample the leading eigenfunctions of S");
  add_model_options(*eig, eig_cfg, "csv");
  eig->add_option("--grid-points", eig_cfg.grid_points, "number of grid points")->capture_default_str();
  eig->add_option("--top-k", eig_cfg.top_k, "number of eigenfunctions")->capture_default_str();
  eig->add_flag("--check", eig_cfg.check, "add the integral-equation residual column");

  CLI::App* kernel = app.add_subcommand("kernel", "tabulate k(x, y) on a product grid");
  add_model_options(*kernel, kernel_cfg, "csv");
  kernel->add_option("--grid-points", kernel_cfg.grid_points, "points per axis")->capture_default_str();
  kernel->add_option("--x-min", kernel_cfg.x_min)->capture_default_str();
  kernel->add_option("--x-max", kernel_cfg.x_max)->capture_default_str();
  kernel->add_option("--y-min", kernel_cfg.y_min)->capture_default_str();
  kernel->add_option("--y-max", kernel_cfg.y_max)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsageError;
  }

  try {
    if (*verify) return cmd_verify(verify_cfg, out);
    if (*spectrum) return cmd_spectrum(spectrum_cfg, out);
    if (*eig) return cmd_eigenfunctions(eig_cfg, out);
    if (*kernel) return cmd_kernel(kernel_cfg, out);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "internal failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kUsageError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"mvop"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace mvop::cli
