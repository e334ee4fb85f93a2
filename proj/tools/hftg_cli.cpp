// Command-line front end: experiment runs, mesh studies and small CSV dumps.
//
// Exit codes: 0 success, 2 configuration or argument error, 3 numerical failure.

#include "hftg/checks/selftest.hpp"
#include "hftg/errors.hpp"
#include "hftg/experiment.hpp"
#include "hftg/frac_ops.hpp"
#include "hftg/io.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kConfigExit = 2;
constexpr int kNumericalExit = 3;

struct Domain {
  double a, b;
};

Domain domain_of(hftg::Problem p) {
  return p == hftg::Problem::Deconvolution ? Domain{1.0, 2.0} : Domain{1.0, 3.0};
}

// Writes to the file when a path is given, else stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw hftg::ConfigError("out", "cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

// Argument-level failures in the dump commands are configuration errors, not numerical ones.
template <class F>
auto as_argument(const char* field, F&& make) {
  try {
    return make();
  } catch (const hftg::DomainError& e) {
    throw hftg::ConfigError(field, e.what());
  }
}

void print_report(const hftg::MetricsReport& r) {
  using hftg::io::format_double;
  std::cout << "relative_l2_error " << format_double(r.relative_l2_error) << '\n'
            << "acceptance_rate " << format_double(r.acceptance_rate) << '\n'
            << "n_samples " << r.n_samples << "  burn_in " << r.burn_in << '\n'
            << "wall_time_seconds " << format_double(r.wall_time_seconds) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hadamard fractional TV-Gaussian Bayesian inversion"};
  app.require_subcommand(1);

  std::string config_path, out_dir, mesh_config_path, ns_text = "80,160,320";
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "run one experiment from a JSON config");
  run->add_option("--config", config_path, "JSON config file")->required();
  run->add_option("--seed", seed, "override pcn.seed");
  run->add_option("--out", out_dir, "override output_dir");

  auto* mesh = app.add_subcommand("mesh-study", "repeat a config over grid sizes");
  mesh->add_option("--config", mesh_config_path, "JSON config file")->required();
  mesh->add_option("--ns", ns_text, "comma-separated interval counts");
  std::string mesh_out;
  mesh->add_option("--out", mesh_out, "override output_dir");

  std::string truth_problem, truth_out;
  int truth_n = 100;
  auto* truth = app.add_subcommand("truth", "dump the true field of a problem as CSV");
  truth->add_option("--problem", truth_problem, "deconvolution | heat_source | elliptic")->required();
  truth->add_option("--n", truth_n, "number of grid intervals");
  truth->add_option("--out", truth_out, "output file (default stdout)");

  double weights_alpha = 0.9;
  int weights_j = 10;
  std::string weights_out;
  auto* weights = app.add_subcommand("weights", "dump Grunwald-Letnikov weights as CSV");
  weights->add_option("--alpha", weights_alpha, "fractional order")->required();
  weights->add_option("--j", weights_j, "last index")->required();
  weights->add_option("--out", weights_out, "output file (default stdout)");

  double op_alpha = 0.9, op_a = 1.0, op_b = 2.0;
  int op_n = 20, op_row = -1;
  std::string op_dir = "riesz", op_out;
  auto* op = app.add_subcommand("operator", "dump rows of the discrete fractional operator as CSV");
  op->add_option("--alpha", op_alpha, "fractional order")->required();
  op->add_option("--n", op_n, "number of grid intervals");
  op->add_option("--a", op_a, "left end");
  op->add_option("--b", op_b, "right end");
  op->add_option("--direction", op_dir, "left | right | riesz");
  op->add_option("--row", op_row, "single row (default: all)");
  op->add_option("--out", op_out, "output file (default stdout)");

  auto* selftest = app.add_subcommand("selftest", "quick property checks of every module");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*run) {
      hftg::ExperimentConfig cfg = hftg::load_config(config_path);
      if (seed) cfg.seed = *seed;
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      print_report(hftg::run_experiment(cfg));
    } else if (*mesh) {
      hftg::ExperimentConfig cfg = hftg::load_config(mesh_config_path);
      if (!mesh_out.empty()) cfg.output_dir = mesh_out;
      std::vector<int> sizes;
      std::stringstream ss(ns_text);
      for (std::string item; std::getline(ss, item, ',');) {
        try {
          std::size_t used = 0;
          sizes.push_back(std::stoi(item, &used));
          if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
          throw hftg::ConfigError("ns", "--ns expects comma-separated integers, got '" + item + "'");
        }
      }
      std::cout << "N,relative_l2_error,acceptance_rate\n";
      for (const auto& row : hftg::mesh_study(cfg, sizes)) {
        std::cout << row.intervals << ',' << hftg::io::format_double(row.relative_l2_error) << ','
                  << hftg::io::format_double(row.acceptance_rate) << '\n';
      }
    } else if (*truth) {
      const hftg::Problem p = hftg::parse_problem(truth_problem);
      const Domain d = domain_of(p);
      const hftg::LogGrid grid = as_argument("n", [&] { return hftg::LogGrid(d.a, d.b, truth_n); });
      const hftg::Field values = hftg::make_truth(p, grid);
      Sink sink(truth_out);
      sink.stream() << "x,value\n";
      for (int j = 0; j < grid.size(); ++j) {
        sink.stream() << hftg::io::format_double(grid.node(j)) << ','
                      << hftg::io::format_double(values[j]) << '\n';
      }
    } else if (*weights) {
      if (weights_j < 0) throw hftg::ConfigError("j", "--j must be >= 0");
      const hftg::GLWeights w =
          as_argument("alpha", [&] { return hftg::GLWeights(weights_alpha, weights_j); });
      Sink sink(weights_out);
      sink.stream() << "j,omega\n";
      for (int j = 0; j < w.size(); ++j) {
        sink.stream() << j << ',' << hftg::io::format_double(w[j]) << '\n';
      }
    } else if (*op) {
      hftg::Direction dir;
      if (op_dir == "left") dir = hftg::Direction::Left;
      else if (op_dir == "right") dir = hftg::Direction::Right;
      else if (op_dir == "riesz") dir = hftg::Direction::Riesz;
      else throw hftg::ConfigError("direction", "--direction must be left, right or riesz");
      const hftg::FracOperator fo = as_argument(
          "operator", [&] { return hftg::FracOperator(hftg::LogGrid(op_a, op_b, op_n), op_alpha, dir); });
      const Eigen::MatrixXd& m = fo.matrix();
      if (op_row >= m.rows()) throw hftg::ConfigError("row", "--row is past the last node");
      Sink sink(op_out);
      sink.stream() << "row";
      for (int c = 0; c < m.cols(); ++c) sink.stream() << ",c" << c;
      sink.stream() << '\n';
      for (int r = 0; r < m.rows(); ++r) {
        if (op_row >= 0 && r != op_row) continue;
        sink.stream() << r;
        for (int c = 0; c < m.cols(); ++c) sink.stream() << ',' << hftg::io::format_double(m(r, c));
        sink.stream() << '\n';
      }
    } else if (*selftest) {
      return hftg::checks::run_selftest(std::cout) ? 0 : 1;
    }
  } catch (const hftg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const hftg::PreconditionError& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kConfigExit;
  } catch (const hftg::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalExit;
  } catch (const hftg::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kNumericalExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
