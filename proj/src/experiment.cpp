#include "hftg/experiment.hpp"

#include "hftg/errors.hpp"
#include "hftg/io.hpp"
#include "hftg/prior.hpp"
#include "hftg/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>

namespace hftg {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Problem p) {
  switch (p) {
    case Problem::Deconvolution: return "deconvolution";
    case Problem::HeatSource: return "heat_source";
    case Problem::Elliptic: return "elliptic";
  }
  return "unknown";
}

Problem parse_problem(std::string_view name) {
  if (name == "deconvolution") return Problem::Deconvolution;
  if (name == "heat_source") return Problem::HeatSource;
  if (name == "elliptic") return Problem::Elliptic;
  throw ConfigError("problem", "unknown problem '" + std::string(name) +
                                   "' (expected deconvolution, heat_source or elliptic)");
}

std::string Order::label() const { return tv ? "tv" : io::format_double(alpha); }

std::optional<double> default_lambda(Problem problem, const Order& order) {
  // Columns: alpha = 0.1, 0.9, 1.1, 1.9, tv.
  struct Row {
    double a01, a09, a11, a19, tv;
  };
  Row row{};
  switch (problem) {
    case Problem::Deconvolution: row = {0.01, 2.0, 0.1, 0.0001, 2.0}; break;
    case Problem::HeatSource: row = {0.001, 0.06, 0.008, 0.0002, 0.08}; break;
    case Problem::Elliptic: row = {0.08, 2.0, 0.05, 0.001, 2.0}; break;
  }
  // alpha = 1 is the same operator as the tv label.
  if (order.tv || order.alpha == 1.0) return row.tv;
  if (order.alpha == 0.1) return row.a01;
  if (order.alpha == 0.9) return row.a09;
  if (order.alpha == 1.1) return row.a11;
  if (order.alpha == 1.9) return row.a19;
  return std::nullopt;
}

namespace {

constexpr double kDefaultAlpha = 0.9;

struct Domain {
  double a, b;
};

Domain domain_of(Problem p) {
  return p == Problem::Deconvolution ? Domain{1.0, 2.0} : Domain{1.0, 3.0};
}

double burn_in_fraction(Problem p) { return p == Problem::HeatSource ? 0.25 : 0.2; }

}  // namespace

ExperimentConfig default_config(Problem problem) {
  ExperimentConfig cfg;
  cfg.problem = problem;
  cfg.order = Order{kDefaultAlpha, false};
  switch (problem) {
    case Problem::Deconvolution:
      cfg.a = 1.0;
      cfg.b = 2.0;
      cfg.intervals = 100;
      cfg.gamma = 0.01;
      cfg.length = 0.02;
      cfg.noise_sigma = 0.01;
      cfg.kernel_width = 0.03;
      cfg.beta = 0.03;
      cfg.n_samples = 200000;
      cfg.thin = 1;
      break;
    case Problem::HeatSource:
      cfg.a = 1.0;
      cfg.b = 3.0;
      cfg.intervals = 200;
      cfg.heat = HeatSettings{1.0, 120, 0.5, 0.5};
      cfg.gamma = 0.5;
      cfg.length = 0.03;
      cfg.noise_sigma = 0.001;
      cfg.beta = 0.02;
      cfg.n_samples = 1000000;
      cfg.thin = 10;
      break;
    case Problem::Elliptic:
      cfg.a = 1.0;
      cfg.b = 3.0;
      cfg.intervals = 200;
      cfg.gamma = 1.0;
      cfg.length = 0.04;
      cfg.noise_sigma = 0.001;
      cfg.beta = 0.01;
      cfg.n_samples = 100000;
      cfg.thin = 1;
      break;
  }
  cfg.burn_in = static_cast<std::int64_t>(burn_in_fraction(problem) * cfg.n_samples);
  cfg.lambda = *default_lambda(problem, cfg.order);
  return cfg;
}

namespace {

void reject_unknown(const json& obj, const std::string& prefix, std::set<std::string> known) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) {
      throw ConfigError(prefix + key, "unknown config field '" + prefix + key + "'");
    }
  }
}

template <class T>
T get_as(const json& obj, const std::string& key, const std::string& field) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(field, "config field '" + field + "' has the wrong type: " + e.what());
  }
}

const json* find(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw ConfigError(field, "invalid config field '" + field + "': " + why);
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  reject_unknown(j, "", {"problem", "grid", "alpha", "lambda", "prior", "noise_sigma",
                         "kernel_width", "heat", "pcn", "initial_state", "repeats", "data_file",
                         "export_chain", "output_dir"});
  if (!find(j, "problem")) throw ConfigError("problem", "config field 'problem' is required");
  ExperimentConfig cfg = default_config(parse_problem(get_as<std::string>(j, "problem", "problem")));

  if (const json* grid = find(j, "grid")) {
    require(grid->is_object(), "grid", "must be an object");
    reject_unknown(*grid, "grid.", {"a", "b", "N"});
    if (find(*grid, "a")) cfg.a = get_as<double>(*grid, "a", "grid.a");
    if (find(*grid, "b")) cfg.b = get_as<double>(*grid, "b", "grid.b");
    if (find(*grid, "N")) cfg.intervals = get_as<int>(*grid, "N", "grid.N");
  }
  const Domain dom = domain_of(cfg.problem);
  require(std::abs(cfg.a - dom.a) <= 1e-12, "grid.a",
          "must equal the problem domain's left end " + io::format_double(dom.a));
  require(std::abs(cfg.b - dom.b) <= 1e-12, "grid.b",
          "must equal the problem domain's right end " + io::format_double(dom.b));
  require(cfg.intervals >= 2, "grid.N", "must be >= 2");

  if (const json* alpha = find(j, "alpha")) {
    if (alpha->is_string()) {
      require(alpha->get<std::string>() == "tv", "alpha", "string value must be \"tv\"");
      cfg.order = Order{1.0, true};
    } else {
      require(alpha->is_number(), "alpha", "must be a number or \"tv\"");
      const double a = alpha->get<double>();
      require(a > 0.0 && a < 2.0, "alpha", "must lie in (0,1] or (1,2)");
      cfg.order = Order{a, false};
    }
  }
  if (find(j, "lambda")) {
    cfg.lambda = get_as<double>(j, "lambda", "lambda");
  } else {
    auto lam = default_lambda(cfg.problem, cfg.order);
    require(lam.has_value(), "lambda", "no default for alpha = " + cfg.order.label() + "; set it");
    cfg.lambda = *lam;
  }
  require(cfg.lambda >= 0.0 && std::isfinite(cfg.lambda), "lambda", "must be >= 0");

  if (const json* prior = find(j, "prior")) {
    require(prior->is_object(), "prior", "must be an object");
    reject_unknown(*prior, "prior.", {"gamma", "d"});
    if (find(*prior, "gamma")) cfg.gamma = get_as<double>(*prior, "gamma", "prior.gamma");
    if (find(*prior, "d")) cfg.length = get_as<double>(*prior, "d", "prior.d");
  }
  require(cfg.gamma > 0.0, "prior.gamma", "must be > 0");
  require(cfg.length > 0.0, "prior.d", "must be > 0");

  if (find(j, "noise_sigma")) cfg.noise_sigma = get_as<double>(j, "noise_sigma", "noise_sigma");
  require(cfg.noise_sigma > 0.0 && std::isfinite(cfg.noise_sigma), "noise_sigma", "must be > 0");

  if (find(j, "kernel_width")) cfg.kernel_width = get_as<double>(j, "kernel_width", "kernel_width");
  require(cfg.kernel_width > 0.0, "kernel_width", "must be > 0");

  if (const json* heat = find(j, "heat")) {
    require(heat->is_object(), "heat", "must be an object");
    reject_unknown(*heat, "heat.", {"final_time", "time_steps", "theta0", "theta1"});
    auto& h = cfg.heat;
    if (find(*heat, "final_time")) h.final_time = get_as<double>(*heat, "final_time", "heat.final_time");
    if (find(*heat, "time_steps")) h.time_steps = get_as<int>(*heat, "time_steps", "heat.time_steps");
    if (find(*heat, "theta0")) h.theta_diffusion = get_as<double>(*heat, "theta0", "heat.theta0");
    if (find(*heat, "theta1")) h.theta_convection = get_as<double>(*heat, "theta1", "heat.theta1");
  }
  require(cfg.heat.final_time > 0.0, "heat.final_time", "must be > 0");
  require(cfg.heat.time_steps >= 1, "heat.time_steps", "must be >= 1");
  require(cfg.heat.theta_diffusion >= 0.0 && cfg.heat.theta_diffusion <= 1.0, "heat.theta0",
          "must lie in [0,1]");
  require(cfg.heat.theta_convection >= 0.0 && cfg.heat.theta_convection <= 1.0, "heat.theta1",
          "must lie in [0,1]");

  if (const json* pcn = find(j, "pcn")) {
    require(pcn->is_object(), "pcn", "must be an object");
    reject_unknown(*pcn, "pcn.", {"beta", "n_samples", "burn_in", "thin", "seed"});
    if (find(*pcn, "beta")) cfg.beta = get_as<double>(*pcn, "beta", "pcn.beta");
    if (find(*pcn, "n_samples")) {
      cfg.n_samples = get_as<std::int64_t>(*pcn, "n_samples", "pcn.n_samples");
      cfg.burn_in = static_cast<std::int64_t>(burn_in_fraction(cfg.problem) * cfg.n_samples);
    }
    if (find(*pcn, "burn_in")) cfg.burn_in = get_as<std::int64_t>(*pcn, "burn_in", "pcn.burn_in");
    if (find(*pcn, "thin")) cfg.thin = get_as<std::int64_t>(*pcn, "thin", "pcn.thin");
    if (find(*pcn, "seed")) cfg.seed = get_as<std::uint64_t>(*pcn, "seed", "pcn.seed");
  }
  require(cfg.beta > 0.0 && cfg.beta <= 1.0, "pcn.beta", "must lie in (0,1]");
  require(cfg.n_samples >= 1, "pcn.n_samples", "must be >= 1");
  require(cfg.burn_in >= 0 && cfg.burn_in < cfg.n_samples, "pcn.burn_in",
          "must satisfy 0 <= burn_in < n_samples");
  require(cfg.thin >= 1, "pcn.thin", "must be >= 1");

  if (find(j, "initial_state")) {
    const auto s = get_as<std::string>(j, "initial_state", "initial_state");
    require(s == "zero" || s == "prior", "initial_state", "must be \"zero\" or \"prior\"");
    cfg.prior_initial_state = s == "prior";
  }
  if (find(j, "repeats")) cfg.repeats = get_as<int>(j, "repeats", "repeats");
  require(cfg.repeats >= 1, "repeats", "must be >= 1");
  if (find(j, "data_file")) cfg.data_file = get_as<std::string>(j, "data_file", "data_file");
  if (find(j, "export_chain")) cfg.export_chain = get_as<bool>(j, "export_chain", "export_chain");
  if (find(j, "output_dir")) cfg.output_dir = get_as<std::string>(j, "output_dir", "output_dir");
  return cfg;
}

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Byte offset -> line / column.
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + upto, '\n');
    const auto last_nl = text.substr(0, upto).rfind('\n');
    const auto column = upto - (last_nl == std::string_view::npos ? 0 : last_nl + 1) + 1;
    throw ConfigError("parse", "config parse error at line " + std::to_string(line) + ", column " +
                                   std::to_string(column) + ": " + e.what());
  }
  return config_from_json(j);
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("path", "cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["problem"] = std::string(to_string(cfg.problem));
  j["grid"] = {{"a", cfg.a}, {"b", cfg.b}, {"N", cfg.intervals}};
  if (cfg.order.tv) {
    j["alpha"] = "tv";
  } else {
    j["alpha"] = cfg.order.alpha;
  }
  j["lambda"] = cfg.lambda;
  j["prior"] = {{"gamma", cfg.gamma}, {"d", cfg.length}};
  j["noise_sigma"] = cfg.noise_sigma;
  j["kernel_width"] = cfg.kernel_width;
  j["heat"] = {{"final_time", cfg.heat.final_time},
               {"time_steps", cfg.heat.time_steps},
               {"theta0", cfg.heat.theta_diffusion},
               {"theta1", cfg.heat.theta_convection}};
  j["pcn"] = {{"beta", cfg.beta},
              {"n_samples", cfg.n_samples},
              {"burn_in", cfg.burn_in},
              {"thin", cfg.thin},
              {"seed", cfg.seed}};
  j["initial_state"] = cfg.prior_initial_state ? "prior" : "zero";
  j["repeats"] = cfg.repeats;
  j["data_file"] = cfg.data_file ? json(cfg.data_file->string()) : json(nullptr);
  j["export_chain"] = cfg.export_chain;
  j["output_dir"] = cfg.output_dir.string();
  return j;
}

double truth_value(Problem problem, double x) {
  using std::numbers::pi;
  switch (problem) {
    case Problem::Deconvolution:
      if (x >= 1.0 && x <= 1.5) return -16.0 * (x - 1.0) * (x - 1.5);
      if (x >= 1.7 && x <= 1.9) return 0.5;
      return 0.0;
    case Problem::HeatSource:
      if (x >= 1.15 && x <= 1.35) return 5.0;
      if (x >= 1.5 && x <= 2.5) return 5.0 * (std::sin(6.0 * pi * x + pi / 2.0) + 1.0);
      if (x >= 2.65 && x <= 2.85) return 5.0;
      return 0.0;
    case Problem::Elliptic:
      if (x >= 1.3 && x < 1.6) return 0.8;
      if (x >= 1.6 && x < 1.8) return 1.4;
      if (x >= 1.8 && x < 2.2) return 13.0 * (x - 1.8) * (x - 2.2) + 1.4;
      if (x >= 2.2 && x < 2.4) return 1.4;
      if (x >= 2.4 && x < 2.7) return 0.8;
      return 0.0;
  }
  return 0.0;
}

Field make_truth(Problem problem, const LogGrid& grid) {
  const Domain dom = domain_of(problem);
  if (std::abs(grid.a() - dom.a) > 1e-12 || std::abs(grid.b() - dom.b) > 1e-12) {
    throw DomainError("make_truth: grid [" + io::format_double(grid.a()) + ", " +
                      io::format_double(grid.b()) + "] does not match the " +
                      std::string(to_string(problem)) + " domain");
  }
  return grid.sample([problem](double x) { return truth_value(problem, x); });
}

double relative_error(const Field& estimate, const Field& truth) {
  if (estimate.size() != truth.size()) throw DomainError("relative_error: size mismatch");
  const double denom = truth.norm();
  if (denom == 0.0) throw DomainError("relative_error: truth is identically zero");
  return (estimate - truth).norm() / denom;
}

namespace {

struct Setup {
  ForwardMap forward;
  Eigen::VectorXd observation_x;
};

Setup make_forward(const ExperimentConfig& cfg, const LogGrid& grid, const Field& truth) {
  const Eigen::VectorXd interior = grid.nodes().segment(1, grid.intervals() - 1);
  switch (cfg.problem) {
    case Problem::Deconvolution: {
      auto model = std::make_shared<const ConvolutionModel>(grid, cfg.kernel_width);
      return {[model](const Field& f) { return convolve(*model, f); }, grid.nodes()};
    }
    case Problem::HeatSource: {
      auto model = std::make_shared<const HeatModel>(grid, cfg.heat);
      return {[model](const Field& f) { return heat_forward(*model, f); }, interior};
    }
    case Problem::Elliptic: {
      auto model = std::make_shared<const EllipticModel>(grid, truth, CoefficientCheck::Signed);
      const auto m = grid.intervals() - 1;
      return {[model, m](const Field& q) -> Eigen::VectorXd {
                try {
                  return elliptic_forward(*model, q);
                } catch (const SolveError&) {
                  // Inadmissible coefficient: infinite misfit, zero posterior density.
                  return Eigen::VectorXd::Constant(m, std::numeric_limits<double>::infinity());
                }
              },
              interior};
    }
  }
  throw DomainError("unknown problem");
}

// Removes the run's artifacts unless released.
class ArtifactGuard {
 public:
  explicit ArtifactGuard(std::vector<fs::path> paths) : paths_(std::move(paths)) {}
  ~ArtifactGuard() {
    if (released_) return;
    std::error_code ec;
    for (const auto& p : paths_) fs::remove(p, ec);
  }
  ArtifactGuard(const ArtifactGuard&) = delete;
  ArtifactGuard& operator=(const ArtifactGuard&) = delete;
  void release() { released_ = true; }

 private:
  std::vector<fs::path> paths_;
  bool released_ = false;
};

constexpr std::uint64_t kDataStream = 0x64617461;
constexpr std::uint64_t kInitStream = 0x696e6974;

}  // namespace

MetricsReport run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);
  std::vector<fs::path> artifacts = {dir / "truth.csv", dir / "data.csv", dir / "posterior_mean.csv",
                                     dir / "metrics.json"};
  if (cfg.export_chain) artifacts.push_back(dir / "chain.csv");
  ArtifactGuard guard(artifacts);

  const LogGrid grid(cfg.a, cfg.b, cfg.intervals);
  const Field truth = make_truth(cfg.problem, grid);
  const Setup setup = make_forward(cfg, grid, truth);

  Observation obs;
  if (cfg.data_file) {
    const auto cols = io::read_xy_csv(*cfg.data_file);
    if (cols.values.size() != setup.observation_x.size()) {
      throw DomainError("data_file has " + std::to_string(cols.values.size()) + " values, expected " +
                        std::to_string(setup.observation_x.size()));
    }
    obs = Observation{cols.values, cfg.noise_sigma};
  } else {
    const Eigen::VectorXd clean = setup.forward(truth);
    Rng noise(cfg.seed, kDataStream);
    obs = add_noise({clean.data(), static_cast<std::size_t>(clean.size())}, cfg.noise_sigma, noise);
  }

  const GaussianPrior prior(grid, cfg.gamma, cfg.length);
  const HFTVFunctional reg(grid, cfg.order.value(), cfg.lambda);
  const Potential potential(setup.forward, obs.values, obs.sigma);

  Field u0 = grid.zeros();
  if (cfg.prior_initial_state) {
    Rng init(cfg.seed, kInitStream);
    u0 = prior.sample(init);
  }

  MetricsReport report;
  Field mean = Field::Zero(grid.size());
  Field spread = Field::Zero(grid.size());
  double acceptance_sum = 0.0;
  std::vector<Field> exported;
  for (int k = 0; k < cfg.repeats; ++k) {
    PCNConfig pcn;
    pcn.beta = cfg.beta;
    pcn.n_samples = cfg.n_samples;
    pcn.burn_in = cfg.burn_in;
    pcn.thin = cfg.thin;
    pcn.seed = cfg.seed + static_cast<std::uint64_t>(k);
    pcn.keep_samples = cfg.export_chain && k == 0;
    Chain chain = run_pcn(pcn, prior, reg, potential, u0);
    const PosteriorSummary summary = summarize(chain);
    report.repeat_errors.push_back(relative_error(summary.mean, truth));
    mean += summary.mean;
    spread += summary.pointwise_std;
    acceptance_sum += summary.acceptance_rate;
    if (pcn.keep_samples) exported = std::move(chain.samples);
  }
  mean /= cfg.repeats;
  spread /= cfg.repeats;

  report.relative_l2_error = relative_error(mean, truth);
  report.acceptance_rate = acceptance_sum / cfg.repeats;
  report.n_samples = cfg.n_samples;
  report.burn_in = cfg.burn_in;
  report.prior_jitter = prior.jitter();
  report.config = to_json(cfg);

  io::write_xy_csv(dir / "truth.csv", grid.nodes(), truth);
  io::write_xy_csv(dir / "data.csv", setup.observation_x, obs.values);
  io::write_summary_csv(dir / "posterior_mean.csv", grid.nodes(), mean, spread);
  if (cfg.export_chain) io::write_chain_csv(dir / "chain.csv", exported);

  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json metrics = {{"relative_l2_error", report.relative_l2_error},
                  {"error_metric", "relative L2 over grid nodes: ||mean - truth||_2 / ||truth||_2"},
                  {"estimator", "post-burn-in posterior mean"},
                  {"acceptance_rate", report.acceptance_rate},
                  {"n_samples", report.n_samples},
                  {"burn_in", report.burn_in},
                  {"repeat_errors", report.repeat_errors},
                  {"prior_jitter", report.prior_jitter},
                  {"seed", cfg.seed},
                  {"beta", cfg.beta},
                  {"wall_time_seconds", report.wall_time_seconds},
                  {"config", report.config}};
  std::ofstream(dir / "metrics.json", std::ios::binary | std::ios::trunc) << metrics.dump(2) << '\n';

  guard.release();
  return report;
}

std::vector<MeshRow> mesh_study(const ExperimentConfig& base, const std::vector<int>& sizes) {
  if (sizes.empty()) throw DomainError("mesh_study: no grid sizes given");
  std::vector<MeshRow> rows;
  for (int n : sizes) {
    ExperimentConfig cfg = base;
    cfg.intervals = n;
    cfg.seed = base.seed + static_cast<std::uint64_t>(n);
    cfg.output_dir = base.output_dir / ("N" + std::to_string(n));
    const MetricsReport r = run_experiment(cfg);
    rows.push_back({n, r.relative_l2_error, r.acceptance_rate});
  }
  fs::create_directories(base.output_dir);
  std::ofstream out(base.output_dir / "mesh_study.csv", std::ios::binary | std::ios::trunc);
  out << "N,relative_l2_error,acceptance_rate\n";
  for (const auto& r : rows) {
    out << r.intervals << ',' << io::format_double(r.relative_l2_error) << ','
        << io::format_double(r.acceptance_rate) << '\n';
  }
  return rows;
}

}  // namespace hftg
