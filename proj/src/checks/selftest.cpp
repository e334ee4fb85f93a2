#include "hftg/checks/selftest.hpp"

#include "hftg/checks/oracles.hpp"
#include "hftg/experiment.hpp"
#include "hftg/forward.hpp"
#include "hftg/frac_ops.hpp"
#include "hftg/prior.hpp"
#include "hftg/sampler.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace hftg::checks {

namespace {

struct Check {
  std::string name;
  std::function<bool()> body;
};

Field random_field(int n, Rng& rng) {
  Field f(n);
  rng.fill_normal({f.data(), static_cast<std::size_t>(n)});
  return f;
}

}  // namespace

bool run_selftest(std::ostream& out) {
  const std::vector<Check> checks = {
      {"frac_ops: GL recurrence matches closed form (6 orders, j<=64)",
       [] {
         for (double alpha : {0.3, 0.5, 0.9, 1.1, 1.5, 1.9}) {
           const GLWeights w(alpha, 64);
           for (int j = 0; j <= 64; ++j) {
             if (std::abs(w[j] - gl_weight_closed_form(alpha, j)) > 1e-12) return false;
           }
         }
         return true;
       }},
      {"frac_ops: alpha=1 Riesz operator is the central difference",
       [] {
         const LogGrid grid(1.0, 2.0, 50);
         const FracOperator op(grid, 1.0, Direction::Riesz);
         return (op.matrix() - central_difference_matrix(grid)).cwiseAbs().maxCoeff() <= 1e-14;
       }},
      {"frac_ops: operator linearity",
       [] {
         const LogGrid grid(1.0, 3.0, 40);
         const FracOperator op(grid, 1.5, Direction::Riesz);
         Rng rng(7);
         const Field f = random_field(grid.size(), rng), g = random_field(grid.size(), rng);
         const Field lhs = op.apply(2.0 * f + 3.0 * g);
         const Field rhs = 2.0 * op.apply(f) + 3.0 * op.apply(g);
         return (lhs - rhs).norm() <= 1e-12 * rhs.norm();
       }},
      {"prior: factor reproduces covariance within 10 x jitter",
       [] {
         const GaussianPrior prior(LogGrid(1.0, 2.0, 100), 0.01, 0.02);
         const Eigen::MatrixXd rec = prior.factor() * prior.factor().transpose();
         return (rec - prior.covariance()).cwiseAbs().maxCoeff() <= 10.0 * prior.jitter();
       }},
      {"prior: hftv homogeneity and triangle inequality",
       [] {
         const LogGrid grid(1.0, 2.0, 60);
         const HFTVFunctional r(grid, 0.9, 2.0);
         Rng rng(11);
         const Field u = random_field(grid.size(), rng), v = random_field(grid.size(), rng);
         const bool homog = std::abs(r(-3.0 * u) - 3.0 * r(u)) <= 1e-12 * r(u);
         return homog && r(u + v) <= r(u) + r(v) + 1e-12;
       }},
      {"forward: heat affine decomposition matches time stepping",
       [] {
         const LogGrid grid(1.0, 3.0, 60);
         const HeatModel model(grid, HeatSettings{1.0, 40, 0.5, 0.5});
         const Field f = make_truth(Problem::HeatSource, grid);
         return (heat_forward(model, f) - model.step_through(f)).cwiseAbs().maxCoeff() <= 1e-10;
       }},
      {"forward: elliptic manufactured solution g = 2x - 4",
       [] {
         const LogGrid grid(1.0, 3.0, 200);
         const Field q = make_truth(Problem::Elliptic, grid);
         const EllipticModel model(grid, q);
         const Eigen::VectorXd g = elliptic_forward(model, q);
         const Eigen::VectorXd exact = (2.0 * grid.nodes().segment(1, 199)).array() - 4.0;
         return (g - exact).norm() / exact.norm() <= 1e-3;
       }},
      {"sampler: null potential accepts every proposal",
       [] {
         const LogGrid grid(1.0, 2.0, 20);
         const GaussianPrior prior(grid, 1.0, 0.1);
         const HFTVFunctional r(grid, 0.9, 0.0);
         PCNConfig cfg;
         cfg.beta = 0.5;
         cfg.n_samples = 2000;
         const Chain chain = run_pcn(cfg, prior, r, Potential::null(), grid.zeros());
         return summarize(chain).acceptance_rate == 1.0;
       }},
  };

  bool all = true;
  for (const auto& c : checks) {
    bool ok = false;
    try {
      ok = c.body();
    } catch (const std::exception& e) {
      out << "  exception: " << e.what() << '\n';
    }
    out << (ok ? "[PASS] " : "[FAIL] ") << c.name << '\n';
    all = all && ok;
  }
  return all;
}

}  // namespace hftg::checks
