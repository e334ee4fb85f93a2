#include "hftg/sampler.hpp"

#include "hftg/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hftg {

Potential::Potential(ForwardMap forward, Eigen::VectorXd data, double sigma)
    : forward_(std::move(forward)), data_(std::move(data)), sigma_(sigma) {
  if (!forward_) throw DomainError("Potential: forward map is empty");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("Potential: sigma must be positive");
  if (data_.size() < 1 || !data_.allFinite()) throw DomainError("Potential: data must be finite, m >= 1");
}

Potential Potential::null(Eigen::Index observations) {
  return Potential([observations](const Field&) { return Eigen::VectorXd::Zero(observations); },
                   Eigen::VectorXd::Zero(observations), 1.0);
}

double phi(const Potential& potential, const Field& u) {
  const Eigen::VectorXd predicted = potential.predict(u);
  if (predicted.size() != potential.data().size()) {
    throw DomainError("phi: forward output has " + std::to_string(predicted.size()) +
                      " entries, data has " + std::to_string(potential.data().size()));
  }
  const double s = potential.sigma();
  return (predicted - potential.data()).squaredNorm() / (2.0 * s * s);
}

void PCNConfig::validate() const {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("pCN: beta must lie in (0, 1]");
  if (n_samples < 1) throw DomainError("pCN: n_samples must be positive");
  if (burn_in < 0 || burn_in >= n_samples) throw DomainError("pCN: need 0 <= burn_in < n_samples");
  if (thin < 1) throw DomainError("pCN: thin must be >= 1");
}

Field pcn_propose(const Field& u, double beta, const Field& w) {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("pcn_propose: beta must lie in (0, 1]");
  if (u.size() != w.size()) throw DomainError("pcn_propose: size mismatch");
  return std::sqrt(1.0 - beta * beta) * u + beta * w;
}

double acceptance(double phi_u, double r_u, double phi_v, double r_v) {
  const double log_ratio = (phi_u + r_u) - (phi_v + r_v);
  if (log_ratio >= 0.0) return 1.0;
  return std::exp(log_ratio);
}

namespace {

double energy(const Potential& potential, const HFTVFunctional& hftv, const Field& u) {
  return phi(potential, u) + hftv(u);
}

}  // namespace

Chain run_pcn(const PCNConfig& cfg, const GaussianPrior& prior, const HFTVFunctional& hftv,
              const Potential& potential, const Field& u0) {
  cfg.validate();
  const Eigen::Index n = prior.grid().size();
  if (u0.size() != n || hftv.op().grid().size() != n) {
    throw DomainError("run_pcn: prior, regularizer and initial state must share one grid");
  }

  Rng rng(cfg.seed, 0x70636e);
  Chain chain;
  chain.running_mean = Field::Zero(n);
  chain.running_m2 = Field::Zero(n);

  Field u = u0;
  double e_u = energy(potential, hftv, u);
  chain.energy_evaluations = 1;
  if (!std::isfinite(e_u)) throw NumericalError("run_pcn: initial state has non-finite energy");

  const double keep = std::sqrt(1.0 - cfg.beta * cfg.beta);
  Eigen::VectorXd z(n);
  Field v(n), lz(n);
  for (std::int64_t i = 0; i < cfg.n_samples; ++i) {
    rng.fill_normal({z.data(), static_cast<std::size_t>(n)});
    lz.noalias() = prior.factor().triangularView<Eigen::Lower>() * z;
    v = keep * u + cfg.beta * lz;
    const double theta = rng.uniform();

    const double e_v = energy(potential, hftv, v);
    ++chain.energy_evaluations;
    if (std::isnan(e_v)) {
      throw NumericalError("run_pcn: NaN energy at iteration " + std::to_string(i));
    }
    // +inf energy marks an inadmissible proposal: a = 0.
    const double a = std::isinf(e_v) ? 0.0 : acceptance(e_u, 0.0, e_v, 0.0);
    if (cfg.record_acceptance) chain.acceptance_log.push_back(a);
    if (theta <= a) {
      u.swap(v);
      e_u = e_v;
      ++chain.accepted;
    }
    ++chain.total;

    if (i >= cfg.burn_in && (i - cfg.burn_in) % cfg.thin == 0) {
      ++chain.kept;
      const Field delta = u - chain.running_mean;
      chain.running_mean += delta / static_cast<double>(chain.kept);
      chain.running_m2 += delta.cwiseProduct(u - chain.running_mean);
      if (cfg.keep_samples) chain.samples.push_back(u);
    }
  }
  chain.final_state = u;
  return chain;
}

PosteriorSummary summarize(const Chain& chain) {
  PosteriorSummary out;
  if (!chain.samples.empty()) {
    const auto count = static_cast<double>(chain.samples.size());
    out.mean = Field::Zero(chain.samples.front().size());
    for (const Field& s : chain.samples) out.mean += s;
    out.mean /= count;
    Field var = Field::Zero(out.mean.size());
    for (const Field& s : chain.samples) var += (s - out.mean).cwiseAbs2();
    out.pointwise_std = (var / count).cwiseSqrt();
  } else if (chain.kept > 0) {
    out.mean = chain.running_mean;
    out.pointwise_std = (chain.running_m2 / static_cast<double>(chain.kept)).cwiseMax(0.0).cwiseSqrt();
  } else {
    throw DomainError("summarize: chain has no kept samples");
  }
  out.acceptance_rate =
      chain.total > 0 ? static_cast<double>(chain.accepted) / static_cast<double>(chain.total) : 0.0;
  return out;
}

}  // namespace hftg
