#include "mfmig/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mfmig {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double gig_mode(double lambda, double omega) {
  if (lambda >= 1.0)
    return (std::sqrt((lambda - 1.0) * (lambda - 1.0) + omega * omega) +
            (lambda - 1.0)) / omega;
  return omega / (std::sqrt((1.0 - lambda) * (1.0 - lambda) + omega * omega) +
                  (1.0 - lambda));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : gen_(seed), seed_(seed) {}

RngStream RngStream::substream(std::uint64_t index) const {
  return RngStream(splitmix64(seed_ ^ (0x9E3779B97F4A7C15ull * (index + 1))));
}

double RngStream::uniform() {
  return (static_cast<double>(gen_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

double RngStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * f;
  have_spare_ = true;
  return u * f;
}

double RngStream::gamma(double shape, double rate) {
  if (shape <= 0.0 || rate <= 0.0)
    throw std::domain_error("gamma: shape and rate must be > 0");
  if (shape < 1.0) {
    // shape boost (Marsaglia & Tsang)
    double u = uniform();
    return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return d * v / rate;
  }
}

double RngStream::inverse_gamma(double shape, double scale) {
  if (shape <= 0.0 || scale <= 0.0)
    throw std::domain_error("inverse_gamma: parameters must be > 0");
  return scale / gamma(shape, 1.0);
}

double RngStream::beta(double a, double b) {
  if (a <= 0.0 || b <= 0.0)
    throw std::domain_error("beta: parameters must be > 0");
  double x = gamma(a, 1.0);
  double y = gamma(b, 1.0);
  return x / (x + y);
}

long RngStream::poisson(double mean) {
  if (mean < 0.0 || !std::isfinite(mean))
    throw std::domain_error("poisson: mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  if (mean < 30.0) {
    // Knuth multiplication
    double l = std::exp(-mean);
    long k = 0;
    double p = uniform();
    while (p > l) {
      ++k;
      p *= uniform();
    }
    return k;
  }
  // PTRS transformed rejection (Hoermann 1993)
  double b = 0.931 + 2.53 * std::sqrt(mean);
  double a = -0.059 + 0.02483 * b;
  double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    double u = uniform() - 0.5;
    double v = uniform();
    double us = 0.5 - std::abs(u);
    long k = static_cast<long>(std::floor((2.0 * a / us + b) * u + mean + 0.43));
    if (us >= 0.07 && v <= vr) return k;
    if (k < 0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        k * std::log(mean) - mean - std::lgamma(k + 1.0))
      return k;
  }
}

// GIG sampler following Hoermann & Leydold (2014): three regimes, all exact
// rejection methods with acceptance rate bounded below.
double RngStream::gig(const GigParams& p) {
  if (!(p.a > 0.0) || !(p.b > 0.0) || !std::isfinite(p.c))
    throw std::domain_error("gig: need a > 0, b > 0, finite c");
  double lambda = p.c;
  bool flip = lambda < 0.0;
  if (flip) lambda = -lambda;
  double omega = std::sqrt(p.a * p.b);
  double scale = std::sqrt(p.b / p.a);

  double x;
  double t = 0.5 * (lambda - 1.0);
  double s = 0.25 * omega;
  if (lambda > 2.0 || omega > 3.0) {
    // ratio of uniforms with mode shift
    double xm = gig_mode(lambda, omega);
    double nc = t * std::log(xm) - s * (xm + 1.0 / xm);
    // stationary points of x * sqrt(g(x + xm)) via Cardano
    double ca = -(2.0 * (lambda + 1.0) / omega + xm);
    double cb = 2.0 * (lambda - 1.0) * xm / omega - 1.0;
    double cc = xm;
    double pp = cb - ca * ca / 3.0;
    double qq = 2.0 * ca * ca * ca / 27.0 - ca * cb / 3.0 + cc;
    double fi = std::acos(-qq / (2.0 * std::sqrt(-pp * pp * pp / 27.0)));
    double fak = 2.0 * std::sqrt(-pp / 3.0);
    double y1 = fak * std::cos(fi / 3.0) - ca / 3.0;
    double y2 = fak * std::cos(fi / 3.0 + 4.0 * M_PI / 3.0) - ca / 3.0;
    double uplus = (y1 - xm) * std::exp(t * std::log(y1) - s * (y1 + 1.0 / y1) - nc);
    double uminus = (y2 - xm) * std::exp(t * std::log(y2) - s * (y2 + 1.0 / y2) - nc);
    for (;;) {
      double u = uminus + uniform() * (uplus - uminus);
      double v = uniform();
      x = u / v + xm;
      if (x > 0.0 &&
          std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc)
        break;
    }
  } else if (lambda >= 1.0 - 2.25 * omega * omega || omega > 0.2) {
    // ratio of uniforms without shift
    double xm = gig_mode(lambda, omega);
    double nc = t * std::log(xm) - s * (xm + 1.0 / xm);
    double ym = ((lambda + 1.0) +
                 std::sqrt((lambda + 1.0) * (lambda + 1.0) + omega * omega)) /
                omega;
    double um = std::exp(0.5 * (lambda + 1.0) * std::log(ym) -
                         s * (ym + 1.0 / ym) - nc);
    for (;;) {
      double u = um * uniform();
      double v = uniform();
      x = u / v;
      if (std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) break;
    }
  } else {
    // 0 < lambda < 1, small omega: constant hat on the log-concave part
    double xm = gig_mode(lambda, omega);
    double x0 = omega / (1.0 - lambda);
    double k0 = std::exp((lambda - 1.0) * std::log(xm) -
                         0.5 * omega * (xm + 1.0 / xm));
    double a0 = k0 * x0;
    double k1, a1, k2, a2;
    if (x0 >= 2.0 / omega) {
      k1 = 0.0;
      a1 = 0.0;
      k2 = std::pow(x0, lambda - 1.0);
      a2 = k2 * 2.0 * std::exp(-omega * x0 / 2.0) / omega;
    } else {
      k1 = std::exp(-omega);
      a1 = (lambda == 0.0)
               ? k1 * std::log(2.0 / (omega * omega))
               : k1 / lambda *
                     (std::pow(2.0 / omega, lambda) - std::pow(x0, lambda));
      k2 = std::pow(2.0 / omega, lambda - 1.0);
      a2 = k2 * 2.0 * std::exp(-1.0) / omega;
    }
    double atot = a0 + a1 + a2;
    for (;;) {
      double v = atot * uniform();
      double hx;
      if (v <= a0) {
        x = x0 * v / a0;
        hx = k0;
      } else if ((v -= a0) <= a1) {
        if (lambda == 0.0) {
          x = omega * std::exp(std::exp(omega) * v);
          hx = k1 / x;
        } else {
          x = std::pow(std::pow(x0, lambda) + lambda / k1 * v, 1.0 / lambda);
          hx = k1 * std::pow(x, lambda - 1.0);
        }
      } else {
        v -= a1;
        double lo = std::max(x0, 2.0 / omega);
        x = -2.0 / omega *
            std::log(std::exp(-omega / 2.0 * lo) - omega / (2.0 * k2) * v);
        hx = k2 * std::exp(-omega / 2.0 * x);
      }
      double u = uniform() * hx;
      if (std::log(u) <=
          (lambda - 1.0) * std::log(x) - omega / 2.0 * (x + 1.0 / x))
        break;
    }
  }
  return flip ? scale / x : scale * x;
}

int RngStream::categorical(std::span<const double> weights) {
  if (weights.empty()) throw std::domain_error("categorical: empty weights");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w))
      throw std::domain_error("categorical: weights must be finite and >= 0");
    total += w;
  }
  if (total <= 0.0)
    throw std::domain_error("categorical: all weights are zero");
  double u = uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    acc += weights[i];
    if (u <= acc) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

int RngStream::categorical_log(std::span<const double> log_weights) {
  if (log_weights.empty())
    throw std::domain_error("categorical_log: empty weights");
  double m = -std::numeric_limits<double>::infinity();
  for (double lw : log_weights) m = std::max(m, lw);
  if (!std::isfinite(m))
    throw std::domain_error("categorical_log: all weights are zero");
  double total = 0.0;
  for (double lw : log_weights) total += std::exp(lw - m);
  double u = uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < log_weights.size(); ++i) {
    acc += std::exp(log_weights[i] - m);
    if (u <= acc) return static_cast<int>(i);
  }
  return static_cast<int>(log_weights.size()) - 1;
}

Eigen::VectorXd RngStream::mvnormal(const Eigen::VectorXd& mean,
                                    const Eigen::MatrixXd& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("mvnormal: covariance is not positive definite");
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal();
  return mean + llt.matrixL() * z;
}

Eigen::MatrixXd RngStream::wishart(double dof, const Eigen::MatrixXd& scale) {
  const Eigen::Index r = scale.rows();
  if (dof <= r - 1)
    throw std::domain_error("wishart: need dof > dim - 1");
  Eigen::LLT<Eigen::MatrixXd> llt(scale);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("wishart: scale is not positive definite");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    a(i, i) = std::sqrt(gamma((dof - i) / 2.0, 0.5));  // chi^2_{dof-i}
    for (Eigen::Index j = 0; j < i; ++j) a(i, j) = normal();
  }
  Eigen::MatrixXd la = llt.matrixL() * a;
  return la * la.transpose();
}

Eigen::MatrixXd RngStream::inverse_wishart(double dof,
                                           const Eigen::MatrixXd& scale) {
  Eigen::MatrixXd w = wishart(dof, scale.inverse());
  return w.inverse();
}

}  // namespace mfmig
