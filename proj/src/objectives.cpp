#include "decopt/objectives.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace decopt {

namespace {

Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                               Eigen::RowMajor>>
as_eigen(const Matrix& a) {
  return {a.data(), static_cast<Eigen::Index>(a.rows()),
          static_cast<Eigen::Index>(a.cols())};
}

std::pair<double, double> extreme_eigenvalues(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(as_eigen(a));
  const auto& ev = es.eigenvalues();
  return {ev(ev.size() - 1), ev(0)};
}

}  // namespace

void SmoothnessProfile::validate() const {
  if (!(L >= mu) || mu < 0.0) throw ConfigError("profile: need L >= mu >= 0");
  if (sigma2 < 0.0) throw ConfigError("profile: sigma2 < 0");
  if (R < 0.0) throw ConfigError("profile: R < 0");
  if (delta_f < 0.0) throw ConfigError("profile: delta_f < 0");
}

// --- QuadraticComponent ---

QuadraticComponent::QuadraticComponent(Matrix A, Vec b, double c)
    : A_(std::move(A)), b_(std::move(b)), c_(c) {
  const std::size_t n = b_.size();
  if (A_.rows() != n || A_.cols() != n)
    throw ConfigError("quadratic component: A must be n x n");
  double amax = 0.0, asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      amax = std::max(amax, std::abs(A_(i, j)));
      asym = std::max(asym, std::abs(A_(i, j) - A_(j, i)));
    }
  if (asym > 1e-12 * std::max(amax, 1.0))
    throw ConfigError("quadratic component: A not symmetric");
  std::tie(lmax_, lmin_) = extreme_eigenvalues(A_);
  if (lmin_ < -1e-12 * std::max(lmax_, 1.0))
    throw ConfigError("quadratic component: A not positive semidefinite");
  lmin_ = std::max(lmin_, 0.0);
}

double QuadraticComponent::value(const Vec& x) const {
  Vec ax;
  kernels::mat_vec_serial(A_, x, ax);
  return 0.5 * dot(x, ax) - dot(b_, x) + c_;
}

void QuadraticComponent::add_gradient(const Vec& x, Vec& g,
                                      double weight) const {
  for (std::size_t i = 0; i < dim(); ++i) {
    const double* ai = A_.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < dim(); ++j) s += ai[j] * x[j];
    g[i] += weight * (s - b_[i]);
  }
}

bool QuadraticComponent::quadratic_form(Matrix& A, Vec& b, double& c) const {
  A = A_;
  b = b_;
  c = c_;
  return true;
}

// --- LogisticComponent ---

LogisticComponent::LogisticComponent(Matrix X, std::vector<int> y)
    : X_(std::move(X)), y_(std::move(y)) {
  if (X_.rows() != y_.size())
    throw ConfigError("logistic component: label count mismatch");
  Eigen::MatrixXd xe = as_eigen(X_);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(xe.transpose() * xe);
  lmax_ = es.eigenvalues()(es.eigenvalues().size() - 1) /
          (4.0 * static_cast<double>(X_.rows()));
}

double LogisticComponent::value(const Vec& x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < X_.rows(); ++i) {
    double z = 0.0;
    const double* xi = X_.row(i);
    for (std::size_t j = 0; j < X_.cols(); ++j) z += xi[j] * x[j];
    const double margin = -static_cast<double>(y_[i]) * z;
    // log(1 + exp(margin)) without overflow
    s += margin > 0 ? margin + std::log1p(std::exp(-margin))
                    : std::log1p(std::exp(margin));
  }
  return s / static_cast<double>(X_.rows());
}

void LogisticComponent::add_gradient(const Vec& x, Vec& g,
                                     double weight) const {
  const double inv = weight / static_cast<double>(X_.rows());
  for (std::size_t i = 0; i < X_.rows(); ++i) {
    double z = 0.0;
    const double* xi = X_.row(i);
    for (std::size_t j = 0; j < X_.cols(); ++j) z += xi[j] * x[j];
    const double yi = static_cast<double>(y_[i]);
    const double sig = 1.0 / (1.0 + std::exp(yi * z));
    for (std::size_t j = 0; j < X_.cols(); ++j) g[j] -= inv * yi * sig * xi[j];
  }
}

// --- TiltedComponent ---

TiltedComponent::TiltedComponent(ComponentPtr base, double lam, Vec center)
    : base_(std::move(base)), lam_(lam), center_(std::move(center)) {
  if (base_->dim() != center_.size())
    throw ConfigError("tilted component: center dimension mismatch");
}

double TiltedComponent::value(const Vec& x) const {
  double q = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - center_[i];
    q += d * d;
  }
  return base_->value(x) + 0.5 * lam_ * q;
}

void TiltedComponent::add_gradient(const Vec& x, Vec& g, double weight) const {
  base_->add_gradient(x, g, weight);
  for (std::size_t i = 0; i < x.size(); ++i)
    g[i] += weight * lam_ * (x[i] - center_[i]);
}

bool TiltedComponent::quadratic_form(Matrix& A, Vec& b, double& c) const {
  if (!base_->quadratic_form(A, b, c)) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    A(i, i) += lam_;
    b[i] += lam_ * center_[i];
    c += 0.5 * lam_ * center_[i] * center_[i];
  }
  return true;
}

// --- Problem ---

Problem::Problem(std::size_t nodes, std::size_t components_per_node,
                 std::size_t dim, std::vector<ComponentPtr> components,
                 NoiseSpec noise)
    : m_(nodes), r_(components_per_node), n_(dim),
      comps_(std::move(components)), noise_(noise), counters_(nodes) {
  if (m_ == 0 || r_ == 0 || n_ == 0)
    throw ConfigError("problem: m, r, n must be positive");
  if (comps_.size() != m_ * r_)
    throw ConfigError("problem: expected m*r components");
  for (const auto& c : comps_)
    if (!c || c->dim() != n_)
      throw ConfigError("problem: component dimension mismatch");
  if (noise_.sigma2 < 0.0) throw ConfigError("problem: sigma2 < 0");
  compute_constants();
}

void Problem::compute_constants() {
  quadratic_ = true;
  Matrix A;
  Vec b;
  double c;
  hbar_ = Matrix(n_, n_);
  bbar_.assign(n_, 0.0);
  cbar_ = 0.0;
  l_comp_max_ = 0.0;
  double lsum = 0.0;
  l_node_max_ = 0.0;
  const double w = 1.0 / static_cast<double>(m_ * r_);
  std::vector<Matrix> node_h;
  if (quadratic_) node_h.assign(m_, Matrix(n_, n_));
  for (std::size_t k = 0; k < m_; ++k) {
    double lnode_bound = 0.0;
    for (std::size_t j = 0; j < r_; ++j) {
      const Component& comp = component(k, j);
      l_comp_max_ = std::max(l_comp_max_, comp.smoothness());
      lnode_bound += comp.smoothness() / static_cast<double>(r_);
      if (quadratic_ && comp.quadratic_form(A, b, c)) {
        for (std::size_t i = 0; i < n_ * n_; ++i)
          node_h[k].data()[i] += A.data()[i] / static_cast<double>(r_);
        for (std::size_t i = 0; i < n_; ++i) bbar_[i] += w * b[i];
        cbar_ += w * c;
      } else {
        quadratic_ = false;
      }
    }
    double lnode = lnode_bound;
    if (quadratic_) lnode = extreme_eigenvalues(node_h[k]).first;
    l_node_max_ = std::max(l_node_max_, lnode);
    lsum += lnode;
  }
  l_node_mean_ = lsum / static_cast<double>(m_);
  profile_.L = l_node_max_;
  profile_.sigma2 = noise_.sigma2;
  if (quadratic_) {
    for (std::size_t k = 0; k < m_; ++k)
      for (std::size_t i = 0; i < n_ * n_; ++i)
        hbar_.data()[i] += node_h[k].data()[i] / static_cast<double>(m_);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(as_eigen(hbar_));
    const auto& ev = es.eigenvalues();
    const double lmax = ev(ev.size() - 1);
    profile_.mu = std::max(ev(0), 0.0);
    if (profile_.mu < 1e-10 * std::max(lmax, 1.0)) profile_.mu = 0.0;
    // minimum-norm solution of Hbar x = bbar (pseudo-inverse)
    Eigen::Map<const Eigen::VectorXd> be(bbar_.data(),
                                         static_cast<Eigen::Index>(n_));
    Eigen::VectorXd coef = es.eigenvectors().transpose() * be;
    for (Eigen::Index i = 0; i < coef.size(); ++i)
      coef(i) = ev(i) > 1e-10 * std::max(lmax, 1.0) ? coef(i) / ev(i) : 0.0;
    Eigen::VectorXd xs = es.eigenvectors() * coef;
    x_star_ = Vec(xs.data(), xs.data() + n_);
    f_star_ = exact_value(*x_star_);
  } else {
    bbar_.clear();
    hbar_ = Matrix();
    x_star_.reset();
    f_star_ = 0.0;
    profile_.mu = 0.0;
    for (const auto& comp : comps_)
      profile_.mu = std::min(profile_.mu, comp->strong_convexity());
  }
}

void Problem::check_dim(const Vec& x) const {
  if (x.size() != n_) throw ConfigError("gradient/value: dimension mismatch");
}

Vec Problem::full_gradient(std::size_t k, const Vec& x) const {
  check_dim(x);
  if (k >= m_) throw ConfigError("node index out of range");
  Vec g(n_, 0.0);
  const double w = 1.0 / static_cast<double>(r_);
  for (std::size_t j = 0; j < r_; ++j) component(k, j).add_gradient(x, g, w);
  ++counters_[k].full;
  return g;
}

Vec Problem::full_gradient(const Vec& x) const {
  check_dim(x);
  Vec g(n_, 0.0);
  const double w = 1.0 / static_cast<double>(m_);
  for (std::size_t k = 0; k < m_; ++k) {
    Vec gk = full_gradient(k, x);
    axpy(w, gk, g);
  }
  return g;
}

Vec Problem::stochastic_gradient(std::size_t k, const Vec& x,
                                 RngStream& rng) const {
  check_dim(x);
  if (k >= m_) throw ConfigError("node index out of range");
  Vec g(n_, 0.0);
  switch (noise_.model) {
    case NoiseModel::gaussian: {
      const double w = 1.0 / static_cast<double>(r_);
      for (std::size_t j = 0; j < r_; ++j)
        component(k, j).add_gradient(x, g, w);
      const double coord_sigma =
          std::sqrt(noise_.sigma2 / static_cast<double>(n_));
      for (std::size_t i = 0; i < n_; ++i) g[i] += coord_sigma * rng.normal();
      break;
    }
    case NoiseModel::subsample: {
      const std::size_t j = rng.uniform_int(r_);
      component(k, j).add_gradient(x, g, 1.0);
      break;
    }
    case NoiseModel::none:
      throw ConfigError("stochastic oracle: no noise model configured");
  }
  ++counters_[k].stoch;
  return g;
}

Vec Problem::batch_gradient(std::size_t k, const Vec& x, std::size_t batch,
                            RngStream& rng) const {
  if (batch == 0) throw ConfigError("batch_gradient: batch size must be >= 1");
  Vec g(n_, 0.0);
  for (std::size_t b = 0; b < batch; ++b) {
    Vec gi = stochastic_gradient(k, x, rng);
    axpy(1.0 / static_cast<double>(batch), gi, g);
  }
  return g;
}

Vec Problem::component_gradient(std::size_t k, std::size_t j,
                                const Vec& x) const {
  check_dim(x);
  if (k >= m_ || j >= r_) throw ConfigError("component index out of range");
  Vec g(n_, 0.0);
  component(k, j).add_gradient(x, g, 1.0);
  ++counters_[k].comp;
  return g;
}

double Problem::function_value(std::size_t k, const Vec& x,
                               RngStream* rng) const {
  check_dim(x);
  if (k >= m_) throw ConfigError("node index out of range");
  double v = exact_node_value(k, x);
  if (rng && noise_.value_sigma > 0.0) v += noise_.value_sigma * rng->normal();
  ++counters_[k].value;
  return v;
}

double Problem::function_value(const Vec& x, RngStream* rng) const {
  double v = 0.0;
  for (std::size_t k = 0; k < m_; ++k)
    v += function_value(k, x, rng) / static_cast<double>(m_);
  return v;
}

double Problem::exact_node_value(std::size_t k, const Vec& x) const {
  double v = 0.0;
  for (std::size_t j = 0; j < r_; ++j)
    v += component(k, j).value(x) / static_cast<double>(r_);
  return v;
}

double Problem::exact_value(const Vec& x) const {
  double v = 0.0;
  for (std::size_t k = 0; k < m_; ++k)
    v += exact_node_value(k, x) / static_cast<double>(m_);
  return v;
}

double Problem::suboptimality(const Vec& x) const {
  return exact_value(x) - f_star_;
}

void Problem::set_start(const Vec& x0) {
  check_dim(x0);
  if (x_star_) {
    profile_.R = norm2(sub(x0, *x_star_));
    profile_.delta_f = exact_value(x0) - f_star_;
  }
}

Problem Problem::regularized(const Vec& x0, double eps, double R) const {
  check_dim(x0);
  if (eps <= 0.0 || R <= 0.0)
    throw ConfigError("regularize: eps and R must be positive");
  const double lam = eps / (R * R);
  std::vector<ComponentPtr> comps;
  comps.reserve(comps_.size());
  for (const auto& c : comps_)
    comps.push_back(std::make_shared<TiltedComponent>(c, lam, x0));
  Problem p(m_, r_, n_, std::move(comps), noise_);
  p.profile_.M = profile_.M;
  p.set_start(x0);
  return p;
}

OracleCounters Problem::totals() const {
  OracleCounters t;
  for (const auto& c : counters_) {
    t.full += c.full;
    t.stoch += c.stoch;
    t.comp += c.comp;
    t.value += c.value;
  }
  return t;
}

void Problem::reset_counters() const {
  for (auto& c : counters_) c = OracleCounters{};
}

// --- accuracy-translation formulas ---

std::int64_t required_sample_size(const SmoothnessProfile& p, double eps) {
  if (eps <= 0.0) throw ConfigError("required_sample_size: eps <= 0");
  const double t1 = p.M * p.M * p.R * p.R / (eps * eps);
  double best = t1;
  if (p.mu > 0.0) best = std::min(best, p.M * p.M / (p.mu * eps));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(best)));
}

double inner_accuracy(const SmoothnessProfile& p, double eps) {
  if (eps <= 0.0) throw ConfigError("inner_accuracy: eps <= 0");
  if (p.M <= 0.0) throw ConfigError("inner_accuracy: M unset");
  return std::max(p.mu, eps / (p.R * p.R)) * eps * eps / (p.M * p.M);
}

std::int64_t batch_parallel_width(const SmoothnessProfile& p, double eps,
                                  ConvexityRegime regime) {
  if (eps <= 0.0) throw ConfigError("batch_parallel_width: eps <= 0");
  double width = 1.0;
  if (regime == ConvexityRegime::convex) {
    width = (p.sigma2 * p.R * p.R / (eps * eps)) /
            std::sqrt(p.L * p.R * p.R / eps);
  } else {
    if (p.mu <= 0.0) throw ConfigError("batch_parallel_width: mu = 0");
    const double lg = std::max(std::log(p.mu * p.R * p.R / eps), 1.0);
    width = (p.sigma2 / (p.mu * eps)) / (std::sqrt(p.L / p.mu) * lg);
  }
  return std::max<std::int64_t>(1,
                                static_cast<std::int64_t>(std::ceil(width)));
}

}  // namespace decopt
