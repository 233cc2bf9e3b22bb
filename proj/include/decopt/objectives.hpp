#ifndef DECOPT_OBJECTIVES_HPP
#define DECOPT_OBJECTIVES_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "decopt/errors.hpp"
#include "decopt/linalg.hpp"
#include "decopt/rng.hpp"

namespace decopt {

// The constants that parameterize every complexity formula.
struct SmoothnessProfile {
  double L = 0.0;       // gradient Lipschitz constant (2-norm)
  double mu = 0.0;      // strong-convexity modulus >= 0
  double M = 0.0;       // uniform gradient bound, E||grad f(x,xi)||^2 <= M^2
  double sigma2 = 0.0;  // stochastic-gradient variance bound
  double R = 0.0;       // ||x0 - x*||_2 <= R
  double delta_f = 0.0; // f(x0) - f*

  void validate() const;
};

// One summand f_k^j. Node objectives are means of components, the global
// objective is the mean over nodes.
class Component {
 public:
  virtual ~Component() = default;
  virtual std::size_t dim() const = 0;
  virtual double value(const Vec& x) const = 0;
  virtual void add_gradient(const Vec& x, Vec& g, double weight) const = 0;
  virtual double smoothness() const = 0;        // lambda_max of the Hessian bound
  virtual double strong_convexity() const = 0;  // lambda_min (0 if unknown)
  // Fills A, b, c with f(x) = 1/2 x'Ax - b'x + c when the component is an
  // exact quadratic; returns false otherwise.
  virtual bool quadratic_form(Matrix& A, Vec& b, double& c) const {
    (void)A; (void)b; (void)c;
    return false;
  }

  Vec gradient(const Vec& x) const {
    Vec g(dim(), 0.0);
    add_gradient(x, g, 1.0);
    return g;
  }
};

using ComponentPtr = std::shared_ptr<const Component>;

// f(x) = 1/2 x'Ax - b'x + c with A symmetric positive semidefinite.
class QuadraticComponent : public Component {
 public:
  QuadraticComponent(Matrix A, Vec b, double c = 0.0);

  std::size_t dim() const override { return b_.size(); }
  double value(const Vec& x) const override;
  void add_gradient(const Vec& x, Vec& g, double weight) const override;
  double smoothness() const override { return lmax_; }
  double strong_convexity() const override { return lmin_; }
  bool quadratic_form(Matrix& A, Vec& b, double& c) const override;

  const Matrix& A() const { return A_; }
  const Vec& b() const { return b_; }

 private:
  Matrix A_;
  Vec b_;
  double c_;
  double lmax_, lmin_;
};

// Logistic loss on a fixed embedded dataset: rows of X are feature
// vectors, y in {-1,+1}. L = lambda_max(X'X) / (4 * samples).
class LogisticComponent : public Component {
 public:
  LogisticComponent(Matrix X, std::vector<int> y);

  std::size_t dim() const override { return X_.cols(); }
  double value(const Vec& x) const override;
  void add_gradient(const Vec& x, Vec& g, double weight) const override;
  double smoothness() const override { return lmax_; }
  double strong_convexity() const override { return 0.0; }

 private:
  Matrix X_;
  std::vector<int> y_;
  double lmax_;
};

// base(x) + lam/2 ||x - center||^2 -- the Euclidean regularizer.
class TiltedComponent : public Component {
 public:
  TiltedComponent(ComponentPtr base, double lam, Vec center);

  std::size_t dim() const override { return center_.size(); }
  double value(const Vec& x) const override;
  void add_gradient(const Vec& x, Vec& g, double weight) const override;
  double smoothness() const override { return base_->smoothness() + lam_; }
  double strong_convexity() const override {
    return base_->strong_convexity() + lam_;
  }
  bool quadratic_form(Matrix& A, Vec& b, double& c) const override;

 private:
  ComponentPtr base_;
  double lam_;
  Vec center_;
};

enum class NoiseModel { none, gaussian, subsample };

struct NoiseSpec {
  NoiseModel model = NoiseModel::none;
  double sigma2 = 0.0;       // additive Gaussian gradient noise, total variance
  double value_sigma = 0.0;  // additive noise on function values
};

struct OracleCounters {
  std::int64_t full = 0;
  std::int64_t stoch = 0;
  std::int64_t comp = 0;
  std::int64_t value = 0;
};

// Per-node finite-sum objective: f(x) = (1/m) sum_k f_k(x),
// f_k(x) = (1/r) sum_j f_k^j(x). Immutable after construction except for
// the oracle-call ledger; a single run owns the ledger.
class Problem {
 public:
  Problem(std::size_t nodes, std::size_t components_per_node,
          std::size_t dim, std::vector<ComponentPtr> components,
          NoiseSpec noise = {});

  std::size_t nodes() const { return m_; }
  std::size_t components_per_node() const { return r_; }
  std::size_t dim() const { return n_; }
  const NoiseSpec& noise() const { return noise_; }
  const Component& component(std::size_t k, std::size_t j) const {
    return *comps_[k * r_ + j];
  }

  // --- oracles (all audited through the ledger) ---
  Vec full_gradient(std::size_t k, const Vec& x) const;
  Vec full_gradient(const Vec& x) const;  // global; one full call per node
  Vec stochastic_gradient(std::size_t k, const Vec& x, RngStream& rng) const;
  Vec batch_gradient(std::size_t k, const Vec& x, std::size_t batch,
                     RngStream& rng) const;
  Vec component_gradient(std::size_t k, std::size_t j, const Vec& x) const;
  double function_value(std::size_t k, const Vec& x,
                        RngStream* rng = nullptr) const;
  double function_value(const Vec& x, RngStream* rng = nullptr) const;

  // --- instrumentation (exact, not an oracle, not counted) ---
  double exact_value(const Vec& x) const;
  double exact_node_value(std::size_t k, const Vec& x) const;
  double suboptimality(const Vec& x) const;

  // --- closed-form optimum (pure quadratics) ---
  bool has_optimum() const { return x_star_.has_value(); }
  const Vec& x_star() const { return *x_star_; }
  double f_star() const { return f_star_; }
  bool is_quadratic() const { return quadratic_; }
  // Average Hessian / linear term of the global quadratic.
  const Matrix& hessian() const { return hbar_; }
  const Vec& linear_term() const { return bbar_; }

  // --- constants ---
  const SmoothnessProfile& profile() const { return profile_; }
  // R and delta_f depend on the start point; M and sigma2 on the class.
  void set_start(const Vec& x0);
  void set_nonsmooth_bound(double M) { profile_.M = M; }
  double node_smoothness_max() const { return l_node_max_; }
  double node_smoothness_mean() const { return l_node_mean_; }
  double component_smoothness_max() const { return l_comp_max_; }

  // Adds (eps/(2R^2))||x - x0||^2 to every component, making a merely
  // convex problem eps/R^2-strongly convex.
  Problem regularized(const Vec& x0, double eps, double R) const;

  // --- ledger ---
  const OracleCounters& counters(std::size_t k) const { return counters_[k]; }
  OracleCounters totals() const;
  void reset_counters() const;

 private:
  void check_dim(const Vec& x) const;
  void compute_constants();

  std::size_t m_, r_, n_;
  std::vector<ComponentPtr> comps_;  // m*r, row-major by node
  NoiseSpec noise_;
  SmoothnessProfile profile_;
  double l_node_max_ = 0.0, l_node_mean_ = 0.0, l_comp_max_ = 0.0;
  bool quadratic_ = false;
  Matrix hbar_;
  Vec bbar_;
  double cbar_ = 0.0;
  std::optional<Vec> x_star_;
  double f_star_ = 0.0;
  mutable std::vector<OracleCounters> counters_;
};

// Sample budget with unit constants:
// min{ceil(M^2 R^2 / eps^2), ceil(M^2/(mu eps))},
// clamped to >= 1; the second term is skipped when mu = 0.
std::int64_t required_sample_size(const SmoothnessProfile& p, double eps);

// eps' = max{mu, eps/R^2} * eps^2 / M^2, unit constant.
double inner_accuracy(const SmoothnessProfile& p, double eps);

enum class ConvexityRegime { convex, strongly_convex };

// Batch-parallel width, unit constants, floor at 1. The degenerate
// log ln(mu R^2 / eps) <= 0 is clamped to 1.
std::int64_t batch_parallel_width(const SmoothnessProfile& p, double eps,
                                  ConvexityRegime regime);

}  // namespace decopt

#endif
