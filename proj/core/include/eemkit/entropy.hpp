#pragma once

#include <Eigen/Core>

namespace eemkit::entropy {

struct Gaussian1D {
  double mean = 0.0;
  double variance = 1.0;  // must stay > 0
};

// Equal-weight Gaussian mixture with one component per center and a shared
// bandwidth (component std deviation).
struct KdeMixture1D {
  Eigen::VectorXd centers;
  double bandwidth = 0.0;
};

// Which Gaussian-Dcs expression to evaluate. `corrected` is the form that is
// consistent with the divergence definition (nonnegative, zero iff equal);
// `as_printed` reproduces the sign-flipped variant some write-ups use.
enum class DcsFormula { corrected, as_printed };

// Renyi quadratic entropy H2(f) = -ln(integral of f^2) = ln(2 sqrt(pi S)).
double renyi_h2_gaussian(const Gaussian1D& g);

// Cross variant H2x(f,g) = -ln(integral of f g).
double renyi_h2_cross_gaussian(const Gaussian1D& f, const Gaussian1D& g);

// Cauchy-Schwarz divergence of two 1-D Gaussians:
//   ln(((S+ + S-)/2) / sqrt(S+ S-)) + (m+ - m-)^2 / (S+ + S-)
double dcs_gaussian_1d(const Gaussian1D& f, const Gaussian1D& g,
                       DcsFormula formula = DcsFormula::corrected);

// The surrogate objective (m+ - m-)^2 / (S+ + S-).
double dcs_last_term(const Gaussian1D& f, const Gaussian1D& g);

// Silverman's rule-of-thumb width (4 / (3 n))^{1/5} * std(values), std with
// divisor n. Returns 0 for zero spread; callers substitute the documented
// floor 1e-6 * (1 + |mean|).
double silverman_width(const Eigen::VectorXd& values);

// Gaussian KDE mixture with Silverman bandwidth (floored when degenerate).
KdeMixture1D make_kde(const Eigen::VectorXd& values);

// Dcs of the two KDE mixtures, evaluated in closed form via pairwise Gaussian
// product integrals.
double dcs_kde_1d(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Standard normal density value N(mean, variance)[x].
double gaussian_pdf(double x, double mean, double variance);
double log_gaussian_pdf(double x, double mean, double variance);

}  // namespace eemkit::entropy
