#include "ctm/sphere_quad.hpp"

#include <cmath>
#include <numbers>

namespace ctm {

namespace {
constexpr double kPi = std::numbers::pi;

void check_m(int m) {
  if (m < kMinM || m > kMaxM) throw UnsupportedDimension(m);
}

template <class T, class Leaf>
T pairwise(int lo, int hi, const Leaf& leaf, const T& zero) {
  if (hi - lo <= 64) {
    T acc = zero;
    for (int i = lo; i < hi; ++i) leaf(acc, i);
    return acc;
  }
  const int mid = lo + (hi - lo) / 2;
  T acc = pairwise(lo, mid, leaf, zero);
  acc += pairwise(mid, hi, leaf, zero);
  return acc;
}
}  // namespace

double sphere_area(int m) {
  check_m(m);
  return 2.0 * std::pow(kPi, 0.5 * (m + 1)) / std::tgamma(0.5 * (m + 1));
}

double monomial_moment(int m, const std::vector<int>& alpha) {
  check_m(m);
  if (alpha.size() != static_cast<std::size_t>(m + 1))
    throw LengthMismatch(m + 1, alpha.size());
  int total_half = 0;
  for (int a : alpha) {
    if (a < 0) throw InvalidArgument("negative exponent in moment key");
    if (a % 2) return 0.0;
    total_half += a / 2;
  }
  double num = 1.0;
  for (int a : alpha)
    for (int j = 1; j <= a / 2; ++j) num *= 2 * j - 1;
  double den = 1.0;
  const int d = m + 1;
  for (int j = 1; j <= total_half; ++j) den *= d + 2 * j - 2;
  return num / den;
}

void gauss_gegenbauer(int n, double gamma, std::vector<double>& nodes,
                      std::vector<double>& weights) {
  if (n < 1) throw InvalidArgument("gauss rule needs at least one node");
  // Golub-Welsch on the symmetric Jacobi matrix of the monic recurrence
  //   b_k = k(k+2g) / ((2k+2g)^2 - 1),  mu_0 = sqrt(pi) Gamma(g+1)/Gamma(g+3/2).
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k * (k + 2.0 * gamma) / (std::pow(2.0 * k + 2.0 * gamma, 2) - 1.0);
    J(k - 1, k) = J(k, k - 1) = std::sqrt(b);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = std::sqrt(kPi) * std::tgamma(gamma + 1.0) / std::tgamma(gamma + 1.5);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    weights[i] = mu0 * v * v;
  }
}

SphereGrid build_grid(int m, int degree) {
  check_m(m);
  if (degree < 1) throw InvalidArgument("grid degree must be >= 1");
  SphereGrid g;
  g.m = m;
  g.degree = degree;
  const int K = degree + 1;  // azimuth count; resolves harmonics up to `degree`

  if (m == 1) {
    g.nodes.reserve(K);
    for (int j = 0; j < K; ++j) {
      const double phi = 2.0 * kPi * j / K;
      Paravector p{1, {}};
      p.x[0] = std::cos(phi);
      p.x[1] = std::sin(phi);
      g.nodes.push_back(p);
      g.weights.push_back(1.0 / K);
    }
    return g;
  }

  const int n = (degree + 2) / 2;  // 2n-1 >= degree
  std::vector<std::vector<double>> t(m - 1), w(m - 1);
  for (int level = 0; level < m - 1; ++level)
    gauss_gegenbauer(n, 0.5 * (m - level - 2), t[level], w[level]);

  std::vector<int> idx(m - 1, 0);
  double wsum = 0.0;
  for (;;) {
    double sprod = 1.0, wprod = 1.0;
    Paravector base{m, {}};
    for (int level = 0; level < m - 1; ++level) {
      const double tl = t[level][idx[level]];
      base.x[level] = sprod * tl;
      sprod *= std::sqrt(1.0 - tl * tl);
      wprod *= w[level][idx[level]];
    }
    for (int j = 0; j < K; ++j) {
      const double phi = 2.0 * kPi * j / K;
      Paravector p = base;
      p.x[m - 1] = sprod * std::cos(phi);
      p.x[m] = sprod * std::sin(phi);
      g.nodes.push_back(p);
      const double wj = wprod * (2.0 * kPi / K);
      g.weights.push_back(wj);
      wsum += wj;
    }
    int level = m - 2;
    while (level >= 0 && ++idx[level] == n) idx[level--] = 0;
    if (level < 0) break;
  }
  for (double& wj : g.weights) wj /= wsum;
  return g;
}

Multivector integrate(const SphereGrid& grid, const std::vector<Multivector>& samples) {
  if (samples.size() != grid.nodes.size())
    throw LengthMismatch(grid.nodes.size(), samples.size());
  const int mm = samples.empty() ? grid.m : samples[0].m();
  return pairwise(
      0, static_cast<int>(samples.size()),
      [&](Multivector& acc, int i) { acc += grid.weights[i] * samples[i]; }, Multivector(mm));
}

double integrate_scalar(const SphereGrid& grid, const std::vector<double>& samples) {
  if (samples.size() != grid.nodes.size())
    throw LengthMismatch(grid.nodes.size(), samples.size());
  struct D {
    double v = 0.0;
    D& operator+=(const D& o) {
      v += o.v;
      return *this;
    }
  };
  return pairwise(
             0, static_cast<int>(samples.size()),
             [&](D& acc, int i) { acc.v += grid.weights[i] * samples[i]; }, D{})
      .v;
}

Multivector integrate(const SphereGrid& grid,
                      const std::function<Multivector(const Paravector&)>& f) {
  return pairwise(
      0, static_cast<int>(grid.nodes.size()),
      [&](Multivector& acc, int i) { acc += grid.weights[i] * f(grid.nodes[i]); },
      Multivector(grid.m));
}

FlatGrid build_flat_grid(int m, double radius, int panels, int points) {
  if (m < kMinM || m > kMaxM) throw UnsupportedDimension(m);
  if (!(radius > 0.0) || panels < 1 || points < 1)
    throw InvalidArgument("flat grid needs radius > 0 and at least one panel and point");
  const long axis = static_cast<long>(panels) * points;
  long total = 1;
  for (int i = 0; i < m; ++i) {
    total *= axis;
    if (total > (1L << 21)) throw InvalidArgument("flat grid exceeds 2^21 nodes");
  }

  std::vector<double> gl_nodes, gl_weights;
  gauss_gegenbauer(points, 0.0, gl_nodes, gl_weights);
  std::vector<double> t1, w1;  // composite rule on [-radius, radius]
  const double h = 2.0 * radius / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = -radius + p * h;
    for (int q = 0; q < points; ++q) {
      t1.push_back(lo + 0.5 * h * (gl_nodes[q] + 1.0));
      w1.push_back(0.5 * h * gl_weights[q]);
    }
  }

  FlatGrid g;
  g.m = m;
  g.radius = radius;
  g.nodes.reserve(static_cast<std::size_t>(total));
  g.weights.reserve(static_cast<std::size_t>(total));
  std::vector<int> idx(m, 0);
  for (long c = 0; c < total; ++c) {
    Paravector y;
    y.m = m;
    double w = 1.0;
    for (int i = 0; i < m; ++i) {
      y.x[i + 1] = t1[idx[i]];
      w *= w1[idx[i]];
    }
    g.nodes.push_back(y);
    g.weights.push_back(w);
    for (int i = m - 1; i >= 0; --i) {
      if (++idx[i] < static_cast<int>(t1.size())) break;
      idx[i] = 0;
    }
  }
  return g;
}

}  // namespace ctm
