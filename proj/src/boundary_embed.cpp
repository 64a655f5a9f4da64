#include "ctm/boundary_embed.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace ctm {

namespace {

double dot(const Paravector& a, const Paravector& b) {
  double s = 0.0;
  for (int i = 0; i <= a.m; ++i) s += a.x[i] * b.x[i];
  return s;
}

const std::vector<double>& gl15_nodes() {
  static std::vector<double> nodes = [] {
    std::vector<double> n, w;
    gauss_gegenbauer(15, 0.0, n, w);
    return n;
  }();
  return nodes;
}
const std::vector<double>& gl15_weights() {
  static std::vector<double> weights = [] {
    std::vector<double> n, w;
    gauss_gegenbauer(15, 0.0, n, w);
    return w;
  }();
  return weights;
}

double gl15(const std::function<double(double)>& f, double a, double b) {
  const std::vector<double>& n = gl15_nodes();
  const std::vector<double>& w = gl15_weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) s += w[i] * f(c + h * n[i]);
  return h * s;
}

double adaptive_gl_rec(const std::function<double(double)>& f, double a, double b, double whole,
                       double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gl15(f, a, mid);
  const double right = gl15(f, mid, b);
  if (depth >= 30 || std::abs(left + right - whole) <= tol) return left + right;
  return adaptive_gl_rec(f, a, mid, left, 0.5 * tol, depth + 1) +
         adaptive_gl_rec(f, mid, b, right, 0.5 * tol, depth + 1);
}

double adaptive_gl(const std::function<double(double)>& f, double a, double b, double tol) {
  return adaptive_gl_rec(f, a, b, gl15(f, a, b), tol, 0);
}

void check_signal(std::size_t nodes, const std::vector<double>& samples) {
  if (samples.size() != nodes) throw LengthMismatch(nodes, samples.size());
  for (double s : samples)
    if (!std::isfinite(s)) throw InvalidArgument("boundary samples must be finite");
}

}  // namespace

double poisson_kernel(int m, const Paravector& x, const Paravector& omega) {
  if (m < kMinM || m > kMaxM) throw UnsupportedDimension(m);
  if (x.m != m || omega.m != m) throw DimensionMismatch(m, x.m != m ? x.m : omega.m);
  double d2 = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double d = x.x[i] - omega.x[i];
    d2 += d * d;
  }
  if (d2 < 1e-24) throw EvaluationSingularity();
  return (1.0 - x.norm_sq()) / (sphere_area(m) * std::pow(d2, 0.5 * (m + 1)));
}

Multivector conjugate_kernel(int m, const Paravector& x, const Paravector& omega) {
  if (m < kMinM || m > kMaxM) throw UnsupportedDimension(m);
  if (x.m != m || omega.m != m) throw DimensionMismatch(m, x.m != m ? x.m : omega.m);
  const double r2 = x.norm_sq();
  const double s = dot(x, omega);
  const double expo = 0.5 * (m + 3);
  auto integrand = [&](double t) {
    const double q = t * t * r2 - 2.0 * t * s + 1.0;
    return (m + 1) * std::pow(t, m - 1) * (1.0 - t * t * r2) / std::pow(q, expo);
  };
  const double radial = adaptive_gl(integrand, 0.0, 1.0, 1e-10) / sphere_area(m);
  return radial * NSc(mul(omega.conj().to_multivector(), x.to_multivector()));
}

Multivector schwarz_kernel(int m, const Paravector& x, const Paravector& omega) {
  Multivector s = conjugate_kernel(m, x, omega);
  s[0] += poisson_kernel(m, x, omega);
  return s;
}

HardyFunction schwarz_lift(const BoundarySignal& f) {
  check_signal(f.grid.nodes.size(), f.samples);
  return HardyFunction::boundary_schwarz(f.grid.m, f.grid, f.samples);
}

double poisson_integral(const BoundarySignal& f, const Paravector& x) {
  check_signal(f.grid.nodes.size(), f.samples);
  std::vector<double> vals(f.samples.size());
  const double area = sphere_area(f.grid.m);
  for (std::size_t j = 0; j < vals.size(); ++j)
    vals[j] = area * poisson_kernel(f.grid.m, x, f.grid.nodes[j]) * f.samples[j];
  return integrate_scalar(f.grid, vals);
}

HardyFunction ring_resample(const HardyFunction& f, double rho) {
  if (!(rho > 0.0) || rho >= 1.0) throw InvalidArgument("ring radius must be in (0,1)");
  const SphereGrid* grid = f.boundary_grid();
  if (!grid) throw InvalidArgument("ring_resample needs a grid-backed function");
  std::vector<Multivector> samples;
  samples.reserve(grid->nodes.size());
  for (const Paravector& node : grid->nodes) {
    Paravector x = node;
    for (int i = 0; i <= f.m(); ++i) x.x[i] *= rho;
    samples.push_back(f.eval(x));
  }
  return HardyFunction::boundary(Domain::Ball, f.m(), *grid, std::move(samples));
}

HardyFunction cauchy_lift_halfspace(const FlatSignal& f) {
  check_signal(f.grid.nodes.size(), f.samples);
  double total = 0.0, outer = 0.0;
  const double edge = 0.875 * f.grid.radius;
  for (std::size_t j = 0; j < f.samples.size(); ++j) {
    const double e = f.grid.weights[j] * f.samples[j] * f.samples[j];
    total += e;
    double mx = 0.0;
    for (int i = 1; i <= f.grid.m; ++i) mx = std::max(mx, std::abs(f.grid.nodes[j].x[i]));
    if (mx > edge) outer += e;
  }
  if (total > 0.0 && outer > 0.01 * total) throw TruncationWarning(outer / total);
  return HardyFunction::flat_cauchy(f.grid.m, f.grid, f.samples);
}

}  // namespace ctm
