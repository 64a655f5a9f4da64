#include "ctm/kernels.hpp"

#include <cmath>

namespace ctm {

namespace detail {

namespace {
double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

double dot(const Multivector& a, const Multivector& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[BladeMask(i)] * b[BladeMask(i)];
  return s;
}
}  // namespace

Multivector kernel_shape(const Multivector& w, int m) {
  const double r = norm(w);
  if (r < 1e-14) throw EvaluationSingularity();
  return conj(w) * (1.0 / ipow(r, m + 1));
}

Multivector kernel_shape_d(const Multivector& w, const Multivector& u, int m) {
  const double r = norm(w);
  if (r < 1e-14) throw EvaluationSingularity();
  return conj(u) * (1.0 / ipow(r, m + 1)) -
         conj(w) * ((m + 1) * dot(w, u) / ipow(r, m + 3));
}

Multivector kernel_shape_dd(const Multivector& w, const Multivector& u, const Multivector& v,
                            int m) {
  const double r = norm(w);
  if (r < 1e-14) throw EvaluationSingularity();
  const double c3 = (m + 1) / ipow(r, m + 3);
  const double c5 = double(m + 1) * (m + 3) / ipow(r, m + 5);
  return (conj(u) * dot(w, v) + conj(v) * dot(w, u) + conj(w) * dot(u, v)) * -c3 +
         conj(w) * (c5 * dot(w, u) * dot(w, v));
}

Multivector kernel_w(Domain domain, const Paravector& a, const Paravector& x) {
  if (a.m != x.m) throw DimensionMismatch(a.m, x.m);
  if (domain == Domain::Ball)
    return Multivector::scalar(a.m, 1.0) - mul(a.conj().to_multivector(), x.to_multivector());
  return x.to_multivector() + a.conj().to_multivector();
}

}  // namespace detail

void validate_atom(const KernelAtom& atom) {
  const Paravector& a = atom.pole;
  if (atom.domain == Domain::Ball) {
    if (a.norm() >= 1.0) throw PoleOutsideDomain();
  } else {
    if (a.x[0] <= 0.0) throw PoleOutsideDomain();
  }
  if (atom.derivative) {
    if (atom.derivative->m != a.m) throw DimensionMismatch(atom.derivative->m, a.m);
    if (std::abs(atom.derivative->norm() - 1.0) > 1e-12)
      throw InvalidArgument("derivative direction must be a unit paravector");
  }
}

Multivector szego_eval(Domain domain, const Paravector& a, const Paravector& x) {
  validate_atom({domain, a, std::nullopt});
  return detail::kernel_shape(detail::kernel_w(domain, a, x), a.m);
}

namespace {

double boundary_distance(Domain domain, const Paravector& a) {
  return domain == Domain::Ball ? 1.0 - a.norm() : a.x[0];
}

Paravector shifted(const Paravector& a, const Paravector& omega, double h) {
  Paravector b = a;
  for (int i = 0; i <= a.m; ++i) b.x[i] += h * omega.x[i];
  return b;
}

// pole-directional derivative by central differences with one Richardson step
Multivector pole_derivative_fd(Domain domain, const Paravector& a, const Paravector& omega,
                               const Paravector& x) {
  const double h = 1e-4 * boundary_distance(domain, a);
  const auto central = [&](double step) {
    return (szego_eval(domain, shifted(a, omega, step), x) -
            szego_eval(domain, shifted(a, omega, -step), x)) *
           (0.5 / step);
  };
  const Multivector d1 = central(h);
  const Multivector d2 = central(0.5 * h);
  return (d2 * 4.0 - d1) * (1.0 / 3.0);
}

}  // namespace

Multivector atom_eval(const KernelAtom& atom, const Paravector& x) {
  validate_atom(atom);
  if (!atom.derivative) return szego_eval(atom.domain, atom.pole, x);
  return pole_derivative_fd(atom.domain, atom.pole, *atom.derivative, x);
}

Multivector cauchy_kernel(const Paravector& x) {
  return detail::kernel_shape(x.to_multivector(), x.m);
}

Multivector szego_arg_derivative(Domain domain, const Paravector& a, const Paravector& x,
                                 const Paravector& omega) {
  const Multivector w = detail::kernel_w(domain, a, x);
  const Multivector v = domain == Domain::Ball
                            ? -mul(a.conj().to_multivector(), omega.to_multivector())
                            : omega.to_multivector();
  return detail::kernel_shape_d(w, v, a.m);
}

Multivector gram_entry(const KernelAtom& ai, const KernelAtom& aj) {
  validate_atom(ai);
  validate_atom(aj);
  if (ai.domain != aj.domain) throw DomainMismatch();
  const Domain dom = ai.domain;
  const Paravector& a = ai.pole;
  const Paravector& b = aj.pole;  // evaluation point via the reproducing identity
  const int m = a.m;
  const Multivector w = detail::kernel_w(dom, a, b);

  // variations of w under the pole of atom_i (s) and the argument (t)
  const auto pole_var = [&](const Paravector& omega) {
    return dom == Domain::Ball ? -mul(omega.conj().to_multivector(), b.to_multivector())
                               : omega.conj().to_multivector();
  };
  const auto arg_var = [&](const Paravector& omega) {
    return dom == Domain::Ball ? -mul(a.conj().to_multivector(), omega.to_multivector())
                               : omega.to_multivector();
  };

  if (!ai.derivative && !aj.derivative) return detail::kernel_shape(w, m);
  if (ai.derivative && !aj.derivative)
    return detail::kernel_shape_d(w, pole_var(*ai.derivative), m);
  if (!ai.derivative && aj.derivative)
    return detail::kernel_shape_d(w, arg_var(*aj.derivative), m);

  const Multivector mixed =
      dom == Domain::Ball
          ? -mul(ai.derivative->conj().to_multivector(), aj.derivative->to_multivector())
          : Multivector(m);
  return detail::kernel_shape_dd(w, pole_var(*ai.derivative), arg_var(*aj.derivative), m) +
         detail::kernel_shape_d(w, mixed, m);
}

}  // namespace ctm
