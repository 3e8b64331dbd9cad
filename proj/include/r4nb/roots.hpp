#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace r4nb::roots {

// Sign-change brackets of f on a logarithmic grid over [lo, hi].
template <typename F>
std::vector<std::pair<double, double>> scan_log(F&& f, double lo, double hi, int nodes) {
  std::vector<std::pair<double, double>> brackets;
  double ratio = std::pow(hi / lo, 1.0 / (nodes - 1));
  double x_prev = lo, f_prev = f(lo);
  for (int i = 1; i < nodes; ++i) {
    double x = lo * std::pow(ratio, i);
    double fx = f(x);
    if (f_prev == 0.0)
      brackets.emplace_back(x_prev, x_prev);
    else if (fx != 0.0 && std::signbit(fx) != std::signbit(f_prev))
      brackets.emplace_back(x_prev, x);
    x_prev = x;
    f_prev = fx;
  }
  if (f_prev == 0.0) brackets.emplace_back(x_prev, x_prev);
  return brackets;
}

template <typename F>
double bisect(F&& f, double a, double b, int iters = 100) {
  if (a == b) return a;
  double fa = f(a);
  for (int i = 0; i < iters; ++i) {
    double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    double fm = f(m);
    if (fm == 0.0) return m;
    if (std::signbit(fm) == std::signbit(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// A few guarded Newton steps to polish a bracketed root.
template <typename F, typename DF>
double newton_polish(F&& f, DF&& df, double x0, double rel_tol = 1e-12, int max_iter = 30) {
  double x = x0;
  for (int i = 0; i < max_iter; ++i) {
    double d = df(x);
    if (d == 0.0) break;
    double step = f(x) / d;
    double x_next = x - step;
    if (!(x_next > 0.0) || !std::isfinite(x_next)) break;
    x = x_next;
    if (std::abs(step) <= rel_tol * std::abs(x)) break;
  }
  return x;
}

}  // namespace r4nb::roots
