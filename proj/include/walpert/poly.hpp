#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "walpert/rational.hpp"

namespace walpert {

// Dense polynomials, coefficients in ascending degree order.  Shared by the
// measure moment engine, the basis builders and the root-isolation code.
template <class T>
using Poly = std::vector<T>;

template <class T>
T poly_eval(const Poly<T>& p, const T& x) {
  T r(0);
  for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
  return r;
}

template <class T>
Poly<T> poly_add(const Poly<T>& p, const Poly<T>& q) {
  Poly<T> r(std::max(p.size(), q.size()), T(0));
  for (std::size_t i = 0; i < p.size(); ++i) r[i] += p[i];
  for (std::size_t i = 0; i < q.size(); ++i) r[i] += q[i];
  return r;
}

template <class T>
Poly<T> poly_scale(Poly<T> p, const T& s) {
  for (auto& c : p) c *= s;
  return p;
}

template <class T>
Poly<T> poly_mul(const Poly<T>& p, const Poly<T>& q) {
  if (p.empty() || q.empty()) return {};
  Poly<T> r(p.size() + q.size() - 1, T(0));
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

template <class T>
Poly<T> poly_derivative(const Poly<T>& p) {
  if (p.size() <= 1) return {};
  Poly<T> r(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * T(int(i));
  return r;
}

// q(s) = p(u + v s); Horner over polynomial arithmetic.
template <class T>
Poly<T> poly_affine_arg(const Poly<T>& p, const T& u, const T& v) {
  Poly<T> r;
  for (std::size_t i = p.size(); i-- > 0;) {
    // r = r*(u + v s) + p[i]
    Poly<T> next(r.size() + 1, T(0));
    for (std::size_t j = 0; j < r.size(); ++j) {
      next[j] += r[j] * u;
      next[j + 1] += r[j] * v;
    }
    if (next.empty()) next.assign(1, T(0));
    next[0] += p[i];
    r = std::move(next);
  }
  return r;
}

template <class T>
T poly_integral(const Poly<T>& p, const T& a, const T& b) {
  T s(0);
  T pa = a, pb = b;  // running powers a^{r+1}, b^{r+1}
  for (std::size_t r = 0; r < p.size(); ++r) {
    s += p[r] * (pb - pa) / T(int(r + 1));
    pa *= a;
    pb *= b;
  }
  return s;
}

template <class T>
void poly_trim(Poly<T>& p) {
  while (!p.empty() && p.back() == T(0)) p.pop_back();
}

// --- exact real-root machinery (rational coefficients) ---------------------
//
// Classic Sturm-sequence isolation.  Degrees in this project stay small
// (density polynomials and the degree-(2k-1) best-center derivative), so no
// attempt is made at asymptotic cleverness.

Poly<Rat> poly_gcd(Poly<Rat> a, Poly<Rat> b);
Poly<Rat> poly_squarefree(const Poly<Rat>& p);

struct SturmChain {
  std::vector<Poly<Rat>> seq;
  int variations(const Rat& x) const;
};

SturmChain sturm_chain(const Poly<Rat>& p);

// Distinct real roots in (a, b]; p(a) != 0 and p(b) != 0 are required.
int sturm_count(const SturmChain& c, const Rat& a, const Rat& b);

// Disjoint isolating brackets for the distinct roots of p in the open
// interval (a, b).  Roots exactly at a or b are not reported.
std::vector<std::pair<Rat, Rat>> isolate_roots(const Poly<Rat>& p, Rat a,
                                               Rat b);

// Bisect an isolating bracket until its width is below `width`.
std::pair<Rat, Rat> refine_bracket(const Poly<Rat>& p, Rat lo, Rat hi,
                                   const Rat& width);

// Sign analysis: is p >= 0 everywhere on [a, b]?  On failure, *witness is a
// point with p(witness) < 0.
bool poly_nonneg_on(const Poly<Rat>& p, const Rat& a, const Rat& b,
                    Rat* witness = nullptr);

}  // namespace walpert
