#include "walpert/poly.hpp"

#include <algorithm>
#include <stdexcept>

#include "walpert/interval.hpp"

namespace walpert {

namespace {

// remainder of a / b over Q
Poly<Rat> poly_rem(Poly<Rat> a, const Poly<Rat>& b) {
  poly_trim(a);
  if (b.empty()) throw std::invalid_argument("poly_rem: zero divisor");
  while (a.size() >= b.size() && !a.empty()) {
    Rat q = a.back() / b.back();
    std::size_t off = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= q * b[i];
    a.pop_back();
    poly_trim(a);
  }
  return a;
}

void normalize_leading(Poly<Rat>& p) {
  poly_trim(p);
  if (p.empty()) return;
  Rat lead = p.back();
  for (auto& c : p) c /= lead;
}

}  // namespace

Rat rat_from_string(const std::string& s) {
  if (s.find('/') != std::string::npos) {
    Rat q(s);
    q.canonicalize();
    return q;
  }
  // decimal / scientific form
  std::string t = s;
  long exp10 = 0;
  auto epos = t.find_first_of("eE");
  if (epos != std::string::npos) {
    exp10 = std::stol(t.substr(epos + 1));
    t = t.substr(0, epos);
  }
  auto dot = t.find('.');
  if (dot != std::string::npos) {
    exp10 -= long(t.size() - dot - 1);
    t.erase(dot, 1);
  }
  if (t.empty() || t == "-" || t == "+") throw std::invalid_argument("bad number: " + s);
  Rat q{mpz_class(t, 10)};  // base fixed: leading zeros are not octal
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 >= 0)
    q *= Rat(p10);
  else
    q /= Rat(p10);
  q.canonicalize();
  return q;
}

Poly<Rat> poly_gcd(Poly<Rat> a, Poly<Rat> b) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    Poly<Rat> r = poly_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  normalize_leading(a);
  return a;
}

Poly<Rat> poly_squarefree(const Poly<Rat>& p) {
  Poly<Rat> q = p;
  poly_trim(q);
  if (q.size() <= 1) return q;
  Poly<Rat> g = poly_gcd(q, poly_derivative(q));
  if (g.size() <= 1) return q;
  // q / g, exact division
  Poly<Rat> out(q.size() - g.size() + 1, Rat(0));
  Poly<Rat> rem = q;
  for (std::size_t i = out.size(); i-- > 0;) {
    if (rem.size() < g.size() + i) continue;
    Rat c = rem[g.size() - 1 + i] / g.back();
    out[i] = c;
    for (std::size_t j = 0; j < g.size(); ++j) rem[i + j] -= c * g[j];
  }
  poly_trim(out);
  return out;
}

SturmChain sturm_chain(const Poly<Rat>& p) {
  SturmChain c;
  Poly<Rat> p0 = poly_squarefree(p);
  poly_trim(p0);
  if (p0.empty()) return c;
  c.seq.push_back(p0);
  Poly<Rat> p1 = poly_derivative(p0);
  poly_trim(p1);
  while (!p1.empty()) {
    c.seq.push_back(p1);
    Poly<Rat> r = poly_rem(c.seq[c.seq.size() - 2], p1);
    for (auto& x : r) x = -x;
    p1 = std::move(r);
  }
  return c;
}

int SturmChain::variations(const Rat& x) const {
  int v = 0, last = 0;
  for (const auto& p : seq) {
    Rat val = poly_eval(p, x);
    int s = sgn(val);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

int sturm_count(const SturmChain& c, const Rat& a, const Rat& b) {
  if (c.seq.empty()) return 0;
  return c.variations(a) - c.variations(b);
}

std::vector<std::pair<Rat, Rat>> isolate_roots(const Poly<Rat>& p, Rat a,
                                               Rat b) {
  std::vector<std::pair<Rat, Rat>> out;
  Poly<Rat> q = poly_squarefree(p);
  poly_trim(q);
  if (q.size() <= 1) return out;
  // nudge endpoints off roots of q
  SturmChain chain = sturm_chain(q);
  Rat step = (b - a) / 4096;
  while (poly_eval(q, a) == 0 && a < b) a += step;
  while (poly_eval(q, b) == 0 && b > a) b -= step;
  if (a >= b) return out;

  struct Seg {
    Rat lo, hi;
    int count;
  };
  std::vector<Seg> work{{a, b, sturm_count(chain, a, b)}};
  while (!work.empty()) {
    Seg s = work.back();
    work.pop_back();
    if (s.count <= 0) continue;
    if (s.count == 1) {
      out.emplace_back(s.lo, s.hi);
      continue;
    }
    Rat mid = (s.lo + s.hi) / 2;
    while (poly_eval(q, mid) == 0) mid = (s.lo + 2 * mid) / 3;
    int left = sturm_count(chain, s.lo, mid);
    work.push_back({s.lo, mid, left});
    work.push_back({mid, s.hi, s.count - left});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  // shrink until strictly separated: the gap midpoints must be interior to
  // the sign-constant regions between roots
  bool again = true;
  while (again) {
    again = false;
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
      if (out[i].second >= out[i + 1].first &&
          (out[i].second > out[i].first || out[i + 1].second > out[i + 1].first)) {
        out[i] = refine_bracket(q, out[i].first, out[i].second,
                                (out[i].second - out[i].first) / 4);
        out[i + 1] = refine_bracket(q, out[i + 1].first, out[i + 1].second,
                                    (out[i + 1].second - out[i + 1].first) / 4);
        again = true;
      }
    }
  }
  return out;
}

std::pair<Rat, Rat> refine_bracket(const Poly<Rat>& p, Rat lo, Rat hi,
                                   const Rat& width) {
  Poly<Rat> q = poly_squarefree(p);
  SturmChain chain = sturm_chain(q);
  if (sturm_count(chain, lo, hi) == 0) return {lo, hi};
  while (hi - lo > width) {
    Rat mid = (lo + hi) / 2;
    if (poly_eval(q, mid) == 0) return {mid, mid};
    if (sturm_count(chain, lo, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return {lo, hi};
}

bool poly_nonneg_on(const Poly<Rat>& p, const Rat& a, const Rat& b,
                    Rat* witness) {
  Poly<Rat> q = p;
  poly_trim(q);
  auto bad = [&](const Rat& x) {
    if (poly_eval(q, x) < 0) {
      if (witness) *witness = x;
      return true;
    }
    return false;
  };
  if (q.empty()) return true;
  if (bad(a) || bad(b)) return false;
  auto brackets = isolate_roots(q, a, b);
  // sample once in every gap between consecutive root brackets
  Rat prev = a;
  for (const auto& [lo, hi] : brackets) {
    if (lo > prev && bad((prev + lo) / 2)) return false;
    prev = hi;
  }
  if (prev < b && bad((prev + b) / 2)) return false;
  return true;
}

std::string Interval::str() const {
  return "[" + a.get_str() + ", " + b.get_str() + ")";
}

}  // namespace walpert
