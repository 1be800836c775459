#include "walpert/measure.hpp"

#include <cmath>
#include <iostream>

namespace walpert {

namespace {

// Kahan accumulator for the float paths.
struct Accum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

}  // namespace

Measure::Measure(std::vector<Atom> atoms, std::vector<Piece> pieces,
                 Arithmetic mode, int bit_budget)
    : atoms_(std::move(atoms)),
      pieces_(std::move(pieces)),
      mode_(mode),
      bit_budget_(bit_budget) {}

Measure::Measure(const Measure& o)
    : atoms_(o.atoms_),
      pieces_(o.pieces_),
      mode_(o.mode_),
      bit_budget_(o.bit_budget_) {
  overflowed_.store(o.overflowed_.load());
  warned_.store(o.warned_.load());
}

Measure& Measure::operator=(const Measure& o) {
  atoms_ = o.atoms_;
  pieces_ = o.pieces_;
  mode_ = o.mode_;
  bit_budget_ = o.bit_budget_;
  overflowed_.store(o.overflowed_.load());
  warned_.store(o.warned_.load());
  return *this;
}

std::vector<std::string> Measure::validate() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].mass <= 0)
      out.push_back("atom " + std::to_string(i) + " at x=" +
                    atoms_[i].x.get_str() + ": nonpositive mass");
  }
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    if (p.span.empty()) {
      out.push_back("piece " + std::to_string(i) + ": empty interval");
      continue;
    }
    Rat witness;
    if (!poly_nonneg_on(p.density, p.span.a, p.span.b, &witness))
      out.push_back("piece " + std::to_string(i) + " on " + p.span.str() +
                    ": density negative on piece (at x=" + witness.get_str() +
                    ")");
    for (std::size_t j = 0; j < i; ++j) {
      if (!pieces_[j].span.intersect(p.span).empty()) {
        out.push_back("pieces " + std::to_string(j) + " and " +
                      std::to_string(i) + ": overlapping interiors");
      }
    }
  }
  return out;
}

Rat Measure::guard(Rat v) const {
  std::size_t bits = rat_bits(v);
  if (bits > static_cast<std::size_t>(bit_budget_)) throw ExactOverflow(bits);
  return v;
}

Rat Measure::local_moment_exact_in(const Interval& J, const Interval& frame,
                                   int i) const {
  Rat c = frame.center();
  Rat h = frame.length();
  if (h == 0) throw std::invalid_argument("degenerate frame");
  Rat tot(0);
  for (const Atom& a : atoms_) {
    if (!J.contains(a.x)) continue;
    Rat t = (a.x - c) / h;
    tot += a.mass * rat_pow(t, unsigned(i));
  }
  for (const Piece& p : pieces_) {
    Interval clip = p.span.intersect(J);
    if (clip.empty()) continue;
    // substitute x = c + h t, integrate t^i density(c + h t) h dt
    Poly<Rat> dt = poly_affine_arg(p.density, c, h);
    Rat tlo = (clip.a - c) / h;
    Rat thi = (clip.b - c) / h;
    Rat plo = rat_pow(tlo, unsigned(i + 1));
    Rat phi = rat_pow(thi, unsigned(i + 1));
    for (std::size_t s = 0; s < dt.size(); ++s) {
      tot += h * dt[s] * (phi - plo) / Rat(int(i) + int(s) + 1);
      plo *= tlo;
      phi *= thi;
    }
  }
  return guard(tot);
}

Rat Measure::moment_exact(const Interval& J, int i) const {
  Rat tot(0);
  for (const Atom& a : atoms_) {
    if (!J.contains(a.x)) continue;
    tot += a.mass * rat_pow(a.x, unsigned(i));
  }
  for (const Piece& p : pieces_) {
    Interval clip = p.span.intersect(J);
    if (clip.empty()) continue;
    Rat plo = rat_pow(clip.a, unsigned(i + 1));
    Rat phi = rat_pow(clip.b, unsigned(i + 1));
    for (std::size_t r = 0; r < p.density.size(); ++r) {
      tot += p.density[r] * (phi - plo) / Rat(int(i) + int(r) + 1);
      plo *= clip.a;
      phi *= clip.b;
    }
  }
  return guard(tot);
}

double Measure::moment(const Interval& J, int i) const {
  if (use_exact()) {
    try {
      return to_double(moment_exact(J, i));
    } catch (const ExactOverflow&) {
      overflowed_.store(true);
      if (!warned_.exchange(true))
        std::cerr << "walpert: exact moment exceeded bit budget, "
                     "falling back to float arithmetic\n";
    }
  }
  Accum acc;
  for (const Atom& a : atoms_) {
    if (!J.contains(a.x)) continue;
    acc.add(to_double(a.mass) * std::pow(to_double(a.x), i));
  }
  for (const Piece& p : pieces_) {
    Interval clip = p.span.intersect(J);
    if (clip.empty()) continue;
    double lo = clip.a_d(), hi = clip.b_d();
    double plo = std::pow(lo, i + 1), phi = std::pow(hi, i + 1);
    for (std::size_t r = 0; r < p.density.size(); ++r) {
      acc.add(to_double(p.density[r]) * (phi - plo) / double(i + int(r) + 1));
      plo *= lo;
      phi *= hi;
    }
  }
  return acc.s;
}

double Measure::local_moment_in(const Interval& J, const Interval& frame,
                                int i) const {
  if (use_exact()) {
    try {
      return to_double(local_moment_exact_in(J, frame, i));
    } catch (const ExactOverflow&) {
      overflowed_.store(true);
      if (!warned_.exchange(true))
        std::cerr << "walpert: exact moment exceeded bit budget, "
                     "falling back to float arithmetic\n";
    }
  }
  Accum acc;
  double c = frame.center_d();
  double h = frame.length_d();
  for (const Atom& a : atoms_) {
    if (!J.contains(a.x)) continue;
    acc.add(to_double(a.mass) * std::pow((to_double(a.x) - c) / h, i));
  }
  acc.add(piece_local_moment_in(J, frame, i));
  return acc.s;
}

double Measure::piece_local_moment_in(const Interval& J, const Interval& frame,
                                      int i) const {
  Accum acc;
  double c = frame.center_d();
  double h = frame.length_d();
  for (const Piece& p : pieces_) {
    Interval clip = p.span.intersect(J);
    if (clip.empty()) continue;
    Poly<double> dens(p.density.size());
    for (std::size_t r = 0; r < p.density.size(); ++r)
      dens[r] = to_double(p.density[r]);
    Poly<double> dt = poly_affine_arg(dens, c, h);
    double tlo = (clip.a_d() - c) / h;
    double thi = (clip.b_d() - c) / h;
    double plo = std::pow(tlo, i + 1), phi = std::pow(thi, i + 1);
    for (std::size_t s = 0; s < dt.size(); ++s) {
      acc.add(h * dt[s] * (phi - plo) / double(i + int(s) + 1));
      plo *= tlo;
      phi *= thi;
    }
  }
  return acc.s;
}

double Measure::local_moment(const Interval& J, int i) const {
  return local_moment_in(J, J, i);
}

Measure Measure::restrict(const Interval& J) const {
  std::vector<Atom> atoms;
  for (const Atom& a : atoms_)
    if (J.contains(a.x)) atoms.push_back(a);
  std::vector<Piece> pieces;
  for (const Piece& p : pieces_) {
    Interval clip = p.span.intersect(J);
    if (!clip.empty()) pieces.push_back({clip, p.density});
  }
  Measure out(std::move(atoms), std::move(pieces), mode_, bit_budget_);
  return out;
}

double Measure::total_mass() const {
  Accum acc;
  for (const Atom& a : atoms_) acc.add(to_double(a.mass));
  for (const Piece& p : pieces_) {
    Poly<double> dens(p.density.size());
    for (std::size_t r = 0; r < p.density.size(); ++r)
      dens[r] = to_double(p.density[r]);
    acc.add(poly_integral(dens, p.span.a_d(), p.span.b_d()));
  }
  return acc.s;
}

std::vector<Measure::Atom> Measure::atoms_in(const Interval& J) const {
  std::vector<Atom> out;
  for (const Atom& a : atoms_)
    if (J.contains(a.x)) out.push_back(a);
  return out;
}

Measure lebesgue(const Interval& span) {
  return Measure({}, {{span, {Rat(1)}}});
}

Measure point_mass(const Rat& x, const Rat& mass) {
  return Measure({{x, mass}}, {});
}

}  // namespace walpert
