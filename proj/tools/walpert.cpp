// walpert: weighted Alpert wavelet bases, multiresolution transforms and
// two-weight diagnostics from the command line.
//
// Exit codes: 0 = all requested checks passed, 1 = a check failed,
// 2 = malformed input.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "walpert/json_io.hpp"
#include "walpert/synthetic.hpp"
#include "walpert/twoweight.hpp"

using namespace walpert;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string measure_path, measure2_path, func_path;
  std::string root_spec = "0,1";
  int k = 2;
  int m = 0;
  std::uint64_t j = 0;
  int depth = 4;
  double tol_rank = kRankTol;
  double tol_ortho = 1e-8;
  double alpha = 0.0;
  double delta = 0.5;
  double eps = 0.1;
  int jmax = 40;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format = "csv";
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Interval parse_root(const std::string& spec) {
  auto comma = spec.find(',');
  if (comma == std::string::npos)
    throw ParseError("root must be given as \"a,b\"");
  Rat a = rat_from_string(spec.substr(0, comma));
  Rat b = rat_from_string(spec.substr(comma + 1));
  if (a >= b) throw ParseError("root interval is empty");
  return Interval(a, b);
}

Measure load_measure(const std::string& path) {
  Measure m = measure_from_json_file(path);
  if (std::getenv("ALPERT_EXACT")) {
    m = Measure({m.atoms().begin(), m.atoms().end()},
                {m.pieces().begin(), m.pieces().end()}, Arithmetic::Exact,
                m.bit_budget());
  }
  return m;
}

// function spec: {"depth":D,
//                 "cells":[[c0,c1,...],...],  // cell-local coefficients
//                 "atom_values":[{"x":..,"v":..}...]}
PiecewiseFunction load_function(const std::string& path, const Interval& root) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open function file: " + path);
  json spec;
  try {
    spec = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("function spec: ") + e.what());
  }
  try {
    int depth = spec.at("depth").get<int>();
    PiecewiseFunction f(root, depth);
    const auto& cells = spec.at("cells");
    if (cells.size() != f.cell_count())
      throw ParseError("function spec: cells must list 2^depth entries");
    for (std::uint64_t c = 0; c < f.cell_count(); ++c) {
      for (const auto& v : cells[c]) f.cell(c).push_back(v.get<double>());
    }
    for (const auto& av : spec.value("atom_values", json::array()))
      f.set_atom_value(rat_from_string(av.at("x").dump()),
                       av.at("v").get<double>());
    return f;
  } catch (const json::exception& e) {
    throw ParseError(std::string("function spec: ") + e.what());
  }
}

std::ostream& open_out(const RunConfig& cfg, std::ofstream& file) {
  if (cfg.out_path.empty()) return std::cout;
  file.open(cfg.out_path);
  if (!file) throw ParseError("cannot open output file: " + cfg.out_path);
  return file;
}

int cmd_basis(const RunConfig& cfg) {
  Measure mu = load_measure(cfg.measure_path);
  DyadicInterval q = interval_at(parse_root(cfg.root_spec), cfg.m, cfg.j);
  auto [funcs, rep] = build_alpert(mu, q, cfg.k, cfg.tol_rank);
  json out;
  out["interval"] = {{"m", cfg.m}, {"j", cfg.j}};
  out["k"] = cfg.k;
  out["count"] = rep.count;
  out["nondegenerate"] = rep.nondegenerate;
  out["extra_moments_satisfied"] = rep.extra_moments_satisfied;
  out["residuals"] = {{"ortho", rep.ortho_residual},
                      {"base_moments", rep.base_moment_residual},
                      {"extra_moments", rep.extra_moment_residual}};
  out["functions"] = json::array();
  for (const auto& f : funcs) {
    json jf;
    jf["ell"] = f.ell;
    jf["left"] = json::array();
    jf["right"] = json::array();
    for (int i = 0; i < cfg.k; ++i) {
      jf["left"].push_back(f.left(i));
      jf["right"].push_back(f.right(i));
    }
    out["functions"].push_back(jf);
  }
  std::ofstream file;
  open_out(cfg, file) << out.dump(2) << "\n";
  bool ok = rep.ortho_residual <= cfg.tol_ortho &&
            rep.base_moment_residual <= 1e-9;
  return ok ? 0 : 1;
}

int cmd_transform(const RunConfig& cfg) {
  Measure mu = load_measure(cfg.measure_path);
  Interval root = parse_root(cfg.root_spec);
  PiecewiseFunction f = load_function(cfg.func_path, root);
  WaveletExpansion e = expand(f, mu, root, cfg.depth, cfg.k);
  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  os << "m,j,ell,value\n";
  for (std::size_t i = 0; i < e.coarse.size(); ++i)
    os << "-1,0," << i + 1 << "," << fmt(e.coarse[i]) << "\n";
  for (const auto& [key, coefs] : e.details)
    for (std::size_t i = 0; i < coefs.size(); ++i)
      os << key.first << "," << key.second << "," << i + 1 << ","
         << fmt(coefs[i]) << "\n";
  PiecewiseFunction g = reconstruct(e, mu);
  g.add_scaled(f, -1.0);
  double rel = std::sqrt(std::max(norm2(g, mu), 0.0) /
                         std::max(norm2(f, mu), 1e-300));
  std::cerr << "reconstruction relative error: " << fmt(rel) << "\n";
  return rel <= 1e-8 ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg) {
  Measure mu = load_measure(cfg.measure_path);
  Interval root = parse_root(cfg.root_spec);
  std::mt19937_64 rng(cfg.seed);
  double worst_ortho = 0, worst_base = 0, worst_tel = 0, worst_parseval = 0,
         worst_rt = 0;
  for (const DyadicInterval& q : descendants(root, cfg.depth - 1)) {
    auto [funcs, rep] = build_alpert(mu, q, cfg.k, cfg.tol_rank);
    worst_ortho = std::max(worst_ortho, rep.ortho_residual);
    worst_base = std::max(worst_base, rep.base_moment_residual);
  }
  for (int trial = 0; trial < 20; ++trial) {
    PiecewiseFunction f = random_piecewise(rng, root, cfg.depth, cfg.k - 1);
    WaveletExpansion e = expand(f, mu, root, cfg.depth, cfg.k);
    double nf = norm2(f, mu);
    worst_parseval = std::max(
        worst_parseval, std::abs(expansion_norm2(e, mu) - nf) /
                            std::max(nf, 1e-12));
    PiecewiseFunction g = reconstruct(e, mu);
    g.add_scaled(f, -1.0);
    worst_rt = std::max(worst_rt, std::sqrt(std::max(norm2(g, mu), 0.0) /
                                            std::max(nf, 1e-12)));
    int kd = 1 + int(rng() % cfg.depth);
    DyadicInterval K =
        interval_at(root, kd, rng() % (std::uint64_t(1) << kd));
    DyadicInterval lc = K;
    int ld = int(rng() % kd);
    while (lc.depth > ld) lc = lc.parent();
    worst_tel =
        std::max(worst_tel, check_telescoping(f, mu, K, lc, cfg.k));
  }
  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  os << "check,residual\n"
     << "orthonormality," << fmt(worst_ortho) << "\n"
     << "base_moments," << fmt(worst_base) << "\n"
     << "telescoping," << fmt(worst_tel) << "\n"
     << "parseval," << fmt(worst_parseval) << "\n"
     << "round_trip," << fmt(worst_rt) << "\n";
  bool ok = worst_ortho <= cfg.tol_ortho && worst_base <= 1e-9 &&
            worst_tel <= 1e-8 && worst_parseval <= 1e-7 && worst_rt <= 1e-8;
  return ok ? 0 : 1;
}

int cmd_moments(const RunConfig& cfg) {
  Measure mu = load_measure(cfg.measure_path);
  Interval root = parse_root(cfg.root_spec);
  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  os << "m,j,k,eigenvalues,rank,positive_definite,detail_dim\n";
  for (const DyadicInterval& q : descendants(root, cfg.depth)) {
    MomentMatrix mm = moment_matrix(mu, q, cfg.k);
    RankReport r = rank_pd(mm, cfg.tol_rank);
    os << q.depth << "," << q.index << "," << cfg.k << ",";
    for (int i = 0; i < r.eigenvalues.size(); ++i)
      os << (i ? ";" : "") << fmt(r.eigenvalues(i));
    os << "," << r.rank << "," << (r.is_positive_definite ? 1 : 0) << ","
       << dim_detail_space(mu, q, cfg.k, cfg.tol_rank) << "\n";
  }
  return 0;
}

int cmd_energy(const RunConfig& cfg) {
  Measure sigma = load_measure(cfg.measure_path);
  Measure omega = load_measure(cfg.measure2_path);
  Interval root = parse_root(cfg.root_spec);
  DyadicInterval top = interval_at(root, 0, 0);
  EnergyReport rep = k_energy_dyadic_sup(sigma, omega, cfg.alpha, cfg.k, top,
                                         cfg.depth);
  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  os << "cell_a,cell_b,poisson_k,center,norm2,term\n";
  for (const auto& t : rep.terms)
    os << fmt(t.cell.a_d()) << "," << fmt(t.cell.b_d()) << ","
       << fmt(t.poisson_k) << "," << fmt(t.center) << "," << fmt(t.norm2)
       << "," << fmt(t.value) << "\n";
  os << "# total," << fmt(rep.total) << " (" << rep.partition << ")\n";
  return 0;
}

int cmd_example(const RunConfig& cfg) {
  auto rows = example_energy_table(cfg.eps, cfg.jmax, cfg.k);
  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  os << "j,length,sigma_mass,omega_mass,a2_ratio,poisson_1,poisson_k,"
        "term_1,term_k,sum_1,sum_k\n";
  for (const auto& r : rows)
    os << r.j << "," << fmt(r.length) << "," << fmt(r.sigma_mass) << ","
       << fmt(r.omega_mass) << "," << fmt(r.a2_ratio) << ","
       << fmt(r.poisson_1) << "," << fmt(r.poisson_k) << "," << fmt(r.term_1)
       << "," << fmt(r.term_k) << "," << fmt(r.sum_1) << "," << fmt(r.sum_k)
       << "\n";
  return 0;
}

int cmd_testop(const RunConfig& cfg) {
  Measure sigma = load_measure(cfg.measure_path);
  Measure omega = load_measure(cfg.measure2_path);
  Interval root = parse_root(cfg.root_spec);
  TestOperator op = dyadic_test_op(sigma, omega, root, cfg.depth);
  std::mt19937_64 rng(cfg.seed);
  std::ofstream file;
  std::ostream& os = open_out(cfg, file);
  os << "m,j,p0,p1,lhs,rhs,pass\n";
  bool all_pass = true;
  for (const DyadicInterval& q : descendants(root, cfg.depth - 1)) {
    for (int trial = 0; trial < 3; ++trial) {
      Poly<double> p{random_rat(rng, -2.0, 2.0), random_rat(rng, -2.0, 2.0)};
      TestingCheck c = testing_check(op, q, p);
      all_pass = all_pass && c.pass;
      os << q.depth << "," << q.index << "," << fmt(p[0]) << "," << fmt(p[1])
         << "," << fmt(c.lhs) << "," << fmt(c.rhs) << "," << (c.pass ? 1 : 0)
         << "\n";
    }
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted Alpert wavelet bases and two-weight diagnostics"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub, bool needs_measure2 = false) {
    sub->add_option("--root", cfg.root_spec, "root interval as a,b");
    sub->add_option("--k", cfg.k, "vanishing-moment order")
        ->check(CLI::Range(1, 8));
    sub->add_option("--depth", cfg.depth, "grid depth")
        ->check(CLI::Range(0, kMaxGridDepth));
    sub->add_option("--tol-rank", cfg.tol_rank, "rank cutoff");
    sub->add_option("--tol-ortho", cfg.tol_ortho, "orthonormality tolerance");
    sub->add_option("--seed", cfg.seed, "seed for randomized suites");
    sub->add_option("--out", cfg.out_path, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    if (needs_measure2)
      sub->add_option("--measure2", cfg.measure2_path, "omega measure JSON")
          ->required();
  };

  auto* basis = app.add_subcommand("basis", "build and verify one interval");
  basis->add_option("--measure", cfg.measure_path)->required();
  basis->add_option("--m", cfg.m, "interval depth")->required();
  basis->add_option("--j", cfg.j, "interval index")->required();
  add_common(basis);

  auto* transform = app.add_subcommand("transform", "expand/reconstruct");
  transform->add_option("--measure", cfg.measure_path)->required();
  transform->add_option("--func", cfg.func_path)->required();
  add_common(transform);

  auto* verify = app.add_subcommand("verify", "full invariant suite");
  verify->add_option("--measure", cfg.measure_path)->required();
  add_common(verify);

  auto* moments = app.add_subcommand("moments", "moment-matrix analysis");
  moments->add_option("--measure", cfg.measure_path)->required();
  add_common(moments);

  auto* energy = app.add_subcommand("energy", "k-energy dyadic sup");
  energy->add_option("--measure", cfg.measure_path)->required();
  energy->add_option("--alpha", cfg.alpha)->check(CLI::Range(0.0, 0.999));
  add_common(energy, true);

  auto* example = app.add_subcommand("example", "lacunary weight-pair table");
  example->add_option("--eps", cfg.eps)->check(CLI::PositiveNumber);
  example->add_option("--jmax", cfg.jmax)->check(CLI::Range(3, 60));
  add_common(example);

  auto* testop = app.add_subcommand("testop", "dyadic testing conditions");
  testop->add_option("--measure", cfg.measure_path)->required();
  add_common(testop, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(basis)) return cmd_basis(cfg);
    if (app.got_subcommand(transform)) return cmd_transform(cfg);
    if (app.got_subcommand(verify)) return cmd_verify(cfg);
    if (app.got_subcommand(moments)) return cmd_moments(cfg);
    if (app.got_subcommand(energy)) return cmd_energy(cfg);
    if (app.got_subcommand(example)) return cmd_example(cfg);
    if (app.got_subcommand(testop)) return cmd_testop(cfg);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
