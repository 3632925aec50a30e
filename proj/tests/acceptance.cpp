// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <cmath>
#include <cstdio>
#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "qplab/qp.hpp"
#include "qplab/steinberg.hpp"
#include "qplab/suites.hpp"
#include "qplab/wonderful.hpp"
#include "qplab/zbar.hpp"

using namespace qplab;

namespace {

struct Part {
  std::string label;
  double worst = 0.0;  // NaN if a sample threw
  double threshold = 0.0;
  int points = 0;
  std::string error;
  bool ok() const { return !std::isnan(worst) && worst <= threshold; }
};

suites::Config g_cfg;

// Samples f at count points; one Part per column.
std::vector<Part> sample(const std::string& key, int count, const std::vector<std::pair<std::string, double>>& cols,
                         const std::function<std::vector<double>(Rng&, int)>& f) {
  auto s = suites::run_sampled(g_cfg, key, count, static_cast<int>(cols.size()), f);
  std::vector<Part> out;
  for (size_t k = 0; k < cols.size(); ++k) {
    Part p{cols[k].first, 0.0, cols[k].second, count, s.first_error};
    for (double d : s.defects[k]) {
      if (std::isnan(d)) {
        p.worst = NAN;
        break;
      }
      p.worst = std::max(p.worst, d);
    }
    out.push_back(p);
  }
  return out;
}

int g_failed = 0;

void report(int id, const std::string& title, const std::vector<Part>& parts) {
  bool ok = true;
  for (const Part& p : parts) ok = ok && p.ok();
  if (!ok) ++g_failed;
  std::printf("%s  %2d  %s\n", ok ? "PASS" : "FAIL", id, title.c_str());
  for (const Part& p : parts) {
    std::printf("        %-4s %-44s %4d pts  max %.3e  thr %.1e", p.ok() ? "ok" : "bad", p.label.c_str(), p.points,
                p.worst, p.threshold);
    if (!p.error.empty()) std::printf("  (%s)", p.error.c_str());
    std::printf("\n");
  }
  std::fflush(stdout);
}

void append(std::vector<Part>& a, const std::vector<Part>& b) { a.insert(a.end(), b.begin(), b.end()); }

Vec random_point(const qp::QPSpace& m, Rng& rng) {
  const auto& b = m.layout.basis();
  std::vector<Mat> mats;
  for (int f = 0; f < m.layout.factor_count(); ++f)
    mats.push_back(group::group_exp(Mat::Identity(b.n, b.n), b.element<cd>(rng.complex_vector(b.dim(), 0.5))));
  return m.layout.pack(mats);
}

Mat random_group(int n, Rng& rng) {
  auto b = liealg::orthonormal_basis(n);
  return group::group_exp(Mat::Identity(n, n), b.element<cd>(rng.complex_vector(b.dim(), 0.5)));
}

double gap(int got, int want) { return std::abs(static_cast<double>(got - want)); }

liealg::Subset proper_subset(int n, Rng& rng) {
  for (;;) {
    liealg::Subset I;
    for (int i = 1; i < n; ++i)
      if (rng.uniform() < 0.5) I.push_back(i);
    if (static_cast<int>(I.size()) < n - 1) return I;
  }
}

}  // namespace

int main(int argc, char** argv) {
  g_cfg.seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 42;
  g_cfg.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* e = std::getenv("QPLAB_THREADS")) g_cfg.threads = std::max(1, std::min(g_cfg.threads, std::atoi(e)));
  std::printf("acceptance seed %llu\n", static_cast<unsigned long long>(g_cfg.seed));

  qp::QPSpace D2 = qp::make_double(2), D3 = qp::make_double(3), G2 = qp::make_pi_G(2), G3 = qp::make_pi_G(3);
  const std::vector<std::pair<std::string, const qp::QPSpace*>> spaces{
      {"D(SL2)", &D2}, {"D(SL3)", &D3}, {"(SL2, pi_G)", &G2}, {"(SL3, pi_G)", &G3}};

  {
    std::vector<Part> parts;
    for (const auto& [name, m] : spaces)
      append(parts, sample("acc.qp." + name, 25, {{"[pi,pi] = phi_M on " + name, 1e-5}}, [&](Rng& rng, int) {
               return std::vector<double>{qp::verify_qp_identity(*m, random_point(*m, rng))};
             }));
    report(1, "quasi-Poisson identity", parts);
  }

  {
    std::vector<Part> parts;
    for (const auto& [name, m] : spaces)
      append(parts, sample("acc.dirac." + name, 25, {{"Phi_* L_M = L_G on " + name, 1e-6}}, [&](Rng& rng, int) {
               return std::vector<double>{qp::forward_dirac_defect(*m, random_point(*m, rng))};
             }));
    report(2, "forward Dirac image of the moment map", parts);
  }

  report(3, "Q1-Q3 and compatibility on the SL(2) double",
         sample("acc.q", 25,
                {{"d omega = -Phi^* eta", 1e-5},
                 {"iota_{xi_M} omega = 1/2 Phi^*(theta^L+theta^R, xi)", 1e-6},
                 {"ker omega = {xi_M : Ad_Phi xi = -xi} (rank)", 0.0},
                 {"ker omega = {xi_M : Ad_Phi xi = -xi} (distance)", 1e-6},
                 {"pi^# omega^b = I + 1/4 sum (theta^L-theta^R)_i e_i", 1e-5}},
                [&](Rng& rng, int) {
                  Vec x = random_point(D2, rng);
                  qp::Q3Result q = qp::verify_Q3(D2, x);
                  return std::vector<double>{qp::verify_Q1(D2, x), qp::verify_Q2(D2, x),
                                             gap(q.kernel_dim, q.predicted_dim), q.distance, qp::check_compat(D2, x)};
                }));

  {
    std::vector<Part> parts = sample("acc.rank", 25,
                                     {{"rank(pi^# + rho) = 6 on the SL(2) double", 0.0},
                                      {"rank(pi^# + rho) = 16 on the SL(3) double", 0.0}},
                                     [&](Rng& rng, int) {
                                       return std::vector<double>{gap(qp::nondeg_rank(D2, random_point(D2, rng)), 6),
                                                                  gap(qp::nondeg_rank(D3, random_point(D3, rng)), 16)};
                                     });
    append(parts, sample("acc.logrank", 10, {{"log rank 6 at boundary points of D-bar(SL2)", 0.0}}, [&](Rng& rng, int) {
             auto p = wonderful::sample_boundary({}, 2, rng);
             return std::vector<double>{gap(wonderful::log_nondeg_rank(p).log_rank, 6)};
           }));
    report(4, "nondegeneracy ranks", parts);
  }

  {
    std::vector<Part> parts;
    for (auto [n, count] : {std::pair{2, 20}, std::pair{3, 10}}) {
      steinberg::ZChart chart(n);
      std::string s = " (SL" + std::to_string(n) + ")";
      append(parts, sample("acc.z" + std::to_string(n), count,
                           {{"graph of a bivector" + s, 0.0},
                            {"[pi, pi] = 0" + s, 1e-5},
                            {"rank pi = 2l" + s, 0.0},
                            {"pi omega^T = I" + s, 1e-5}},
                           [&](Rng& rng, int) {
                             auto y = steinberg::sample_z(chart, rng).y;
                             auto r = steinberg::z_check(chart, y);
                             if (!r.graph) return std::vector<double>{1.0, NAN, NAN, NAN};
                             return std::vector<double>{0.0, r.jacobi, gap(r.rank, 2 * (n - 1)), r.inverse_defect};
                           }));
    }
    report(5, "universal centralizer", parts);
  }

  {
    std::vector<Part> parts;
    for (int n : {2, 3}) {
      std::string s = " (SL" + std::to_string(n) + ")";
      append(parts, sample("acc.bigbiv" + std::to_string(n), 20,
                           {{"F_* e^{1L}" + s, 1e-8},
                            {"F_* e^{1R}" + s, 1e-8},
                            {"F_* e^{2L}" + s, 1e-8},
                            {"F_* e^{2R}" + s, 1e-8},
                            {"assembled bivector" + s, 1e-6}},
                           [&](Rng& rng, int) {
                             Mat g = random_group(n, rng), h = random_group(n, rng);
                             auto r = wonderful::bigbiv_check(g, h);
                             return std::vector<double>{r.lines[0], r.lines[1], r.lines[2], r.lines[3], r.assembled};
                           }));
    }
    report(6, "pushforward to the triple product", parts);
  }

  {
    std::vector<Part> parts;
    for (int n : {2, 3}) {
      std::string s = " (SL" + std::to_string(n) + ")";
      append(parts, sample("acc.delta" + std::to_string(n), 50,
                           {{"Xi(x) = Xi(y) for mu-bar = (x, y^{-1})" + s, 1e-7},
                            {"leaf value independent of certificate" + s, 1e-7},
                            {"leaf value constant along [p_I, p_I]" + s, 1e-7}},
                           [&](Rng& rng, int) {
                             auto p = wonderful::sample_boundary(proper_subset(n, rng), n, rng);
                             auto [x, yi] = wonderful::bar_moment(p);
                             auto [s1, s2] = wonderful::sample_stabilizer(p.a.cert.I, n, rng);
                             auto q = p;
                             q.a.cert.g = p.a.cert.g * s1;
                             q.a.cert.h = p.a.cert.h * s2;
                             q = wonderful::dbar_membership(q.a, q.x, q.y);
                             Vec v0 = wonderful::leaf_functional(p).values, v1 = wonderful::leaf_functional(q).values;
                             double cert = v0.size() ? (v0 - v1).cwiseAbs().maxCoeff() : 0.0, der = 0.0;
                             for (const Mat& u : wonderful::derived_parabolic(p.a.cert.I, n)) {
                               Vec d = wonderful::leaf_derivative(p, u);
                               if (d.size()) der = std::max(der, d.cwiseAbs().maxCoeff());
                             }
                             return std::vector<double>{zbar::delta_residual(x, yi), cert, der};
                           }));
    }
    report(7, "boundary moment map and leaves of D-bar", parts);
  }

  {
    // In two dimensions [pi, pi] vanishes identically and pi itself vanishes on the
    // boundary, so the SL(3) block is the one that exercises these checks.
    zbar::ZbarChart chart2(2), chart3(3);
    std::vector<Part> parts = sample("acc.zbar", 10,
                                     {{"pi(dw, .) = 0 on w = 0", 1e-7},
                                      {"log rank 2", 0.0},
                                      {"[pi, pi] = 0", 1e-5},
                                      {"leaf map constant along im pi^#", 1e-6}},
                                     [&](Rng& rng, int) {
                                       Vec y(2);
                                       y << rng.complex_normal(), 0.0;
                                       auto r = zbar::log_symplectic_check(chart2, y);
                                       if (!r.graph) return std::vector<double>{NAN, NAN, NAN, NAN};
                                       return std::vector<double>{r.tangency, gap(r.log_rank, 2), r.jacobi,
                                                                  r.leaf_variation};
                                     });
    append(parts, sample("acc.zbar3", 10,
                         {{"pi(dw_i, .) = 0 on w_i = 0 (SL3)", 1e-7},
                          {"log rank 4 (SL3)", 0.0},
                          {"[pi, pi] = 0 (SL3)", 1e-5},
                          {"leaf map constant along im pi^# (SL3)", 1e-6}},
                         [&](Rng& rng, int) {
                           Vec y(4);
                           y.head(2) = rng.complex_vector(2);
                           liealg::Subset I = proper_subset(3, rng);
                           for (int i = 0; i < 2; ++i)
                             y(2 + i) = std::find(I.begin(), I.end(), i + 1) != I.end() ? rng.complex_normal() : cd(0.0);
                           auto r = zbar::log_symplectic_check(chart3, y);
                           if (!r.graph) return std::vector<double>{NAN, NAN, NAN, NAN};
                           return std::vector<double>{r.tangency, gap(r.log_rank, 4), r.jacobi, r.leaf_variation};
                         }));
    report(8, "partial compactification Zbar on the boundary", parts);
  }

  {
    steinberg::ZChart chart(3);
    report(9, "Toda integrability on the SL(3) universal centralizer",
           sample("acc.toda", 20, {{"{Xi_i, Xi_j} = 0", 1e-6}}, [&](Rng& rng, int) {
             return std::vector<double>{steinberg::toda_commute_check(chart, {steinberg::sample_z(chart, rng).y})};
           }));
  }

  {
    std::vector<Part> parts;
    for (int n : {2, 3}) {
      steinberg::ZChart chart(n);
      std::string s = " (SL" + std::to_string(n) + ")";
      append(parts, sample("acc.reduction" + std::to_string(n), 10,
                           {{"J(m, 1, Phi(m)^{-1}) = 1" + s, 1e-9}, {"reduced bivector = slice bivector" + s, 1e-5}},
                           [&](Rng& rng, int) {
                             auto y = steinberg::sample_z(chart, rng).y;
                             auto red = qp::reduction_check(chart.space(), chart.point(y),
                                                            {steinberg::Target::Sigma, steinberg::Target::InverseSigma});
                             return std::vector<double>{red.j_defect, red.bivector_defect};
                           }));
    }
    report(10, "reduction by fusion with the slice double", parts);
  }

  std::printf("%s: %d of 10 criteria failed\n", g_failed ? "FAIL" : "PASS", g_failed);
  return g_failed ? 1 : 0;
}
