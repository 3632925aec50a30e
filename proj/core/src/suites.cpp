#include "qplab/suites.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qplab/group.hpp"
#include "qplab/liealg.hpp"
#include "qplab/qp.hpp"
#include "qplab/steinberg.hpp"
#include "qplab/wonderful.hpp"
#include "qplab/zbar.hpp"

namespace qplab::suites {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Record make_record(const std::string& id, const std::string& anchor, double thr, const std::vector<double>& d,
                   const std::string& err) {
  Record r{id, anchor, static_cast<int>(d.size()), 0.0, thr, true, err};
  for (double x : d) {
    if (std::isnan(x)) {
      r.max_defect = kNaN;
      r.pass = false;
      break;
    }
    r.max_defect = std::max(r.max_defect, x);
  }
  if (r.pass) r.pass = r.max_defect <= thr;
  return r;
}

struct Check {
  std::string id, anchor;
  double threshold;
};

// Runs f and turns its columns into one record per check.
void add(SuiteResult& out, const Config& cfg, const std::string& key, int count, const std::vector<Check>& checks,
         const std::function<std::vector<double>(Rng&, int)>& f) {
  Sampled s = run_sampled(cfg, key, count, static_cast<int>(checks.size()), f);
  for (size_t k = 0; k < checks.size(); ++k)
    out.records.push_back(make_record(checks[k].id, checks[k].anchor, checks[k].threshold, s.defects[k], s.first_error));
}

Mat random_algebra(const liealg::OrthonormalBasis& b, Rng& rng, double scale) {
  return b.element<cd>(rng.complex_vector(b.dim(), scale));
}

Mat random_group(const liealg::OrthonormalBasis& b, Rng& rng, double scale = 0.5) {
  return group::group_exp(Mat::Identity(b.n, b.n), random_algebra(b, rng, scale));
}

Vec random_point(const qp::QPSpace& m, Rng& rng) {
  std::vector<Mat> mats;
  for (int f = 0; f < m.layout.factor_count(); ++f) mats.push_back(random_group(m.layout.basis(), rng));
  return m.layout.pack(mats);
}

double rank_gap(int got, int want) { return std::abs(static_cast<double>(got - want)); }

liealg::Subset random_proper_subset(int n, Rng& rng) {
  const int l = n - 1;
  for (;;) {
    liealg::Subset I;
    for (int i = 1; i <= l; ++i)
      if (rng.uniform() < 0.5) I.push_back(i);
    if (static_cast<int>(I.size()) < l) return I;
  }
}

// ---------------------------------------------------------------------------

void liealg_suite(SuiteResult& out, const Config& cfg) {
  const int n = cfg.n;
  auto b = liealg::orthonormal_basis(n);
  const int N = b.dim();
  add(out, cfg, "liealg.basis", 1,
      {{"liealg.orthonormal", "K(e_i, e_j) = delta_ij with K(x, y) = 2n tr(xy)", cfg.tol_exact}},
      [&](Rng&, int) {
        double d = 0.0;
        for (int i = 0; i < N; ++i)
          for (int j = 0; j < N; ++j) d = std::max(d, std::abs(liealg::killing(b.e[i], b.e[j]) - (i == j ? 1.0 : 0.0)));
        return std::vector<double>{d};
      });
  add(out, cfg, "liealg.bracket", cfg.samples,
      {{"liealg.jacobi", "[x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 0", cfg.tol_exact},
       {"liealg.invariance", "K([x,y], z) = K(x, [y,z])", cfg.tol_exact}},
      [&](Rng& rng, int) {
        Mat x = random_algebra(b, rng, 1.0), y = random_algebra(b, rng, 1.0), z = random_algebra(b, rng, 1.0);
        auto br = [](const Mat& p, const Mat& q) { return Mat(p * q - q * p); };
        double jac = max_abs(Mat(br(x, br(y, z)) + br(y, br(z, x)) + br(z, br(x, y))));
        double inv = std::abs(liealg::killing(br(x, y), z) - liealg::killing(x, br(y, z)));
        return std::vector<double>{jac, inv};
      });
  add(out, cfg, "liealg.tensors", 1,
      {{"liealg.cartan-trivector", "phi = 1/12 C_ijk e_i^e_j^e_k, components C/2, totally skew", cfg.tol_exact},
       {"liealg.parabolic-split", "dim u_I + dim u_I^- + dim l_I = dim g for every I", 0.0}},
      [&](Rng&, int) {
        Array3 C = liealg::structure_constants(b);
        Array3 phi = liealg::cartan_trivector(b).components;
        double d = 0.0;
        for (int i = 0; i < N; ++i)
          for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k) {
              d = std::max(d, std::abs(phi(i, j, k) - 0.5 * C(i, j, k)));
              d = std::max(d, std::abs(phi(i, j, k) + phi(j, i, k)));
              d = std::max(d, std::abs(phi(i, j, k) + phi(i, k, j)));
            }
        double gap = 0.0;
        for (int mask = 0; mask < (1 << (n - 1)); ++mask) {
          liealg::Subset I;
          for (int i = 0; i < n - 1; ++i)
            if ((mask >> i) & 1) I.push_back(i + 1);
          auto P = liealg::parabolic(I, n);
          gap = std::max(gap, rank_gap(static_cast<int>(P.u.size() + P.um.size() + P.levi.size()), N));
        }
        return std::vector<double>{d, gap};
      });
}

void qp_identity_suite(SuiteResult& out, const Config& cfg) {
  qp::QPSpace D = qp::make_double(cfg.n), G = qp::make_pi_G(cfg.n);
  add(out, cfg, "qp-identity.double", cfg.samples,
      {{"qp-identity.double", "[pi, pi] = phi_M on the double G x G", cfg.tol_deriv},
       {"qp-identity.invariance", "L_{xi_M} pi = 0 on the double", cfg.tol_deriv}},
      [&](Rng& rng, int) {
        Vec x = random_point(D, rng);
        return std::vector<double>{qp::verify_qp_identity(D, x), qp::invariance_defect(D, x)};
      });
  add(out, cfg, "qp-identity.group", cfg.samples,
      {{"qp-identity.group", "[pi_G, pi_G] = phi_G for conjugation", cfg.tol_deriv}}, [&](Rng& rng, int) {
        return std::vector<double>{qp::verify_qp_identity(G, random_point(G, rng))};
      });
  qp::QPSpace F = qp::fuse(qp::product(D, G), 0, 2);
  add(out, cfg, "qp-identity.fusion", std::min(cfg.samples, 5),
      {{"qp-identity.fusion", "[pi + 1/2 psi, pi + 1/2 psi] = phi_M after fusion", cfg.tol_deriv}},
      [&](Rng& rng, int) { return std::vector<double>{qp::verify_qp_identity(F, random_point(F, rng))}; });
}

void q_suite(SuiteResult& out, const Config& cfg, int which) {
  qp::QPSpace D = qp::make_double(cfg.n);
  const int N = D.layout.basis().dim();
  if (which == 1)
    add(out, cfg, "Q1", cfg.samples, {{"Q1.double", "d omega = -Phi^* eta", cfg.tol_deriv}},
        [&](Rng& rng, int) { return std::vector<double>{qp::verify_Q1(D, random_point(D, rng))}; });
  if (which == 2)
    add(out, cfg, "Q2", cfg.samples,
        {{"Q2.double", "iota_{xi_M} omega = 1/2 Phi^*(theta^L + theta^R, xi)", cfg.tol_alg}},
        [&](Rng& rng, int) { return std::vector<double>{qp::verify_Q2(D, random_point(D, rng))}; });
  if (which == 3)
    add(out, cfg, "Q3", cfg.samples,
        {{"Q3.double", "ker omega = {xi_M : Ad_Phi xi = -xi}", cfg.tol_alg},
         {"Q3.compat", "pi^# omega^b = C = I + 1/4 sum (theta^L - theta^R)_i(dPhi) e_i", cfg.tol_deriv},
         {"Q3.nondeg-rank", "rank(pi^# + rho) = 2 dim G", 0.0}},
        [&](Rng& rng, int) {
          Vec x = random_point(D, rng);
          qp::Q3Result q = qp::verify_Q3(D, x);
          double d = q.kernel_dim == q.predicted_dim ? q.distance : std::abs(q.kernel_dim - q.predicted_dim) + 1.0;
          return std::vector<double>{d, qp::check_compat(D, x), rank_gap(qp::nondeg_rank(D, x), 2 * N)};
        });
}

void dirac_suite(SuiteResult& out, const Config& cfg) {
  qp::QPSpace D = qp::make_double(cfg.n), G = qp::make_pi_G(cfg.n);
  add(out, cfg, "dirac.forward", cfg.samples,
      {{"dirac.forward", "Phi_* L_M = L_{G x G} at Phi(x)", cfg.tol_alg},
       {"dirac.forward-group", "Phi_* L_G = L_G for (G, pi_G)", cfg.tol_alg}},
      [&](Rng& rng, int) {
        Vec x = random_point(D, rng), g = random_point(G, rng);
        return std::vector<double>{qp::forward_dirac_defect(D, x), qp::forward_dirac_defect(G, g)};
      });
  add(out, cfg, "dirac.courant", std::min(cfg.samples, 5),
      {{"dirac.courant", "[[s1, s2]]_phi in L_M for sections of L_M", cfg.tol_deriv}}, [&](Rng& rng, int i) {
        Vec x = random_point(D, rng);
        return std::vector<double>{qp::courant_probe(D, x, 3, static_cast<unsigned>(cfg.seed + i))};
      });
}

void steinberg_suite(SuiteResult& out, const Config& cfg) {
  const int n = cfg.n, l = n - 1;
  auto b = liealg::orthonormal_basis(n);
  add(out, cfg, "steinberg.cross-section", cfg.samples,
      {{"steinberg.transversality", "T_h Sigma + T_h(G.h) = g", 0.0},
       {"steinberg.conj", "g h g^{-1} = sigma(Xi(h)) for regular h", cfg.tol_alg}},
      [&](Rng& rng, int) {
        Vec t = rng.complex_vector(l);
        steinberg::Transversality tr = steinberg::transversality_check(t, b);
        Mat h = random_group(b, rng, 1.0);
        Mat g = steinberg::conj_to_sigma(h);
        Mat s = steinberg::sigma_point<cd>(n, group::chevalley<cd>(h));
        return std::vector<double>{rank_gap(tr.combined_rank, tr.dim), max_abs(Mat(g * h * inverse<cd>(g) - s))};
      });
  steinberg::ZChart chart(n);
  add(out, cfg, "steinberg.z", cfg.samples,
      {{"steinberg.graph", "backward image of L_M to Phi^{-1}(Sigma x Sigma^{-1}) is a bivector graph", 0.0},
       {"steinberg.jacobi", "[pi_Sigma, pi_Sigma] = 0", cfg.tol_deriv},
       {"steinberg.rank", "rank pi_Sigma = 2l", 0.0},
       {"steinberg.inverse", "pi_Sigma omega_Sigma^T = I", cfg.tol_deriv},
       {"steinberg.closed", "d omega_Sigma = 0", cfg.tol_deriv},
       {"steinberg.toda", "{Xi_i, Xi_j} = 0", cfg.tol_alg},
       {"steinberg.membership", "a h a^{-1} = h", cfg.tol_member}},
      [&](Rng& rng, int) {
        steinberg::ZSample s = steinberg::sample_z(chart, rng);
        steinberg::ZReport r = steinberg::z_check(chart, s.y);
        if (!r.graph) return std::vector<double>{1.0, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN};
        return std::vector<double>{0.0, r.jacobi, rank_gap(r.rank, 2 * l), r.inverse_defect, r.closed_defect, r.toda,
                                   r.membership};
      });
  add(out, cfg, "steinberg.reduction", cfg.samples,
      {{"steinberg.two-route", "slicing G x Sigma again agrees with slicing the double", cfg.tol_deriv},
       {"steinberg.reduction-J", "J(m, 1, Phi(m)^{-1}) = 1", 1e-9},
       {"steinberg.reduction-bivector", "M_Sigma = (M fused D_Sigma(G)) // G as Poisson", cfg.tol_deriv}},
      [&](Rng& rng, int) {
        steinberg::ZSample s = steinberg::sample_z(chart, rng);
        Mat a = random_group(b, rng);
        double two = steinberg::two_route_defect(n, a, rng.complex_vector(l));
        qp::ReductionResult red = qp::reduction_check(chart.space(), chart.point(s.y),
                                                      {steinberg::Target::Sigma, steinberg::Target::InverseSigma});
        return std::vector<double>{two, red.j_defect, red.bivector_defect};
      });
}

void wonderful_suite(SuiteResult& out, const Config& cfg) {
  using namespace wonderful;
  const int n = cfg.n, l = n - 1;
  auto b = liealg::orthonormal_basis(n);
  const int N = b.dim();
  add(out, cfg, "wonderful.bigbiv", cfg.samples,
      {{"wonderful.bigbiv-1", "F_* e^{1L} = e^{1L} + e^{2L} + (Ad_g e)^{3R}, F(g,h) = (g, hg, gh)", cfg.tol_exact},
       {"wonderful.bigbiv-2", "F_* e^{1R} = e^{1R} + (Ad_{g^-1} e)^{2L} + e^{3R}", cfg.tol_exact},
       {"wonderful.bigbiv-3", "F_* e^{2L} = (Ad_{g^-1} e)^{2L} + e^{3L}", cfg.tol_exact},
       {"wonderful.bigbiv-4", "F_* e^{2R} = e^{2R} + (Ad_g e)^{3R}", cfg.tol_exact},
       {"wonderful.bigbiv-assembled", "F_* 1/2(e^{1L}^e^{2R} + e^{1R}^e^{2L}) = pi on G x G x G", cfg.tol_alg},
       {"wonderful.interior", "(a, g) -> (a, a g a^{-1}, g) carries pi to pi-bar", cfg.tol_alg}},
      [&](Rng& rng, int) {
        Mat g = random_group(b, rng), h = random_group(b, rng);
        BigbivReport r = bigbiv_check(g, h);
        return std::vector<double>{r.lines[0], r.lines[1], r.lines[2], r.lines[3], r.assembled,
                                   interior_tangency_defect(g, h)};
      });
  add(out, cfg, "wonderful.orbits", cfg.samples,
      {{"wonderful.stabilizer", "Stab(z_I) = {(us, vt) : u in U_I, v in U_I^-, s t^{-1} in Z(L_I)}", 0.0},
       {"wonderful.rank-signature", "rank A_i = 1 exactly on D_i, i not in I", 0.0},
       {"wonderful.action-kernel", "dim ker(g x g -> T_a) = dim G + l - |I|", 0.0},
       {"wonderful.log-fiber", "log kernel at z_I = p_I x_{l_I} p_I^-, Lagrangian for K - K", cfg.tol_alg}},
      [&](Rng& rng, int) {
        liealg::Subset I = random_proper_subset(n, rng);
        auto [s1, s2] = sample_stabilizer(I, n, rng);
        Mat g = random_group(b, rng), h = random_group(b, rng);
        double stab = (stabilizer_membership(I, s1, s2) && stabilizer_closed_form(I, s1, s2) &&
                       stabilizer_membership(I, g, h) == stabilizer_closed_form(I, g, h))
                          ? 0.0
                          : 1.0;
        WonderfulPoint a = act(g, h, basepoint(I, n));
        std::vector<int> sig = rank_signature(a);
        double sg = 0.0;
        for (int i = 1; i <= l; ++i) {
          bool on = std::find(I.begin(), I.end(), i) == I.end();
          if ((sig[i - 1] == 1) != on) sg = 1.0;
        }
        double ak = rank_gap(static_cast<int>(action_kernel(a).cols()), N + l - static_cast<int>(I.size()));
        Mat Lz = log_cotangent_fiber(basepoint(I, n));
        Mat La = log_cotangent_fiber(a);
        double lf = std::max({static_cast<double>(std::abs(Lz.cols() - N)), static_cast<double>(std::abs(La.cols() - N)),
                              split_lagrangian_defect(La), subspace_distance(Lz, basepoint_fiber(I, n))});
        return std::vector<double>{stab, sg, ak, lf};
      });
  add(out, cfg, "wonderful.log", cfg.samples,
      {{"wonderful.log-rank", "rank(pi-bar^# + rho) = 2 dim G on the log tangent bundle", 0.0},
       {"wonderful.fiber-parallel", "dim(im pi-bar^# meets the fiber directions) = dim G", 0.0},
       {"wonderful.tangency", "pi-bar(dw_i, .) = 0 on w_i = 0", cfg.tol_member},
       {"wonderful.membership", "g^{-1} x g in P_I, h^{-1} y h in P_I^-, equal Levi parts", cfg.tol_member}},
      [&](Rng& rng, int) {
        LogDoublePoint p = sample_boundary(random_proper_subset(n, rng), n, rng);
        LogRankReport r = log_nondeg_rank(p);
        return std::vector<double>{rank_gap(r.log_rank, 2 * N), rank_gap(r.fiber_parallel, N), r.tangency, p.residual};
      });
  add(out, cfg, "wonderful.leaf", 2 * cfg.samples,
      {{"wonderful.delta", "Xi(x) = Xi(y) for mu-bar = (x, y^{-1})", cfg.tol_member},
       {"wonderful.leaf-certificate", "c_I(g^{-1} x g) is independent of the certificate", cfg.tol_member},
       {"wonderful.leaf-derived", "d c_I vanishes on [p_I, p_I]", cfg.tol_member}},
      [&](Rng& rng, int) {
        LogDoublePoint p = sample_boundary(random_proper_subset(n, rng), n, rng);
        auto [x, yi] = bar_moment(p);
        double delta = zbar::delta_residual(x, yi);
        auto [s1, s2] = sample_stabilizer(p.a.cert.I, n, rng);
        LogDoublePoint q = p;
        q.a.cert.g = p.a.cert.g * s1;
        q.a.cert.h = p.a.cert.h * s2;
        q = dbar_membership(q.a, q.x, q.y);
        Vec v0 = leaf_functional(p).values, v1 = leaf_functional(q).values;
        double cert = v0.size() ? (v0 - v1).cwiseAbs().maxCoeff() : 0.0;
        double der = 0.0;
        for (const Mat& u : derived_parabolic(p.a.cert.I, n)) {
          Vec d = leaf_derivative(p, u);
          if (d.size()) der = std::max(der, d.cwiseAbs().maxCoeff());
        }
        return std::vector<double>{delta, cert, der};
      });
}

void zbar_suite(SuiteResult& out, const Config& cfg) {
  const int n = cfg.n, l = n - 1;
  zbar::ZbarChart chart(n);
  auto b = liealg::orthonormal_basis(n);
  add(out, cfg, "zbar.boundary", cfg.samples,
      {{"zbar.tangency", "pi_Sigma(dw_i, .) = 0 on w_i = 0", cfg.tol_member},
       {"zbar.log-rank", "pi_Sigma nondegenerate in the frame w_i d/dw_i", 0.0},
       {"zbar.jacobi", "[pi_Sigma, pi_Sigma] = 0 across the boundary", cfg.tol_deriv},
       {"zbar.leaf", "leaf map constant along im pi_Sigma^#", cfg.tol_alg},
       {"zbar.membership", "(a, h, h) lies on D-bar", cfg.tol_member}},
      [&](Rng& rng, int) {
        Vec y(2 * l);
        y.head(l) = rng.complex_vector(l);
        liealg::Subset I = random_proper_subset(n, rng);
        for (int i = 0; i < l; ++i) y(l + i) = std::find(I.begin(), I.end(), i + 1) != I.end() ? rng.complex_normal() : cd(0.0);
        zbar::LogSymplecticReport r = zbar::log_symplectic_check(chart, y, 1e-4, cfg.tol_rank);
        if (!r.graph) return std::vector<double>{kNaN, kNaN, kNaN, kNaN, kNaN};
        return std::vector<double>{r.tangency, rank_gap(r.log_rank, 2 * l), r.jacobi, r.leaf_variation, r.membership};
      });
  add(out, cfg, "zbar.structure", cfg.samples,
      {{"zbar.interior-rank", "pi_Sigma has rank 2l off the boundary", 0.0},
       {"zbar.snc", "w_i = 0 iff rank A_i = 1; chart immersive; divisors cross transversally", 0.0},
       {"zbar.delta", "mu-bar(Zbar) lies in Xi(g) = Xi(h^{-1})", cfg.tol_member},
       {"zbar.reject", "a outside the closure of Z(h) is rejected", 0.0}},
      [&](Rng& rng, int) {
        Vec t = rng.complex_vector(l);
        Vec y(2 * l);
        y.head(l) = t;
        for (int i = 0; i < l; ++i) y(l + i) = rng.complex_normal();
        zbar::LogSymplecticReport r = zbar::log_symplectic_check(chart, y, 1e-4, cfg.tol_rank);
        zbar::SncReport s = zbar::snc_check(chart, t);
        double snc = (s.divisors_match && s.min_immersion_rank == 2 * l && s.crossing_rank == l) ? 0.0 : 1.0;
        zbar::ZbarPoint z = chart.zbar_point(y);
        double delta = zbar::delta_residual(z.h, Mat(inverse<cd>(z.h)));
        double rej = 0.0;
        try {
          zbar::zbar_membership(wonderful::embed(random_group(b, rng)), z.h);
          rej = 1.0;
        } catch (const wonderful::MembershipError&) {
        }
        return std::vector<double>{rank_gap(r.rank, 2 * l), snc, delta, rej};
      });
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"liealg", "qp-identity", "Q1", "Q2", "Q3",
                                              "dirac",  "steinberg",   "wonderful", "zbar"};
  return names;
}

Rng sample_rng(std::uint64_t seed, const std::string& test, int i) {
  return Rng(splitmix(splitmix(seed ^ fnv1a(test)) + static_cast<std::uint64_t>(i)));
}

Sampled run_sampled(const Config& cfg, const std::string& test, int count, int checks,
                    const std::function<std::vector<double>(Rng&, int)>& f) {
  Sampled s;
  s.defects.assign(checks, std::vector<double>(count, kNaN));
  std::vector<std::string> errors(count);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < count; i = next++) {
      Rng rng = sample_rng(cfg.seed, test, i);
      try {
        std::vector<double> d = f(rng, i);
        for (int k = 0; k < checks; ++k) s.defects[k][i] = d.at(k);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int workers = std::max(1, std::min(cfg.threads, count));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (int i = 0; i < count; ++i)
    if (!errors[i].empty()) {
      s.first_error = "point " + std::to_string(i) + ": " + errors[i];
      break;
    }
  return s;
}

SuiteResult run_suite(const std::string& name, const Config& cfg) {
  if (cfg.n != 2 && cfg.n != 3) throw std::invalid_argument("run_suite: n must be 2 or 3");
  SuiteResult out;
  out.name = name;
  auto t0 = std::chrono::steady_clock::now();
  if (name == "liealg") liealg_suite(out, cfg);
  else if (name == "qp-identity") qp_identity_suite(out, cfg);
  else if (name == "Q1") q_suite(out, cfg, 1);
  else if (name == "Q2") q_suite(out, cfg, 2);
  else if (name == "Q3") q_suite(out, cfg, 3);
  else if (name == "dirac") dirac_suite(out, cfg);
  else if (name == "steinberg") steinberg_suite(out, cfg);
  else if (name == "wonderful") wonderful_suite(out, cfg);
  else if (name == "zbar") zbar_suite(out, cfg);
  else throw std::invalid_argument("unknown suite: " + name);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace qplab::suites
