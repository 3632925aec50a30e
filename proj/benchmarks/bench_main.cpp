#include <benchmark/benchmark.h>

#include "qplab/qp.hpp"
#include "qplab/steinberg.hpp"
#include "qplab/wonderful.hpp"
#include "qplab/zbar.hpp"

using namespace qplab;

namespace {

Vec random_point(const qp::QPSpace& m, Rng& rng) {
  const auto& b = m.layout.basis();
  std::vector<Mat> mats;
  for (int f = 0; f < m.layout.factor_count(); ++f)
    mats.push_back(group::group_exp(Mat::Identity(b.n, b.n), b.element<cd>(rng.complex_vector(b.dim(), 0.5))));
  return m.layout.pack(mats);
}

void BM_QpIdentityDouble(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  qp::QPSpace D = qp::make_double(n);
  Rng rng(1);
  Vec x = random_point(D, rng);
  for (auto _ : st) benchmark::DoNotOptimize(qp::verify_qp_identity(D, x));
}
BENCHMARK(BM_QpIdentityDouble)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ForwardDirac(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  qp::QPSpace D = qp::make_double(n);
  Rng rng(2);
  Vec x = random_point(D, rng);
  for (auto _ : st) benchmark::DoNotOptimize(qp::forward_dirac_defect(D, x));
}
BENCHMARK(BM_ForwardDirac)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_UniversalCentralizer(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  steinberg::ZChart chart(n);
  Rng rng(3);
  Vec y = steinberg::sample_z(chart, rng).y;
  for (auto _ : st) benchmark::DoNotOptimize(steinberg::z_check(chart, y).jacobi);
}
BENCHMARK(BM_UniversalCentralizer)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_LogRankDbar(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  Rng rng(4);
  auto p = wonderful::sample_boundary({}, n, rng);
  for (auto _ : st) benchmark::DoNotOptimize(wonderful::log_nondeg_rank(p).log_rank);
}
BENCHMARK(BM_LogRankDbar)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ZbarBoundary(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  zbar::ZbarChart chart(n);
  Rng rng(5);
  Vec y = Vec::Zero(2 * (n - 1));
  y.head(n - 1) = rng.complex_vector(n - 1);
  for (auto _ : st) benchmark::DoNotOptimize(zbar::log_symplectic_check(chart, y).log_rank);
}
BENCHMARK(BM_ZbarBoundary)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
