#include <benchmark/benchmark.h>

#include "dirdef/brackets.hpp"
#include "dirdef/courant.hpp"
#include "dirdef/dirac_numeric.hpp"
#include "dirdef/ihs.hpp"
#include "dirdef/lie_deform.hpp"
#include "dirdef/multimap.hpp"

using namespace dirdef;

namespace {

MultiMap heisenberg() { return MultiMap::from_constants(3, {{0, 1, 2, Rational(1)}}); }

// sl(2)-like map on dim d: c^{(a+b) mod d}_{ab} = b - a
MultiMap dense_map(std::size_t d) {
  std::vector<std::tuple<int, int, int, Rational>> c;
  for (int a = 0; a < int(d); ++a)
    for (int b = a + 1; b < int(d); ++b) c.emplace_back(a, b, (a + b) % int(d), Rational(b - a));
  return MultiMap::from_constants(d, c);
}

void NrSquare(benchmark::State& st) {
  MultiMap mu = dense_map(std::size_t(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(nr_bracket(mu, mu));
}
BENCHMARK(NrSquare)->DenseRange(3, 7, 2);

void CeCohomology(benchmark::State& st) {
  MultiMap mu = heisenberg();
  for (auto _ : st) benchmark::DoNotOptimize(cohomology(mu, std::size_t(st.range(0))).dim);
}
BENCHMARK(CeCohomology)->DenseRange(1, 3);

void DeformLie(benchmark::State& st) {
  MultiMap mu = heisenberg();
  MultiMap mu1 = cohomology(mu, 2).representatives.front();
  for (auto _ : st) benchmark::DoNotOptimize(deform_lie(mu, mu1, std::size_t(st.range(0))).reached);
}
BENCHMARK(DeformLie)->DenseRange(2, 5);

void DarbouxMomenta(benchmark::State& st) {
  const std::size_t m = std::size_t(st.range(0));
  auto g = GeneratorSet::rothstein(m, 2);
  ConnectionData c(g);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) c.gamma(i, a, b) = SuperElement::even_gen(g, g->q((i + a + b) % m));
  auto ctx = BracketContext::rothstein(c);
  for (auto _ : st) benchmark::DoNotOptimize(darboux_momenta(ctx));
}
BENCHMARK(DarbouxMomenta)->DenseRange(1, 3);

void CourantVerify(benchmark::State& st) {
  ThetaStructure T = build_theta(CourantInput::standard(std::size_t(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(verify_courant(T, {1, 50, 1}).ok());
}
BENCHMARK(CourantVerify)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void GraphTransport(benchmark::State& st) {
  MatD w(3, 3);
  w(0, 1) = 1, w(1, 0) = -1, w(1, 2) = 0.5, w(2, 1) = -0.5;
  ProjectorPath path = graph_projector_path(w);
  for (auto _ : st) benchmark::DoNotOptimize(numeric_transport(path.P, path.Pdot, 1.0, 1e-3).conjugation_residual);
}
BENCHMARK(GraphTransport)->Unit(benchmark::kMillisecond);

void Oscillator(benchmark::State& st) {
  auto g = GeneratorSet::polynomial(2);
  MatrixQ w(2, 2);
  w(0, 1) = 1;
  w(1, 0) = -1;
  IHSystem s(from_two_form(w), SuperElement::parse(g, "1/2 x1^2 + 1/2 x2^2"), 1e-3);
  for (auto _ : st) benchmark::DoNotOptimize(integrate(s, {0.7, -0.4}, 1000).max_drift);
}
BENCHMARK(Oscillator)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
