#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "symred/algebra.hpp"
#include "symred/dynamics.hpp"
#include "symred/models.hpp"
#include "symred/rng.hpp"

using namespace symred;

namespace {

LieAlgebra algebra_for(const benchmark::State& state) {
  switch (state.range(0)) {
    case 0: return builtin_algebra("so3");
    case 1: return builtin_algebra("se3");
    default: return builtin_algebra("sl2");
  }
}

void BM_bracket(benchmark::State& state) {
  LieAlgebra a = algebra_for(state);
  Rng rng(42);
  AlgebraVector x(rng.vector(a.dim())), y(rng.vector(a.dim()));
  for (auto _ : state) benchmark::DoNotOptimize(bracket(a, x, y));
}
BENCHMARK(BM_bracket)->Arg(0)->Arg(1);

void BM_ad_star(benchmark::State& state) {
  LieAlgebra a = algebra_for(state);
  Rng rng(42);
  AlgebraVector omega(rng.vector(a.dim()));
  AlgebraCovector pi(rng.vector(a.dim()));
  for (auto _ : state) benchmark::DoNotOptimize(ad_star(a, omega, pi));
}
BENCHMARK(BM_ad_star)->Arg(0)->Arg(1);

void BM_group_exp(benchmark::State& state) {
  LieAlgebra a = algebra_for(state);
  Rng rng(42);
  AlgebraVector xi(rng.vector(a.dim()));
  for (auto _ : state) benchmark::DoNotOptimize(GroupElement::from_exp(a, xi));
}
BENCHMARK(BM_group_exp)->Arg(0)->Arg(1);

void BM_lie_poisson_rhs(benchmark::State& state) {
  LieAlgebra a = algebra_for(state);
  Rng rng(42);
  ReducedHamiltonian h = ReducedHamiltonian::quadratic(rng.spd_matrix(a.dim()));
  AlgebraCovector pi(rng.vector(a.dim()));
  for (auto _ : state) benchmark::DoNotOptimize(lie_poisson_rhs(a, h, pi));
}
BENCHMARK(BM_lie_poisson_rhs)->Arg(0)->Arg(1);

// full trajectories: cost per 1000 fixed steps, both integrators
void BM_integrate(benchmark::State& state) {
  LieAlgebra a = builtin_algebra("so3");
  Rng rng(42);
  ReducedHamiltonian h = ReducedHamiltonian::quadratic(rng.spd_matrix(3));
  Eigen::VectorXd pi0 = rng.vector(3);
  IntegratorConfig cfg;
  cfg.method = state.range(0) == 0 ? "rk4" : "midpoint";
  cfg.dt = 1e-3;
  cfg.t_final = 1.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_lie_poisson(a, h, AlgebraCovector(pi0), cfg));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_integrate)->Arg(0)->Arg(1);

void BM_reconstruct(benchmark::State& state) {
  LieAlgebra a = builtin_algebra("so3");
  Rng rng(42);
  ReducedHamiltonian h = ReducedHamiltonian::quadratic(rng.spd_matrix(3));
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_final = 1.0;
  Trajectory traj = simulate_lie_poisson(a, h, AlgebraCovector(rng.vector(3)), cfg);
  GroupElement g0 = GroupElement::identity(a);
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct(a, traj, h, g0));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_reconstruct);

}  // namespace

BENCHMARK_MAIN();
