// Serial reference vs OpenMP kernels for the scalar and Maxwell operators.

#include <benchmark/benchmark.h>

#include "gapguide/discrete_op.hpp"

using namespace gapguide;

namespace {

SampledEpsilon crystal_2d(int n) {
    MediumSpec m;
    m.dim = 2;
    m.background = 13.0;
    Inclusion hole;
    hole.shape = Inclusion::Shape::Box;
    hole.center = {0.5, 0.5, 0.0};
    hole.half = {0.375, 0.375, 0.0};
    hole.eps = 1.0;
    m.inclusions.push_back(hole);
    GridSpec g;
    g.dim = 2;
    g.n = {n, 16 * n, 1};
    g.h = {1.0 / n, 1.0 / n, 1.0};
    return build_medium(m, g);
}

SampledEpsilon balls_3d(int n) {
    MediumSpec m;
    m.dim = 3;
    Inclusion ball;
    ball.shape = Inclusion::Shape::Ball;
    ball.center = {0.5, 0.5, 0.5};
    ball.radius = 0.3;
    ball.eps = 13.0;
    m.inclusions.push_back(ball);
    GridSpec g;
    g.dim = 3;
    g.n = {n, n, n};
    g.h = {1.0 / n, 1.0 / n, 1.0 / n};
    return build_medium(m, g);
}

template <Exec E>
void BM_ScalarApply(benchmark::State& state) {
    const ScalarOperator op(crystal_2d(static_cast<int>(state.range(0))), {AxisBC::bloch(0.7), AxisBC::bloch(0.0)}, E);
    const Eigen::VectorXcd x = random_vector(op.size(), 1);
    Eigen::VectorXcd y(op.size());
    for (auto _ : state) {
        op.apply(x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * op.size());
}

template <Exec E>
void BM_MaxwellApply(benchmark::State& state) {
    const MaxwellOperator op(balls_3d(static_cast<int>(state.range(0))),
                             {AxisBC::bloch(0.7), AxisBC::bloch(0.0), AxisBC::wall()}, E);
    const Eigen::VectorXcd x = random_vector(op.size(), 1);
    Eigen::VectorXcd y(op.size());
    for (auto _ : state) {
        op.apply(x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * op.size());
}

}  // namespace

BENCHMARK(BM_ScalarApply<Exec::Serial>)->Name("scalar_apply/serial")->Arg(32)->Arg(64);
BENCHMARK(BM_ScalarApply<Exec::Parallel>)->Name("scalar_apply/parallel")->Arg(32)->Arg(64);
BENCHMARK(BM_MaxwellApply<Exec::Serial>)->Name("maxwell_apply/serial")->Arg(16)->Arg(32);
BENCHMARK(BM_MaxwellApply<Exec::Parallel>)->Name("maxwell_apply/parallel")->Arg(16)->Arg(32);

BENCHMARK_MAIN();
