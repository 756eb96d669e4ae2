#include <benchmark/benchmark.h>

#include "dtcns/engine.hpp"
#include "dtcns/td3.hpp"

using namespace dtcns;

static void BM_RunTick(benchmark::State& state) {
  SimConfig cfg;
  cfg.num_nodes = static_cast<int>(state.range(0));
  std::vector<Style> styles(static_cast<std::size_t>(cfg.num_nodes), Style::Ignorant);
  PolicySet none;
  Environment env(cfg, styles, 7);
  for (auto _ : state) {
    if (env.done()) {
      state.PauseTiming();
      env = Environment(cfg, styles, 7);
      state.ResumeTiming();
    }
    if (env.at_epoch_boundary()) {
      env.start_epoch();
      env.decide(none);
    }
    benchmark::DoNotOptimize(env.run_tick());
  }
}
BENCHMARK(BM_RunTick)->Arg(10)->Arg(30)->Arg(60);

static void BM_ActorForward(benchmark::State& state) {
  const int n = 30;
  const int obs = observation_size(PolicyKind::Cooperative, n);
  Rng rng = make_stream(3, Stream::Init);
  DenseNet net({obs, 64, 64, kActionSize}, Activation::Relu, Activation::Tanh);
  net.init_uniform(rng);
  std::vector<double> x(static_cast<std::size_t>(obs), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(net.predict(x));
}
BENCHMARK(BM_ActorForward);

static void BM_Td3Update(benchmark::State& state) {
  const int obs = static_cast<int>(state.range(0));
  Td3Config cfg;
  Rng rng = make_stream(5, Stream::Init);
  Td3Agent agent(obs, kActionSize, cfg, rng);
  ReplayBuffer buffer(4096, obs, kActionSize);
  std::vector<double> o(static_cast<std::size_t>(obs)), a(kActionSize);
  for (int k = 0; k < 1024; ++k) {
    for (auto& v : o) v = uniform01(rng);
    for (auto& v : a) v = 2.0 * uniform01(rng) - 1.0;
    buffer.push(o, a, uniform01(rng), o, false);
  }
  long step = 0;
  for (auto _ : state) benchmark::DoNotOptimize(agent.update(buffer, ++step, rng));
}
BENCHMARK(BM_Td3Update)->Arg(12)->Arg(186)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
