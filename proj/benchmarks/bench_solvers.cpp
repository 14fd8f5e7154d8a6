#include <benchmark/benchmark.h>

#include "psauction/auctions.hpp"
#include "psauction/equilibrium.hpp"
#include "psauction/info_model.hpp"
#include "psauction/principal_agent.hpp"
#include "psauction/random.hpp"
#include "psauction/utility.hpp"

namespace {

using namespace psauction;

void BM_BidPoscBernoulli(benchmark::State& state) {
  const InfoModel m = InfoModel::example1();
  const Utility u = Utility::linear();
  for (auto _ : state) {
    benchmark::DoNotOptimize(bid_posc_sp(m, u, 0.5, 0.6, 0.3));
  }
}
BENCHMARK(BM_BidPoscBernoulli);

void BM_BidPoscCara(benchmark::State& state) {
  const InfoModel m = InfoModel::example1();
  const Utility u = Utility::cara(1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bid_posc_sp(m, u, 0.5, 0.6, 0.3));
  }
}
BENCHMARK(BM_BidPoscCara);

void BM_BidUniformValueQuadrature(benchmark::State& state) {
  const InfoModel m = InfoModel::example2_pa();
  const Utility u = Utility::cara(1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bid_posc_sp(m, u, 0.5, 0.6, 0.3));
  }
}
BENCHMARK(BM_BidUniformValueQuadrature);

void BM_EnglishDirectPayment(benchmark::State& state) {
  const InfoModel m = InfoModel::common_value_avg(3);
  const Utility u = Utility::linear();
  const SharingContract c = SharingContract::plsc(0.4);
  RandomStream rs(1, 1);
  const std::vector<double> signals{0.9, 0.6, 0.3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(english_payment_direct(m, u, c, signals, rs));
  }
}
BENCHMARK(BM_EnglishDirectPayment);

void BM_StrategyCacheBuild(benchmark::State& state) {
  const InfoModel m = InfoModel::example1();
  const Utility u = Utility::linear();
  const SharingContract c = SharingContract::posc(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        equilibrium_strategy_sp(m, u, c, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_StrategyCacheBuild)->Arg(64)->Arg(512);

void BM_SecondPriceRevenue(benchmark::State& state) {
  const InfoModel m = InfoModel::example1();
  const Utility u = Utility::linear();
  const SharingContract c = SharingContract::plsc(0.5);
  RandomStream rs(1, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_revenue(
        m, u, c, AuctionFormat::second_price, state.range(0), rs));
  }
}
BENCHMARK(BM_SecondPriceRevenue)->Arg(10000)->Arg(100000);

void BM_PoscPaBid(benchmark::State& state) {
  const InfoModel m = InfoModel::example2_pa();
  for (auto _ : state) {
    benchmark::DoNotOptimize(bid_posc_pa(m, 1.0, 0.5, 0.4, 0.4));
  }
}
BENCHMARK(BM_PoscPaBid);

}  // namespace

BENCHMARK_MAIN();
