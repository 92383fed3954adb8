#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "sessions/checker.hpp"
#include "sessions/generate.hpp"
#include "sessions/oracle.hpp"
#include "sessions/properties.hpp"
#include "sessions/semantics.hpp"
#include "sessions/syntax.hpp"
#include "sessions/type_relations.hpp"

using namespace sessions;

namespace {

Model fixture(const char* name) {
  std::ifstream in(std::string(SESSIONS_FIXTURES) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::vector<GeneratedModel> typable_models(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GeneratedModel> out;
  while (out.size() < n) {
    if (auto m = generate_typable_model(rng)) out.push_back(std::move(*m));
  }
  return out;
}

}  // namespace

static void BM_ParseFixture(benchmark::State& state) {
  std::ifstream in(std::string(SESSIONS_FIXTURES) + "/pc.ses");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  for (auto _ : state) benchmark::DoNotOptimize(parse_model(text));
}
BENCHMARK(BM_ParseFixture);

static void BM_TracesStream(benchmark::State& state) {
  Model m = fixture("stream.ses");
  const Session& s = *m.session("S");
  for (auto _ : state) {
    benchmark::DoNotOptimize(traces(s, static_cast<std::size_t>(state.range(0)), m.security.lattice));
  }
}
BENCHMARK(BM_TracesStream)->Arg(4)->Arg(8)->Arg(12);

static void BM_OracleGenerated(benchmark::State& state) {
  auto models = typable_models(32, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& m = models[i++ % models.size()];
    benchmark::DoNotOptimize(check_safe_session(m.session, static_cast<std::size_t>(state.range(0)), m.security));
  }
}
BENCHMARK(BM_OracleGenerated)->Arg(4)->Arg(6);

static void BM_Subtype(benchmark::State& state) {
  Rng rng(2);
  auto sec = random_security(rng, {"p0", "p1", "p2"});
  std::vector<std::pair<SessionType, SessionType>> pairs;
  for (int i = 0; i < 64; ++i) {
    SessionType t = random_session_type(rng, sec, static_cast<std::size_t>(state.range(0)));
    pairs.emplace_back(t, t);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(subtype(a, b));
  }
}
BENCHMARK(BM_Subtype)->Arg(3)->Arg(5)->Arg(7);

static void BM_CheckSessionProgramCommittee(benchmark::State& state) {
  Model m = fixture("pc.ses");
  for (auto _ : state) benchmark::DoNotOptimize(check_session(*m.session("PC"), *m.global("GPC"), m.security));
}
BENCHMARK(BM_CheckSessionProgramCommittee);

static void BM_CheckSessionGenerated(benchmark::State& state) {
  auto models = typable_models(32, 3);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& m = models[i++ % models.size()];
    benchmark::DoNotOptimize(check_session(m.session, m.global, m.security));
  }
}
BENCHMARK(BM_CheckSessionGenerated);

static void BM_GenerateTypable(benchmark::State& state) {
  Rng rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(generate_typable_model(rng));
}
BENCHMARK(BM_GenerateTypable);

static void BM_SubjectReduction(benchmark::State& state) {
  auto models = typable_models(16, 5);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& m = models[i++ % models.size()];
    benchmark::DoNotOptimize(subject_reduction_property(m.session, m.global, m.security, 5));
  }
}
BENCHMARK(BM_SubjectReduction);
BENCHMARK_MAIN();
