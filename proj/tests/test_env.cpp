#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>

#include "metacomp/env.hpp"
#include "metacomp/env_json.hpp"
#include "metacomp/step.hpp"

using namespace metacomp;

namespace {

const EnvKey temperature{"sa", "temperature"};

TEST(EnvKey, RejectsBadTokens) {
  EXPECT_THROW(EnvKey("", "x"), std::invalid_argument);
  EXPECT_THROW(EnvKey("a.b", "x"), std::invalid_argument);
  EXPECT_THROW(EnvKey("a", "x-y"), std::invalid_argument);
  EXPECT_NO_THROW(EnvKey("ns_1", "Name_2"));
}

TEST(EnvKey, RenderingIsInjective) {
  // '.' is not a token character, so the split point is unambiguous.
  EnvKey a("ab", "c");
  EnvKey b("a", "bc");
  EXPECT_NE(a.str(), b.str());
  EXPECT_EQ(EnvKey::parse(a.str()), a);
  EXPECT_EQ(EnvKey::parse(b.str()), b);
}

TEST(Environment, NewIsEmptyWithSeedStored) {
  auto e = Environment::seeded(7);
  EXPECT_TRUE(e.entries().empty());
  EXPECT_EQ(e.rng(), (RngState{7, 0}));
  EXPECT_EQ(Environment::seeded(7), Environment::seeded(7));
  EXPECT_NE(Environment::seeded(7), Environment::seeded(8));
}

TEST(Environment, PutGetAndImmutability) {
  auto e = Environment::seeded(1);
  auto e2 = e.put(temperature, 10.0);
  ASSERT_TRUE(e2.get(temperature).has_value());
  EXPECT_EQ(std::get<double>(*e2.get(temperature)), 10.0);
  EXPECT_FALSE(e.get(temperature).has_value());
  auto e3 = e2.put(temperature, 3.0);
  EXPECT_EQ(std::get<double>(*e3.get(temperature)), 3.0);
  EXPECT_FALSE(e2.put(temperature, 1.0).get(EnvKey("other", "temperature")).has_value());
  EXPECT_EQ(e2.rng(), e.rng());
}

TEST(Environment, PutLeavesOtherKeysAlone) {
  // Property over a sweep of keys and values.
  std::array<EnvKey, 4> ks{EnvKey("a", "x"), EnvKey("a", "y"), EnvKey("b", "x"), EnvKey("c", "z")};
  auto base = Environment::seeded(3).put(ks[0], std::int64_t{1}).put(ks[2], std::string("t"));
  for (std::size_t i = 0; i < ks.size(); ++i) {
    for (std::int64_t v = -2; v <= 2; ++v) {
      auto next = base.put(ks[i], v);
      for (std::size_t j = 0; j < ks.size(); ++j) {
        if (i == j) continue;
        auto before = base.get(ks[j]);
        auto after = next.get(ks[j]);
        ASSERT_EQ(before.has_value(), after.has_value());
        if (before) {
          EXPECT_TRUE(bit_equal(*before, *after));
        }
      }
    }
  }
}

TEST(Environment, EqualityIsBitwiseOnReals) {
  auto a = Environment::seeded(1).put(temperature, 0.0);
  auto b = Environment::seeded(1).put(temperature, -0.0);
  EXPECT_NE(a, b);
  EXPECT_EQ(a, Environment::seeded(1).put(temperature, 0.0));
}

TEST(Environment, TypedReads) {
  auto e = Environment::seeded(1).put(temperature, 2.5);
  EXPECT_EQ(get_as<double>(e, temperature), 2.5);
  EXPECT_THROW(get_as<std::int64_t>(e, temperature), ConfigurationError);
  EXPECT_THROW(require_as<double>(Environment::seeded(1), temperature, "test"), ConfigurationError);
}

TEST(Rng, DrawsArePureAndAdvanceCounter) {
  auto e = Environment::seeded(42);
  auto [u1, e1] = rng_uniform(e);
  auto [u1b, e1b] = rng_uniform(e);
  EXPECT_EQ(u1, u1b);
  EXPECT_EQ(e1, e1b);
  EXPECT_EQ(e1.rng().counter, 1u);
  auto [u2, e2] = rng_uniform(e1);
  EXPECT_EQ(e2.rng().counter, 2u);
  EXPECT_NE(u1, u2);
  EXPECT_EQ(u2, static_cast<double>(rng_word(42, 1) >> 11) * 0x1.0p-53);
}

TEST(Rng, UniformRangeAndMean) {
  auto e = Environment::seeded(1);
  double sum = 0.0;
  const int draws = 1'000'000;
  for (int i = 0; i < draws; ++i) {
    auto [u, next] = rng_uniform(std::move(e));
    e = std::move(next);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / draws, 0.5, 0.01);
  EXPECT_EQ(e.rng().counter, static_cast<std::uint64_t>(draws));
}

TEST(Rng, BelowOneIsZero) {
  auto [v, e] = rng_below(Environment::seeded(9), 1);
  EXPECT_EQ(v, 0u);
  EXPECT_GE(e.rng().counter, 1u);
  EXPECT_THROW(rng_below(Environment::seeded(9), 0), std::invalid_argument);
}

TEST(Rng, BelowHistogram) {
  auto e = Environment::seeded(5);
  std::array<int, 4> counts{};
  const int draws = 100'000;
  for (int i = 0; i < draws; ++i) {
    auto [v, next] = rng_below(std::move(e), 4);
    e = std::move(next);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / draws, 0.25, 0.02);
  auto [a, ea] = rng_below(Environment::seeded(5), 1000);
  auto [b, eb] = rng_below(Environment::seeded(5), 1000);
  EXPECT_EQ(a, b);
  EXPECT_EQ(ea, eb);
}

TEST(Rng, ReplayDeterminism) {
  for (std::uint64_t seed : {0ULL, 1ULL, 123456789ULL, ~0ULL}) {
    auto a = Environment::seeded(seed);
    auto b = Environment::seeded(seed);
    for (int i = 0; i < 1000; ++i) {
      auto [x, na] = rng_uniform(std::move(a));
      auto [y, nb] = rng_uniform(std::move(b));
      ASSERT_EQ(x, y);
      a = std::move(na);
      b = std::move(nb);
    }
  }
}

// ---------------------------------------------------------------------------
// Step composition laws on randomly assembled steps.

using IntStep = Step<std::int64_t, std::int64_t>;

IntStep random_step(std::uint64_t code) {
  const EnvKey k("t", "k" + std::to_string(code % 3));
  switch ((code / 3) % 4) {
    case 0:
      return step_identity<std::int64_t>();
    case 1:
      return [k](const std::int64_t& x, Environment env) {
        return Threaded<std::int64_t>{x + 1, env.put(k, x)};
      };
    case 2:
      return [k](const std::int64_t& x, Environment env) {
        auto v = get_as<std::int64_t>(env, k).value_or(0);
        return Threaded<std::int64_t>{x * 2 + v, std::move(env)};
      };
    default:
      return [](const std::int64_t& x, Environment env) {
        auto [u, next] = rng_below(std::move(env), 10);
        return Threaded<std::int64_t>{x + static_cast<std::int64_t>(u), std::move(next)};
      };
  }
}

TEST(Step, IdentityLaws) {
  for (std::uint64_t code = 0; code < 12; ++code) {
    auto f = random_step(code);
    auto left = step_then<std::int64_t, std::int64_t, std::int64_t>(step_identity<std::int64_t>(), f);
    auto right = step_then<std::int64_t, std::int64_t, std::int64_t>(f, step_identity<std::int64_t>());
    for (std::int64_t x = -3; x <= 3; ++x) {
      auto env = Environment::seeded(static_cast<std::uint64_t>(x + 10)).put(EnvKey("t", "k1"), std::int64_t{5});
      auto r0 = f(x, env);
      auto r1 = left(x, env);
      auto r2 = right(x, env);
      EXPECT_EQ(r0.value, r1.value);
      EXPECT_EQ(r0.env, r1.env);
      EXPECT_EQ(r0.value, r2.value);
      EXPECT_EQ(r0.env, r2.env);
    }
  }
}

TEST(Step, Associativity) {
  auto env0 = Environment::seeded(77);
  for (std::uint64_t c = 0; c < 12 * 12 * 12; c += 7) {
    auto a = random_step(c % 12);
    auto b = random_step((c / 12) % 12);
    auto d = random_step((c / 144) % 12);
    auto ab_c = step_then<std::int64_t, std::int64_t, std::int64_t>(
        step_then<std::int64_t, std::int64_t, std::int64_t>(a, b), d);
    auto a_bc = step_then<std::int64_t, std::int64_t, std::int64_t>(
        a, step_then<std::int64_t, std::int64_t, std::int64_t>(b, d));
    for (std::int64_t x : {-5, 0, 9}) {
      auto r1 = ab_c(x, env0);
      auto r2 = a_bc(x, env0);
      EXPECT_EQ(r1.value, r2.value);
      EXPECT_EQ(r1.env, r2.env);
    }
  }
}

TEST(Step, ThreadingCarriesWrites) {
  const EnvKey k("demo", "k");
  IntStep writer = [k](const std::int64_t& x, Environment env) { return Threaded<std::int64_t>{x, env.put(k, std::int64_t{41})}; };
  IntStep reader = [k](const std::int64_t&, Environment env) {
    auto v = get_as<std::int64_t>(env, k).value_or(-1);
    return Threaded<std::int64_t>{v + 1, std::move(env)};
  };
  auto both = step_then<std::int64_t, std::int64_t, std::int64_t>(writer, reader);
  EXPECT_EQ(both(0, Environment::seeded(1)).value, 42);
}

// ---------------------------------------------------------------------------
// Serialization

TEST(EnvJson, CanonicalShape) {
  auto e = Environment::seeded(18446744073709551615ULL).put(temperature, 10.0);
  auto j = to_json(e);
  EXPECT_EQ(j["rng"]["seed"], "18446744073709551615");
  EXPECT_EQ(j["rng"]["counter"], "0");
  EXPECT_EQ(j["entries"]["sa.temperature"]["t"], "real");
  EXPECT_EQ(serialize_environment(e),
            R"({"entries":{"sa.temperature":{"t":"real","v":10.0}},"rng":{"counter":"0","seed":"18446744073709551615"}})");
}

TEST(EnvJson, RoundTripsEveryVariant) {
  // Values chosen to stress precision: subnormals, extremes, awkward decimals.
  const std::vector<double> reals{0.1, -0.0, 1.0 / 3.0, 5e-324, std::numeric_limits<double>::max(), -2.5e-300, 123456789.125};
  auto [u, seeded] = rng_uniform(Environment::seeded(99));
  Environment e = seeded;
  e = e.put(EnvKey("v", "i"), std::numeric_limits<std::int64_t>::min());
  e = e.put(EnvKey("v", "b"), true);
  e = e.put(EnvKey("v", "s"), std::string("héllo \"quoted\"\n"));
  e = e.put(EnvKey("v", "rs"), RealSeq(reals));
  e = e.put(EnvKey("v", "is"), IntSeq{-1, 0, std::numeric_limits<std::int64_t>::max()});
  e = e.put(EnvKey("v", "ds"), DigestSeq{{0ULL, ~0ULL, 0x8000000000000000ULL}});
  e = e.put(EnvKey("v", "sol"), SerializedSolution{R"({"t":"bits","v":"0101"})"});
  for (std::size_t i = 0; i < reals.size(); ++i) e = e.put(EnvKey("r", "x" + std::to_string(i)), reals[i] + u);
  auto back = deserialize_environment(serialize_environment(e));
  EXPECT_EQ(back, e);
  EXPECT_EQ(serialize_environment(back), serialize_environment(e));
}

TEST(EnvJson, RejectsMalformed) {
  EXPECT_THROW(deserialize_environment("{"), SerializationError);
  EXPECT_THROW(deserialize_environment(R"({"rng":{"seed":7,"counter":"0"},"entries":{}})"), SerializationError);
  EXPECT_THROW(deserialize_environment(R"({"rng":{"seed":"7","counter":"0"},"entries":{"bad":{"t":"int","v":1}}})"),
               SerializationError);
  EXPECT_THROW(deserialize_environment(R"({"rng":{"seed":"7","counter":"0"},"entries":{"a.b":{"t":"zzz","v":1}}})"),
               SerializationError);
  EXPECT_THROW(to_json(Environment::seeded(1).put(temperature, std::nan(""))), SerializationError);
}

}  // namespace
