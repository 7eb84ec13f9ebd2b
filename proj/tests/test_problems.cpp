#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "metacomp/problems.hpp"

using namespace metacomp;

namespace {

BitVector bits_of(std::uint32_t mask, std::size_t n) {
  BitVector v;
  for (std::size_t i = 0; i < n; ++i) v.bits.push_back(static_cast<std::uint8_t>((mask >> i) & 1u));
  return v;
}

double eval(const ProblemInstance& p, const Solution& s) { return p.evaluate(s, Environment::seeded(0)).value; }

// ---------------------------------------------------------------------------
// Independent oracles

// Per-block lookup over all 2^b patterns of a block.
std::vector<int> royal_road_table(int b) {
  std::vector<int> t(1u << b);
  for (std::uint32_t pat = 0; pat < t.size(); ++pat) t[pat] = std::popcount(pat) == b ? 0 : b;
  return t;
}
std::vector<int> trap_table(int b) {
  std::vector<int> t(1u << b);
  for (std::uint32_t pat = 0; pat < t.size(); ++pat) {
    const int ones = std::popcount(pat);
    const int score = ones == b ? b : b - 1 - ones;
    t[pat] = b - score;
  }
  return t;
}
int blockwise(std::uint32_t mask, int n, int b, const std::vector<int>& table) {
  int total = 0;
  for (int s = 0; s < n; s += b) total += table[(mask >> s) & ((1u << b) - 1)];
  return total;
}

// Recursive HIFF: a block scores its size when homogeneous, plus its halves.
int hiff_rec(std::uint32_t mask, int start, int size) {
  const std::uint32_t block = (mask >> start) & ((size == 32 ? 0u : (1u << size)) - 1);
  const bool homogeneous = block == 0 || std::popcount(block) == size;
  int f = homogeneous ? size : 0;
  if (size > 1) f += hiff_rec(mask, start, size / 2) + hiff_rec(mask, start + size / 2, size / 2);
  return f;
}

int checkerboard_oracle(std::uint32_t mask, int s) {
  int differing = 0;
  for (int r = 0; r < s; ++r) {
    for (int c = 0; c < s; ++c) {
      const int here = (mask >> (r * s + c)) & 1;
      if (c + 1 < s) differing += here ^ ((mask >> (r * s + c + 1)) & 1);
      if (r + 1 < s) differing += here ^ ((mask >> ((r + 1) * s + c)) & 1);
    }
  }
  return 2 * s * (s - 1) - differing;
}

// ---------------------------------------------------------------------------
// Bitvector problems

TEST(OneMax, Examples) {
  auto p = onemax(4);
  EXPECT_EQ(eval(p, BitVector::from_string("1111")), 0.0);
  EXPECT_EQ(eval(p, BitVector::from_string("0000")), 4.0);
  EXPECT_EQ(eval(p, BitVector::from_string("1010")), 2.0);
  EXPECT_THROW(eval(p, BitVector::from_string("101")), ComponentError);
  EXPECT_THROW(onemax(0), std::invalid_argument);
}

TEST(OneMax, ExhaustiveN12) {
  auto p = onemax(12);
  for (std::uint32_t m = 0; m < (1u << 12); ++m) ASSERT_EQ(eval(p, bits_of(m, 12)), 12 - std::popcount(m));
}

TEST(Checkerboard, Examples) {
  EXPECT_EQ(eval(checkerboard(2), BitVector::from_string("1001")), 0.0);
  EXPECT_EQ(eval(checkerboard(2), BitVector::from_string("1111")), 4.0);
  EXPECT_EQ(eval(checkerboard(3), BitVector::from_string("111111111")), 12.0);
  EXPECT_THROW(eval(checkerboard(3), BitVector::from_string("1111")), ComponentError);
}

TEST(Checkerboard, ExhaustiveS3) {
  auto p = checkerboard(3);
  int optima = 0;
  for (std::uint32_t m = 0; m < (1u << 9); ++m) {
    const double v = eval(p, bits_of(m, 9));
    ASSERT_EQ(v, checkerboard_oracle(m, 3));
    optima += v == 0.0;
  }
  EXPECT_EQ(optima, 2);
}

TEST(RoyalRoadAndTrap, Examples) {
  EXPECT_EQ(eval(royal_road(8, 4), BitVector::from_string("11110000")), 4.0);
  EXPECT_EQ(eval(trap(4, 4), BitVector::from_string("1110")), 4.0);
  EXPECT_EQ(eval(trap(4, 4), BitVector::from_string("1111")), 0.0);
  EXPECT_EQ(eval(trap(4, 4), BitVector::from_string("0000")), 1.0);
  EXPECT_THROW(royal_road(8, 3), std::invalid_argument);
  EXPECT_THROW(trap(10, 4), std::invalid_argument);
}

TEST(RoyalRoadAndTrap, ExhaustiveAgainstBlockTables) {
  for (auto [n, b] : {std::pair{8, 4}, std::pair{8, 2}, std::pair{12, 3}, std::pair{12, 4}}) {
    auto rr = royal_road(n, b);
    auto tr = trap(n, b);
    auto rt = royal_road_table(b);
    auto tt = trap_table(b);
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
      const auto v = bits_of(m, n);
      ASSERT_EQ(eval(rr, v), blockwise(m, n, b, rt)) << n << "/" << b << " mask " << m;
      ASSERT_EQ(eval(tr, v), blockwise(m, n, b, tt)) << n << "/" << b << " mask " << m;
    }
    EXPECT_EQ(eval(rr, bits_of((1u << n) - 1, n)), 0.0);
    EXPECT_EQ(eval(tr, bits_of((1u << n) - 1, n)), 0.0);
  }
}

TEST(Hiff, Examples) {
  EXPECT_EQ(hiff_fitness(BitVector::from_string("01")), 2);
  EXPECT_EQ(eval(hiff(2), BitVector::from_string("01")), 2.0);
  EXPECT_EQ(hiff_fitness(BitVector::from_string("11111111")), 32);
  EXPECT_EQ(eval(hiff(8), BitVector::from_string("11111111")), 0.0);
  EXPECT_EQ(eval(hiff(8), BitVector::from_string("00000000")), 0.0);
  EXPECT_THROW(hiff(6), std::invalid_argument);
}

TEST(Hiff, ExhaustiveN8AndMaximum) {
  auto p = hiff(8);
  int max_f = 0;
  std::vector<std::uint32_t> argmax;
  for (std::uint32_t m = 0; m < 256; ++m) {
    const int f = hiff_rec(m, 0, 8);
    ASSERT_EQ(hiff_fitness(bits_of(m, 8)), f);
    ASSERT_EQ(eval(p, bits_of(m, 8)), 32 - f);
    if (f > max_f) {
      max_f = f;
      argmax.clear();
    }
    if (f == max_f) argmax.push_back(m);
  }
  EXPECT_EQ(max_f, 32);
  EXPECT_EQ(argmax, (std::vector<std::uint32_t>{0u, 255u}));
}

TEST(Hiff, ExhaustiveN4) {
  auto p = hiff(4);
  for (std::uint32_t m = 0; m < 16; ++m) ASSERT_EQ(eval(p, bits_of(m, 4)), 12 - hiff_rec(m, 0, 4));
}

// ---------------------------------------------------------------------------
// Sphere

TEST(Sphere, ExamplesAndGradient) {
  auto p = sphere(3, -5, 5);
  EXPECT_EQ(eval(p, RealVector({0, 0, 0})), 0.0);
  EXPECT_EQ(eval(sphere(2, -5, 5), RealVector({1, 2})), 5.0);
  EXPECT_EQ(p.metadata.at("optimum_value"), 0.0);
  ASSERT_TRUE(p.bounds.has_value());

  auto q = sphere(2, -5, 5);
  const double h = 1e-5;
  const std::vector<double> x{1.0, 2.0};
  const std::vector<double> expected{2.0, 4.0};
  for (std::size_t i = 0; i < 2; ++i) {
    auto plus = x, minus = x;
    plus[i] += h;
    minus[i] -= h;
    const double slope = (eval(q, RealVector(plus)) - eval(q, RealVector(minus))) / (2 * h);
    EXPECT_NEAR(slope, expected[i], 1e-5);
  }
  EXPECT_FALSE(sphere(2, 1, 3).metadata.count("optimum_value"));
  EXPECT_THROW(sphere(2, 1, 1), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Magic square

std::int64_t magic_oracle(const std::vector<std::int64_t>& order) {
  int grid[3][3];
  for (int i = 0; i < 9; ++i) grid[i / 3][i % 3] = static_cast<int>(order[i]) + 1;
  std::vector<int> sums;
  for (int r = 0; r < 3; ++r) sums.push_back(grid[r][0] + grid[r][1] + grid[r][2]);
  for (int c = 0; c < 3; ++c) sums.push_back(grid[0][c] + grid[1][c] + grid[2][c]);
  sums.push_back(grid[0][0] + grid[1][1] + grid[2][2]);
  sums.push_back(grid[0][2] + grid[1][1] + grid[2][0]);
  std::int64_t dev = 0;
  for (int s : sums) dev += std::abs(s - 15);
  return dev;
}

TEST(MagicSquare, Examples) {
  auto p = magic_square(3);
  EXPECT_EQ(eval(p, Permutation({1, 6, 5, 8, 4, 0, 3, 2, 7})), 0.0);
  EXPECT_EQ(eval(p, Permutation::identity(9)), 24.0);
  EXPECT_THROW(eval(p, Permutation({0, 0, 1, 2, 3, 4, 5, 6, 7})), ComponentError);
  EXPECT_THROW(magic_square(2), std::invalid_argument);
}

TEST(MagicSquare, ExhaustiveK3AndTranspose) {
  auto p = magic_square(3);
  auto perm = Permutation::identity(9);
  int magic = 0;
  do {
    const double v = eval(p, perm);
    ASSERT_EQ(v, magic_oracle(perm.order));
    Permutation t = perm;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) t.order[c * 3 + r] = perm.order[r * 3 + c];
    }
    ASSERT_EQ(eval(p, t), v);
    magic += v == 0.0;
  } while (std::next_permutation(perm.order.begin(), perm.order.end()));
  EXPECT_EQ(magic, 8);
}

// ---------------------------------------------------------------------------
// MAX-SAT

TEST(MaxSat, SmallExample) {
  auto p = parse_dimacs_cnf("p cnf 2 2\n1 2 0\n-1 2 0\n");
  EXPECT_EQ(eval(p, BitVector::from_string("10")), 1.0);
  EXPECT_EQ(eval(p, BitVector::from_string("11")), 0.0);
  EXPECT_EQ(eval(p, BitVector::from_string("01")), 0.0);
  EXPECT_EQ(p.metadata.at("clauses"), 2.0);
}

TEST(MaxSat, CommentsSpanningClausesAndPercentTerminator) {
  auto cnf = parse_cnf("c a comment\nc another\np cnf 3 2\n1 -2\n 3 0 -1\n0\n%\n0\n");
  ASSERT_EQ(cnf.clauses.size(), 2u);
  EXPECT_EQ(cnf.clauses[0], (std::vector<int>{1, -2, 3}));
  EXPECT_EQ(cnf.clauses[1], (std::vector<int>{-1}));
}

TEST(MaxSat, ExhaustiveRandom3Cnf) {
  std::mt19937 gen(20240611);
  std::uniform_int_distribution<int> var(1, 10);
  std::uniform_int_distribution<int> sign(0, 1);
  std::vector<std::array<int, 3>> clauses(40);
  std::ostringstream text;
  text << "c random 3-cnf\np cnf 10 40\n";
  for (auto& cl : clauses) {
    for (auto& lit : cl) {
      lit = var(gen) * (sign(gen) ? 1 : -1);
      text << lit << ' ';
    }
    text << "0\n";
  }
  auto p = parse_dimacs_cnf(text.str());
  for (std::uint32_t m = 0; m < 1024; ++m) {
    int unsat = 0;
    for (const auto& cl : clauses) {
      bool any = false;
      for (int lit : cl) {
        const bool x = (m >> (std::abs(lit) - 1)) & 1u;
        any = any || (lit > 0 ? x : !x);
      }
      unsat += !any;
    }
    ASSERT_EQ(eval(p, bits_of(m, 10)), unsat) << "assignment " << m;
  }
}

void expect_parse_error_at(std::string_view text, std::size_t line) {
  try {
    parse_cnf(text);
    FAIL() << "accepted: " << text;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_EQ(std::string(e.what()).rfind("line " + std::to_string(line) + ":", 0), 0u) << e.what();
  }
}

TEST(MaxSat, ParseErrorsCarryLineNumbers) {
  expect_parse_error_at("c x\np cnf 2\n1 0\n", 2);
  expect_parse_error_at("p dnf 2 1\n1 0\n", 1);
  expect_parse_error_at("p cnf 2 1\n1 3 0\n", 2);
  expect_parse_error_at("p cnf 2 2\n1 0\n", 2);
  expect_parse_error_at("p cnf 2 1\n1 2\n", 2);
  expect_parse_error_at("1 0\np cnf 1 1\n", 1);
  expect_parse_error_at("p cnf 2 1\n1 x 0\n", 2);
  expect_parse_error_at("c only comments\n", 1);
}

// Single-token deletions. Removing a literal from a clause of length ≥ 2 or
// a word inside a comment leaves a grammatical file; every other deletion
// must be rejected with a line number inside the file.
TEST(MaxSat, TokenDeletionFuzz) {
  const std::vector<std::string> lines{"c tiny formula", "p cnf 4 3", "1 -2 0", "2 3 -4 0", "-1 4 0"};
  struct Tok {
    std::size_t line, index;
    bool grammatical;
  };
  std::vector<Tok> toks;
  for (std::size_t l = 0; l < lines.size(); ++l) {
    auto words = detail::split_ws(lines[l]);
    for (std::size_t i = 0; i < words.size(); ++i) {
      const bool comment_word = l == 0 && i > 0;
      const bool literal = l >= 2 && words[i] != "0";
      toks.push_back({l, i, comment_word || literal});
    }
  }
  for (const auto& t : toks) {
    std::string text;
    for (std::size_t l = 0; l < lines.size(); ++l) {
      auto words = detail::split_ws(lines[l]);
      if (l == t.line) words.erase(words.begin() + static_cast<std::ptrdiff_t>(t.index));
      for (const auto& w : words) text += w + " ";
      text += "\n";
    }
    if (t.grammatical) {
      EXPECT_NO_THROW(parse_cnf(text)) << text;
    } else {
      try {
        parse_cnf(text);
        ADD_FAILURE() << "accepted: " << text;
      } catch (const ParseError& e) {
        EXPECT_GE(e.line(), 1u);
        EXPECT_LE(e.line(), lines.size());
      }
    }
  }
}

// ---------------------------------------------------------------------------
// TSP

const char* kTriangle =
    "NAME : tri\n"
    "TYPE : TSP\n"
    "DIMENSION : 3\n"
    "EDGE_WEIGHT_TYPE : EUC_2D\n"
    "NODE_COORD_SECTION\n"
    "1 0 0\n"
    "2 0 1\n"
    "3 1 0\n"
    "EOF\n";

TEST(Tsp, TriangleExample) {
  auto p = parse_tsplib(kTriangle);
  EXPECT_EQ(p.name, "tri");
  EXPECT_EQ(eval(p, Permutation({0, 1, 2})), 3.0);
  EXPECT_EQ(euc_2d({0, 0}, {1, 1}), 1);
  EXPECT_EQ(euc_2d({0, 0}, {1.5, 0}), 2);
  EXPECT_THROW(eval(p, Permutation({0, 1})), ComponentError);
}

std::vector<std::pair<int, int>> random_cities(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_int_distribution<int> coord(0, 100);
  std::vector<std::pair<int, int>> c(n);
  for (auto& p : c) p = {coord(gen), coord(gen)};
  return c;
}

std::string tsplib_text(const std::vector<std::pair<int, int>>& cities) {
  std::ostringstream s;
  s << "NAME: rnd\nTYPE: TSP\nCOMMENT : generated\nDIMENSION: " << cities.size()
    << "\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n";
  for (std::size_t i = 0; i < cities.size(); ++i) s << i + 1 << ' ' << cities[i].first << ' ' << cities[i].second << '\n';
  return s.str();
}

long tour_oracle(const std::vector<std::pair<int, int>>& c, const std::vector<std::int64_t>& order) {
  long total = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& a = c[static_cast<std::size_t>(order[i])];
    const auto& b = c[static_cast<std::size_t>(order[(i + 1) % order.size()])];
    total += std::lround(std::hypot(a.first - b.first, a.second - b.second));
  }
  return total;
}

TEST(Tsp, ExhaustiveSixCitiesAndSymmetry) {
  for (unsigned seed : {1u, 2u, 3u}) {
    auto cities = random_cities(6, seed);
    auto p = parse_tsplib(tsplib_text(cities));
    auto perm = Permutation::identity(6);
    do {
      const double v = eval(p, perm);
      ASSERT_EQ(v, tour_oracle(cities, perm.order));
      auto rotated = perm;
      std::rotate(rotated.order.begin(), rotated.order.begin() + 2, rotated.order.end());
      auto reversed = perm;
      std::reverse(reversed.order.begin(), reversed.order.end());
      ASSERT_EQ(eval(p, rotated), v);
      ASSERT_EQ(eval(p, reversed), v);
    } while (std::next_permutation(perm.order.begin(), perm.order.end()));
  }
}

TEST(Tsp, FixedOriginMinimumMatchesFullEnumeration) {
  auto cities = random_cities(5, 77);
  auto p = parse_tsplib(tsplib_text(cities));
  double fixed_min = 1e18;
  std::vector<std::int64_t> rest{1, 2, 3, 4};
  int tours = 0;
  do {
    std::vector<std::int64_t> order{0};
    order.insert(order.end(), rest.begin(), rest.end());
    fixed_min = std::min(fixed_min, eval(p, Permutation(order)));
    ++tours;
  } while (std::next_permutation(rest.begin(), rest.end()));
  EXPECT_EQ(tours, 24);
  long full_min = 1L << 40;
  std::vector<std::int64_t> all{0, 1, 2, 3, 4};
  do full_min = std::min(full_min, tour_oracle(cities, all));
  while (std::next_permutation(all.begin(), all.end()));
  EXPECT_EQ(fixed_min, full_min);
}

TEST(Tsp, ParserAcceptsVariants) {
  auto inst = parse_tsplib_coords("NAME:x\nTYPE : TSP\nDIMENSION : 2\nEDGE_WEIGHT_TYPE : EUC_2D\n"
                                  "NODE_COORD_SECTION\n2 3.5 -1e1\n1 0 0\n");
  ASSERT_EQ(inst.coords.size(), 2u);
  EXPECT_EQ(inst.coords[1], (std::pair<double, double>{3.5, -10.0}));
}

TEST(Tsp, ParserErrors) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_tsplib_coords(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  const std::string head = "NAME : a\nTYPE : TSP\nDIMENSION : 2\n";
  EXPECT_EQ(line_of(head + "EDGE_WEIGHT_TYPE : GEO\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n"), 4u);
  EXPECT_EQ(line_of("NAME : a\nTYPE : ATSP\nDIMENSION : 2\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n"), 2u);
  EXPECT_EQ(line_of(head + "EDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n"), 6u);
  EXPECT_EQ(line_of(head + "EDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n3 2 2\n"), 8u);
  EXPECT_EQ(line_of(head + "EDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n1 1 1\n"), 7u);
  EXPECT_EQ(line_of(head + "EDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\nEOF\n1 1 1\n"), 9u);
  EXPECT_EQ(line_of(head + "NODE_COORD_SECTION\n1 0 0\n2 1 1\n"), 4u);
}

// Every single-token deletion except the optional trailing EOF breaks the
// grammar and must be reported with a line number inside the file.
TEST(Tsp, TokenDeletionFuzz) {
  std::vector<std::vector<std::string>> lines;
  {
    std::istringstream in(kTriangle);
    std::string l;
    while (std::getline(in, l)) lines.push_back(detail::split_ws(l));
  }
  for (std::size_t l = 0; l < lines.size(); ++l) {
    for (std::size_t i = 0; i < lines[l].size(); ++i) {
      std::string text;
      for (std::size_t k = 0; k < lines.size(); ++k) {
        for (std::size_t w = 0; w < lines[k].size(); ++w) {
          if (k == l && w == i) continue;
          text += lines[k][w] + " ";
        }
        text += "\n";
      }
      if (lines[l][i] == "EOF") {
        EXPECT_NO_THROW(parse_tsplib(text));
        continue;
      }
      try {
        parse_tsplib(text);
        ADD_FAILURE() << "accepted deletion of '" << lines[l][i] << "' on line " << l + 1;
      } catch (const ParseError& e) {
        EXPECT_GE(e.line(), 1u);
        EXPECT_LE(e.line(), lines.size());
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Samplers

TEST(Samplers, FisherYatesPinnedDrawsGolden) {
  auto zero = [](std::uint64_t) { return std::uint64_t{0}; };
  EXPECT_EQ(fisher_yates(4, zero).order, (std::vector<std::int64_t>{1, 2, 3, 0}));
  EXPECT_EQ(fisher_yates(1, zero).order, (std::vector<std::int64_t>{0}));
  auto top = [](std::uint64_t n) { return n - 1; };
  EXPECT_EQ(fisher_yates(5, top).order, Permutation::identity(5).order);
}

TEST(Samplers, ValidDeterministicAndInBox) {
  auto perm = magic_square(4);
  auto box = sphere(5, -2.0, 3.0);
  auto bits = onemax(13);
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    auto env = Environment::seeded(seed);
    auto p = sample_initial(perm, env);
    ASSERT_TRUE(std::get<Permutation>(p.value).valid());
    ASSERT_EQ(std::get<Permutation>(p.value).size(), 16u);
    ASSERT_EQ(sample_initial(perm, env).value, p.value);
    EXPECT_EQ(p.env.rng().counter, 15u);
    const auto x = sample_initial(box, env);
    for (double c : std::get<RealVector>(x.value).coords) {
      ASSERT_GE(c, -2.0);
      ASSERT_LT(c, 3.0);
    }
    ASSERT_EQ(std::get<BitVector>(sample_initial(bits, env).value).size(), 13u);
  }
}

TEST(Samplers, PermutationsLookUniform) {
  std::map<std::vector<std::int64_t>, int> counts;
  Environment env = Environment::seeded(12);
  const int draws = 60'000;
  for (int i = 0; i < draws; ++i) {
    auto s = sample_permutation(3)(std::monostate{}, std::move(env));
    env = std::move(s.env);
    ++counts[std::get<Permutation>(s.value).order];
  }
  ASSERT_EQ(counts.size(), 6u);
  for (const auto& [order, c] : counts) EXPECT_NEAR(c / double(draws), 1.0 / 6.0, 0.01);
}

}  // namespace
