#ifndef METACOMP_PROBLEMS_HPP
#define METACOMP_PROBLEMS_HPP

// Benchmark problems. Every objective is minimized and, where the optimum is
// known, normalized so that it equals 0.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "metacomp/components.hpp"
#include "metacomp/frameworks.hpp"

namespace metacomp {

struct ProblemInstance {
  std::string name;
  Representation representation = Representation::bits;
  Evaluate evaluate;
  SamplerC<Solution> sample_initial;
  std::map<std::string, double> metadata;
  std::optional<std::pair<double, double>> bounds;
};

// ---------------------------------------------------------------------------
// Samplers

/// Fisher–Yates from the top: for i = n-1 down to 1 swap p[i] with p[below(i+1)].
template <class Below>
Permutation fisher_yates(std::size_t n, Below&& below) {
  auto p = Permutation::identity(n);
  for (std::size_t i = n; i-- > 1;) {
    const auto j = static_cast<std::size_t>(below(i + 1));
    std::swap(p.order[i], p.order[j]);
  }
  return p;
}

inline SamplerC<Solution> sample_bits(std::size_t n) {
  return SamplerC<Solution>({"sample_bits", Kind::initializer, {}, {}, {}}, [n](const std::monostate&, Environment env) {
    RngCursor rng(std::move(env));
    BitVector v;
    v.bits.resize(n);
    for (auto& b : v.bits) b = static_cast<std::uint8_t>(rng.below(2));
    return Threaded<Solution>{std::move(v), std::move(rng).release()};
  });
}

inline SamplerC<Solution> sample_permutation(std::size_t n) {
  return SamplerC<Solution>({"sample_permutation", Kind::initializer, {}, {}, {}},
                            [n](const std::monostate&, Environment env) {
                              RngCursor rng(std::move(env));
                              auto p = fisher_yates(n, [&](std::uint64_t m) { return rng.below(m); });
                              return Threaded<Solution>{std::move(p), std::move(rng).release()};
                            });
}

inline SamplerC<Solution> sample_real(std::size_t d, double lo, double hi) {
  return SamplerC<Solution>({"sample_real", Kind::initializer, {}, {}, {}},
                            [d, lo, hi](const std::monostate&, Environment env) {
                              RngCursor rng(std::move(env));
                              RealVector x;
                              x.coords.resize(d);
                              for (auto& c : x.coords) c = lo + rng.uniform() * (hi - lo);
                              return Threaded<Solution>{std::move(x), std::move(rng).release()};
                            });
}

/// Draws one initial solution for `problem`.
inline Threaded<Solution> sample_initial(const ProblemInstance& problem, Environment env) {
  return problem.sample_initial(std::monostate{}, std::move(env));
}

// ---------------------------------------------------------------------------
// Objective kernels (pure, no length checks)

inline double onemax_value(const BitVector& v) {
  std::int64_t ones = 0;
  for (auto b : v.bits) ones += b;
  return static_cast<double>(static_cast<std::int64_t>(v.size()) - ones);
}

/// Equal-valued horizontally or vertically adjacent cells of an s×s grid.
inline double checkerboard_value(const BitVector& v, std::size_t s) {
  std::int64_t equal = 0;
  for (std::size_t r = 0; r < s; ++r) {
    for (std::size_t c = 0; c < s; ++c) {
      const auto cell = v.bits[r * s + c];
      if (c + 1 < s && v.bits[r * s + c + 1] == cell) ++equal;
      if (r + 1 < s && v.bits[(r + 1) * s + c] == cell) ++equal;
    }
  }
  return static_cast<double>(equal);
}

inline std::size_t ones_in_block(const BitVector& v, std::size_t start, std::size_t b) {
  std::size_t ones = 0;
  for (std::size_t i = start; i < start + b; ++i) ones += v.bits[i];
  return ones;
}

inline double royal_road_value(const BitVector& v, std::size_t b) {
  std::int64_t complete = 0;
  for (std::size_t s = 0; s < v.size(); s += b) complete += ones_in_block(v, s, b) == b ? 1 : 0;
  return static_cast<double>(static_cast<std::int64_t>(v.size()) - static_cast<std::int64_t>(b) * complete);
}

/// Deceptive trap: block score is b when all ones, else b-1-ones; the
/// objective sums b - score over blocks.
inline double trap_value(const BitVector& v, std::size_t b) {
  std::int64_t total = 0;
  for (std::size_t s = 0; s < v.size(); s += b) {
    const auto ones = static_cast<std::int64_t>(ones_in_block(v, s, b));
    const auto bb = static_cast<std::int64_t>(b);
    const auto score = ones == bb ? bb : bb - 1 - ones;
    total += bb - score;
  }
  return static_cast<double>(total);
}

/// Hierarchical if-and-only-if fitness (to be maximized): every homogeneous
/// aligned block of size 2^l contributes 2^l, for l = 0..log2(n).
inline std::int64_t hiff_fitness(const BitVector& v) {
  std::int64_t f = 0;
  for (std::size_t size = 1; size <= v.size(); size *= 2) {
    for (std::size_t s = 0; s < v.size(); s += size) {
      const auto ones = ones_in_block(v, s, size);
      if (ones == 0 || ones == size) f += static_cast<std::int64_t>(size);
    }
  }
  return f;
}

inline double sphere_value(const RealVector& x) {
  double s = 0.0;
  for (double c : x.coords) s += c * c;
  return s;
}

/// Sum of |line sum - M| over rows, columns and both diagonals, where the
/// cell at position i holds order[i]+1 and M = k(k^2+1)/2.
inline double magic_square_value(const Permutation& p, std::size_t k) {
  const auto m = static_cast<std::int64_t>(k * (k * k + 1) / 2);
  auto cell = [&](std::size_t r, std::size_t c) { return p.order[r * k + c] + 1; };
  std::int64_t dev = 0;
  std::int64_t d1 = 0;
  std::int64_t d2 = 0;
  for (std::size_t i = 0; i < k; ++i) {
    std::int64_t row = 0;
    std::int64_t col = 0;
    for (std::size_t j = 0; j < k; ++j) {
      row += cell(i, j);
      col += cell(j, i);
    }
    dev += std::abs(row - m) + std::abs(col - m);
    d1 += cell(i, i);
    d2 += cell(i, k - 1 - i);
  }
  return static_cast<double>(dev + std::abs(d1 - m) + std::abs(d2 - m));
}

/// Closed-tour length under an integer weight matrix.
inline std::int64_t tour_length(const Permutation& p, const std::vector<std::vector<std::int64_t>>& w) {
  std::int64_t total = 0;
  const auto n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    total += w[static_cast<std::size_t>(p.order[i])][static_cast<std::size_t>(p.order[(i + 1) % n])];
  }
  return total;
}

struct Cnf {
  std::size_t variables = 0;
  std::vector<std::vector<int>> clauses;
};

inline double unsatisfied_clauses(const Cnf& cnf, const BitVector& assignment) {
  std::int64_t unsat = 0;
  for (const auto& clause : cnf.clauses) {
    bool sat = false;
    for (int lit : clause) {
      const bool value = assignment.bits[static_cast<std::size_t>(std::abs(lit) - 1)] != 0;
      if ((lit > 0) == value) {
        sat = true;
        break;
      }
    }
    if (!sat) ++unsat;
  }
  return static_cast<double>(unsat);
}

// ---------------------------------------------------------------------------
// Problem constructors

namespace detail {

template <class Rep, class F>
Evaluate make_evaluator(std::string name, ParamBindings params, std::size_t length, F f) {
  ComponentDescriptor d{name, Kind::evaluate, {}, {}, {}};
  for (const auto& [k, v] : params) {
    d.params.push_back({k, ParamType::integer, v, 1.0, std::nullopt});
  }
  return Evaluate(std::move(d), [name, length, f = std::move(f)](const Solution& s, Environment env) {
    const auto& x = expect_representation<Rep>(s, name);
    if (x.size() != length) {
      throw ComponentError(name, "expected length " + std::to_string(length) + ", got " + std::to_string(x.size()));
    }
    if constexpr (std::is_same_v<Rep, Permutation>) {
      if (!x.valid()) throw ComponentError(name, "not a permutation");
    }
    return Threaded<double>{f(x), std::move(env)};
  });
}

inline void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace detail

inline ProblemInstance onemax(std::size_t n) {
  detail::require(n >= 1, "onemax: n must be positive");
  return {"onemax_" + std::to_string(n), Representation::bits,
          detail::make_evaluator<BitVector>("onemax", {{"n", std::int64_t(n)}}, n, onemax_value),
          sample_bits(n), {{"n", double(n)}, {"optimum_value", 0.0}}, std::nullopt};
}

inline ProblemInstance checkerboard(std::size_t s) {
  detail::require(s >= 2, "checkerboard: side must be at least 2");
  return {"checkerboard_" + std::to_string(s), Representation::bits,
          detail::make_evaluator<BitVector>("checkerboard", {{"s", std::int64_t(s)}}, s * s,
                                            [s](const BitVector& v) { return checkerboard_value(v, s); }),
          sample_bits(s * s), {{"n", double(s * s)}, {"optimum_value", 0.0}}, std::nullopt};
}

inline ProblemInstance royal_road(std::size_t n, std::size_t b) {
  detail::require(n >= 1 && b >= 1 && n % b == 0, "royal_road: block size must divide n");
  return {"royal_road_" + std::to_string(n) + "_" + std::to_string(b), Representation::bits,
          detail::make_evaluator<BitVector>("royal_road", {{"n", std::int64_t(n)}, {"b", std::int64_t(b)}}, n,
                                            [b](const BitVector& v) { return royal_road_value(v, b); }),
          sample_bits(n), {{"n", double(n)}, {"optimum_value", 0.0}}, std::nullopt};
}

inline ProblemInstance trap(std::size_t n, std::size_t b) {
  detail::require(n >= 1 && b >= 1 && n % b == 0, "trap: block size must divide n");
  return {"trap_" + std::to_string(n) + "_" + std::to_string(b), Representation::bits,
          detail::make_evaluator<BitVector>("trap", {{"n", std::int64_t(n)}, {"b", std::int64_t(b)}}, n,
                                            [b](const BitVector& v) { return trap_value(v, b); }),
          sample_bits(n), {{"n", double(n)}, {"optimum_value", 0.0}}, std::nullopt};
}

inline ProblemInstance hiff(std::size_t n) {
  detail::require(n >= 1 && (n & (n - 1)) == 0, "hiff: n must be a power of two");
  std::int64_t levels = 0;
  for (std::size_t m = n; m > 1; m /= 2) ++levels;
  const auto max_f = static_cast<std::int64_t>(n) * (levels + 1);
  return {"hiff_" + std::to_string(n), Representation::bits,
          detail::make_evaluator<BitVector>("hiff", {{"n", std::int64_t(n)}}, n,
                                            [max_f](const BitVector& v) { return double(max_f - hiff_fitness(v)); }),
          sample_bits(n), {{"n", double(n)}, {"optimum_value", 0.0}}, std::nullopt};
}

inline ProblemInstance sphere(std::size_t d, double lo, double hi) {
  detail::require(d >= 1 && lo < hi, "sphere: need d >= 1 and lo < hi");
  auto eval = detail::make_evaluator<RealVector>("sphere", {{"d", std::int64_t(d)}}, d, sphere_value);
  ProblemInstance p{"sphere_" + std::to_string(d), Representation::real, std::move(eval), sample_real(d, lo, hi),
                    {{"n", double(d)}}, std::make_pair(lo, hi)};
  if (lo <= 0.0 && 0.0 <= hi) p.metadata["optimum_value"] = 0.0;
  return p;
}

inline ProblemInstance magic_square(std::size_t k) {
  detail::require(k >= 3, "magic_square: k must be at least 3");
  return {"magic_square_" + std::to_string(k), Representation::perm,
          detail::make_evaluator<Permutation>("magic_square", {{"k", std::int64_t(k)}}, k * k,
                                              [k](const Permutation& p) { return magic_square_value(p, k); }),
          sample_permutation(k * k), {{"n", double(k * k)}, {"optimum_value", 0.0}}, std::nullopt};
}

inline ProblemInstance tsp_from_matrix(std::string name, std::vector<std::vector<std::int64_t>> w) {
  const auto n = w.size();
  detail::require(n >= 1, "tsp: need at least one city");
  for (const auto& row : w) detail::require(row.size() == n, "tsp: weight matrix must be square");
  auto eval = detail::make_evaluator<Permutation>(
      "tsp", {{"n", std::int64_t(n)}}, n, [w = std::move(w)](const Permutation& p) { return double(tour_length(p, w)); });
  return {std::move(name), Representation::perm, std::move(eval), sample_permutation(n), {{"n", double(n)}}, std::nullopt};
}

// ---------------------------------------------------------------------------
// Parsers

namespace detail {

inline std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline std::optional<long long> to_int(const std::string& s) {
  long long v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<double> to_real(const std::string& s) {
  double v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

/// DIMACS CNF: "c" comment lines, one "p cnf V C" header, then clauses as
/// runs of nonzero literals each terminated by 0 (clauses may span lines).
/// A "%" line ends the data.
inline Cnf parse_cnf(std::string_view text) {
  Cnf cnf;
  bool header = false;
  std::size_t declared = 0;
  std::vector<int> pending;
  std::size_t line_no = 0;
  std::size_t last_line = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    last_line = line_no;
    if (toks[0][0] == 'c') continue;
    if (toks[0] == "%") break;
    if (toks[0] == "p") {
      if (header) throw ParseError(line_no, "duplicate problem line");
      if (toks.size() != 4 || toks[1] != "cnf") throw ParseError(line_no, "malformed header, expected 'p cnf V C'");
      auto v = detail::to_int(toks[2]);
      auto c = detail::to_int(toks[3]);
      if (!v || !c || *v < 1 || *c < 0) throw ParseError(line_no, "malformed header counts");
      cnf.variables = static_cast<std::size_t>(*v);
      declared = static_cast<std::size_t>(*c);
      header = true;
      continue;
    }
    if (!header) throw ParseError(line_no, "clause before 'p cnf' header");
    for (const auto& tok : toks) {
      auto lit = detail::to_int(tok);
      if (!lit) throw ParseError(line_no, "invalid literal '" + tok + "'");
      if (*lit == 0) {
        cnf.clauses.push_back(std::move(pending));
        pending.clear();
        continue;
      }
      if (static_cast<std::size_t>(std::llabs(*lit)) > cnf.variables) {
        throw ParseError(line_no, "literal " + tok + " exceeds variable count");
      }
      pending.push_back(static_cast<int>(*lit));
    }
  }
  if (!header) throw ParseError(std::max<std::size_t>(last_line, 1), "missing 'p cnf' header");
  if (!pending.empty()) throw ParseError(last_line, "unterminated clause at end of input");
  if (cnf.clauses.size() != declared) {
    throw ParseError(last_line, "header declares " + std::to_string(declared) + " clauses, found " +
                                    std::to_string(cnf.clauses.size()));
  }
  return cnf;
}

/// MAX-SAT instance: objective = number of unsatisfied clauses.
inline ProblemInstance parse_dimacs_cnf(std::string_view text, std::string name = "maxsat") {
  auto cnf = parse_cnf(text);
  const auto n = cnf.variables;
  const auto m = cnf.clauses.size();
  auto eval = detail::make_evaluator<BitVector>(
      "maxsat", {{"n", std::int64_t(n)}}, n, [cnf = std::move(cnf)](const BitVector& v) { return unsatisfied_clauses(cnf, v); });
  return {std::move(name), Representation::bits, std::move(eval), sample_bits(n),
          {{"n", double(n)}, {"clauses", double(m)}}, std::nullopt};
}

struct TsplibInstance {
  std::string name;
  std::vector<std::pair<double, double>> coords;
};

/// TSPLIB subset: TYPE TSP with EDGE_WEIGHT_TYPE EUC_2D and a
/// NODE_COORD_SECTION. Header lines are "KEY : value".
inline TsplibInstance parse_tsplib_coords(std::string_view text) {
  std::map<std::string, std::string> header;
  std::map<std::string, std::size_t> header_line;
  TsplibInstance out;
  std::vector<bool> seen;
  std::size_t expected = 0;
  std::size_t read = 0;
  bool in_coords = false;
  bool ended = false;
  std::size_t line_no = 0;
  std::size_t last_line = 1;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    last_line = line_no;
    if (ended) throw ParseError(line_no, "content after EOF");
    if (trimmed == "EOF") {
      ended = true;
      continue;
    }
    if (in_coords && read < expected) {
      auto toks = detail::split_ws(trimmed);
      if (toks.size() != 3) throw ParseError(line_no, "coordinate line must be 'id x y'");
      auto id = detail::to_int(toks[0]);
      auto x = detail::to_real(toks[1]);
      auto y = detail::to_real(toks[2]);
      if (!id || !x || !y) throw ParseError(line_no, "invalid coordinate line");
      if (*id < 1 || static_cast<std::size_t>(*id) > expected || seen[static_cast<std::size_t>(*id - 1)]) {
        throw ParseError(line_no, "node id out of range or repeated");
      }
      seen[static_cast<std::size_t>(*id - 1)] = true;
      out.coords[static_cast<std::size_t>(*id - 1)] = {*x, *y};
      ++read;
      continue;
    }
    if (in_coords) throw ParseError(line_no, "more coordinate lines than DIMENSION");
    if (trimmed == "NODE_COORD_SECTION" || trimmed == "NODE_COORD_SECTION :") {
      for (const char* key : {"NAME", "TYPE", "DIMENSION", "EDGE_WEIGHT_TYPE"}) {
        if (!header.count(key)) throw ParseError(line_no, std::string("missing ") + key + " before NODE_COORD_SECTION");
      }
      if (header["TYPE"] != "TSP") throw ParseError(header_line["TYPE"], "unsupported TYPE '" + header["TYPE"] + "'");
      if (header["EDGE_WEIGHT_TYPE"] != "EUC_2D") {
        throw ParseError(header_line["EDGE_WEIGHT_TYPE"], "unsupported EDGE_WEIGHT_TYPE '" + header["EDGE_WEIGHT_TYPE"] + "'");
      }
      auto dim = detail::to_int(header["DIMENSION"]);
      if (!dim || *dim < 1) throw ParseError(header_line["DIMENSION"], "DIMENSION must be a positive integer");
      expected = static_cast<std::size_t>(*dim);
      out.coords.assign(expected, {0.0, 0.0});
      seen.assign(expected, false);
      out.name = header["NAME"];
      in_coords = true;
      continue;
    }
    const auto colon = trimmed.find(':');
    if (colon == std::string::npos) throw ParseError(line_no, "expected 'KEY : value'");
    auto key = detail::trim(std::string_view(trimmed).substr(0, colon));
    auto value = detail::trim(std::string_view(trimmed).substr(colon + 1));
    if (key.empty() || value.empty() || key.find_first_of(" \t") != std::string::npos) {
      throw ParseError(line_no, "expected 'KEY : value'");
    }
    if (header.count(key)) throw ParseError(line_no, "duplicate key " + key);
    header[key] = value;
    header_line[key] = line_no;
  }
  if (!in_coords) throw ParseError(last_line, "missing NODE_COORD_SECTION");
  if (read != expected) {
    throw ParseError(last_line, "DIMENSION is " + std::to_string(expected) + " but " + std::to_string(read) +
                                    " coordinates were given");
  }
  return out;
}

/// nint of the Euclidean distance, as TSPLIB's EUC_2D prescribes.
inline std::int64_t euc_2d(std::pair<double, double> a, std::pair<double, double> b) {
  const double dx = a.first - b.first;
  const double dy = a.second - b.second;
  return static_cast<std::int64_t>(std::sqrt(dx * dx + dy * dy) + 0.5);
}

inline ProblemInstance parse_tsplib(std::string_view text) {
  auto inst = parse_tsplib_coords(text);
  const auto n = inst.coords.size();
  std::vector<std::vector<std::int64_t>> w(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) w[i][j] = euc_2d(inst.coords[i], inst.coords[j]);
  }
  return tsp_from_matrix(inst.name, std::move(w));
}

}  // namespace metacomp

#endif  // METACOMP_PROBLEMS_HPP
