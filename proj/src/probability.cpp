#include "mcs/probability.hpp"

#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "mcs/errors.hpp"
#include "mcs/taskmodel.hpp"

namespace mcs {

ExecDistribution::ExecDistribution(std::vector<Rational> scales, std::vector<double> cdf)
    : scales_(std::move(scales)), cdf_(std::move(cdf)) {
  if (scales_.empty() || scales_.size() != cdf_.size())
    throw InvalidFraction("distribution needs one cdf value per scale");
  double prev = 0.0;
  for (std::size_t i = 0; i < scales_.size(); ++i) {
    if (scales_[i] <= 0 || scales_[i] > 1) throw InvalidFraction("scales must lie in (0,1]");
    if (i > 0 && scales_[i] <= scales_[i - 1]) throw InvalidFraction("scales must be strictly increasing");
    if (!(cdf_[i] >= prev && cdf_[i] <= 1.0)) throw InvalidFraction("cdf must be non-decreasing within [0,1]");
    pmf_.push_back(cdf_[i] - prev);
    prev = cdf_[i];
  }
  if (cdf_.back() != 1.0) throw InvalidFraction("cdf must end at 1");
}

ExecDistribution ExecDistribution::table4() {
  std::vector<Rational> s;
  for (int k = 1; k <= 10; ++k) s.emplace_back(k, 10);
  return {std::move(s), {0.01, 0.05, 0.2, 0.5, 0.8, 0.9, 0.95, 0.98, 0.995, 1.0}};
}

ExecDistribution ExecDistribution::parse(std::istream& in) {
  std::vector<Rational> s;
  std::vector<double> c;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a)) continue;
    if (!(ls >> b) || (ls >> extra)) throw ParseError(no, "expected 's cdf'");
    try {
      s.push_back(parse_rational(a));
      std::size_t used = 0;
      c.push_back(std::stod(b, &used));
      if (used != b.size()) throw ParseError(no, "bad cdf value '" + b + "'");
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(no, e.what());
    }
  }
  try {
    return {std::move(s), std::move(c)};
  } catch (const InvalidFraction& e) {
    throw ParseError(0, e.what());
  }
}

ExecDistribution ExecDistribution::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open distribution file " + path.string());
  return parse(in);
}

double ExecDistribution::cdf_at(const Rational& s) const {
  double v = 0.0;
  for (std::size_t i = 0; i < scales_.size() && scales_[i] <= s; ++i) v = cdf_[i];
  return v;
}

double p_noswitch_static(const ExecDistribution& dist, const std::vector<Rational>& betas) {
  double p = 1.0;
  for (const auto& b : betas) p *= dist.cdf_at(b);
  return p;
}

double p_noswitch_static(const ExecDistribution& dist, int n, const Rational& beta) {
  if (n < 1) throw InvalidTask("task count must be positive");
  return p_noswitch_static(dist, std::vector<Rational>(static_cast<std::size_t>(n), beta));
}

namespace {

using boost::multiprecision::mpz_int;

// Integer form of the region sum_i w[i][k_i] <= cap.
struct Lattice {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::int64_t> weight;  // n*k, ascending in k per task
  std::vector<double> mass;          // n*k
  std::int64_t cap = 0;
  std::vector<std::int64_t> suffix_min;  // n+1
  std::vector<std::int64_t> suffix_max;  // n+1
  std::vector<double> suffix_total;      // n+1: prod_{j>=i} sum_k mass

  std::int64_t w(std::size_t i, std::size_t j) const { return weight[i * k + j]; }
  double m(std::size_t i, std::size_t j) const { return mass[i * k + j]; }
};

std::int64_t to_i64(const mpz_int& v) {
  if (v > std::numeric_limits<std::int64_t>::max() / 4 || v < std::numeric_limits<std::int64_t>::min() / 4)
    throw GridOverflow("scaled utilization weights do not fit in 64 bits");
  return v.convert_to<std::int64_t>();
}

Lattice build(const ExecDistribution& dist, const std::vector<Rational>& utils, const Rational& beta_star,
              Summand summand) {
  if (utils.empty()) throw InvalidTask("need at least one task");
  for (const auto& u : utils)
    if (u <= 0) throw InvalidFraction("utilizations must be positive");
  require_fraction(beta_star, "beta*");

  Lattice L;
  L.n = utils.size();
  L.k = dist.size();
  Rational total = 0;
  for (const auto& u : utils) total += u;

  mpz_int scale = 1;
  auto fold = [&](const Rational& r) {
    mpz_int d = boost::multiprecision::denominator(r);
    scale = scale / boost::multiprecision::gcd(scale, d) * d;
  };
  for (const auto& u : utils)
    for (const auto& s : dist.scales()) fold(s * u);

  const auto& per = summand == Summand::Pmf ? dist.pmf() : dist.cdf();
  L.weight.reserve(L.n * L.k);
  for (const auto& u : utils) {
    for (std::size_t j = 0; j < L.k; ++j) {
      Rational w = dist.scales()[j] * u * Rational(scale);
      L.weight.push_back(to_i64(boost::multiprecision::numerator(w)));
      L.mass.push_back(per[j]);
    }
  }
  Rational cap = beta_star * total * Rational(scale);
  mpz_int capz = boost::multiprecision::numerator(cap) / boost::multiprecision::denominator(cap);
  L.cap = to_i64(capz);

  L.suffix_min.assign(L.n + 1, 0);
  L.suffix_max.assign(L.n + 1, 0);
  L.suffix_total.assign(L.n + 1, 1.0);
  for (std::size_t i = L.n; i-- > 0;) {
    double t = 0.0;
    for (std::size_t j = 0; j < L.k; ++j) t += L.m(i, j);
    L.suffix_min[i] = L.suffix_min[i + 1] + L.w(i, 0);
    L.suffix_max[i] = L.suffix_max[i + 1] + L.w(i, L.k - 1);
    L.suffix_total[i] = L.suffix_total[i + 1] * t;
  }
  return L;
}

double enumerate_full(const Lattice& L) {
  std::vector<std::size_t> idx(L.n, 0);
  double sum = 0.0;
  while (true) {
    std::int64_t used = 0;
    double p = 1.0;
    for (std::size_t i = 0; i < L.n; ++i) {
      used += L.w(i, idx[i]);
      p *= L.m(i, idx[i]);
    }
    if (used <= L.cap) sum += p;
    std::size_t i = L.n;
    while (i > 0) {
      --i;
      if (++idx[i] < L.k) break;
      idx[i] = 0;
      if (i == 0) return sum;
    }
  }
}

// Mass of completions of tasks i..n-1 that keep the total within cap.
double descend(const Lattice& L, std::size_t i, std::int64_t used) {
  if (used + L.suffix_max[i] <= L.cap) return L.suffix_total[i];
  if (used + L.suffix_min[i] > L.cap) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < L.k; ++j) {
    const std::int64_t u = used + L.w(i, j);
    if (u + L.suffix_min[i + 1] > L.cap) break;
    sum += L.m(i, j) * descend(L, i + 1, u);
  }
  return sum;
}

double enumerate_parallel(const Lattice& L) {
  const std::size_t depth = L.n >= 2 ? 2 : 1;
  const std::size_t items = depth == 2 ? L.k * L.k : L.k;
  std::vector<double> part(items, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t it = 0; it < static_cast<std::int64_t>(items); ++it) {
    const std::size_t a = static_cast<std::size_t>(it) / (depth == 2 ? L.k : 1);
    const std::size_t b = depth == 2 ? static_cast<std::size_t>(it) % L.k : 0;
    std::int64_t used = L.w(0, a);
    double p = L.m(0, a);
    if (depth == 2) {
      used += L.w(1, b);
      p *= L.m(1, b);
    }
    if (used + L.suffix_min[depth] <= L.cap) part[static_cast<std::size_t>(it)] = p * descend(L, depth, used);
  }
  double sum = 0.0;
  for (double v : part) sum += v;
  return sum;
}

double convolve(const Lattice& L, std::size_t max_lattice) {
  if (L.cap < 0) return 0.0;
  if (static_cast<std::uint64_t>(L.cap) + 1 > max_lattice)
    throw GridOverflow("convolution table of " + std::to_string(L.cap + 1) + " cells exceeds the limit");
  const std::size_t size = static_cast<std::size_t>(L.cap) + 1;
  std::vector<double> cur(size, 0.0), next(size, 0.0);
  cur[0] = 1.0;
  for (std::size_t i = 0; i < L.n; ++i) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t u = 0; u < size; ++u) {
      if (cur[u] == 0.0) continue;
      for (std::size_t j = 0; j < L.k; ++j) {
        const std::size_t v = u + static_cast<std::size_t>(L.w(i, j));
        if (v >= size) break;
        next[v] += cur[u] * L.m(i, j);
      }
    }
    cur.swap(next);
  }
  double sum = 0.0;
  for (double v : cur) sum += v;
  return sum;
}

}  // namespace

double p_noswitch_dynamic(const ExecDistribution& dist, const std::vector<Rational>& utils,
                          const Rational& beta_star, const ProbOptions& opt) {
  const Lattice L = build(dist, utils, beta_star, opt.summand);
  switch (opt.route) {
    case ProbRoute::EnumerateSerial: return enumerate_full(L);
    case ProbRoute::EnumerateParallel: return enumerate_parallel(L);
    case ProbRoute::Convolve: return convolve(L, opt.max_lattice);
    case ProbRoute::Auto: break;
  }
  return L.n <= 8 ? enumerate_parallel(L) : convolve(L, opt.max_lattice);
}

double p_noswitch_dynamic(const ExecDistribution& dist, int n, const Rational& beta_star, const ProbOptions& opt) {
  if (n < 1) throw InvalidTask("task count must be positive");
  return p_noswitch_dynamic(dist, std::vector<Rational>(static_cast<std::size_t>(n), Rational(1)), beta_star, opt);
}

}  // namespace mcs
