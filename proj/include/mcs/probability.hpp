#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "mcs/rational.hpp"

namespace mcs {

/// Discrete distribution of the largest execution scale s (fraction of C) a
/// task reaches in one busy interval, given on a grid of scales.
class ExecDistribution {
 public:
  /// Throws InvalidFraction unless scales are strictly increasing in (0,1],
  /// the cdf is non-decreasing in [0,1] and ends at 1.
  ExecDistribution(std::vector<Rational> scales, std::vector<double> cdf);

  /// Scales 0.1..1.0 with cdf .01 .05 .2 .5 .8 .9 .95 .98 .995 1.
  static ExecDistribution table4();

  /// Lines "s cdf"; blank lines and '#' comments are skipped.
  static ExecDistribution parse(std::istream& in);
  static ExecDistribution load(const std::filesystem::path& path);

  std::size_t size() const { return scales_.size(); }
  const std::vector<Rational>& scales() const { return scales_; }
  const std::vector<double>& cdf() const { return cdf_; }
  const std::vector<double>& pmf() const { return pmf_; }

  /// cdf at the largest grid scale not above `s`; 0 below the first scale.
  double cdf_at(const Rational& s) const;

 private:
  std::vector<Rational> scales_;
  std::vector<double> cdf_;
  std::vector<double> pmf_;
};

/// Product over tasks of cdf_at(beta_i).
double p_noswitch_static(const ExecDistribution& dist, const std::vector<Rational>& betas);
double p_noswitch_static(const ExecDistribution& dist, int n, const Rational& beta);

enum class ProbRoute {
  Auto,               // pruned enumeration for n <= 8, convolution above
  EnumerateSerial,    // full enumeration, no pruning; reference for tests
  EnumerateParallel,  // OpenMP over two-level prefixes, pruned
  Convolve,           // dynamic programming over the integer weight lattice
};

enum class Summand {
  Pmf,  // joint probability mass: the probability of no switch
  Cdf,  // product of cdf values, kept for comparison only
};

struct ProbOptions {
  ProbRoute route = ProbRoute::Auto;
  Summand summand = Summand::Pmf;
  std::size_t max_lattice = std::size_t{1} << 24;  // convolution table size limit
};

/// Probability mass of grid assignments (s_1..s_n) with
/// sum s_i*u_i <= beta_star * sum u_i. Weights are scaled to exact integers;
/// throws GridOverflow when they do not fit or the convolution table would
/// exceed max_lattice.
double p_noswitch_dynamic(const ExecDistribution& dist, const std::vector<Rational>& utils,
                          const Rational& beta_star, const ProbOptions& opt = {});
double p_noswitch_dynamic(const ExecDistribution& dist, int n, const Rational& beta_star,
                          const ProbOptions& opt = {});

}  // namespace mcs
