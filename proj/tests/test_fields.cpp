#include <cmath>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "colhyp/errors.hpp"
#include "colhyp/fields.hpp"
#include "colhyp/seeding.hpp"

using namespace colhyp;

namespace {

/// Plain two-pass sample statistics, kept separate from the library's estimators.
struct Moments {
  double mean_x = 0, mean_y = 0, var_x = 0, var_y = 0, cov = 0;
};

Moments moments(const std::vector<double>& x, const std::vector<double>& y) {
  Moments m;
  const double n = static_cast<double>(x.size());
  m.mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  m.mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    m.var_x += (x[i] - m.mean_x) * (x[i] - m.mean_x);
    m.var_y += (y[i] - m.mean_y) * (y[i] - m.mean_y);
    m.cov += (x[i] - m.mean_x) * (y[i] - m.mean_y);
  }
  m.var_x /= n - 1;
  m.var_y /= n - 1;
  m.cov /= n - 1;
  return m;
}

constexpr std::size_t draws = 10000;

}  // namespace

TEST(Seeding, DerivedSeedsDependOnlyOnTheirCoordinates) {
  EXPECT_EQ(derive_seed(7, SeedPurpose::path, 2, 5), derive_seed(7, SeedPurpose::path, 2, 5));
  EXPECT_NE(derive_seed(7, SeedPurpose::path, 2, 5), derive_seed(7, SeedPurpose::noise, 2, 5));
  EXPECT_NE(derive_seed(7, SeedPurpose::path, 2, 5), derive_seed(7, SeedPurpose::path, 3, 5));
  EXPECT_NE(derive_seed(7, SeedPurpose::path, 2, 5), derive_seed(8, SeedPurpose::path, 2, 5));
}

TEST(Brownian, PinnedAtOrigin) {
  const Grid1D g = Grid1D::from_bounds(0.0, 1.0, 101);
  for (std::uint64_t s = 0; s < 20; ++s) EXPECT_EQ(sample_brownian_1d(g, s).values[0], 0.0);
  const Grid1D two_sided = Grid1D::from_bounds(-1.0, 1.0, 201);
  EXPECT_EQ(sample_brownian_1d(two_sided, 3).at(0.0), 0.0);
}

TEST(Brownian, VarianceAndCovarianceMatchMinimum) {
  const Grid1D g = Grid1D::from_bounds(0.0, 1.0, 101);
  std::vector<double> w1, w03, w07;
  for (std::uint64_t s = 0; s < draws; ++s) {
    const SampledProcess p = sample_brownian_1d(g, derive_seed(11, SeedPurpose::path, 0, s));
    w1.push_back(p.values[100]);
    w03.push_back(p.values[30]);
    w07.push_back(p.values[70]);
  }
  EXPECT_NEAR(moments(w1, w1).var_x, 1.0, 0.05);
  EXPECT_NEAR(moments(w03, w07).cov, 0.3, 0.05);
}

TEST(Brownian, SameSeedSamePath) {
  const Grid1D g = Grid1D::from_bounds(-1.0, 1.0, 51);
  EXPECT_EQ(sample_brownian_1d(g, 99).values, sample_brownian_1d(g, 99).values);
}

TEST(StationaryGaussian, MarginalVarianceAndExponentialCorrelation) {
  const Grid1D g = Grid1D::from_bounds(0.0, 1.0, 3);
  const GaussianFieldSampler sampler(g, CovarianceKernel::exponential(1.0, 0.5));
  std::vector<double> x0, x05;
  for (std::uint64_t s = 0; s < draws; ++s) {
    const SampledProcess p = sampler.sample(derive_seed(12, SeedPurpose::path, 0, s));
    x0.push_back(p.values[0]);
    x05.push_back(p.values[1]);
  }
  const Moments m = moments(x0, x05);
  EXPECT_NEAR(m.var_x, 1.0, 0.05);
  EXPECT_NEAR(m.cov / std::sqrt(m.var_x * m.var_y), std::exp(-1.0), 0.05);
}

TEST(StationaryGaussian, SquaredExponentialVariance) {
  const Grid1D g = Grid1D::from_bounds(0.0, 1.0, 5);
  const GaussianFieldSampler sampler(g, CovarianceKernel::squared_exponential(1.0, 0.7));
  std::vector<double> x;
  for (std::uint64_t s = 0; s < draws; ++s) x.push_back(sampler.sample(s).values[2]);
  EXPECT_NEAR(moments(x, x).var_x, 1.0, 0.05);
}

TEST(StationaryGaussian, SinglePointGridIsOneNormalDraw) {
  const Grid1D g = Grid1D::single(0.25);
  std::vector<double> x;
  for (std::uint64_t s = 0; s < draws; ++s) {
    const SampledProcess p = sample_stationary_gaussian(g, CovarianceKernel::exponential(4.0, 1.0), s);
    ASSERT_EQ(p.values.size(), 1u);
    x.push_back(p.values[0]);
  }
  EXPECT_NEAR(moments(x, x).var_x, 4.0, 0.2);
}

TEST(StationaryGaussian, RejectsInvalidKernel) {
  EXPECT_THROW(CovarianceKernel::exponential(-1.0, 1.0).validate(), ParameterError);
  EXPECT_THROW(CovarianceKernel::exponential(1.0, 0.0).validate(), ParameterError);
}

TEST(OrnsteinUhlenbeck, StationaryVarianceAndAutocorrelation) {
  const double theta = 2.0;
  const Grid1D g = Grid1D::from_bounds(0.0, 1.0, 11);
  std::vector<double> a, b;
  for (std::uint64_t s = 0; s < draws; ++s) {
    const SampledProcess p = ou_process(g, theta, std::sqrt(2.0 * theta), s);
    a.push_back(p.values[2]);
    b.push_back(p.values[5]);
  }
  const Moments m = moments(a, b);
  EXPECT_NEAR(m.var_x, 1.0, 0.05);
  EXPECT_NEAR(m.cov / std::sqrt(m.var_x * m.var_y), std::exp(-theta * 0.3), 0.05);
}

TEST(OrnsteinUhlenbeck, FastReversionDecorrelatesNeighbours) {
  const double theta = 1000.0;
  const Grid1D g = Grid1D::from_bounds(0.0, 1.0, 11);
  std::vector<double> a, b;
  for (std::uint64_t s = 0; s < 4000; ++s) {
    const SampledProcess p = ou_process(g, theta, std::sqrt(2.0 * theta), s);
    a.push_back(p.values[4]);
    b.push_back(p.values[5]);
  }
  const Moments m = moments(a, b);
  EXPECT_NEAR(m.cov / std::sqrt(m.var_x * m.var_y), 0.0, 0.05);
}

TEST(WhiteNoise, ZeroTestFunctionGivesZero) {
  const Grid2D g{Grid1D::from_bounds(0.0, 1.0, 11), Grid1D::from_bounds(0.0, 1.0, 11)};
  const WhiteNoiseField w = sample_white_noise(g, 5);
  const std::vector<double> phi(w.cell_count(), 0.0);
  EXPECT_EQ(white_noise_action(w, phi), 0.0);
}

TEST(WhiteNoise, IsometryOnUnitSquareAndDisjointSupports) {
  const Grid2D g{Grid1D::from_bounds(0.0, 2.0, 21), Grid1D::from_bounds(0.0, 2.0, 21)};
  std::vector<double> a, b;
  for (std::uint64_t s = 0; s < draws; ++s) {
    const WhiteNoiseField w = sample_white_noise(g, derive_seed(13, SeedPurpose::noise, 0, s));
    const auto phi = tabulate_on_cells(w, [](double x, double t) { return x < 1.0 && t < 1.0 ? 1.0 : 0.0; });
    const auto psi = tabulate_on_cells(w, [](double x, double t) { return x > 1.0 && t > 1.0 ? 1.0 : 0.0; });
    a.push_back(white_noise_action(w, phi));
    b.push_back(white_noise_action(w, psi));
  }
  const Moments m = moments(a, b);
  EXPECT_NEAR(m.var_x, 1.0, 0.05);
  EXPECT_NEAR(m.cov, 0.0, 0.05);
}

TEST(WhiteNoise, ActionRejectsWrongLength) {
  const WhiteNoiseField w = sample_white_noise(Grid1D::from_bounds(0.0, 1.0, 11), 1);
  const std::vector<double> phi(3, 1.0);
  EXPECT_THROW(white_noise_action(w, phi), ShapeError);
}

TEST(BrownianSheet, VanishesOnAxesAndHasUnitVarianceAtOneOne) {
  const Grid2D g{Grid1D::from_bounds(0.0, 1.0, 11), Grid1D::from_bounds(0.0, 1.0, 11)};
  std::vector<double> v;
  for (std::uint64_t s = 0; s < draws; ++s) {
    const SampledSheet sh = brownian_sheet(sample_white_noise(g, s));
    ASSERT_EQ(sh.at_node(0, 5), 0.0);
    ASSERT_EQ(sh.at_node(5, 0), 0.0);
    v.push_back(sh.at_node(10, 10));
  }
  EXPECT_NEAR(moments(v, v).var_x, 1.0, 0.05);
}

TEST(Translation, IdentityRoundTrip) {
  const SampledProcess p = sample_stationary_gaussian(Grid1D::from_bounds(0.0, 1.0, 21),
                                                      CovarianceKernel::exponential(1.0, 0.3), 4);
  const SampledProcess q = translation_transform(p, [](double u) { return normal_quantile(u); });
  for (std::size_t i = 0; i < p.values.size(); ++i) EXPECT_NEAR(q.values[i], p.values[i], 1e-12);
}

TEST(Translation, UniformTargetRangeAndMean) {
  const Grid1D g = Grid1D::from_bounds(0.0, 1.0, 3);
  const GaussianFieldSampler sampler(g, CovarianceKernel::exponential(1.0, 1.0));
  double sum = 0.0;
  for (std::uint64_t s = 0; s < draws; ++s) {
    const SampledProcess ranged = translation_transform(sampler.sample(s), uniform_quantile(0.5, 2.0));
    for (double v : ranged.values) {
      ASSERT_GE(v, 0.5);
      ASSERT_LE(v, 2.0);
    }
    sum += translation_transform(sampler.sample(s), uniform_quantile(0.0, 1.0)).values[1];
  }
  EXPECT_NEAR(sum / draws, 0.5, 0.02);
}

TEST(SampledPaths, CsvHasHeaderAndOneRowPerNode) {
  const SampledProcess p = sample_function(Grid1D::from_bounds(0.0, 1.0, 5), [](double x) { return 2 * x; }, "line");
  std::ostringstream os;
  write_csv(os, p);
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "coordinate,value");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 6);
}

TEST(SampledPaths, CubicRefinementReproducesSmoothFunction) {
  const SampledProcess p = sample_function(Grid1D::from_bounds(0.0, 3.0, 61), [](double x) { return std::sin(x); }, "sin");
  const SampledProcess q = refine_cubic(p, Grid1D::from_bounds(0.5, 2.5, 401));
  for (std::size_t i = 0; i < q.values.size(); ++i) EXPECT_NEAR(q.values[i], std::sin(q.grid[i]), 1e-5);
}

TEST(Grids, StepAndBoundsAreConsistent) {
  const Grid1D g = Grid1D::with_max_step(-1.0, 1.0, 0.3);
  EXPECT_LE(g.step(), 0.3);
  EXPECT_DOUBLE_EQ(g.lower(), -1.0);
  EXPECT_NEAR(g.upper(), 1.0, 1e-12);
  EXPECT_THROW(Grid1D::from_bounds(1.0, 0.0, 5), InvalidGridError);
}
