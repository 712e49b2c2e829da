#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include <json.hpp>

#include "oracles/clip_area.hpp"
#include "vfmesh/theory.hpp"

using namespace vfmesh;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLo = 1.25 * kPi, kHi = 1.5 * kPi;
const double kSqrt2 = std::numbers::sqrt2;

double a2_slope(double theta, double L) {
  const double h = 1e-6;
  return (a2_closed_form(theta + h, L, 1.0) - a2_closed_form(theta - h, L, 1.0)) / (2 * h);
}

}  // namespace

TEST(Areas, Anchors) {
  EXPECT_NEAR(area_A1(kLo, 0.0, 1.0), 0.5, 1e-15);
  for (double L : {0.2, 0.4}) {
    EXPECT_NEAR(area_A1(kLo, L, 1.0), (1 - L) / 2, 1e-12);
    EXPECT_NEAR(oracle::clipped_cell_area(kLo, L, 1.0), (1 - L) / 2, 1e-12);
  }
  EXPECT_NEAR(area_A2(kHi, kSqrt2 - 1, 1.0), 0.25, 1e-15);
  // Equality point L*/2 = (2 - sqrt2) r.
  const double r = cell_radius(1.0);
  const double Ls = 2 * (2 - kSqrt2) * r;
  const double want = std::pow((2 - kSqrt2) / 2, 2);
  EXPECT_NEAR(area_A1(kLo, Ls, 1.0), area_A2(kHi, Ls, 1.0), 1e-10);
  EXPECT_NEAR(area_A1(kLo, Ls, 1.0), want, 1e-10);
  EXPECT_DOUBLE_EQ(r, kSqrt2 / 2);
}

TEST(Areas, MatchClippingOracleOnLattice) {
  const double r = cell_radius(1.0);
  int n1 = 0, n2 = 0;
  for (int a = 0; a < 50; ++a)
    for (int b = 0; b < 50; ++b) {
      const double theta = kLo + (kHi - kLo) * a / 49.0;
      const double L = 1.4 * b / 49.0;
      const double ref = oracle::clipped_cell_area(theta, L, 1.0);
      const double edge = -r * std::cos(theta);
      if (theta < kHi && L / 2 <= edge) {
        EXPECT_NEAR(area_A1(theta, L, 1.0), ref, 1e-10) << theta << " " << L;
        ++n1;
      }
      if (theta > kLo && L / 2 >= edge) {
        EXPECT_NEAR(area_A2(theta, L, 1.0), ref, 1e-10) << theta << " " << L;
        ++n2;
      }
    }
  EXPECT_GT(n1, 200);
  EXPECT_GT(n2, 200);
}

TEST(Areas, ScaleWithCellSize) {
  for (double ell : {0.25, 2.0, 7.5})
    for (double theta : {kLo + 0.1, kLo + 0.5})
      for (double Lr : {0.1, 0.6, 0.9}) {
        const double L = Lr * ell;
        const double ref = oracle::clipped_cell_area(theta, L, ell);
        const double edge = -cell_radius(ell) * std::cos(theta);
        const double got = L / 2 <= edge ? area_A1(theta, L, ell) : area_A2(theta, L, ell);
        EXPECT_NEAR(got, ref, 1e-10 * ell * ell);
      }
}

TEST(Areas, ContinuousAtTransition) {
  const double r = cell_radius(1.0);
  for (int k = 1; k < 40; ++k) {
    const double theta = kLo + (kHi - kLo) * k / 40.0;
    const double L = -2 * r * std::cos(theta);
    EXPECT_NEAR(area_A1(theta, L, 1.0), area_A2(theta, L, 1.0), 1e-10);
  }
}

TEST(Areas, DomainChecks) {
  EXPECT_THROW(area_A1(kHi, 0.1, 1.0), Error);
  EXPECT_THROW(area_A1(kLo - 0.1, 0.1, 1.0), Error);
  EXPECT_THROW(area_A1(kLo + 0.3, 1.0, 1.0), Error);  // triangle regime
  EXPECT_THROW(area_A2(kLo, 0.5, 1.0), Error);
  EXPECT_THROW(area_A2(kLo + 0.1, 0.0, 1.0), Error);  // parallelogram regime
  EXPECT_THROW(area_A1(kLo, -0.1, 1.0), Error);
  EXPECT_THROW(area_A2(kHi, 0.5, 0.0), Error);
  EXPECT_EQ(area_A2(kHi, 1.5, 1.0), 0.0);
}

TEST(Areas, CriticalPoints) {
  const double r = cell_radius(1.0);
  for (double L : {0.3, 0.5, kSqrt2 / 2}) EXPECT_NEAR(a2_slope(kHi, L), 0.0, 1e-6) << L;
  for (double L : {0.72, 0.8, 0.9, 0.99}) {
    // sin(theta) = -r/L has a root inside (5pi/4, 3pi/2] ...
    const double inside = kPi + std::asin(r / L);
    EXPECT_GT(inside, kLo);
    EXPECT_LE(inside, kHi);
    EXPECT_NEAR(a2_slope(inside, L), 0.0, 1e-6) << L;
    EXPECT_NEAR(area_A2(inside, L, 1.0), oracle::clipped_cell_area(inside, L, 1.0), 1e-10);
    // ... and -csc^-1(L/r) is the other root of the closed form, outside the interval.
    const double other = -std::asin(r / L);
    EXPECT_NEAR(a2_slope(other, L), 0.0, 1e-6);
    EXPECT_FALSE(other + 2 * kPi > kLo && other + 2 * kPi <= kHi);
  }
}

TEST(Gap, MaterialAndSoup) {
  EXPECT_TRUE(gap_material({0.5, 3}, 1.0));
  EXPECT_TRUE(gap_material({-0.5, 3}, 1.0));
  EXPECT_FALSE(gap_material({0.49, 3}, 1.0));
  const auto soup = gap_soup(1.0, 20.0);
  EXPECT_NEAR(winding_number({5, 2}, soup).value, 1.0, 1e-12);
  EXPECT_NEAR(winding_number({-5, -2}, soup).value, 1.0, 1e-12);
  EXPECT_NEAR(winding_number({0.1, 0}, soup).value, 0.0, 1e-12);
}

TEST(Gap, AxisAlignedExamples) {
  // theta = 5pi/4 is the unrotated grid. Coarse sampling can misread a cell
  // losing just over half its area, hence s = 64.
  for (double ox : {0.0, 0.3, 0.77}) {
    const Grid g = gap_grid(1.0, kLo, ox, 0.4, 8);
    for (bool aa : {false, true}) {
      const auto closed = run_mesher(gap_field(g, 64, 0.3), sweep_mesh_options(aa));
      EXPECT_EQ(classify_gap(g, closed, 0.3), GapOutcome::closed);
      const auto open = run_mesher(gap_field(g, 64, 1.05), sweep_mesh_options(aa));
      EXPECT_EQ(classify_gap(g, open, 1.05), GapOutcome::open);
    }
  }
}

TEST(Sweep, SmallSweepRespectsBounds) {
  SweepOptions o;
  o.L_min = 0.3;
  o.L_max = 1.2;
  o.L_count = 19;
  o.theta_count = 6;
  o.offset_count = 6;
  o.s = 16;
  const auto rep = sweep_gap(o);
  ASSERT_EQ(rep.bands.size(), 2u);
  EXPECT_NEAR(rep.step, 0.05, 1e-15);
  EXPECT_EQ(rep.samples.size(), 19u * 36u * 2u);
  for (const auto& band : rep.bands)
    for (const auto& row : band.rows) {
      EXPECT_EQ(row.open + row.closed, 36);
      if (row.L_over_ell <= kSqrt2 - 1) EXPECT_EQ(row.open, 0) << row.L_over_ell;
      if (row.L_over_ell > 1.0 + 1e-12) EXPECT_EQ(row.closed, 0) << row.L_over_ell;
    }
  // L = 0.6: ambiguous without anti-aliasing.
  const auto& plain = rep.bands[0];
  EXPECT_FALSE(plain.antialiased);
  EXPECT_TRUE(plain.rows[6].ambiguous()) << plain.rows[6].L_over_ell;
  for (const auto& row : rep.bands[1].rows)
    if (row.L_over_ell >= kSqrt2 / 2) EXPECT_FALSE(row.ambiguous()) << row.L_over_ell;
}

TEST(Sweep, SamplesMatchFullMesher) {
  SweepOptions o;
  o.L_min = 0.4;
  o.L_max = 1.0;
  o.L_count = 7;
  o.theta_count = 3;
  o.offset_count = 3;
  o.s = 12;
  const auto rep = sweep_gap(o);
  for (const auto& smp : rep.samples) {
    const Grid g = gap_grid(o.ell, smp.theta, smp.offset_x, smp.offset_y, o.window);
    const double L = smp.L_over_ell * o.ell;
    const auto field = compute_field([L](const Vec3& p) { return gap_material(p, L) ? 1.0 : 0.0; }, g, o.s);
    const auto res = run_mesher(field, sweep_mesh_options(smp.antialiased));
    EXPECT_EQ(static_cast<int>(res.components_after.size()), smp.components);
    EXPECT_EQ(classify_gap(g, res, L), smp.outcome);
  }
}

TEST(Sweep, DeterministicAndReported) {
  SweepOptions o;
  o.L_count = 4;
  o.theta_count = 2;
  o.offset_count = 2;
  o.s = 8;
  const auto a = sweep_gap(o), b = sweep_gap(o);
  std::ostringstream ca, cb;
  write_sweep_csv(ca, a);
  write_sweep_csv(cb, b);
  EXPECT_EQ(ca.str(), cb.str());
  EXPECT_EQ(ca.str().substr(0, ca.str().find('\n')),
            "L_over_ell,theta,offset_x,offset_y,antialiased,components,classification");
  const auto j = nlohmann::json::parse(band_summary_json(a));
  EXPECT_EQ(j["modes"].size(), 2u);
  EXPECT_EQ(j["modes"][0]["rows"].size(), 4u);
  EXPECT_DOUBLE_EQ(j["predicted"]["antialiasing"]["unambiguous_from"].get<double>(), kSqrt2 / 2);

  o.with_antialiasing = o.without_antialiasing = false;
  EXPECT_THROW(sweep_gap(o), Error);
  o.with_antialiasing = true;
  o.s = 3;
  EXPECT_THROW(sweep_gap(o), Error);
}

TEST(Nonconvergence, AlternatesInOppositePhases) {
  const auto a = nonconvergence_case(2.0 / 3.0, 4);
  const auto b = nonconvergence_case(1.0 / 3.0, 4);
  ASSERT_EQ(a.size(), 4u);
  for (std::size_t m = 0; m < a.size(); ++m) {
    EXPECT_TRUE(a[m].b0 == 1 || a[m].b0 == 2);
    if (m) EXPECT_NE(a[m].b0, a[m - 1].b0);
    EXPECT_EQ(a[m].b0 + b[m].b0, 3) << "level " << m;
    EXPECT_DOUBLE_EQ(a[m].ell, std::ldexp(1.0, -static_cast<int>(m)));
    const double want_a = a[m].b0 == 1 ? 10.0 / 18.0 : 7.0 / 18.0;
    const double want_b = b[m].b0 == 1 ? 10.0 / 18.0 : 7.0 / 18.0;
    EXPECT_NEAR(a[m].corner_vf, want_a, 0.02);
    EXPECT_NEAR(b[m].corner_vf, want_b, 0.02);
  }
  const auto j = nlohmann::json::parse(nonconvergence_json(2.0 / 3.0, a));
  EXPECT_EQ(j["levels"].size(), 4u);
  EXPECT_THROW(nonconvergence_case(2.0 / 3.0, 0), Error);
}

TEST(Wedge, BandAndRepair) {
  const auto w = wedge_case(5.0 * kPi / 180.0);
  EXPECT_GE(w.components_before, 2);
  EXPECT_FALSE(w.islands.empty());
  EXPECT_TRUE(w.islands_in_band);
  const double cot = 1.0 / std::tan(5.0 * kPi / 180.0);
  for (const auto& isl : w.islands) {
    EXPECT_GE(isl.min_distance, 0.5 * cot - 2.0);
    EXPECT_LE(isl.max_distance, cot + 2.0);
  }
  EXPECT_EQ(w.components_after, 1);

  const auto wide = wedge_case(kPi / 4);
  EXPECT_TRUE(wide.islands.empty());
  EXPECT_EQ(wide.components_after, 1);
  EXPECT_THROW(wedge_case(0.0), Error);
  EXPECT_THROW(wedge_case(kPi / 2), Error);
  EXPECT_NO_THROW(nlohmann::json::parse(wedge_json(w)));
}
