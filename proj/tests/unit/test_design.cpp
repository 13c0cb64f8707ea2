#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <map>

#include "omicsprep/design.hpp"
#include "omicsprep/error.hpp"
#include "omicsprep/powersim.hpp"

namespace omicsprep {
namespace {

SampleRoster two_group_roster(std::size_t cases, std::size_t controls) {
  SampleRoster r;
  for (std::size_t i = 0; i < cases; ++i) {
    r.sample_ids.push_back("case" + std::to_string(i));
    r.group.push_back("case");
  }
  for (std::size_t i = 0; i < controls; ++i) {
    r.sample_ids.push_back("ctrl" + std::to_string(i));
    r.group.push_back("control");
  }
  return r;
}

// counts[plate][group] with groups "case", "control".
std::vector<std::array<std::size_t, 2>> plate_counts(const PlateAssignment& a,
                                                     const SampleRoster& r) {
  std::vector<std::array<std::size_t, 2>> out(a.n_plates, {0, 0});
  for (std::size_t i = 0; i < r.size(); ++i) {
    EXPECT_EQ(a.sample_ids[i], r.sample_ids[i]);
    EXPECT_GE(a.plate_of[i], 1u);
    EXPECT_LE(a.plate_of[i], a.n_plates);
    ++out[a.plate_of[i] - 1][r.group[i] == "case" ? 0 : 1];
  }
  return out;
}

// Independent apportionment oracle: floor share plus one for the
// `total mod parts` largest fractional remainders (all equal here).
std::vector<std::size_t> sorted_shares(std::size_t total, std::size_t parts) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < parts; ++k) {
    const double exact = static_cast<double>(total) / static_cast<double>(parts);
    out.push_back(static_cast<std::size_t>(exact) + (k < total % parts ? 1 : 0));
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(BlockRandomize, ExactDivision) {
  const auto r = two_group_roster(6, 6);
  const auto a = block_randomize(r, 2, 11);
  for (const auto& c : plate_counts(a, r)) {
    EXPECT_EQ(c[0], 3u);
    EXPECT_EQ(c[1], 3u);
  }
}

TEST(BlockRandomize, LargestRemainderShares) {
  const auto r = two_group_roster(97, 191);
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 12345ULL}) {
    const auto counts = plate_counts(block_randomize(r, 3, seed), r);
    std::vector<std::size_t> cases, controls;
    for (const auto& c : counts) {
      cases.push_back(c[0]);
      controls.push_back(c[1]);
      EXPECT_EQ(c[0] + c[1], 96u);
    }
    std::sort(cases.begin(), cases.end());
    std::sort(controls.begin(), controls.end());
    EXPECT_EQ(cases, (std::vector<std::size_t>{32, 32, 33}));
    EXPECT_EQ(controls, (std::vector<std::size_t>{63, 64, 64}));
    EXPECT_EQ(cases, sorted_shares(97, 3));
    EXPECT_EQ(controls, sorted_shares(191, 3));
  }
}

TEST(BlockRandomize, SinglePlate) {
  const auto r = two_group_roster(5, 9);
  for (std::uint64_t seed : {0ULL, 7ULL}) {
    const auto a = block_randomize(r, 1, seed);
    EXPECT_TRUE(std::all_of(a.plate_of.begin(), a.plate_of.end(),
                            [](std::size_t p) { return p == 1; }));
  }
}

TEST(BlockRandomize, Determinism) {
  const auto r = two_group_roster(20, 20);
  const auto a = block_randomize(r, 4, 99);
  const auto b = block_randomize(r, 4, 99);
  const auto c = block_randomize(r, 4, 100);
  EXPECT_EQ(a.plate_of, b.plate_of);
  EXPECT_NE(a.plate_of, c.plate_of);
}

TEST(BlockRandomize, BalanceInvariantAcrossSizes) {
  for (std::size_t n_plates = 2; n_plates <= 7; ++n_plates) {
    for (std::size_t cases : {10u, 13u, 29u}) {
      const auto r = two_group_roster(cases, 2 * cases + 3);
      const auto counts = plate_counts(block_randomize(r, n_plates, cases * 31 + n_plates), r);
      std::size_t min_size = SIZE_MAX, max_size = 0;
      for (std::size_t g = 0; g < 2; ++g) {
        std::size_t lo = SIZE_MAX, hi = 0;
        for (const auto& c : counts) {
          lo = std::min(lo, c[g]);
          hi = std::max(hi, c[g]);
        }
        EXPECT_LE(hi - lo, 1u);
      }
      for (const auto& c : counts) {
        min_size = std::min(min_size, c[0] + c[1]);
        max_size = std::max(max_size, c[0] + c[1]);
      }
      EXPECT_LE(max_size - min_size, 1u);
    }
  }
}

TEST(BlockRandomize, StrataAreBalancedWithinGroup) {
  SampleRoster r;
  r.stratum.emplace();
  const char* stages[] = {"I", "II", "III"};
  for (std::size_t i = 0; i < 60; ++i) {
    r.sample_ids.push_back("s" + std::to_string(i));
    r.group.push_back(i % 2 ? "case" : "control");
    r.stratum->push_back(stages[i % 3]);
  }
  const auto a = block_randomize(r, 4, 5);
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> cell_counts;
  for (std::size_t i = 0; i < r.size(); ++i) {
    auto& v = cell_counts[{r.group[i], (*r.stratum)[i]}];
    v.resize(4, 0);
    ++v[a.plate_of[i] - 1];
  }
  for (const auto& [cell, v] : cell_counts) {
    EXPECT_LE(*std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end()),
              1u);
  }
}

TEST(BlockRandomize, Errors) {
  EXPECT_THROW(block_randomize(SampleRoster{}, 2, 1), DesignError);
  EXPECT_THROW(block_randomize(two_group_roster(2, 2), 0, 1), DesignError);
  auto dup = two_group_roster(2, 2);
  dup.sample_ids[1] = dup.sample_ids[0];
  EXPECT_THROW(block_randomize(dup, 2, 1), DesignError);
}

TEST(Apportion, FollowsPriority) {
  EXPECT_EQ(apportion(7, 3, {2, 0, 1}), (std::vector<std::size_t>{2, 2, 3}));
  EXPECT_EQ(apportion(8, 3, {2, 0, 1}), (std::vector<std::size_t>{3, 2, 3}));
  EXPECT_EQ(apportion(9, 3, {2, 0, 1}), (std::vector<std::size_t>{3, 3, 3}));
}

TEST(Diagnose, SequentialStudyIsPerfectlyConfounded) {
  // 175 cases on plates 1-3 and 242 controls on plates 4-6.
  const auto [roster, assignment] = layout_to_design(
      {{59, 0}, {58, 0}, {58, 0}, {0, 81}, {0, 81}, {0, 80}});
  const auto rep = diagnose(assignment, roster);
  EXPECT_EQ(rep.single_group_batches, 6u);
  EXPECT_NEAR(rep.cramers_v, 1.0, 1e-12);
  EXPECT_EQ(rep.verdict, Verdict::perfect_confounding);
}

TEST(Diagnose, GlycomicsLayoutHas25SingleGroupPlates) {
  const auto layout = glycomics_scenario().plates;
  ASSERT_EQ(layout.size(), 34u);
  const auto [roster, assignment] = layout_to_design(layout);
  const auto rep = diagnose(assignment, roster);
  EXPECT_EQ(rep.single_group_batches, 25u);
  EXPECT_EQ(rep.verdict, Verdict::warning);
}

TEST(Diagnose, BalancedIsOk) {
  const auto [roster, assignment] = layout_to_design({{3, 3}, {3, 3}});
  const auto rep = diagnose(assignment, roster);
  EXPECT_EQ(rep.single_group_batches, 0u);
  EXPECT_NEAR(rep.cramers_v, 0.0, 1e-15);
  EXPECT_EQ(rep.verdict, Verdict::ok);
}

TEST(Diagnose, StrongImbalanceWarns) {
  const auto [roster, assignment] = layout_to_design({{10, 1}, {1, 10}});
  const auto rep = diagnose(assignment, roster);
  EXPECT_GT(rep.cramers_v, 0.5);
  EXPECT_EQ(rep.verdict, Verdict::warning);
  EXPECT_EQ(diagnose(assignment, roster, {0.9}).verdict, Verdict::ok);
}

TEST(Diagnose, CramersVInvariantToRelabeling) {
  auto [roster, assignment] = layout_to_design({{10, 4}, {3, 9}, {6, 6}});
  const double v = diagnose(assignment, roster).cramers_v;
  for (auto& g : roster.group) g = g == "case" ? "B" : "A";
  for (auto& p : assignment.plate_of) p = 4 - p;
  EXPECT_NEAR(diagnose(assignment, roster).cramers_v, v, 1e-12);
}

TEST(Diagnose, MismatchErrors) {
  auto [roster, assignment] = layout_to_design({{2, 2}, {2, 2}});
  auto short_assignment = assignment;
  short_assignment.sample_ids.pop_back();
  short_assignment.plate_of.pop_back();
  EXPECT_THROW(diagnose(short_assignment, roster), DesignError);
  auto renamed = assignment;
  renamed.sample_ids[0] = "stranger";
  EXPECT_THROW(diagnose(renamed, roster), DesignError);
  auto one_group = roster;
  for (auto& g : one_group.group) g = "case";
  EXPECT_THROW(diagnose(assignment, one_group), DesignError);
}

TEST(DesignCsv, RoundTrip) {
  const auto r = two_group_roster(3, 4);
  const auto parsed = parse_roster(roster_to_csv(r));
  EXPECT_EQ(parsed.sample_ids, r.sample_ids);
  EXPECT_EQ(parsed.group, r.group);
  EXPECT_FALSE(parsed.stratum);
  const auto a = block_randomize(r, 2, 3);
  const auto pa = parse_assignment(assignment_to_csv(a));
  EXPECT_EQ(pa.sample_ids, a.sample_ids);
  EXPECT_EQ(pa.plate_of, a.plate_of);
}

TEST(DesignCsv, Errors) {
  EXPECT_THROW(parse_roster("id,stage\na,I\n"), ParseError);
  EXPECT_THROW(parse_roster("id,group\na,case,extra\n"), ParseError);
  EXPECT_THROW(parse_assignment("id,plate\na,zero\n"), ParseError);
  EXPECT_THROW(parse_assignment("id,plate\na,0\n"), ParseError);
}

}  // namespace
}  // namespace omicsprep
