#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace omicsprep {

/// Samples to be placed on plates, with their group (case/control, ...) and
/// an optional stratum (disease stage, ...).
struct SampleRoster {
  std::vector<std::string> sample_ids;
  std::vector<std::string> group;
  std::optional<std::vector<std::string>> stratum;

  std::size_t size() const noexcept { return sample_ids.size(); }
  /// Throws DesignError if lengths differ, ids repeat, or the roster is empty.
  void validate() const;
};

/// Sample -> plate mapping; plates are numbered 1..n_plates.
struct PlateAssignment {
  std::vector<std::string> sample_ids;
  std::vector<std::size_t> plate_of;
  std::size_t n_plates = 0;
};

/// Splits `total` over `parts` by largest remainder (Hamilton) with equal
/// quotas; the extra units go to the first `total % parts` entries of
/// `priority`, a permutation of 0..parts-1.
std::vector<std::size_t> apportion(std::size_t total, std::size_t parts,
                                   const std::vector<std::size_t>& priority);

/// Blocked randomisation. Each (group, stratum) cell is apportioned over the
/// plates, shuffled and dealt out. Plates that receive a remainder unit rotate
/// from cell to cell along a seeded permutation so plate sizes stay level.
PlateAssignment block_randomize(const SampleRoster& roster, std::size_t n_plates,
                                std::uint64_t seed);

enum class Verdict { ok, warning, perfect_confounding };
std::string_view verdict_name(Verdict v);

struct DiagnoseOptions {
  double cramers_v_warning = 0.5;
};

struct ConfoundingReport {
  std::vector<std::string> groups;        ///< column labels, first-seen order
  std::vector<std::vector<std::size_t>> counts;  ///< [plate][group]
  std::size_t single_group_batches = 0;
  double chi_square = 0.0;
  double cramers_v = 0.0;
  Verdict verdict = Verdict::ok;
};

/// Plate x group contingency analysis. Matches samples by id; throws
/// DesignError when the assignment and roster do not cover the same samples
/// or the roster has fewer than two groups.
ConfoundingReport diagnose(const PlateAssignment& assignment, const SampleRoster& roster,
                           const DiagnoseOptions& options = {});

/// Roster from per-plate (group -> count) layout, ids p<plate>_<k>. Handy for
/// encoding published designs.
struct PlateLayoutEntry {
  std::size_t cases = 0;
  std::size_t controls = 0;
};
std::pair<SampleRoster, PlateAssignment> layout_to_design(
    const std::vector<PlateLayoutEntry>& plates);

// CSV surfaces: roster (id, group[, stratum]) and assignment (id, plate).
SampleRoster load_roster(const std::filesystem::path& path);
SampleRoster parse_roster(std::string_view text);
std::string roster_to_csv(const SampleRoster& roster);
PlateAssignment load_assignment(const std::filesystem::path& path);
PlateAssignment parse_assignment(std::string_view text);
std::string assignment_to_csv(const PlateAssignment& assignment);

}  // namespace omicsprep
