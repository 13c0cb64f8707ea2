#include "omicsprep/design.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "omicsprep/csv.hpp"
#include "omicsprep/error.hpp"
#include "omicsprep/rng.hpp"

namespace omicsprep {
namespace {

template <class T>
void shuffle(std::vector<T>& items, PhiloxEngine& rng) {
  for (std::size_t k = items.size(); k > 1; --k) {
    std::swap(items[k - 1], items[rng.below(k)]);
  }
}

std::size_t column_index(const csv::Record& header, std::string_view name) {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? header.size()
                            : static_cast<std::size_t>(it - header.begin());
}

}  // namespace

void SampleRoster::validate() const {
  if (sample_ids.empty()) throw DesignError("roster is empty");
  if (group.size() != sample_ids.size()) {
    throw DesignError("roster group column length differs from id count");
  }
  if (stratum && stratum->size() != sample_ids.size()) {
    throw DesignError("roster stratum column length differs from id count");
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : sample_ids) {
    if (!seen.insert(id).second) throw DesignError("duplicate sample id '" + id + "'");
  }
}

std::vector<std::size_t> apportion(std::size_t total, std::size_t parts,
                                   const std::vector<std::size_t>& priority) {
  std::vector<std::size_t> out(parts, total / parts);
  const std::size_t extra = total % parts;
  for (std::size_t k = 0; k < extra; ++k) ++out[priority[k]];
  return out;
}

PlateAssignment block_randomize(const SampleRoster& roster, std::size_t n_plates,
                                std::uint64_t seed) {
  roster.validate();
  if (n_plates == 0) throw DesignError("need at least one plate");
  if (n_plates > roster.size()) {
    throw DesignError("more plates (" + std::to_string(n_plates) + ") than samples (" +
                      std::to_string(roster.size()) + ")");
  }

  // Cells in order of first appearance, so the result depends only on the
  // roster and the seed.
  std::vector<std::vector<std::size_t>> cells;
  std::map<std::pair<std::string, std::string>, std::size_t> cell_of;
  for (std::size_t i = 0; i < roster.size(); ++i) {
    std::pair<std::string, std::string> key{roster.group[i],
                                            roster.stratum ? (*roster.stratum)[i] : ""};
    auto [it, inserted] = cell_of.try_emplace(key, cells.size());
    if (inserted) cells.emplace_back();
    cells[it->second].push_back(i);
  }

  PhiloxEngine rng(seed, hash_label("block_randomize"));
  std::vector<std::size_t> rotation(n_plates);
  std::iota(rotation.begin(), rotation.end(), std::size_t{0});
  shuffle(rotation, rng);

  PlateAssignment out{roster.sample_ids, std::vector<std::size_t>(roster.size(), 0),
                      n_plates};
  std::size_t offset = 0;  // next plate in the rotation owed a remainder unit
  std::vector<std::size_t> priority(n_plates);
  for (auto& members : cells) {
    for (std::size_t k = 0; k < n_plates; ++k) {
      priority[k] = rotation[(offset + k) % n_plates];
    }
    const auto counts = apportion(members.size(), n_plates, priority);
    offset = (offset + members.size() % n_plates) % n_plates;

    shuffle(members, rng);
    std::size_t next = 0;
    for (std::size_t plate = 0; plate < n_plates; ++plate) {
      for (std::size_t c = 0; c < counts[plate]; ++c) {
        out.plate_of[members[next++]] = plate + 1;
      }
    }
  }
  return out;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::ok:
      return "ok";
    case Verdict::warning:
      return "warning";
    case Verdict::perfect_confounding:
      return "perfect_confounding";
  }
  return "ok";
}

ConfoundingReport diagnose(const PlateAssignment& assignment, const SampleRoster& roster,
                           const DiagnoseOptions& options) {
  roster.validate();
  if (assignment.sample_ids.size() != assignment.plate_of.size()) {
    throw DesignError("assignment ids and plates differ in length");
  }
  if (assignment.sample_ids.size() != roster.size()) {
    throw DesignError("assignment covers " + std::to_string(assignment.sample_ids.size()) +
                      " samples, roster has " + std::to_string(roster.size()));
  }

  ConfoundingReport report;
  std::unordered_map<std::string, std::size_t> group_index;
  for (const auto& g : roster.group) {
    if (group_index.try_emplace(g, report.groups.size()).second) report.groups.push_back(g);
  }
  if (report.groups.size() < 2) {
    throw DesignError("confounding diagnostics need at least two groups");
  }

  std::unordered_map<std::string, std::size_t> roster_index;
  for (std::size_t i = 0; i < roster.size(); ++i) roster_index[roster.sample_ids[i]] = i;

  std::size_t n_plates = assignment.n_plates;
  for (auto plate : assignment.plate_of) n_plates = std::max(n_plates, plate);
  report.counts.assign(n_plates, std::vector<std::size_t>(report.groups.size(), 0));

  std::unordered_set<std::string> seen;
  for (std::size_t k = 0; k < assignment.sample_ids.size(); ++k) {
    const auto& id = assignment.sample_ids[k];
    const auto it = roster_index.find(id);
    if (it == roster_index.end()) {
      throw DesignError("assigned sample '" + id + "' is not in the roster");
    }
    if (!seen.insert(id).second) throw DesignError("sample '" + id + "' assigned twice");
    const auto plate = assignment.plate_of[k];
    if (plate == 0) throw DesignError("plate numbers start at 1 (sample '" + id + "')");
    ++report.counts[plate - 1][group_index.at(roster.group[it->second])];
  }

  const std::size_t r = report.counts.size();
  const std::size_t c = report.groups.size();
  std::vector<double> row_sum(r, 0.0), col_sum(c, 0.0);
  double total = 0.0;
  std::size_t occupied = 0;
  for (std::size_t a = 0; a < r; ++a) {
    std::size_t nonzero = 0;
    for (std::size_t b = 0; b < c; ++b) {
      const auto v = static_cast<double>(report.counts[a][b]);
      row_sum[a] += v;
      col_sum[b] += v;
      total += v;
      nonzero += report.counts[a][b] > 0;
    }
    if (nonzero == 1) ++report.single_group_batches;
    if (nonzero > 0) ++occupied;
  }

  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = 0; b < c; ++b) {
      const double expected = row_sum[a] * col_sum[b] / total;
      if (expected <= 0.0) continue;
      const double d = static_cast<double>(report.counts[a][b]) - expected;
      report.chi_square += d * d / expected;
    }
  }
  const double k = static_cast<double>(std::min(occupied, c)) - 1.0;
  report.cramers_v = k > 0.0 ? std::clamp(std::sqrt(report.chi_square / (total * k)), 0.0, 1.0)
                             : 0.0;

  if (report.single_group_batches == occupied) {
    report.verdict = Verdict::perfect_confounding;
  } else if (report.single_group_batches > 0 ||
             report.cramers_v > options.cramers_v_warning) {
    report.verdict = Verdict::warning;
  }
  return report;
}

std::pair<SampleRoster, PlateAssignment> layout_to_design(
    const std::vector<PlateLayoutEntry>& plates) {
  SampleRoster roster;
  PlateAssignment assignment;
  assignment.n_plates = plates.size();
  for (std::size_t k = 0; k < plates.size(); ++k) {
    const std::string prefix = "p" + std::to_string(k + 1) + "_";
    std::size_t serial = 0;
    auto add = [&](const char* group, std::size_t count) {
      for (std::size_t c = 0; c < count; ++c) {
        roster.sample_ids.push_back(prefix + std::to_string(++serial));
        roster.group.emplace_back(group);
        assignment.sample_ids.push_back(roster.sample_ids.back());
        assignment.plate_of.push_back(k + 1);
      }
    };
    add("case", plates[k].cases);
    add("control", plates[k].controls);
  }
  return {std::move(roster), std::move(assignment)};
}

SampleRoster parse_roster(std::string_view text) {
  const auto records = csv::read_records(text);
  if (records.empty()) throw ParseError("roster CSV is empty");
  const auto& header = records.front();
  const auto id_col = column_index(header, "id");
  const auto group_col = column_index(header, "group");
  const auto stratum_col = column_index(header, "stratum");
  if (id_col == header.size()) throw ParseError("roster CSV has no 'id' column");
  if (group_col == header.size()) throw ParseError("roster CSV has no 'group' column");

  SampleRoster roster;
  if (stratum_col != header.size()) roster.stratum.emplace();
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      throw ParseError("roster row " + std::to_string(r + 1) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(rec.size()));
    }
    roster.sample_ids.push_back(rec[id_col]);
    roster.group.push_back(rec[group_col]);
    if (roster.stratum) roster.stratum->push_back(rec[stratum_col]);
  }
  roster.validate();
  return roster;
}

SampleRoster load_roster(const std::filesystem::path& path) {
  try {
    return parse_roster(csv::read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string roster_to_csv(const SampleRoster& roster) {
  std::string out = roster.stratum ? "id,group,stratum\n" : "id,group\n";
  for (std::size_t i = 0; i < roster.size(); ++i) {
    csv::Record rec{roster.sample_ids[i], roster.group[i]};
    if (roster.stratum) rec.push_back((*roster.stratum)[i]);
    out += csv::join(rec) + "\n";
  }
  return out;
}

PlateAssignment parse_assignment(std::string_view text) {
  const auto records = csv::read_records(text);
  if (records.empty()) throw ParseError("assignment CSV is empty");
  const auto& header = records.front();
  const auto id_col = column_index(header, "id");
  const auto plate_col = column_index(header, "plate");
  if (id_col == header.size() || plate_col == header.size()) {
    throw ParseError("assignment CSV needs 'id' and 'plate' columns");
  }
  PlateAssignment out;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      throw ParseError("assignment row " + std::to_string(r + 1) + ": expected " +
                       std::to_string(header.size()) + " fields");
    }
    double plate = 0.0;
    if (!csv::parse_double(rec[plate_col], plate) || plate < 1.0 ||
        plate != std::floor(plate)) {
      throw ParseError("assignment row " + std::to_string(r + 1) + ": plate '" +
                       rec[plate_col] + "' is not a positive integer");
    }
    out.sample_ids.push_back(rec[id_col]);
    out.plate_of.push_back(static_cast<std::size_t>(plate));
    out.n_plates = std::max(out.n_plates, out.plate_of.back());
  }
  return out;
}

PlateAssignment load_assignment(const std::filesystem::path& path) {
  try {
    return parse_assignment(csv::read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string assignment_to_csv(const PlateAssignment& assignment) {
  std::string out = "id,plate\n";
  for (std::size_t i = 0; i < assignment.sample_ids.size(); ++i) {
    out += csv::escape(assignment.sample_ids[i]) + "," +
           std::to_string(assignment.plate_of[i]) + "\n";
  }
  return out;
}

}  // namespace omicsprep
