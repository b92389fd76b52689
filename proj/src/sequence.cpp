#include <algorithm>
#include <iterator>

#include "holoscreen/cccd.hpp"

namespace holo::cccd {

std::set<std::size_t> Labeling::support() const {
  std::set<std::size_t> all;
  for (const auto& [name, idx] : sectors) all.insert(idx.begin(), idx.end());
  return all;
}

namespace {

void validate_step(const Labeling& l, std::size_t k) {
  std::set<std::size_t> seen;
  for (const auto& [name, idx] : l.sectors)
    for (std::size_t i : idx)
      if (!seen.insert(i).second)
        throw ValidationError("step " + std::to_string(k) + ": index " + std::to_string(i) +
                              " lies in more than one sector");
  for (std::size_t i : l.rotated)
    if (!seen.count(i))
      throw ValidationError("step " + std::to_string(k) + ": rotated index " + std::to_string(i) +
                            " is in no sector");
}

const Labeling& step_at(const MeasurementSequence& seq, std::size_t step) {
  if (step >= seq.steps.size())
    throw ValidationError("sequence has no step " + std::to_string(step));
  return seq.steps[step];
}

std::vector<std::set<std::size_t>> blocks(const Labeling& l) {
  std::vector<std::set<std::size_t>> out;
  for (const auto& [name, idx] : l.sectors)
    if (!idx.empty()) out.push_back(idx);
  std::sort(out.begin(), out.end());
  return out;
}

/// Every block of `fine` sits inside some block of `coarse`.
bool refines(const std::vector<std::set<std::size_t>>& fine,
             const std::vector<std::set<std::size_t>>& coarse) {
  return std::all_of(fine.begin(), fine.end(), [&](const auto& f) {
    return std::any_of(coarse.begin(), coarse.end(), [&](const auto& c) {
      return std::includes(c.begin(), c.end(), f.begin(), f.end());
    });
  });
}

}  // namespace

void validate(const MeasurementSequence& seq) {
  if (seq.steps.empty()) throw ValidationError("measurement sequence has no steps");
  const auto support = seq.steps.front().support();
  for (std::size_t k = 0; k < seq.steps.size(); ++k) {
    validate_step(seq.steps[k], k);
    if (seq.steps[k].support() != support)
      throw ValidationError("step " + std::to_string(k) + " covers a different index set");
  }
}

MeasurementSequence make_sequence(Labeling initial) {
  MeasurementSequence seq{{std::move(initial)}};
  validate(seq);
  return seq;
}

MeasurementSequence split_sequence(const MeasurementSequence& seq, std::size_t step,
                                   const std::string& sector, std::size_t cut) {
  const Labeling& base = step_at(seq, step);
  auto it = base.sectors.find(sector);
  if (it == base.sectors.end())
    throw ValidationError("step " + std::to_string(step) + " has no sector " + sector);
  const auto& idx = it->second;
  if (cut == 0 || cut >= idx.size())
    throw ValidationError("cut " + std::to_string(cut) + " leaves an empty side of " + sector +
                          " (size " + std::to_string(idx.size()) + ")");
  const std::string left = sector + "1", right = sector + "2";
  if (base.sectors.count(left) || base.sectors.count(right))
    throw ValidationError("sector names " + left + " or " + right + " already in use");

  Labeling split = base;
  split.sectors.erase(sector);
  auto mid = std::next(idx.begin(), static_cast<std::ptrdiff_t>(cut));
  split.sectors[left] = std::set<std::size_t>(idx.begin(), mid);
  split.sectors[right] = std::set<std::size_t>(mid, idx.end());

  MeasurementSequence out = seq;
  out.steps.push_back(std::move(split));
  out.steps.push_back(base);
  validate(out);
  return out;
}

MeasurementSequence swap_qrf_sequence(const MeasurementSequence& seq, std::size_t step,
                                      const std::string& from, const std::string& to,
                                      const std::string& reference) {
  const Labeling& base = step_at(seq, step);
  auto p_it = base.sectors.find(from);
  if (p_it == base.sectors.end())
    throw ValidationError("step " + std::to_string(step) + " has no sector " + from);
  const std::set<std::size_t> p = p_it->second;
  std::set<std::size_t> r;
  if (auto r_it = base.sectors.find(reference); r_it != base.sectors.end()) r = r_it->second;
  std::vector<std::size_t> overlap;
  std::set_intersection(p.begin(), p.end(), r.begin(), r.end(), std::back_inserter(overlap));
  if (!overlap.empty())
    throw ValidationError("pointer sector " + from + " overlaps reference sector " + reference +
                          " at index " + std::to_string(overlap.front()));
  if (to != from && base.sectors.count(to))
    throw ValidationError("sector name " + to + " already in use");

  MeasurementSequence out = seq;
  if (!p.empty()) {
    Labeling merged = base;
    merged.sectors.erase(from);
    merged.sectors.erase(reference);
    std::set<std::size_t> joined = r;
    joined.insert(p.begin(), p.end());
    merged.sectors[reference + "+" + from] = std::move(joined);
    out.steps.push_back(std::move(merged));
  }
  Labeling swapped = base;
  swapped.sectors.erase(from);
  swapped.sectors[to] = p;
  swapped.rotated.insert(p.begin(), p.end());
  out.steps.push_back(std::move(swapped));
  validate(out);
  return out;
}

const char* name(CobordismKind k) noexcept {
  switch (k) {
    case CobordismKind::cylinder: return "cylinder";
    case CobordismKind::pair_of_pants: return "pair_of_pants";
    case CobordismKind::reverse_pair_of_pants: return "reverse_pair_of_pants";
    case CobordismKind::composite: return "composite";
  }
  return "?";
}

std::vector<CobordismRecord> to_cobordism(const MeasurementSequence& seq) {
  validate(seq);
  std::vector<CobordismRecord> out;
  for (std::size_t k = 0; k + 1 < seq.steps.size(); ++k) {
    const auto& s = seq.steps[k];
    const auto& t = seq.steps[k + 1];
    const auto bs = blocks(s), bt = blocks(t);
    CobordismKind kind = CobordismKind::composite;
    if (bs == bt)
      kind = CobordismKind::cylinder;
    else if (bt.size() == bs.size() + 1 && refines(bt, bs))
      kind = CobordismKind::pair_of_pants;
    else if (bs.size() == bt.size() + 1 && refines(bs, bt))
      kind = CobordismKind::reverse_pair_of_pants;
    out.push_back({s, t, kind});
  }
  return out;
}

}  // namespace holo::cccd
