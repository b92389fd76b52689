#pragma once

// JSON and CSV artifacts. Every artifact opens with a metadata header
// carrying the tool version, a digest of the effective config and the seed.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "holoscreen/agent.hpp"
#include "holoscreen/cccd.hpp"
#include "holoscreen/infolog.hpp"
#include "holoscreen/scatter.hpp"
#include "holoscreen/screen.hpp"

namespace holo::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "holoscreen";
inline constexpr const char* kToolVersion = "0.1.0";

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes) noexcept;
std::string hex64(std::uint64_t v);

struct RunMeta {
  std::string kind;
  std::string config_digest;
  std::uint64_t seed = 0;

  /// Digest over the canonical `key=value` lines of the effective config.
  static RunMeta make(std::string kind, std::string_view canonical_config, std::uint64_t seed);
};

Json to_json(const RunMeta& m);
/// `# holoscreen 0.1.0 kind=... config_digest=... seed=...`
std::string csv_header(const RunMeta& m);

Json to_json(const screen::CycleRecord& c);
Json to_json(const cccd::Certificate& c);
Json to_json(const cccd::ContextualityResult& r, const cccd::ContextFamily& family);
Json to_json(const infolog::Classifier& c);
Json to_json(const cccd::CCCDDiagram& d);
Json to_json(const agent::UnderdeterminationWitness& w);
Json to_json(const infolog::ShieldReport& r, const infolog::CausalDag& dag, std::size_t x);
Json to_json(const scatter::SMatrixd& s);

/// `meta` first, then the payload's members. Two-space indent, LF, trailing newline.
std::string dump_artifact(const RunMeta& m, const Json& payload);

/// Columns: cycle,S_bits,balance,ticks,orientation. balance is in k_B·T.
std::string sharing_csv(const RunMeta& m, const std::vector<agent::SharingRow>& rows);

/// One row per phase entry. Columns:
/// cycle,phase,actor,qubit,axis_x,axis_y,axis_z,outcome,eigen_contribution,seed
std::string cycles_csv(const RunMeta& m, const std::vector<screen::CycleRecord>& cycles);

}  // namespace holo::io
