#pragma once

// Line-oriented text format for classifiers, infomorphisms, causal DAGs,
// context families, diagrams and `key = value` settings. See docs/schema.md.

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "holoscreen/cccd.hpp"
#include "holoscreen/infolog.hpp"

namespace holo::io {

struct Document {
  std::vector<infolog::ClassifierRef> classifiers;
  std::vector<std::pair<std::string, infolog::Infomorphism>> infomorphisms;
  std::vector<infolog::CausalDag> dags;
  std::vector<cccd::ContextFamily> families;
  std::vector<std::pair<std::string, cccd::CCCDDiagram>> diagrams;
  /// Top-level settings in file order.
  std::vector<std::pair<std::string, std::string>> settings;

  infolog::ClassifierRef classifier(const std::string& name) const;
  const infolog::Infomorphism& infomorphism(const std::string& name) const;
  std::map<std::string, std::string> settings_map() const;
};

/// Throws ParseError with the offending line; semantic checks of the built
/// objects raise their usual ValidationError subclasses.
Document parse_document(std::string_view text);
Document load_document(const std::string& path);

std::string to_text(const infolog::Classifier& c);
std::string to_text(const std::string& name, const infolog::Infomorphism& f);
std::string to_text(const infolog::CausalDag& dag);
std::string to_text(const cccd::ContextFamily& family);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double x);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace holo::io
