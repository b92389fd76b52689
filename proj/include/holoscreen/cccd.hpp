#pragma once

// Cone-cocone diagrams over classifiers: commutativity, core construction,
// contextuality, and the sector-relabeling sequences with their cobordism
// shapes.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "holoscreen/config.hpp"
#include "holoscreen/infolog.hpp"

namespace holo::cccd {

using infolog::Classifier;
using infolog::ClassifierRef;
using infolog::Infomorphism;

inline constexpr std::size_t kMaxGroundVariables = 16;
inline constexpr std::size_t kMaxCoreTokens = std::size_t{1} << 16;

// ---------------------------------------------------------------------------
// Context families

/// A distribution over the joint outcomes of a few binary variables. Outcome
/// index o reads vars[0] as its most significant bit.
struct Context {
  std::vector<std::size_t> vars;
  std::vector<double> dist;
};

struct ContextFamily {
  std::size_t ground = 0;
  std::vector<std::string> names;  ///< empty means x0, x1, ...
  std::vector<Context> contexts;

  std::string variable_name(std::size_t v) const;
};

/// Throws ValidationError on a variable past the ground set, repeated
/// variables, a distribution of the wrong size, a negative entry, or a
/// distribution that does not sum to 1; CapacityExceeded above 16 variables.
void validate(const ContextFamily& family);

/// Outcome of context `vars` seen by global assignment g (bit v = variable v).
std::size_t restrict_assignment(std::uint64_t g, const std::vector<std::size_t>& vars);

/// Outcome string in vars order, e.g. "101".
std::string outcome_label(std::size_t outcome, std::size_t width);

/// Marginal of a global distribution (bit v = variable v) on `vars`.
std::vector<double> marginal(const std::vector<double>& global, const std::vector<std::size_t>& vars);

/// PR box on variables a0 = 0, a1 = 1, b0 = 2, b1 = 3: P(a ⊕ b = x·y | x, y)
/// = lambda per context, spread uniformly over the two matching outcomes.
ContextFamily prbox_family(double lambda = 1.0);

/// Marginals of `global` on each listed context.
ContextFamily marginal_family(std::size_t ground, const std::vector<double>& global,
                              const std::vector<std::vector<std::size_t>>& contexts);

struct CertificateTerm {
  std::string classifier;
  std::string token;
  double coefficient;
  double target;
};

/// Farkas witness of an infeasible marginal problem: every candidate global
/// section scores at most `max_support` (≤ 0 up to rounding), while the
/// observed marginals score `violation` > 0.
struct Certificate {
  std::string reason;
  std::vector<CertificateTerm> terms;
  double normalization_coefficient = 0.0;
  double violation = 0.0;
  double max_support = 0.0;
};

enum class Verdict { feasible, contextual };
const char* name(Verdict v) noexcept;

enum class Witness { vertex, max_entropy };

struct ContextualityResult {
  Verdict verdict = Verdict::feasible;
  std::vector<double> global;  ///< 2^ground entries, bit v = variable v
  double max_marginal_error = 0.0;
  std::optional<Certificate> certificate;
  bool deterministic = false;  ///< every context is a point mass
  bool cross_checked = false;  ///< the exhaustive assignment search agreed
};

ContextualityResult contextuality_check(const ContextFamily& family,
                                        Witness witness = Witness::vertex,
                                        double tol = tolerances().marginal);

/// For families of point masses: whether some global assignment reproduces
/// every context. nullopt when some context is not deterministic.
std::optional<bool> deterministic_assignment_exists(const ContextFamily& family);

// ---------------------------------------------------------------------------
// Diagrams

struct CrossMap {
  std::size_t from;
  std::size_t to;
  Infomorphism map;  ///< base[from] → base[to]
};

struct CCCDDiagram {
  std::vector<ClassifierRef> base;
  std::vector<CrossMap> cross;
  ClassifierRef core;
  std::vector<Infomorphism> cocone;  ///< f_j: base[j] → core

  /// Base classifiers acting as inputs, in input order.
  std::vector<std::size_t> inputs;
  /// Screen qubit claimed by each input; empty until deployed.
  std::vector<std::size_t> claims;
  /// (base index, type index) read as the diagram's output, if any.
  std::optional<std::pair<std::size_t, std::size_t>> output;

  std::size_t arity() const noexcept { return inputs.size(); }

  /// h_j: the Chu dual of f_j, from dual(core) to dual(base[j]).
  std::vector<Infomorphism> cone() const;
};

struct CccdViolation {
  std::string where;
  double deviation;
};

struct CccdCheck {
  bool commutes = true;
  double max_deviation = 0.0;
  std::vector<CccdViolation> violations;
};

/// Every cross, cocone and cone leg valid, and f_to ∘ g = f_from for every
/// cross map g (types and tokens), with the dual statement for the cone.
/// Throws ValidationError when the core is missing or the legs do not line
/// up with the base list.
CccdCheck verify_cccd(const CCCDDiagram& d, double tol = tolerances().infomorphism);

struct BuildCoreResult {
  Verdict verdict = Verdict::feasible;
  std::optional<CCCDDiagram> diagram;
  std::optional<Certificate> certificate;
  bool max_entropy = false;  ///< the joint weight is the max-entropy solution
};

/// Tokens: tuples of base tokens related by every cross map. Types: the
/// disjoint union of ordinary base types plus one joint weight type when any
/// base carries weights. The joint weight marginalizes onto every base
/// weight. Throws ValidationError when a cross map is invalid.
BuildCoreResult build_core(const std::vector<ClassifierRef>& base, const std::vector<CrossMap>& cross,
                           double tol = tolerances().infomorphism);

/// u: core → candidate with u ∘ f_j = legs[j]. nullopt when the candidate's
/// tokens do not project onto compatible tuples or u fails verification.
std::optional<Infomorphism> mediating_infomorphism(const CCCDDiagram& d, const ClassifierRef& candidate,
                                                   const std::vector<Infomorphism>& legs,
                                                   double tol = tolerances().infomorphism);

/// Per-context classifiers (outcome tokens, one type per variable plus the
/// weight "w"), followed by one overlap classifier for every pair of contexts
/// sharing variables, with cross maps overlap → each side.
struct FamilyClassifiers {
  std::vector<ClassifierRef> base;
  std::vector<CrossMap> cross;
  std::size_t context_count = 0;
};
FamilyClassifiers classifiers_from_contexts(const ContextFamily& family);

/// Diagram realizing a Boolean function of `arity` inputs. `table[x]` is the
/// output on input x (input 0 is the most significant bit). The layered form
/// routes the output through a hidden classifier.
CCCDDiagram qrf_diagram(std::size_t arity, const std::vector<int>& table, bool layered = false);

/// Output bit of a diagram built by qrf_diagram.
int evaluate(const CCCDDiagram& d, const std::vector<int>& input_bits);

/// The table realized: evaluate on every input.
std::vector<int> truth_table(const CCCDDiagram& d);

// ---------------------------------------------------------------------------
// Measurement sequences

/// Named sectors over base-classifier indices; `rotated` marks indices read
/// in a rotated basis.
struct Labeling {
  std::map<std::string, std::set<std::size_t>> sectors;
  std::set<std::size_t> rotated;

  std::set<std::size_t> support() const;
  friend bool operator==(const Labeling&, const Labeling&) = default;
};

struct MeasurementSequence {
  std::vector<Labeling> steps;
};

/// Throws ValidationError unless each step's sectors are disjoint and all
/// steps cover the same index set.
void validate(const MeasurementSequence& seq);

MeasurementSequence make_sequence(Labeling initial);

/// Appends S → (S1, S2) → S: the first `cut` indices of `sector` (ascending)
/// go to S1. Throws ValidationError unless 0 < cut < |S|.
MeasurementSequence split_sequence(const MeasurementSequence& seq, std::size_t step,
                                   const std::string& sector, std::size_t cut);

/// Appends a step merging R and P, then a step with P's indices relabeled
/// `to` and marked rotated; R is untouched. An empty P appends only the
/// relabeled step. Throws ValidationError when P meets R.
MeasurementSequence swap_qrf_sequence(const MeasurementSequence& seq, std::size_t step,
                                      const std::string& from, const std::string& to,
                                      const std::string& reference = "R");

enum class CobordismKind { cylinder, pair_of_pants, reverse_pair_of_pants, composite };
const char* name(CobordismKind k) noexcept;

struct CobordismRecord {
  Labeling source;
  Labeling target;
  CobordismKind kind;
};

/// One record per adjacent pair of steps, classified by the nonempty sectors:
/// one source sector splitting in two is a pair of pants, two merging into
/// one the reverse, an identical partition a cylinder.
std::vector<CobordismRecord> to_cobordism(const MeasurementSequence& seq);

}  // namespace holo::cccd
