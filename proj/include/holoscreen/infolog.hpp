#pragma once

// Probabilistic Barwise–Seligman classifiers, infomorphisms between them,
// and Markov blankets on binary causal networks.

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "holoscreen/config.hpp"
#include "holoscreen/errors.hpp"

namespace holo::infolog {

/// Token/type satisfaction matrix: P(i, j) is the probability that token i
/// is of type j. Rows need not normalize.
///
/// A classifier may designate one *weight type*: its column is a
/// distribution over tokens rather than a per-pair membership, and
/// infomorphisms treat it by pushforward instead of pointwise.
class Classifier {
 public:
  Classifier(std::string name, std::vector<std::string> tokens, std::vector<std::string> types,
             Eigen::MatrixXd matrix, std::optional<std::size_t> weight_type = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::vector<std::string>& types() const noexcept { return types_; }
  const Eigen::MatrixXd& matrix() const noexcept { return p_; }
  double operator()(std::size_t token, std::size_t type) const {
    return p_(static_cast<Eigen::Index>(token), static_cast<Eigen::Index>(type));
  }
  std::size_t token_count() const noexcept { return tokens_.size(); }
  std::size_t type_count() const noexcept { return types_.size(); }
  std::optional<std::size_t> weight_type() const noexcept { return weight_; }
  bool is_weight(std::size_t type) const noexcept { return weight_ && *weight_ == type; }

  /// Every entry is exactly 0 or 1.
  bool is_binary() const;

  std::optional<std::size_t> token_index(const std::string& token) const;
  std::optional<std::size_t> type_index(const std::string& type) const;

  /// Chu dual: tokens and types swap and the matrix transposes. The weight
  /// designation does not survive dualization.
  Classifier dual() const;

  Classifier with_matrix(Eigen::MatrixXd matrix) const;

  friend bool operator==(const Classifier& a, const Classifier& b);

 private:
  std::string name_;
  std::vector<std::string> tokens_;
  std::vector<std::string> types_;
  Eigen::MatrixXd p_;
  std::optional<std::size_t> weight_;
};

using ClassifierRef = std::shared_ptr<const Classifier>;

inline ClassifierRef share(Classifier c) { return std::make_shared<const Classifier>(std::move(c)); }

/// Contravariant pair: fwd maps types(source) → types(target), bwd maps
/// tokens(target) → tokens(source).
struct Infomorphism {
  ClassifierRef source;
  ClassifierRef target;
  std::vector<std::size_t> fwd;
  std::vector<std::size_t> bwd;
};

Infomorphism identity(const ClassifierRef& c);

struct InfomorphismViolation {
  enum class Kind { pointwise, weight } kind;
  std::size_t token;  ///< target token b (pointwise) or source token a (weight)
  std::size_t type;   ///< source type α
  double target_value;
  double source_value;
};

struct InfomorphismCheck {
  bool valid = true;
  double max_deviation = 0.0;
  std::vector<InfomorphismViolation> violations;
};

/// Pointwise condition P_target(b, fwd(α)) = P_source(bwd(b), α) over every
/// non-weight source type. If the source has a weight type, fwd must send it
/// to the target's weight type and the target weight pushed forward along bwd
/// must equal the source weight. When both classifiers are binary the
/// comparison is exact. Throws ValidationError on dangling map entries.
InfomorphismCheck verify_infomorphism(const Infomorphism& f,
                                      double tol = tolerances().infomorphism);

/// g ∘ f for f: A → B, g: B → C. Throws ValidationError if f.target ≠ g.source.
Infomorphism compose(const Infomorphism& f, const Infomorphism& g);

/// The same maps read between the Chu duals: dual(target) → dual(source).
Infomorphism dual(const Infomorphism& f);

// ---------------------------------------------------------------------------
// Causal networks

inline constexpr std::size_t kMaxExactNodes = 16;

/// DAG over binary nodes. cpts[v] has 2^|parents(v)| rows of (P(v=0), P(v=1));
/// row r encodes the parent assignment with parents[v][0] as its most
/// significant bit.
class CausalDag {
 public:
  CausalDag(std::vector<std::string> nodes,
            std::vector<std::pair<std::size_t, std::size_t>> edges,
            std::vector<std::vector<std::array<double, 2>>> cpts);

  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  const std::vector<std::size_t>& parents(std::size_t v) const { return parents_.at(v); }
  const std::vector<std::size_t>& children(std::size_t v) const { return children_.at(v); }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const noexcept { return edges_; }
  const std::vector<std::array<double, 2>>& cpt(std::size_t v) const { return cpts_.at(v); }
  const std::vector<std::size_t>& topological_order() const noexcept { return order_; }
  std::optional<std::size_t> node_index(const std::string& name) const;

  /// P(v = value | parent values read from `assignment`, bit u = node u).
  double conditional(std::size_t v, int value, std::uint64_t assignment) const;

  /// Full joint over 2^n assignments (bit u of the index = node u).
  std::vector<double> joint() const;

 private:
  std::vector<std::string> nodes_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::vector<std::array<double, 2>>> cpts_;
  std::vector<std::size_t> order_;
};

/// Uniform-CPT DAG from an edge list (for structural queries).
CausalDag make_dag(std::vector<std::string> nodes,
                   std::vector<std::pair<std::size_t, std::size_t>> edges);

/// parents ∪ children ∪ co-parents, without x; ascending.
std::vector<std::size_t> markov_blanket(const CausalDag& dag, std::size_t x);

enum class ShieldMode { exact, sampled };

struct ShieldOptions {
  std::size_t samples = 200000;
  std::uint64_t seed = 0;
  double sampled_tol = 0.02;
  std::size_t min_cell_count = 200;
};

struct ShieldReport {
  bool shielded = true;
  double max_deviation = 0.0;          ///< max |P(x,e|m) − P(x|m)·P(e|m)|
  std::vector<std::size_t> blanket;
  std::vector<std::size_t> exterior;
  /// Worst cell when leaking: values of blanket, x and exterior, in order.
  std::vector<int> leak_blanket_values;
  int leak_x_value = 0;
  std::vector<int> leak_exterior_values;
  ShieldMode mode = ShieldMode::exact;
};

/// Checks X ⊥ exterior | candidate blanket. Exact mode enumerates the joint;
/// sampled mode estimates it by ancestral sampling. Throws CapacityExceeded
/// above kMaxExactNodes in exact mode.
ShieldReport blanket_shields(const CausalDag& dag, std::size_t x,
                             const std::vector<std::size_t>& blanket,
                             ShieldMode mode = ShieldMode::exact, const ShieldOptions& opts = {});

/// Same, with the blanket computed by markov_blanket.
ShieldReport blanket_shields(const CausalDag& dag, std::size_t x,
                             ShieldMode mode = ShieldMode::exact, const ShieldOptions& opts = {});

}  // namespace holo::infolog
