#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "holoscreen/infolog.hpp"

namespace holo::infolog {
namespace {

void require_unique(const std::vector<std::string>& names, const char* what,
                    const std::string& owner) {
  std::unordered_set<std::string> seen;
  for (const auto& n : names)
    if (!seen.insert(n).second)
      throw ValidationError("classifier " + owner + ": duplicate " + what + " '" + n + "'");
}

}  // namespace

Classifier::Classifier(std::string name, std::vector<std::string> tokens,
                       std::vector<std::string> types, Eigen::MatrixXd matrix,
                       std::optional<std::size_t> weight_type)
    : name_(std::move(name)),
      tokens_(std::move(tokens)),
      types_(std::move(types)),
      p_(std::move(matrix)),
      weight_(weight_type) {
  if (static_cast<std::size_t>(p_.rows()) != tokens_.size() ||
      static_cast<std::size_t>(p_.cols()) != types_.size())
    throw DimensionMismatch("classifier " + name_ + ": matrix is " + std::to_string(p_.rows()) +
                            "x" + std::to_string(p_.cols()) + " for " +
                            std::to_string(tokens_.size()) + " tokens and " +
                            std::to_string(types_.size()) + " types");
  require_unique(tokens_, "token", name_);
  require_unique(types_, "type", name_);
  for (Eigen::Index i = 0; i < p_.rows(); ++i)
    for (Eigen::Index j = 0; j < p_.cols(); ++j)
      if (!(p_(i, j) >= 0.0 && p_(i, j) <= 1.0))
        throw ValidationError("classifier " + name_ + ": entry (" + tokens_[i] + ", " + types_[j] +
                              ") outside [0,1]");
  if (weight_ && *weight_ >= types_.size())
    throw ValidationError("classifier " + name_ + ": weight type index out of range");
}

bool Classifier::is_binary() const {
  return (p_.array() == 0.0 || p_.array() == 1.0).all();
}

std::optional<std::size_t> Classifier::token_index(const std::string& token) const {
  auto it = std::find(tokens_.begin(), tokens_.end(), token);
  if (it == tokens_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - tokens_.begin());
}

std::optional<std::size_t> Classifier::type_index(const std::string& type) const {
  auto it = std::find(types_.begin(), types_.end(), type);
  if (it == types_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - types_.begin());
}

Classifier Classifier::dual() const {
  if (!weight_) return Classifier(name_ + "^op", types_, tokens_, p_.transpose());
  std::vector<std::string> kept;
  Eigen::MatrixXd t(static_cast<Eigen::Index>(types_.size() - 1), p_.rows());
  for (std::size_t j = 0, r = 0; j < types_.size(); ++j) {
    if (j == *weight_) continue;
    kept.push_back(types_[j]);
    t.row(static_cast<Eigen::Index>(r++)) = p_.col(static_cast<Eigen::Index>(j)).transpose();
  }
  return Classifier(name_ + "^op", std::move(kept), tokens_, std::move(t));
}

Classifier Classifier::with_matrix(Eigen::MatrixXd matrix) const {
  return Classifier(name_, tokens_, types_, std::move(matrix), weight_);
}

bool operator==(const Classifier& a, const Classifier& b) {
  return a.name_ == b.name_ && a.tokens_ == b.tokens_ && a.types_ == b.types_ &&
         a.weight_ == b.weight_ && a.p_.rows() == b.p_.rows() && a.p_.cols() == b.p_.cols() &&
         a.p_ == b.p_;
}

Infomorphism identity(const ClassifierRef& c) {
  Infomorphism f{c, c, {}, {}};
  f.fwd.resize(c->type_count());
  f.bwd.resize(c->token_count());
  for (std::size_t i = 0; i < f.fwd.size(); ++i) f.fwd[i] = i;
  for (std::size_t i = 0; i < f.bwd.size(); ++i) f.bwd[i] = i;
  return f;
}

InfomorphismCheck verify_infomorphism(const Infomorphism& f, double tol) {
  if (!f.source || !f.target) throw ValidationError("infomorphism with a null endpoint");
  const Classifier& s = *f.source;
  const Classifier& t = *f.target;
  if (f.fwd.size() != s.type_count())
    throw ValidationError("infomorphism fwd has " + std::to_string(f.fwd.size()) +
                          " entries for " + std::to_string(s.type_count()) + " source types");
  if (f.bwd.size() != t.token_count())
    throw ValidationError("infomorphism bwd has " + std::to_string(f.bwd.size()) +
                          " entries for " + std::to_string(t.token_count()) + " target tokens");
  for (std::size_t a : f.fwd)
    if (a >= t.type_count()) throw ValidationError("infomorphism fwd entry dangles past target types");
  for (std::size_t b : f.bwd)
    if (b >= s.token_count())
      throw ValidationError("infomorphism bwd entry dangles past source tokens");
  if (s.weight_type()) {
    if (!t.weight_type())
      throw ValidationError("infomorphism from weighted " + s.name() + " to unweighted " + t.name());
    if (f.fwd[*s.weight_type()] != *t.weight_type())
      throw ValidationError("infomorphism fwd must send the weight type to the weight type");
  }
  for (std::size_t a = 0; a < f.fwd.size(); ++a)
    if (!s.is_weight(a) && t.is_weight(f.fwd[a]))
      throw ValidationError("infomorphism fwd sends an ordinary type to the weight type");

  const bool exact = s.is_binary() && t.is_binary();
  const double eps = exact ? 0.0 : tol;
  InfomorphismCheck out;
  auto note = [&](InfomorphismViolation v) {
    const double dev = std::abs(v.target_value - v.source_value);
    out.max_deviation = std::max(out.max_deviation, dev);
    if (dev > eps) {
      out.valid = false;
      out.violations.push_back(v);
    }
  };

  for (std::size_t b = 0; b < t.token_count(); ++b)
    for (std::size_t alpha = 0; alpha < s.type_count(); ++alpha) {
      if (s.is_weight(alpha)) continue;
      note({InfomorphismViolation::Kind::pointwise, b, alpha, t(b, f.fwd[alpha]), s(f.bwd[b], alpha)});
    }

  if (auto w = s.weight_type()) {
    std::vector<double> pushed(s.token_count(), 0.0);
    for (std::size_t b = 0; b < t.token_count(); ++b) pushed[f.bwd[b]] += t(b, *t.weight_type());
    for (std::size_t a = 0; a < s.token_count(); ++a)
      note({InfomorphismViolation::Kind::weight, a, *w, pushed[a], s(a, *w)});
  }
  return out;
}

Infomorphism compose(const Infomorphism& f, const Infomorphism& g) {
  if (!f.target || !g.source || !(f.target == g.source || *f.target == *g.source))
    throw ValidationError("compose: target of the first map is not the source of the second");
  Infomorphism h{f.source, g.target, {}, {}};
  h.fwd.resize(f.fwd.size());
  for (std::size_t a = 0; a < f.fwd.size(); ++a) h.fwd[a] = g.fwd.at(f.fwd[a]);
  h.bwd.resize(g.bwd.size());
  for (std::size_t c = 0; c < g.bwd.size(); ++c) h.bwd[c] = f.bwd.at(g.bwd[c]);
  return h;
}

Infomorphism dual(const Infomorphism& f) {
  // Weight types are not tokens of the dual; shift the remaining indices.
  auto shifted = [](const Classifier& c, std::size_t type) {
    const auto w = c.weight_type();
    return w && type > *w ? type - 1 : type;
  };
  std::vector<std::size_t> bwd;
  for (std::size_t a = 0; a < f.fwd.size(); ++a) {
    if (f.source->is_weight(a)) continue;
    if (f.target->is_weight(f.fwd[a]))
      throw ValidationError("dual: ordinary type mapped onto the weight type");
    bwd.push_back(shifted(*f.target, f.fwd[a]));
  }
  return {share(f.target->dual()), share(f.source->dual()), f.bwd, std::move(bwd)};
}

}  // namespace holo::infolog
