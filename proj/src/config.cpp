#include "holoscreen/config.hpp"

#include <charconv>
#include <cstdlib>
#include <string>

namespace holo {
namespace {

Tolerances& mutable_tolerances() {
  static Tolerances tol;
  return tol;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_positive(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !(v > 0.0)) return std::nullopt;
  return v;
}

double* field(Tolerances& t, std::string_view key) {
  if (key == "normalization") return &t.normalization;
  if (key == "hermitian") return &t.hermitian;
  if (key == "unitary") return &t.unitary;
  if (key == "psd") return &t.psd;
  if (key == "eigen_cutoff") return &t.eigen_cutoff;
  if (key == "schmidt") return &t.schmidt;
  if (key == "infomorphism") return &t.infomorphism;
  if (key == "marginal") return &t.marginal;
  if (key == "factorization") return &t.factorization;
  if (key == "axis") return &t.axis;
  return nullptr;
}

}  // namespace

const Tolerances& tolerances() { return mutable_tolerances(); }

void set_tolerances(const Tolerances& tol) { mutable_tolerances() = tol; }

std::optional<Tolerances> parse_tolerance_override(std::string_view text, Tolerances base) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.find('=') == std::string_view::npos) {
    auto v = parse_positive(text);
    if (!v) return std::nullopt;
    base.infomorphism = base.marginal = base.factorization = *v;
    return base;
  }
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) return std::nullopt;
    double* slot = field(base, trim(item.substr(0, eq)));
    auto v = parse_positive(item.substr(eq + 1));
    if (!slot || !v) return std::nullopt;
    *slot = *v;
  }
  return base;
}

bool apply_tolerance_env() {
  const char* env = std::getenv("HOLOSCREEN_TOL");
  if (!env) return true;
  auto parsed = parse_tolerance_override(env, tolerances());
  if (!parsed) return false;
  set_tolerances(*parsed);
  return true;
}

}  // namespace holo
