#include "holoscreen/text_format.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

namespace holo::io {
namespace {

using infolog::CausalDag;
using infolog::Classifier;
using infolog::ClassifierRef;
using infolog::Infomorphism;

struct Line {
  std::size_t number;
  std::vector<std::string> words;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string raw(text.substr(pos, end - pos));
    pos = end + 1;
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string spaced;
    for (char c : raw) {
      if (c == '=' || c == ';' || c == ':') {
        spaced += ' ';
        spaced += c;
        spaced += ' ';
      } else {
        spaced += c == '\r' || c == '\t' ? ' ' : c;
      }
    }
    std::istringstream in(spaced);
    Line line{number, {}};
    for (std::string w; in >> w;) line.words.push_back(std::move(w));
    if (!line.words.empty()) out.push_back(std::move(line));
    if (end == text.size()) break;
  }
  return out;
}

double parse_number(const std::string& s, std::size_t line) {
  double v = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("expected a number, got '" + s + "'", line);
  return v;
}

std::size_t parse_index(const std::string& s, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("expected a nonnegative integer, got '" + s + "'", line);
  return v;
}

std::size_t position(const std::vector<std::string>& names, const std::string& n, const char* what,
                     std::size_t line) {
  auto it = std::find(names.begin(), names.end(), n);
  if (it == names.end()) throw ParseError(std::string("unknown ") + what + " '" + n + "'", line);
  return static_cast<std::size_t>(it - names.begin());
}

/// "a = x  b = y ..." after the keyword.
std::vector<std::pair<std::string, std::string>> pairs(const Line& l) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto& w = l.words;
  if ((w.size() - 1) % 3 != 0) throw ParseError("expected 'name = name' pairs", l.number);
  for (std::size_t i = 1; i < w.size(); i += 3) {
    if (w[i + 1] != "=") throw ParseError("expected 'name = name' pairs", l.number);
    out.emplace_back(w[i], w[i + 2]);
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Line> lines) : lines_(std::move(lines)) {}

  Document run() {
    while (at_ < lines_.size()) {
      const Line& l = lines_[at_++];
      const auto& w = l.words;
      if (w.size() >= 2 && w[1] == "=") {
        std::string value;
        for (std::size_t i = 2; i < w.size(); ++i) value += (i > 2 ? " " : "") + w[i];
        if (value.empty()) throw ParseError("setting '" + w[0] + "' has no value", l.number);
        doc_.settings.emplace_back(w[0], std::move(value));
      } else if (w[0] == "classifier") {
        expect(l, 2, "classifier NAME");
        classifier(l);
      } else if (w[0] == "infomorphism") {
        expect(l, 4, "infomorphism NAME SOURCE TARGET");
        infomorphism(l);
      } else if (w[0] == "dag") {
        expect(l, 1, "dag");
        dag(l);
      } else if (w[0] == "contexts") {
        expect(l, 1, "contexts");
        contexts(l);
      } else if (w[0] == "diagram") {
        expect(l, 2, "diagram NAME");
        diagram(l);
      } else {
        throw ParseError("unknown block '" + w[0] + "'", l.number);
      }
    }
    return std::move(doc_);
  }

 private:
  static void expect(const Line& l, std::size_t n, const char* form) {
    if (l.words.size() != n) throw ParseError(std::string("expected '") + form + "'", l.number);
  }

  /// Lines of the current block up to its `end`.
  std::vector<const Line*> body(const Line& head) {
    std::vector<const Line*> out;
    while (at_ < lines_.size()) {
      const Line& l = lines_[at_++];
      if (l.words[0] == "end") {
        expect(l, 1, "end");
        return out;
      }
      out.push_back(&l);
    }
    throw ParseError("block '" + head.words[0] + "' is missing its 'end'", head.number);
  }

  template <typename F>
  static auto wrap(std::size_t line, F&& f) {
    try {
      return f();
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line);
    }
  }

  ClassifierRef find_classifier(const std::string& n, std::size_t line) const {
    for (const auto& c : doc_.classifiers)
      if (c->name() == n) return c;
    throw ParseError("unknown classifier '" + n + "'", line);
  }

  void classifier(const Line& head) {
    std::vector<std::string> tokens, types;
    std::optional<std::string> weight;
    std::vector<std::pair<const Line*, std::vector<double>>> rows;
    std::vector<std::string> row_tokens;
    for (const Line* l : body(head)) {
      const auto& w = l->words;
      if (w[0] == "tokens") tokens.assign(w.begin() + 1, w.end());
      else if (w[0] == "types") types.assign(w.begin() + 1, w.end());
      else if (w[0] == "weight") {
        expect(*l, 2, "weight TYPE");
        weight = w[1];
      } else if (w[0] == "row") {
        if (w.size() < 3 || w[2] != ":") throw ParseError("expected 'row TOKEN : values'", l->number);
        std::vector<double> v;
        for (std::size_t i = 3; i < w.size(); ++i) v.push_back(parse_number(w[i], l->number));
        row_tokens.push_back(w[1]);
        rows.emplace_back(l, std::move(v));
      } else {
        throw ParseError("unknown classifier field '" + w[0] + "'", l->number);
      }
    }
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(tokens.size()),
                                              static_cast<Eigen::Index>(types.size()));
    std::vector<bool> filled(tokens.size(), false);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Line* l = rows[r].first;
      const std::size_t t = position(tokens, row_tokens[r], "token", l->number);
      if (filled[t]) throw ParseError("token '" + row_tokens[r] + "' has two rows", l->number);
      if (rows[r].second.size() != types.size())
        throw ParseError("row has " + std::to_string(rows[r].second.size()) + " values for " +
                             std::to_string(types.size()) + " types",
                         l->number);
      filled[t] = true;
      for (std::size_t j = 0; j < types.size(); ++j)
        p(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = rows[r].second[j];
    }
    for (std::size_t t = 0; t < tokens.size(); ++t)
      if (!filled[t]) throw ParseError("token '" + tokens[t] + "' has no row", head.number);
    std::optional<std::size_t> wi;
    if (weight) wi = position(types, *weight, "type", head.number);
    doc_.classifiers.push_back(wrap(head.number, [&] {
      return infolog::share(Classifier(head.words[1], tokens, types, p, wi));
    }));
  }

  void infomorphism(const Line& head) {
    const auto src = find_classifier(head.words[2], head.number);
    const auto tgt = find_classifier(head.words[3], head.number);
    Infomorphism f{src, tgt, std::vector<std::size_t>(src->type_count(), SIZE_MAX),
                   std::vector<std::size_t>(tgt->token_count(), SIZE_MAX)};
    for (const Line* l : body(head)) {
      const auto& w = l->words;
      if (w[0] == "fwd") {
        for (const auto& [a, b] : pairs(*l))
          f.fwd[position(src->types(), a, "source type", l->number)] =
              position(tgt->types(), b, "target type", l->number);
      } else if (w[0] == "bwd") {
        for (const auto& [a, b] : pairs(*l))
          f.bwd[position(tgt->tokens(), a, "target token", l->number)] =
              position(src->tokens(), b, "source token", l->number);
      } else {
        throw ParseError("unknown infomorphism field '" + w[0] + "'", l->number);
      }
    }
    for (std::size_t i = 0; i < f.fwd.size(); ++i)
      if (f.fwd[i] == SIZE_MAX)
        throw ParseError("source type '" + src->types()[i] + "' is not mapped", head.number);
    for (std::size_t i = 0; i < f.bwd.size(); ++i)
      if (f.bwd[i] == SIZE_MAX)
        throw ParseError("target token '" + tgt->tokens()[i] + "' is not mapped", head.number);
    doc_.infomorphisms.emplace_back(head.words[1], std::move(f));
  }

  void dag(const Line& head) {
    std::vector<std::string> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<std::pair<const Line*, std::vector<std::vector<double>>>> cpts;
    std::vector<std::string> cpt_nodes;
    for (const Line* l : body(head)) {
      const auto& w = l->words;
      if (w[0] == "nodes") {
        nodes.assign(w.begin() + 1, w.end());
      } else if (w[0] == "edge") {
        expect(*l, 3, "edge FROM TO");
        edges.emplace_back(position(nodes, w[1], "node", l->number), position(nodes, w[2], "node", l->number));
      } else if (w[0] == "cpt") {
        if (w.size() < 2) throw ParseError("expected 'cpt NODE rows'", l->number);
        std::vector<std::vector<double>> rows(1);
        for (std::size_t i = 2; i < w.size(); ++i) {
          if (w[i] == ";") rows.emplace_back();
          else rows.back().push_back(parse_number(w[i], l->number));
        }
        cpt_nodes.push_back(w[1]);
        cpts.emplace_back(l, std::move(rows));
      } else {
        throw ParseError("unknown dag field '" + w[0] + "'", l->number);
      }
    }
    std::vector<std::size_t> indeg(nodes.size(), 0);
    for (auto [u, v] : edges) ++indeg[v];
    std::vector<std::vector<std::array<double, 2>>> table(nodes.size());
    for (std::size_t v = 0; v < nodes.size(); ++v)
      table[v].assign(std::size_t{1} << std::min<std::size_t>(indeg[v], 20), {0.5, 0.5});
    std::vector<bool> given(nodes.size(), false);
    for (std::size_t k = 0; k < cpts.size(); ++k) {
      const Line* l = cpts[k].first;
      const std::size_t v = position(nodes, cpt_nodes[k], "node", l->number);
      if (given[v]) throw ParseError("node '" + nodes[v] + "' has two CPTs", l->number);
      given[v] = true;
      table[v].clear();
      for (const auto& r : cpts[k].second) {
        if (r.size() != 2) throw ParseError("each CPT row holds P(0) P(1)", l->number);
        table[v].push_back({r[0], r[1]});
      }
    }
    doc_.dags.push_back(wrap(head.number, [&] { return CausalDag(nodes, edges, table); }));
  }

  void contexts(const Line& head) {
    cccd::ContextFamily f;
    bool have_ground = false;
    for (const Line* l : body(head)) {
      const auto& w = l->words;
      if (w[0] == "ground") {
        expect(*l, 2, "ground N");
        f.ground = parse_index(w[1], l->number);
        have_ground = true;
      } else if (w[0] == "names") {
        f.names.assign(w.begin() + 1, w.end());
      } else if (w[0] == "context") {
        auto eq = std::find(w.begin(), w.end(), std::string("="));
        if (eq == w.end()) throw ParseError("expected 'context VARS = probabilities'", l->number);
        cccd::Context c;
        for (auto it = w.begin() + 1; it != eq; ++it) c.vars.push_back(variable(f, *it, l->number));
        for (auto it = eq + 1; it != w.end(); ++it) c.dist.push_back(parse_number(*it, l->number));
        f.contexts.push_back(std::move(c));
      } else {
        throw ParseError("unknown contexts field '" + w[0] + "'", l->number);
      }
    }
    if (!have_ground) f.ground = f.names.size();
    wrap(head.number, [&] {
      cccd::validate(f);
      return 0;
    });
    doc_.families.push_back(std::move(f));
  }

  static std::size_t variable(const cccd::ContextFamily& f, const std::string& s, std::size_t line) {
    if (auto it = std::find(f.names.begin(), f.names.end(), s); it != f.names.end())
      return static_cast<std::size_t>(it - f.names.begin());
    if (!s.empty() && s[0] == 'x' && s.size() > 1) return parse_index(s.substr(1), line);
    return parse_index(s, line);
  }

  void diagram(const Line& head) {
    cccd::CCCDDiagram d;
    std::vector<std::string> base_names;
    for (const Line* l : body(head)) {
      const auto& w = l->words;
      if (w[0] == "base") {
        for (std::size_t i = 1; i < w.size(); ++i) {
          d.base.push_back(find_classifier(w[i], l->number));
          base_names.push_back(w[i]);
        }
      } else if (w[0] == "core") {
        expect(*l, 2, "core NAME");
        d.core = find_classifier(w[1], l->number);
      } else if (w[0] == "cross" || w[0] == "cocone") {
        for (std::size_t i = 1; i < w.size(); ++i) {
          const auto& f = named_infomorphism(w[i], l->number);
          if (w[0] == "cocone") {
            d.cocone.push_back(f);
            continue;
          }
          const std::size_t from = position(base_names, f.source->name(), "base classifier", l->number);
          const std::size_t to = position(base_names, f.target->name(), "base classifier", l->number);
          d.cross.push_back({from, to, f});
        }
      } else if (w[0] == "inputs") {
        for (std::size_t i = 1; i < w.size(); ++i)
          d.inputs.push_back(std::find(base_names.begin(), base_names.end(), w[i]) != base_names.end()
                                 ? position(base_names, w[i], "base classifier", l->number)
                                 : parse_index(w[i], l->number));
      } else if (w[0] == "claims") {
        for (std::size_t i = 1; i < w.size(); ++i) d.claims.push_back(parse_index(w[i], l->number));
      } else if (w[0] == "output") {
        expect(*l, 3, "output CLASSIFIER TYPE");
        const std::size_t b = position(base_names, w[1], "base classifier", l->number);
        d.output = std::make_pair(b, position(d.base[b]->types(), w[2], "type", l->number));
      } else {
        throw ParseError("unknown diagram field '" + w[0] + "'", l->number);
      }
    }
    for (std::size_t i : d.inputs)
      if (i >= d.base.size()) throw ParseError("input index past the base list", head.number);
    doc_.diagrams.emplace_back(head.words[1], std::move(d));
  }

  const Infomorphism& named_infomorphism(const std::string& n, std::size_t line) const {
    for (const auto& [name, f] : doc_.infomorphisms)
      if (name == n) return f;
    throw ParseError("unknown infomorphism '" + n + "'", line);
  }

  std::vector<Line> lines_;
  std::size_t at_ = 0;
  Document doc_;
};

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += " " + x;
  return s;
}

}  // namespace

ClassifierRef Document::classifier(const std::string& name) const {
  for (const auto& c : classifiers)
    if (c->name() == name) return c;
  throw ValidationError("document has no classifier '" + name + "'");
}

const Infomorphism& Document::infomorphism(const std::string& name) const {
  for (const auto& [n, f] : infomorphisms)
    if (n == name) return f;
  throw ValidationError("document has no infomorphism '" + name + "'");
}

std::map<std::string, std::string> Document::settings_map() const {
  std::map<std::string, std::string> m;
  for (const auto& [k, v] : settings) m[k] = v;
  return m;
}

Document parse_document(std::string_view text) { return Parser(tokenize(text)).run(); }

Document load_document(const std::string& path) { return parse_document(read_file(path)); }

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw Error("format_number: conversion failed");
  return std::string(buf, ptr);
}

std::string to_text(const Classifier& c) {
  std::string s = "classifier " + c.name() + "\ntokens" + join(c.tokens()) + "\ntypes" + join(c.types()) + "\n";
  if (auto w = c.weight_type()) s += "weight " + c.types()[*w] + "\n";
  for (std::size_t t = 0; t < c.token_count(); ++t) {
    s += "row " + c.tokens()[t] + " :";
    for (std::size_t j = 0; j < c.type_count(); ++j) s += " " + format_number(c(t, j));
    s += "\n";
  }
  return s + "end\n";
}

std::string to_text(const std::string& name, const Infomorphism& f) {
  std::string s = "infomorphism " + name + " " + f.source->name() + " " + f.target->name() + "\nfwd";
  for (std::size_t a = 0; a < f.fwd.size(); ++a)
    s += " " + f.source->types()[a] + " = " + f.target->types()[f.fwd[a]];
  s += "\nbwd";
  for (std::size_t b = 0; b < f.bwd.size(); ++b)
    s += " " + f.target->tokens()[b] + " = " + f.source->tokens()[f.bwd[b]];
  return s + "\nend\n";
}

std::string to_text(const CausalDag& dag) {
  std::string s = "dag\nnodes" + join(dag.nodes()) + "\n";
  for (auto [u, v] : dag.edges()) s += "edge " + dag.nodes()[u] + " " + dag.nodes()[v] + "\n";
  for (std::size_t v = 0; v < dag.size(); ++v) {
    s += "cpt " + dag.nodes()[v];
    const auto& rows = dag.cpt(v);
    for (std::size_t r = 0; r < rows.size(); ++r)
      s += (r ? " ; " : " ") + format_number(rows[r][0]) + " " + format_number(rows[r][1]);
    s += "\n";
  }
  return s + "end\n";
}

std::string to_text(const cccd::ContextFamily& family) {
  std::string s = "contexts\nground " + std::to_string(family.ground) + "\n";
  if (!family.names.empty()) s += "names" + join(family.names) + "\n";
  for (const auto& c : family.contexts) {
    s += "context";
    for (std::size_t v : c.vars) s += " " + family.variable_name(v);
    s += " =";
    for (double p : c.dist) s += " " + format_number(p);
    s += "\n";
  }
  return s + "end\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw ValidationError("failed writing " + path);
}

}  // namespace holo::io
