#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "holoscreen/agent.hpp"
#include "holoscreen/cccd.hpp"
#include "holoscreen/config.hpp"
#include "holoscreen/infolog.hpp"
#include "holoscreen/rng.hpp"
#include "holoscreen/scatter.hpp"
#include "holoscreen/screen.hpp"
#include "holoscreen/serialize.hpp"
#include "holoscreen/text_format.hpp"

namespace holo::cli {
namespace {

using io::Json;
using io::RunMeta;

struct Param {
  const char* key;
  const char* fallback;
  const char* help;
};

/// Effective parameters of one run plus any blocks read from files.
class Settings {
 public:
  Settings(std::map<std::string, std::string> values, const io::Document* doc) : values_(std::move(values)), doc_(doc) {}

  const std::string& text(const std::string& key) const { return values_.at(key); }
  bool has(const std::string& key) const { return !values_.at(key).empty(); }

  double real(const std::string& key) const {
    const auto& s = text(key);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail(key, "a number");
    return v;
  }

  std::uint64_t integer(const std::string& key) const {
    const auto& s = text(key);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail(key, "a nonnegative integer");
    return v;
  }

  std::size_t count(const std::string& key) const { return static_cast<std::size_t>(integer(key)); }

  bool flag(const std::string& key) const {
    const auto& s = text(key);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    fail(key, "true or false");
  }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(text(key));
    for (std::string item; std::getline(ss, item, ',');) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) fail(key, "a comma-separated list of numbers");
      out.push_back(v);
    }
    return out;
  }

  std::vector<std::string> words(const std::string& key) const {
    std::vector<std::string> out;
    std::stringstream ss(text(key));
    for (std::string item; std::getline(ss, item, ',');)
      if (!item.empty()) out.push_back(item);
    return out;
  }

  const io::Document* document() const noexcept { return doc_; }

 private:
  [[noreturn]] static void fail(const std::string& key, const char* what) {
    throw ValidationError("option " + key + ": expected " + what);
  }

  std::map<std::string, std::string> values_;
  const io::Document* doc_;
};

struct Kind {
  const char* name;
  const char* summary;
  std::vector<Param> params;
  std::string (*execute)(const Settings&, const RunMeta&);
};

std::vector<double> weights_or_uniform(const Settings& s, std::size_t n) {
  if (s.has("alpha")) return s.reals("alpha");
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

screen::InteractionSpec interaction(const Settings& s) {
  const std::size_t n = s.count("n");
  if (n == 0) throw ValidationError("option n: at least one qubit is required");
  return screen::build_interaction(n, weights_or_uniform(s, n), s.real("beta"), s.real("temperature"));
}

const char* output_format(const Settings& s) {
  const auto& f = s.text("format");
  if (f == "csv") return "csv";
  if (f == "json") return "json";
  throw ValidationError("option format: expected csv or json");
}

std::string run_cycle(const Settings& s, const RunMeta& meta) {
  const auto spec = interaction(s);
  const std::size_t n = spec.n;
  const auto geom = s.has("area") ? screen::VoxelGeometry::with_area(s.real("area"), s.real("dx"))
                                  : screen::VoxelGeometry::for_cells(n, s.real("dx"));
  const auto bound = screen::check_ghp_bound(spec, geom);
  if (!bound.ok)
    throw InvariantViolation("GHP bound breached: N = " + std::to_string(n) + " exceeds area/4 = " +
                             io::format_number(bound.bound));

  const auto basis_a = screen::LocalBasis::computational(n);
  const auto basis_b = screen::LocalBasis::tilted(n, s.real("tilt"));
  auto state = screen::ScreenState::fresh(n);
  std::vector<screen::CycleRecord> records;
  const std::size_t cycles = s.count("cycles");
  for (std::size_t c = 0; c < cycles; ++c) {
    CounterRng prep(meta.seed, 2 * c + 1);
    std::vector<int> spins(n);
    for (auto& v : spins) v = prep.bernoulli(0.5) ? 1 : -1;
    const std::uint64_t cycle_seed = CounterRng(meta.seed, 2 * c).at(0);
    records.push_back(screen::exchange_cycle(state, spec, basis_a, basis_b, spins, screen::Echo{}, cycle_seed));
    const auto& r = records.back();
    if (r.signed_ledger() != 0 || r.bits_a_to_b != n)
      throw InvariantViolation("cycle " + std::to_string(c) + " broke the symmetric bit ledger");
  }

  if (std::string(output_format(s)) == "csv") return io::cycles_csv(meta, records);
  Json cycles_json = Json::array();
  for (const auto& r : records) cycles_json.push_back(io::to_json(r));
  Json payload{{"ghp", Json{{"qubits", n}, {"area", geom.area}, {"bound", bound.bound}, {"saturated", double(n) == bound.bound}}},
               {"cycles", cycles_json}};
  return io::dump_artifact(meta, payload);
}

std::string run_entangle(const Settings& s, const RunMeta& meta) {
  agent::SharingOptions o;
  o.qubits_a = s.count("qubits_a");
  o.qubits_b = s.count("qubits_b");
  o.shared = s.count("shared");
  o.cycles = s.count("cycles");
  o.sync = s.flag("sync");
  o.coupling = s.real("coupling");
  o.seed = meta.seed;
  const auto rows = agent::qrf_sharing_experiment(o);
  for (const auto& r : rows)
    if (r.s_bits > static_cast<double>(o.shared) + 1e-9)
      throw InvariantViolation("cycle " + std::to_string(r.cycle) + ": entropy " + io::format_number(r.s_bits) +
                               " bits exceeds the shared sector of " + std::to_string(o.shared) + " qubits");
  return io::sharing_csv(meta, rows);
}

cccd::ContextFamily family_from(const Settings& s) {
  if (s.has("input")) {
    const auto doc = io::load_document(s.text("input"));
    if (doc.families.size() != 1) throw ValidationError("input must hold exactly one contexts block");
    return doc.families.front();
  }
  if (const auto* doc = s.document(); doc && !doc->families.empty()) {
    if (doc->families.size() != 1) throw ValidationError("config must hold at most one contexts block");
    return doc->families.front();
  }
  if (s.has("prbox")) return cccd::prbox_family(s.real("prbox"));
  throw ValidationError("contextuality needs --input, a contexts block in --config, or --prbox");
}

std::string run_contextuality(const Settings& s, const RunMeta& meta) {
  const auto family = family_from(s);
  const auto& w = s.text("witness");
  if (w != "vertex" && w != "max-entropy") throw ValidationError("option witness: expected vertex or max-entropy");
  const auto result =
      cccd::contextuality_check(family, w == "vertex" ? cccd::Witness::vertex : cccd::Witness::max_entropy);

  Json core;
  try {
    const auto fc = cccd::classifiers_from_contexts(family);
    const auto built = cccd::build_core(fc.base, fc.cross);
    core = Json{{"built", built.diagram.has_value()}};
    if (built.diagram) {
      const auto check = cccd::verify_cccd(*built.diagram);
      if (!check.commutes) throw InvariantViolation("built core does not commute");
      core["core_tokens"] = built.diagram->core->token_count();
      core["commutes"] = true;
    }
  } catch (const CapacityExceeded&) {
    throw;
  } catch (const ValidationError& e) {
    core = Json{{"built", false}, {"reason", e.what()}};
  }
  if (core["built"].get<bool>() != (result.verdict == cccd::Verdict::feasible))
    throw InvariantViolation("core construction disagrees with the feasibility verdict");

  Json payload = io::to_json(result, family);
  payload["core"] = core;
  return io::dump_artifact(meta, payload);
}

infolog::CausalDag dag_from(const Settings& s) {
  std::optional<io::Document> loaded;
  const io::Document* doc = s.document();
  if (s.has("input")) {
    loaded = io::load_document(s.text("input"));
    doc = &*loaded;
  }
  if (!doc || doc->dags.size() != 1) throw ValidationError("blanket needs exactly one dag block in --input or --config");
  return doc->dags.front();
}

std::size_t node_of(const infolog::CausalDag& dag, const std::string& name) {
  if (auto i = dag.node_index(name)) return *i;
  throw ValidationError("unknown node '" + name + "'");
}

std::string run_blanket(const Settings& s, const RunMeta& meta) {
  const auto dag = dag_from(s);
  const auto& m = s.text("mode");
  if (m != "exact" && m != "sampled") throw ValidationError("option mode: expected exact or sampled");
  const auto mode = m == "exact" ? infolog::ShieldMode::exact : infolog::ShieldMode::sampled;
  infolog::ShieldOptions opts;
  opts.samples = s.count("samples");
  opts.seed = meta.seed;

  std::vector<std::size_t> targets;
  if (s.has("node")) targets.push_back(node_of(dag, s.text("node")));
  else
    for (std::size_t v = 0; v < dag.size(); ++v) targets.push_back(v);

  Json reports = Json::array();
  for (std::size_t x : targets) {
    if (s.has("blanket")) {
      if (!s.has("node")) throw ValidationError("option blanket requires node");
      std::vector<std::size_t> b;
      for (const auto& name : s.words("blanket")) b.push_back(node_of(dag, name));
      std::sort(b.begin(), b.end());
      reports.push_back(io::to_json(infolog::blanket_shields(dag, x, b, mode, opts), dag, x));
      continue;
    }
    const auto r = infolog::blanket_shields(dag, x, mode, opts);
    if (mode == infolog::ShieldMode::exact && !r.shielded)
      throw InvariantViolation("Markov blanket of " + dag.nodes()[x] + " fails to shield it");
    reports.push_back(io::to_json(r, dag, x));
  }
  return io::dump_artifact(meta, Json{{"nodes", dag.size()}, {"reports", reports}});
}

std::string run_scatter(const Settings& s, const RunMeta& meta) {
  const auto spec = interaction(s);
  const auto& p = s.text("party");
  if (p != "A" && p != "B") throw ValidationError("option party: expected A or B");
  const auto party = p == "A" ? screen::Party::A : screen::Party::B;
  std::optional<double> tau;
  if (s.has("tau")) tau = s.real("tau");
  auto sm = scatter::from_interaction(spec, party, tau);
  if (s.has("tilt")) {
    const auto u = scatter::basis_change_unitary(screen::LocalBasis::computational(spec.n),
                                                 screen::LocalBasis::tilted(spec.n, s.real("tilt")));
    sm = scatter::conjugate(sm, u, "tilted:" + s.text("tilt"));
  }
  const double dev = sm.unitarity_deviation();
  if (dev > tolerances().unitary)
    throw InvariantViolation("S-matrix unitarity deviation " + io::format_number(dev) + " above tolerance");
  return io::dump_artifact(meta, Json{{"smatrix", io::to_json(sm)}});
}

std::string run_clone(const Settings& s, const RunMeta& meta) {
  const std::size_t k = s.count("arity");
  if (k > 12) throw CapacityExceeded("option arity: above 12");
  const std::size_t rows = std::size_t{1} << k;
  std::vector<int> table(rows);
  if (s.has("table")) {
    const auto& t = s.text("table");
    if (t.size() != rows || t.find_first_not_of("01") != std::string::npos)
      throw ValidationError("option table: expected " + std::to_string(rows) + " bits");
    for (std::size_t x = 0; x < rows; ++x) table[x] = t[x] - '0';
  } else {
    CounterRng rng(meta.seed, 0);
    for (auto& v : table) v = rng.bernoulli(0.5) ? 1 : 0;
  }
  agent::ScreenTrace trace{k, {}};
  CounterRng draw(meta.seed, 1);
  Json obs = Json::array();
  for (std::size_t i = 0, len = s.count("length"); i < len; ++i) {
    const std::size_t x = static_cast<std::size_t>(draw.below(rows));
    std::vector<int> bits(k);
    for (std::size_t j = 0; j < k; ++j) bits[j] = static_cast<int>((x >> (k - 1 - j)) & 1U);
    trace.observations.push_back({bits, table[x]});
    obs.push_back(Json{{"input", bits}, {"output", table[x]}});
  }
  const auto w = agent::attempt_qrf_clone(trace, s.count("max_layers"));
  return io::dump_artifact(meta, Json{{"trace", Json{{"arity", k}, {"table", table}, {"observations", obs}}},
                                      {"witness", io::to_json(w)}});
}

const std::vector<Kind>& kinds() {
  static const std::vector<Kind> all{
      {"cycle",
       "four-phase exchange cycles on the screen",
       {{"n", "4", "screen qubits"},
        {"cycles", "100", "exchange cycles"},
        {"alpha", "", "comma-separated interaction weights (default uniform)"},
        {"beta", "1", "thermodynamic efficiency, at least ln 2"},
        {"temperature", "1", "temperature in natural units"},
        {"tilt", "0", "B's axis tilt toward +x in radians"},
        {"dx", "1", "voxel edge in Planck lengths"},
        {"area", "", "screen area override in Planck units"},
        {"format", "csv", "csv or json"}},
       run_cycle},
      {"entangle",
       "entanglement growth under QRF sharing",
       {{"qubits_a", "2", "qubits of agent A"},
        {"qubits_b", "2", "qubits of agent B"},
        {"shared", "1", "shared qubit pairs"},
        {"cycles", "10", "cycles"},
        {"sync", "true", "couple the shared pairs"},
        {"coupling", "1", "controlled-phase strength in [0,1]"}},
       run_entangle},
      {"contextuality",
       "global-section feasibility of a context family",
       {{"input", "", "text file with a contexts block"},
        {"prbox", "", "use the PR-box family at this weight"},
        {"witness", "vertex", "vertex or max-entropy"}},
       run_contextuality},
      {"blanket",
       "Markov-blanket shielding on a causal DAG",
       {{"input", "", "text file with a dag block"},
        {"node", "", "single node to check (default all)"},
        {"blanket", "", "comma-separated candidate blanket for --node"},
        {"mode", "exact", "exact or sampled"},
        {"samples", "200000", "samples in sampled mode"}},
       run_blanket},
      {"scatter",
       "S-matrix of the screen interaction",
       {{"n", "2", "screen qubits, at most 10"},
        {"alpha", "", "comma-separated interaction weights (default uniform)"},
        {"beta", "1", "thermodynamic efficiency, at least ln 2"},
        {"temperature", "1", "temperature in natural units"},
        {"party", "A", "A or B"},
        {"tau", "", "evolution time (default one tick period)"},
        {"tilt", "", "re-express in the basis tilted by this angle"}},
       run_scatter},
      {"clone",
       "QRF cloning attempt from an observed trace",
       {{"arity", "2", "QRF inputs"},
        {"length", "8", "observations in the trace"},
        {"table", "", "truth table as a bit string (default random)"},
        {"max_layers", "2", "deepest diagram searched"}},
       run_clone},
  };
  return all;
}

const Kind* find_kind(const std::string& name) {
  for (const auto& k : kinds())
    if (name == k.name) return &k;
  return nullptr;
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

std::string seeded_path(const std::string& path, std::uint64_t seed) {
  std::filesystem::path p(path);
  const auto name = p.stem().string() + ".seed" + std::to_string(seed) + p.extension().string();
  return (p.parent_path() / name).string();
}

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Holographic-screen experiment runner", "holoscreen"};
  app.require_subcommand(1);
  auto* runner = app.add_subcommand("run", "Run one experiment kind");
  std::string kind_name, config_path, output;
  std::uint64_t seed = 0;
  std::size_t jobs = 1, repeat = 1;
  runner->add_option("kind", kind_name, "cycle, entangle, contextuality, blanket, scatter or clone");
  runner->add_option("--config", config_path, "structured text config; its settings win over flags");
  auto* seed_opt = runner->add_option("--seed", seed, "64-bit seed");
  runner->add_option("-o,--output", output, "artifact path (default stdout)");
  runner->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  runner->add_option("--repeat", repeat, "consecutive seeds to run")->check(CLI::PositiveNumber);

  std::map<std::string, std::string> flags;
  std::map<std::string, CLI::Option*> flag_opts;
  for (const auto& k : kinds())
    for (const auto& p : k.params) {
      if (flag_opts.count(p.key)) continue;
      std::string flag = p.key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      flag_opts[p.key] = runner->add_option("--" + flag, flags[p.key], p.help);
    }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  if (!apply_tolerance_env()) throw ValidationError("HOLOSCREEN_TOL is malformed");

  std::optional<io::Document> doc;
  std::string config_text;
  std::map<std::string, std::string> file_settings;
  if (!config_path.empty()) {
    config_text = io::read_file(config_path);
    doc = io::parse_document(config_text);
    for (const auto& [k, v] : doc->settings) file_settings[normalize_key(k)] = v;
  }
  auto file_kind = file_settings.find("kind");
  if (file_kind != file_settings.end()) {
    if (!kind_name.empty() && kind_name != file_kind->second)
      err << "warning: config file sets kind = " << file_kind->second << ", overriding '" << kind_name << "'\n";
    kind_name = file_kind->second;
    file_settings.erase(file_kind);
  }
  if (kind_name.empty()) throw ValidationError("no experiment kind given");
  const Kind* kind = find_kind(kind_name);
  if (!kind) throw ValidationError("unknown kind '" + kind_name + "'");

  if (auto it = file_settings.find("seed"); it != file_settings.end()) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
    if (ec != std::errc() || ptr != it->second.data() + it->second.size())
      throw ValidationError("config seed: expected a nonnegative integer");
    if (seed_opt->count() && v != seed)
      err << "warning: config file sets seed = " << v << ", overriding --seed " << seed << "\n";
    seed = v;
    file_settings.erase(it);
  }

  std::map<std::string, std::string> values;
  for (const auto& p : kind->params) values[p.key] = p.fallback;
  for (const auto& [key, opt] : flag_opts) {
    if (!opt->count()) continue;
    if (!values.count(key)) throw ValidationError("option --" + opt->get_lnames().front() + " does not apply to " + kind->name);
    values[key] = flags[key];
  }
  for (const auto& [key, v] : file_settings) {
    if (!values.count(key)) throw ValidationError("config setting '" + key + "' does not apply to " + kind->name);
    if (flag_opts.count(key) && flag_opts[key]->count() && flags[key] != v)
      err << "warning: config file sets " << key << " = " << v << ", overriding --" << flag_opts[key]->get_lnames().front()
          << " " << flags[key] << "\n";
    values[key] = v;
  }

  std::string canonical = std::string("kind=") + kind->name + "\n";
  for (const auto& [k, v] : values) canonical += k + "=" + v + "\n";
  if (auto it = values.find("input"); it != values.end() && !it->second.empty())
    canonical += "input_fnv1a=" + io::hex64(io::fnv1a(io::read_file(it->second))) + "\n";
  if (doc && (!doc->families.empty() || !doc->dags.empty() || !doc->classifiers.empty()))
    canonical += "config_fnv1a=" + io::hex64(io::fnv1a(config_text)) + "\n";

  const Settings settings(values, doc ? &*doc : nullptr);
  std::vector<std::string> artifacts(repeat);
  std::vector<std::exception_ptr> failures(repeat);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < repeat;) {
      try {
        artifacts[i] = kind->execute(settings, RunMeta::make(kind->name, canonical, seed + i));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(jobs, repeat);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  for (std::size_t i = 0; i < repeat; ++i) {
    if (output.empty()) out << artifacts[i];
    else io::write_file(repeat == 1 ? output : seeded_path(output, seed + i), artifacts[i]);
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return execute(args, out, err);
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const InsufficientFreeEnergy& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "invariant violation: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace holo::cli
