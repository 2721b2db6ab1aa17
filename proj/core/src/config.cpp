#include "dpplimits/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "dpplimits/error.hpp"
#include "dpplimits/text_io.hpp"

namespace dpplimits {
namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

std::string_view unquote(std::string_view v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
    return v.substr(1, v.size() - 2);
  }
  return v;
}

std::vector<std::string_view> split_list(std::string_view v) {
  v = text_io::trim(v);
  if (!v.empty() && v.front() == '[') {
    v.remove_prefix(1);
    if (v.empty() || v.back() != ']') return {"\x01"};  // forces a parse error downstream
    v.remove_suffix(1);
  }
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const auto piece = text_io::trim(v.substr(start, comma == std::string_view::npos ? v.npos : comma - start));
    if (!piece.empty()) out.push_back(unquote(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  std::size_t line_of(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  void size(const std::string& key, std::size_t& out) {
    if (const auto* e = take(key)) {
      if (!text_io::parse_size(text_io::trim(e->value), out)) fail(*e, key, "expected a non-negative integer");
    }
  }
  void u64(const std::string& key, std::uint64_t& out) {
    std::size_t v = 0;
    if (const auto* e = take(key)) {
      if (!text_io::parse_size(text_io::trim(e->value), v)) fail(*e, key, "expected a non-negative integer");
      out = v;
    }
  }
  void real(const std::string& key, double& out) {
    if (const auto* e = take(key)) {
      if (!text_io::parse_double(text_io::trim(e->value), out)) fail(*e, key, "expected a number");
    }
  }
  void optional_real(const std::string& key, std::optional<double>& out) {
    double v = 0.0;
    if (const auto* e = take(key)) {
      const auto t = text_io::trim(e->value);
      if (t == "auto" || t == "default") {
        out.reset();
        return;
      }
      if (!text_io::parse_double(t, v)) fail(*e, key, "expected a number or 'auto'");
      out = v;
    }
  }
  void boolean(const std::string& key, bool& out) {
    if (const auto* e = take(key)) {
      const auto t = text_io::trim(e->value);
      if (t == "true" || t == "1") {
        out = true;
      } else if (t == "false" || t == "0") {
        out = false;
      } else {
        fail(*e, key, "expected true or false");
      }
    }
  }
  void string(const std::string& key, std::string& out) {
    if (const auto* e = take(key)) out = std::string(unquote(text_io::trim(e->value)));
  }
  void size_list(const std::string& key, std::vector<std::size_t>& out) {
    if (const auto* e = take(key)) {
      out.clear();
      for (const auto piece : split_list(e->value)) {
        std::size_t v = 0;
        if (!text_io::parse_size(piece, v)) fail(*e, key, "expected a list of non-negative integers");
        out.push_back(v);
      }
    }
  }
  void string_list(const std::string& key, std::vector<std::string>& out) {
    if (const auto* e = take(key)) {
      out.clear();
      for (const auto piece : split_list(e->value)) out.emplace_back(piece);
    }
  }

  void reject_leftovers() const {
    for (const auto& [key, e] : entries_) {
      if (!used_.count(key)) throw ConfigError(e.line, key, "unknown key");
    }
  }

 private:
  const Entry* take(const std::string& key) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    used_[key] = true;
    return &it->second;
  }
  [[noreturn]] static void fail(const Entry& e, const std::string& key, const std::string& what) {
    throw ConfigError(e.line, key, what + ", got '" + e.value + "'");
  }

  std::map<std::string, Entry> entries_;
  std::map<std::string, bool> used_;
};

void require(bool ok, const Reader& r, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(r.line_of(key), key, what);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::ostringstream os;
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << values[i];
  return os.str();
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::coreset:
      return "coreset";
    case ExperimentKind::sphere:
      return "sphere";
    case ExperimentKind::usvt:
      return "usvt";
    case ExperimentKind::checks:
      return "checks";
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) noexcept {
  for (const auto kind : {ExperimentKind::coreset, ExperimentKind::sphere, ExperimentKind::usvt,
                          ExperimentKind::checks}) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{
      "sampler_tv",         "ope_structure",       "kernel_validation", "oracle_triangle",
      "det_bound_max",      "det_bound_frobenius", "usvt_spectrum",     "harmonic_structure"};
  return names;
}

ExperimentConfig parse_config(std::string_view text, ExperimentKind kind) {
  std::map<std::string, Entry> entries;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    auto line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text_io::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "section", "unterminated section header");
      section = std::string(text_io::trim(line.substr(1, line.size() - 2)));
      if (!parse_experiment_kind(section)) {
        throw ConfigError(line_no, "section", "unknown experiment '" + section + "'");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, std::string(line), "expected key = value");
    const std::string key(text_io::trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError(line_no, "key", "empty key");
    if (!section.empty() && section != to_string(kind)) continue;
    entries[key] = Entry{std::string(text_io::trim(line.substr(eq + 1))), line_no};
  }

  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.checks = known_checks();
  Reader r(std::move(entries));
  r.size("n", cfg.n);
  r.size("d", cfg.d);
  r.size_list("m_grid", cfg.m_grid);
  r.size_list("n_grid", cfg.n_grid);
  r.size("realizations", cfg.realizations);
  r.size("draws", cfg.draws);
  r.size("thetas", cfg.thetas);
  r.size("replicates", cfg.replicates);
  r.real("quantile", cfg.quantile);
  r.optional_real("h1", cfg.h1);
  r.optional_real("h2", cfg.h2);
  r.size("d_manifold", cfg.d_manifold);
  r.real("alpha", cfg.alpha);
  r.real("c", cfg.c);
  r.real("rho", cfg.rho);
  r.real("length_scale", cfg.length_scale);
  r.string_list("checks", cfg.checks);
  r.boolean("inject_corrupted", cfg.inject_corrupted);
  r.size("trials", cfg.trials);
  r.size("check_draws", cfg.check_draws);
  r.string("bounds_csv", cfg.bounds_csv);
  r.u64("seed", cfg.seed);
  std::size_t threads = cfg.threads;
  r.size("threads", threads);
  cfg.threads = static_cast<unsigned>(threads);
  r.string("output", cfg.output);
  r.reject_leftovers();

  require(cfg.n >= 1, r, "n", "must be positive");
  require(cfg.d >= 1, r, "d", "must be positive");
  require(cfg.realizations >= 1, r, "realizations", "must be positive");
  require(cfg.draws >= 1, r, "draws", "must be positive");
  require(cfg.thetas >= 1, r, "thetas", "must be positive");
  require(cfg.replicates >= 1, r, "replicates", "must be positive");
  require(cfg.trials >= 1, r, "trials", "must be positive");
  require(cfg.check_draws >= 1, r, "check_draws", "must be positive");
  require(cfg.d_manifold >= 1, r, "d_manifold", "must be positive");
  require(cfg.quantile > 0.0 && cfg.quantile < 1.0, r, "quantile", "must lie in (0, 1)");
  require(!cfg.h1 || *cfg.h1 > 0.0, r, "h1", "must be positive");
  require(!cfg.h2 || *cfg.h2 > 0.0, r, "h2", "must be positive");
  require(cfg.alpha > 0.0 && cfg.alpha <= 1.0, r, "alpha", "must lie in (0, 1]");
  require(cfg.c >= 0.0 && cfg.c <= 1.0, r, "c", "must lie in [0, 1]");
  require(cfg.rho > 0.0, r, "rho", "must be positive");
  require(cfg.length_scale > 0.0, r, "length_scale", "must be positive");
  if (kind == ExperimentKind::coreset || kind == ExperimentKind::sphere) {
    require(!cfg.m_grid.empty(), r, "m_grid", "must not be empty");
    for (const auto m : cfg.m_grid) {
      require(m >= 1, r, "m_grid", "entries must be positive");
      require(m <= cfg.n, r, "m_grid", "entry " + std::to_string(m) + " exceeds n = " + std::to_string(cfg.n));
    }
  }
  if (kind == ExperimentKind::sphere) require(cfg.d_manifold == 2, r, "d_manifold", "the sphere is 2-dimensional");
  if (kind == ExperimentKind::usvt) {
    require(!cfg.n_grid.empty(), r, "n_grid", "must not be empty");
    for (const auto n : cfg.n_grid) require(n >= 2, r, "n_grid", "entries must be at least 2");
  }
  for (const auto& name : cfg.checks) {
    bool known = false;
    for (const auto& k : known_checks()) known = known || k == name;
    require(known, r, "checks", "unknown check '" + name + "'");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentKind kind) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "config", "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), kind);
}

std::string config_hash(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "kind=" << to_string(c.kind) << ";n=" << c.n << ";d=" << c.d << ";m_grid=" << join(c.m_grid)
     << ";n_grid=" << join(c.n_grid) << ";realizations=" << c.realizations << ";draws=" << c.draws
     << ";thetas=" << c.thetas << ";replicates=" << c.replicates
     << ";quantile=" << text_io::format_double(c.quantile)
     << ";h1=" << (c.h1 ? text_io::format_double(*c.h1) : "auto")
     << ";h2=" << (c.h2 ? text_io::format_double(*c.h2) : "auto") << ";d_manifold=" << c.d_manifold
     << ";alpha=" << text_io::format_double(c.alpha) << ";c=" << text_io::format_double(c.c)
     << ";rho=" << text_io::format_double(c.rho)
     << ";length_scale=" << text_io::format_double(c.length_scale) << ";checks=" << join(c.checks)
     << ";inject_corrupted=" << c.inject_corrupted << ";trials=" << c.trials
     << ";check_draws=" << c.check_draws << ";seed=" << c.seed;
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(os.str())));
  return buf;
}

}  // namespace dpplimits
