#include "fogpact/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "fogpact/error.hpp"

namespace fogpact {
namespace {

struct Node {
  bool is_list = false;
  std::string atom;
  std::vector<Node> items;
};

struct Entry {
  Node value;
  std::size_t line = 0;
};

using Section = std::map<std::string, Entry>;

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

class Parser {
 public:
  explicit Parser(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(std::size_t line, const std::string& what) const {
    std::ostringstream msg;
    msg << origin_;
    if (line) msg << ':' << line;
    msg << ": " << what;
    throw Error(ErrorKind::ConfigError, msg.str());
  }

  Node parse_value(std::string_view text, std::size_t line) {
    std::size_t pos = 0;
    Node node = parse_node(text, pos, line);
    skip_space(text, pos);
    if (pos != text.size()) fail(line, "unexpected trailing text '" + std::string(text.substr(pos)) + "'");
    return node;
  }

  const std::string& origin() const { return origin_; }

 private:
  static void skip_space(std::string_view t, std::size_t& pos) {
    while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
  }

  Node parse_node(std::string_view t, std::size_t& pos, std::size_t line) {
    skip_space(t, pos);
    Node node;
    if (pos < t.size() && t[pos] == '[') {
      node.is_list = true;
      ++pos;
      skip_space(t, pos);
      if (pos < t.size() && t[pos] == ']') {
        ++pos;
        return node;
      }
      for (;;) {
        node.items.push_back(parse_node(t, pos, line));
        skip_space(t, pos);
        if (pos >= t.size()) fail(line, "unterminated '['");
        if (t[pos] == ',') {
          ++pos;
          continue;
        }
        if (t[pos] == ']') {
          ++pos;
          return node;
        }
        fail(line, std::string("expected ',' or ']' but found '") + t[pos] + "'");
      }
    }
    const std::size_t start = pos;
    while (pos < t.size() && t[pos] != ',' && t[pos] != ']' && t[pos] != '[') ++pos;
    node.atom = trim(t.substr(start, pos - start));
    if (node.atom.size() >= 2 && node.atom.front() == '"' && node.atom.back() == '"') {
      node.atom = node.atom.substr(1, node.atom.size() - 2);
    }
    if (node.atom.empty()) fail(line, "empty value");
    return node;
  }

  std::string origin_;
};

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (!quoted && line[i] == '#') return line.substr(0, i);
  }
  return line;
}

int bracket_balance(std::string_view s) {
  int depth = 0;
  for (char c : s) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
  }
  return depth;
}

class Reader {
 public:
  Reader(Parser& parser, std::string name, Section& section)
      : parser_(parser), name_(std::move(name)), section_(section) {}

  bool has(const std::string& key) const { return section_.count(key) > 0; }

  Entry& require(const std::string& key) {
    auto it = section_.find(key);
    if (it == section_.end()) parser_.fail(0, "[" + name_ + "] missing required key '" + key + "'");
    return it->second;
  }

  [[noreturn]] void fail(const Entry& e, const std::string& key, const std::string& what) {
    parser_.fail(e.line, "[" + name_ + "] " + key + ": " + what);
  }

  double number(const std::string& key) { return number_of(require(key), key); }

  double number_of(Entry& e, const std::string& key) { return atom_number(e, e.value, key); }

  double atom_number(const Entry& e, const Node& n, const std::string& key) {
    if (n.is_list) fail(e, key, "expected a number, found a list");
    double v = 0.0;
    const char* first = n.atom.data();
    const char* last = first + n.atom.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) fail(e, key, "expected a number, found '" + n.atom + "'");
    return v;
  }

  std::uint64_t unsigned_integer(const std::string& key) {
    Entry& e = require(key);
    if (e.value.is_list) fail(e, key, "expected an unsigned integer");
    std::uint64_t v = 0;
    const std::string& s = e.value.atom;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      fail(e, key, "expected an unsigned integer, found '" + s + "'");
    }
    return v;
  }

  bool boolean(const std::string& key) {
    Entry& e = require(key);
    if (!e.value.is_list && (e.value.atom == "true" || e.value.atom == "1")) return true;
    if (!e.value.is_list && (e.value.atom == "false" || e.value.atom == "0")) return false;
    fail(e, key, "expected true or false");
  }

  std::string word(const std::string& key) {
    Entry& e = require(key);
    if (e.value.is_list) fail(e, key, "expected a single word, found a list");
    return e.value.atom;
  }

  Vector vector(const std::string& key) {
    Entry& e = require(key);
    if (!e.value.is_list) fail(e, key, "expected a bracketed list");
    Vector v;
    for (const Node& item : e.value.items) v.push_back(atom_number(e, item, key));
    return v;
  }

  std::vector<std::string> words(const std::string& key) {
    Entry& e = require(key);
    if (!e.value.is_list) fail(e, key, "expected a bracketed list");
    std::vector<std::string> out;
    for (const Node& item : e.value.items) {
      if (item.is_list) fail(e, key, "nested list not allowed here");
      out.push_back(item.atom);
    }
    return out;
  }

  SymMatrix matrix(const std::string& key) {
    Entry& e = require(key);
    if (!e.value.is_list || e.value.items.empty()) fail(e, key, "expected a list of rows");
    std::vector<Vector> rows;
    for (const Node& row : e.value.items) {
      if (!row.is_list) fail(e, key, "each row must be a bracketed list");
      Vector r;
      for (const Node& item : row.items) r.push_back(atom_number(e, item, key));
      rows.push_back(std::move(r));
    }
    const std::size_t n = rows.size();
    bool lower = true, full = true;
    for (std::size_t i = 0; i < n; ++i) {
      lower = lower && rows[i].size() == i + 1;
      full = full && rows[i].size() == n;
    }
    try {
      if (full) return SymMatrix::from_rows(rows);
      if (lower) return SymMatrix::from_lower_triangle(rows);
    } catch (const Error& err) {
      fail(e, key, err.what());
    }
    fail(e, key, "rows must form a full square matrix or a lower triangle");
  }

  void reject_unknown(std::initializer_list<std::string_view> known) {
    for (auto& [key, entry] : section_) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        parser_.fail(entry.line, "[" + name_ + "] unknown key '" + key + "'");
      }
    }
  }

 private:
  Parser& parser_;
  std::string name_;
  Section& section_;
};

PlanKind plan_or_fail(Reader& r, const std::string& key, const std::string& name) {
  try {
    return parse_plan(name);
  } catch (const Error& e) {
    r.fail(r.require(key), key, e.what());
  }
}

}  // namespace

ConfigDocument parse_config(std::string_view text, const std::string& origin) {
  Parser parser(origin);
  std::map<std::string, Section> sections;
  std::vector<std::string> order;
  std::string current;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos) {
      current = trim(std::string_view(line).substr(1, line.size() - 2));
      if (current != "instance" && current != "solve" && current != "sweep" && current != "sim") {
        parser.fail(line_no, "unknown section [" + current + "]");
      }
      if (sections.count(current)) parser.fail(line_no, "duplicate section [" + current + "]");
      sections[current];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) parser.fail(line_no, "expected 'key = value'");
    if (current.empty()) parser.fail(line_no, "key outside of any section");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    const std::size_t key_line = line_no;
    while (bracket_balance(value) > 0 && std::getline(in, raw)) {
      ++line_no;
      value += ' ' + trim(strip_comment(raw));
    }
    if (bracket_balance(value) != 0) parser.fail(key_line, "unbalanced brackets in '" + key + "'");
    Section& sec = sections[current];
    if (sec.count(key)) parser.fail(key_line, "[" + current + "] duplicate key '" + key + "'");
    sec[key] = Entry{parser.parse_value(value, key_line), key_line};
  }

  if (!sections.count("instance")) parser.fail(0, "missing [instance] section");

  Reader inst(parser, "instance", sections["instance"]);
  inst.reject_unknown({"c", "sigma", "beta", "eta", "w_bar", "n", "allow_complementarity"});
  SymMatrix c = inst.matrix("c");
  SymMatrix sigma = inst.matrix("sigma");
  Vector beta = inst.vector("beta");
  const double eta = inst.number("eta");
  const double w_bar = inst.has("w_bar") ? inst.number("w_bar") : 0.0;
  InstanceOptions options;
  if (inst.has("allow_complementarity")) options.allow_complementarity = inst.boolean("allow_complementarity");
  if (inst.has("n")) {
    const std::uint64_t n = inst.unsigned_integer("n");
    if (n != beta.size() || n != c.size() || n != sigma.size()) {
      std::ostringstream msg;
      msg << "[instance] n = " << n << " but beta has " << beta.size() << " entries, c is "
          << c.size() << "x" << c.size() << ", sigma is " << sigma.size() << "x" << sigma.size();
      parser.fail(inst.require("n").line, msg.str());
    }
  }

  std::optional<MarketInstance> instance;
  try {
    instance = MarketInstance::create(std::move(c), std::move(sigma), std::move(beta), eta, w_bar,
                                      options);
  } catch (const Error& e) {
    parser.fail(0, std::string("[instance] invalid market instance: ") + e.what());
  }
  ConfigDocument doc{*instance, {}, {}, {}, {}};

  if (sections.count("solve")) {
    Reader solve(parser, "solve", sections["solve"]);
    solve.reject_unknown({"plan"});
    if (solve.has("plan")) doc.plan = plan_or_fail(solve, "plan", solve.word("plan"));
  }

  if (sections.count("sweep")) {
    Reader sw(parser, "sweep", sections["sweep"]);
    sw.reject_unknown({"parameter", "index", "values", "plans", "mode"});
    const std::string param = sw.word("parameter");
    const std::size_t index = sw.has("index") ? sw.unsigned_integer("index") : 0;
    Parameter p;
    if (param == "eta") {
      p = Parameter::eta();
    } else if (param == "c_ii") {
      p = Parameter::cost(index, index);
    } else if (param == "sigma_ii") {
      p = Parameter::noise(index, index);
    } else if (param == "beta_i") {
      p = Parameter::beta(index);
    } else {
      sw.fail(sw.require("parameter"), "parameter", "expected eta, c_ii, sigma_ii or beta_i");
    }
    std::vector<PlanKind> plans;
    if (sw.has("plans")) {
      for (const std::string& name : sw.words("plans")) plans.push_back(plan_or_fail(sw, "plans", name));
    } else {
      plans = all_plans();
    }
    EvaluationMode mode = EvaluationMode::OwnInstance;
    if (sw.has("mode")) {
      const std::string m = sw.word("mode");
      try {
        mode = parse_mode(m);
      } catch (const Error& e) {
        sw.fail(sw.require("mode"), "mode", e.what());
      }
    }
    SweepSpec spec{doc.instance, p, sw.vector("values"), std::move(plans), mode};
    try {
      validate_sweep(spec);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InvalidSpec) throw;
      sw.fail(sw.require("values"), "values", e.what());
    }
    doc.sweep = std::move(spec);
  }

  if (sections.count("sim")) {
    Reader sim(parser, "sim", sections["sim"]);
    sim.reject_unknown({"samples", "seed", "antithetic", "plan"});
    SimConfig cfg;
    if (sim.has("samples")) cfg.samples = sim.unsigned_integer("samples");
    if (sim.has("seed")) cfg.seed = sim.unsigned_integer("seed");
    if (sim.has("antithetic")) cfg.antithetic = sim.boolean("antithetic");
    if (sim.has("plan")) doc.sim_plan = plan_or_fail(sim, "plan", sim.word("plan"));
    if (cfg.samples < 1) sim.fail(sim.require("samples"), "samples", "must be >= 1");
    doc.sim = cfg;
  }
  return doc;
}

ConfigDocument load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace fogpact
