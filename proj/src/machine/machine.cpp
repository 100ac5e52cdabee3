#include "pgcl/machine.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

namespace pgcl::ddg {

using sampler::CumulativeDist;

std::size_t Machine::interior_count() const {
  std::size_t n = 0;
  for (const auto& node : nodes) n += node.leaf() ? 0 : 1;
  return n;
}

namespace {

using ConfigKey = std::tuple<std::size_t, std::vector<std::int64_t>, std::size_t>;

ConfigKey key_of(const CumulativeDist& c) { return {c.low, c.window(), c.high}; }

std::string label_of(const CumulativeDist& c) {
  std::string out = std::to_string(c.low) + " |";
  for (auto w : c.window()) out += " " + std::to_string(w);
  return out + " | " + std::to_string(c.high);
}

}  // namespace

Machine build_machine(const sampler::WeightedDist& d, std::size_t max_nodes) {
  if (max_nodes < 1) throw Error("node budget must be at least 1");
  Machine m;
  m.outcomes = d.size();
  std::map<ConfigKey, std::size_t> interior;
  std::vector<std::optional<std::size_t>> leaf(d.size());
  std::deque<std::pair<std::size_t, CumulativeDist>> work;

  auto node_for = [&](const CumulativeDist& c) -> std::size_t {
    c.check();
    if (c.terminal()) {
      auto& slot = leaf[c.low];
      if (!slot) {
        if (m.nodes.size() >= max_nodes) throw Error("machine exceeds " + std::to_string(max_nodes) + " nodes");
        slot = m.nodes.size();
        MachineNode n;
        n.id = "x" + std::to_string(c.low + 1);
        n.kind = MachineNode::Kind::Leaf;
        n.outcome = c.low + 1;
        n.label = std::to_string(c.low + 1);
        m.nodes.push_back(n);
      }
      return *slot;
    }
    auto [it, fresh] = interior.emplace(key_of(c), m.nodes.size());
    if (fresh) {
      if (m.nodes.size() >= max_nodes) throw Error("machine exceeds " + std::to_string(max_nodes) + " nodes");
      MachineNode n;
      n.id = "s" + std::to_string(interior.size() - 1);
      n.kind = MachineNode::Kind::Interior;
      n.label = label_of(c);
      m.nodes.push_back(n);
      work.emplace_back(it->second, c);
    }
    return it->second;
  };

  m.root = node_for(CumulativeDist::initial(d));
  while (!work.empty()) {
    auto [index, c] = std::move(work.front());
    work.pop_front();
    std::size_t h = node_for(sampler::split_left(c));
    std::size_t t = node_for(sampler::split_right(c));
    m.nodes[index].heads = h;
    m.nodes[index].tails = t;
  }
  return m;
}

namespace {

// Solves A X = B in place over the rationals; A is n×n, B is n×k.
void solve(std::vector<std::vector<Rational>>& a, std::vector<std::vector<Rational>>& b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (abs(a[pivot][col]) < abs(a[r][col])) pivot = r;
    if (a[pivot][col].is_zero()) throw Error("singular system: some node never reaches a leaf");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      for (std::size_t c = 0; c < b[r].size(); ++c) b[r][c] -= f * b[col][c];
    }
  }
  for (std::size_t r = 0; r < n; ++r)
    for (auto& v : b[r]) v /= a[r][r];
}

}  // namespace

MachineAnalysis analyze(const Machine& m) {
  MachineAnalysis out;
  out.node_count = m.nodes.size();
  out.outcome_prob.assign(m.outcomes, Rational(0));
  if (m.nodes.empty()) throw Error("machine has no nodes");
  for (const auto& node : m.nodes)
    if (node.leaf() && (node.outcome < 1 || node.outcome > m.outcomes))
      throw Error("leaf " + node.id + " has outcome " + std::to_string(node.outcome) + " outside 1.." +
                  std::to_string(m.outcomes));

  const MachineNode& root = m.nodes.at(m.root);
  if (root.leaf()) {
    out.outcome_prob[root.outcome - 1] = 1;
    return out;
  }

  std::vector<std::size_t> row(m.nodes.size(), 0);
  std::vector<std::size_t> interior;
  for (std::size_t i = 0; i < m.nodes.size(); ++i)
    if (!m.nodes[i].leaf()) {
      row[i] = interior.size();
      interior.push_back(i);
    }
  const std::size_t n = interior.size();
  const std::size_t k = m.outcomes + 1;  // one column per outcome, then flips
  const Rational half(1, 2);
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  std::vector<std::vector<Rational>> b(n, std::vector<Rational>(k));
  for (std::size_t r = 0; r < n; ++r) {
    const MachineNode& node = m.nodes[interior[r]];
    a[r][r] += 1;
    for (std::size_t succ : {node.heads, node.tails}) {
      const MachineNode& s = m.nodes.at(succ);
      if (s.leaf())
        b[r][s.outcome - 1] += half;
      else
        a[r][row[succ]] -= half;
    }
    b[r][m.outcomes] = 1;
  }
  solve(a, b);

  const auto& at_root = b[row[m.root]];
  Rational sum;
  for (std::size_t i = 0; i < m.outcomes; ++i) {
    out.outcome_prob[i] = at_root[i];
    sum += at_root[i];
  }
  if (sum != Rational(1)) throw Error("outcome probabilities sum to " + sum.str() + ", not 1");
  out.expected_flips = at_root[m.outcomes];
  return out;
}

namespace {

struct RawNode {
  std::string id;
  bool leaf = false;
  std::string heads, tails;
  std::size_t outcome = 0;
  std::string label;
  std::size_t line = 0;
};

Error at_line(std::size_t line, const std::string& msg) {
  return Error("line " + std::to_string(line) + ": " + msg);
}

std::size_t parse_count(const std::string& word, std::size_t line, const char* what) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(word, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != word.size() || word[0] == '-') throw at_line(line, std::string("bad ") + what + " '" + word + "'");
  return v;
}

}  // namespace

LoadedMachine load_machine(std::string_view text) {
  std::vector<RawNode> raw;
  std::map<std::string, std::size_t> by_id;
  std::optional<std::string> root;
  std::optional<std::size_t> outcomes;

  std::istringstream in{std::string(text)};
  std::string line_text;
  std::size_t line = 0;
  while (std::getline(in, line_text)) {
    ++line;
    if (auto hash = line_text.find('#'); hash != std::string::npos) line_text.erase(hash);
    std::istringstream words(line_text);
    std::string kw;
    if (!(words >> kw)) continue;
    std::vector<std::string> args;
    for (std::string w; words >> w;) args.push_back(w);
    if (kw == "root") {
      if (args.size() != 1) throw at_line(line, "expected 'root <id>'");
      if (root) throw at_line(line, "duplicate root");
      root = args[0];
    } else if (kw == "outcomes") {
      if (args.size() != 1) throw at_line(line, "expected 'outcomes <N>'");
      outcomes = parse_count(args[0], line, "outcome count");
      if (*outcomes < 1) throw at_line(line, "outcome count must be at least 1");
    } else if (kw == "node") {
      if (args.size() < 2) throw at_line(line, "expected 'node <id> interior|leaf ...'");
      RawNode n;
      n.id = args[0];
      n.line = line;
      if (args[1] == "leaf") {
        if (args.size() != 3) throw at_line(line, "expected 'node <id> leaf <outcome>'");
        n.leaf = true;
        n.outcome = parse_count(args[2], line, "outcome");
        if (n.outcome < 1) throw at_line(line, "leaf outcome must be at least 1");
        n.label = args[2];
      } else if (args[1] == "interior") {
        if (args.size() < 4) throw at_line(line, "interior node needs exactly two successors");
        n.heads = args[2];
        n.tails = args[3];
        for (std::size_t i = 4; i < args.size(); ++i) n.label += (i > 4 ? " " : "") + args[i];
      } else {
        throw at_line(line, "unknown node kind '" + args[1] + "'");
      }
      if (by_id.count(n.id)) throw at_line(line, "duplicate node id '" + n.id + "'");
      by_id[n.id] = raw.size();
      raw.push_back(std::move(n));
    } else {
      throw at_line(line, "unknown directive '" + kw + "'");
    }
  }

  if (raw.empty()) throw Error("machine has no nodes");
  if (!root) throw Error("machine has no root");
  if (!by_id.count(*root)) throw Error("root '" + *root + "' is not a node");
  for (const auto& n : raw) {
    if (n.leaf) continue;
    for (const auto* s : {&n.heads, &n.tails})
      if (!by_id.count(*s)) throw at_line(n.line, "node '" + n.id + "' points to missing id '" + *s + "'");
  }
  std::size_t max_outcome = 0;
  for (const auto& n : raw)
    if (n.leaf) max_outcome = std::max(max_outcome, n.outcome);
  if (!outcomes) outcomes = max_outcome;
  for (const auto& n : raw)
    if (n.leaf && n.outcome > *outcomes)
      throw at_line(n.line, "leaf outcome " + std::to_string(n.outcome) + " exceeds outcomes " +
                                std::to_string(*outcomes));

  // Keep nodes reachable from the root, in file order.
  std::vector<bool> reach(raw.size(), false);
  std::deque<std::size_t> work{by_id[*root]};
  reach[work.front()] = true;
  while (!work.empty()) {
    const RawNode& n = raw[work.front()];
    work.pop_front();
    if (n.leaf) continue;
    for (const auto* s : {&n.heads, &n.tails}) {
      std::size_t j = by_id[*s];
      if (!reach[j]) {
        reach[j] = true;
        work.push_back(j);
      }
    }
  }

  LoadedMachine out;
  out.machine.outcomes = *outcomes;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!reach[i]) {
      out.warnings.push_back("line " + std::to_string(raw[i].line) + ": node '" + raw[i].id +
                             "' is unreachable from the root; dropped");
      continue;
    }
    index[raw[i].id] = out.machine.nodes.size();
    MachineNode n;
    n.id = raw[i].id;
    n.kind = raw[i].leaf ? MachineNode::Kind::Leaf : MachineNode::Kind::Interior;
    n.outcome = raw[i].outcome;
    n.label = raw[i].label;
    out.machine.nodes.push_back(n);
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!reach[i] || raw[i].leaf) continue;
    MachineNode& n = out.machine.nodes[index[raw[i].id]];
    n.heads = index.at(raw[i].heads);
    n.tails = index.at(raw[i].tails);
  }
  out.machine.root = index.at(*root);
  return out;
}

std::string save_machine(const Machine& m) {
  std::ostringstream out;
  out << "outcomes " << m.outcomes << "\n";
  out << "root " << m.nodes.at(m.root).id << "\n";
  for (const auto& n : m.nodes) {
    if (n.leaf()) {
      out << "node " << n.id << " leaf " << n.outcome << "\n";
    } else {
      out << "node " << n.id << " interior " << m.nodes[n.heads].id << " " << m.nodes[n.tails].id;
      if (!n.label.empty()) out << " " << n.label;
      out << "\n";
    }
  }
  return out.str();
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const Machine& m) {
  std::ostringstream out;
  out << "digraph machine {\n";
  out << "  node [fontname=\"Helvetica\"];\n";
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    const auto& n = m.nodes[i];
    out << "  n" << i << " [shape=" << (n.leaf() ? "doublecircle" : "box") << ", label=\""
        << dot_escape(n.label.empty() ? n.id : n.label) << "\"";
    if (i == m.root) out << ", penwidth=2";
    out << "];\n";
  }
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    const auto& n = m.nodes[i];
    if (n.leaf()) continue;
    out << "  n" << i << " -> n" << n.heads << " [label=\"H\"];\n";
    out << "  n" << i << " -> n" << n.tails << " [label=\"T\"];\n";
  }
  out << "}\n";
  return out.str();
}

CrosscheckReport crosscheck(const sampler::WeightedDist& d, std::uint64_t runs, std::uint64_t seed) {
  CrosscheckReport r;
  r.exact = analyze(build_machine(d));
  r.trials = sampler::run_trials(d, runs, seed);
  const double n = static_cast<double>(runs);
  for (std::size_t i = 0; i < d.size(); ++i) {
    double p = r.exact.outcome_prob[i].to_double();
    double observed = static_cast<double>(r.trials.tallies[i]) / n;
    double sd = std::sqrt(p * (1 - p) / n);
    r.freq_z.push_back(sd > 0 ? (observed - p) / sd : 0.0);
  }
  double sd = std::sqrt(r.trials.flip_variance / n);
  double diff = r.trials.avg_flips - r.exact.expected_flips.to_double();
  r.flips_z = sd > 0 ? diff / sd : 0.0;
  return r;
}

}  // namespace pgcl::ddg
