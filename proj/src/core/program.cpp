#include "pgcl/program.hpp"

#include <sstream>

namespace pgcl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Program::Program() : Program(make_program(Skip{})) {}

bool operator==(const Program& a, const Program& b) {
  if (a.id() == b.id()) return true;
  const auto& x = a.node().v;
  const auto& y = b.node().v;
  if (x.index() != y.index()) return false;
  return std::visit(
      overloaded{
          [](const Skip&) { return true; },
          [](const Abort&) { return true; },
          [&](const Assign& n) {
            const auto& m = std::get<Assign>(y);
            return n.targets == m.targets && n.values == m.values;
          },
          [&](const Seq& n) {
            const auto& m = std::get<Seq>(y);
            return n.first == m.first && n.second == m.second;
          },
          [&](const IfBool& n) {
            const auto& m = std::get<IfBool>(y);
            return n.condition == m.condition && n.then_branch == m.then_branch && n.else_branch == m.else_branch;
          },
          [&](const IfProb& n) {
            const auto& m = std::get<IfProb>(y);
            return n.probability == m.probability && n.then_branch == m.then_branch &&
                   n.else_branch == m.else_branch;
          },
          [&](const While& n) {
            const auto& m = std::get<While>(y);
            return n.guard == m.guard && n.body == m.body;
          },
          [&](const ProbChoice& n) {
            const auto& m = std::get<ProbChoice>(y);
            return n.probability == m.probability && n.left == m.left && n.right == m.right;
          },
          [&](const DemonChoice& n) {
            const auto& m = std::get<DemonChoice>(y);
            return n.left == m.left && n.right == m.right;
          },
          [&](const ProbAssign& n) {
            const auto& m = std::get<ProbAssign>(y);
            return n.target == m.target && n.left == m.left && n.probability == m.probability &&
                   n.right == m.right;
          },
          [&](const DemonAssign& n) {
            const auto& m = std::get<DemonAssign>(y);
            return n.target == m.target && n.left == m.left && n.right == m.right;
          },
          [&](const ChooseFromSet& n) {
            const auto& m = std::get<ChooseFromSet>(y);
            return n.target == m.target && n.elements == m.elements;
          },
          [&](const SuchThat& n) {
            const auto& m = std::get<SuchThat>(y);
            return n.targets == m.targets && n.predicate == m.predicate;
          },
          [&](const ChooseFromDist& n) {
            const auto& m = std::get<ChooseFromDist>(y);
            if (!(n.target == m.target) || n.entries.size() != m.entries.size()) return false;
            for (std::size_t i = 0; i < n.entries.size(); ++i)
              if (!(n.entries[i].value == m.entries[i].value) ||
                  !(n.entries[i].probability == m.entries[i].probability))
                return false;
            return true;
          },
          [&](const GuardedIf& n) {
            const auto& m = std::get<GuardedIf>(y);
            if (n.branches.size() != m.branches.size()) return false;
            for (std::size_t i = 0; i < n.branches.size(); ++i)
              if (!(n.branches[i].guard == m.branches[i].guard) || !(n.branches[i].body == m.branches[i].body))
                return false;
            return true;
          },
          [&](const Assert& n) { return n.predicate == std::get<Assert>(y).predicate; },
      },
      x);
}

namespace {

// Calls f on every direct sub-program.
template <typename F>
void for_each_child(const Program& p, F&& f) {
  std::visit(overloaded{
                 [&](const Seq& n) { f(n.first), f(n.second); },
                 [&](const IfBool& n) { f(n.then_branch), f(n.else_branch); },
                 [&](const IfProb& n) { f(n.then_branch), f(n.else_branch); },
                 [&](const While& n) { f(n.body); },
                 [&](const ProbChoice& n) { f(n.left), f(n.right); },
                 [&](const DemonChoice& n) { f(n.left), f(n.right); },
                 [&](const GuardedIf& n) {
                   for (const auto& b : n.branches) f(b.body);
                 },
                 [](const auto&) {},
             },
             p.node().v);
}

template <typename Pred>
bool any_node(const Program& p, Pred&& pred) {
  if (pred(p)) return true;
  bool found = false;
  for_each_child(p, [&](const Program& c) { found = found || any_node(c, pred); });
  return found;
}

}  // namespace

bool is_loop_free(const Program& p) {
  return !any_node(p, [](const Program& q) { return as<While>(q) != nullptr; });
}

bool has_demonic_choice(const Program& p) {
  return any_node(p, [](const Program& q) {
    return as<DemonChoice>(q) || as<DemonAssign>(q) || as<ChooseFromSet>(q) || as<SuchThat>(q) ||
           as<GuardedIf>(q);
  });
}

bool has_probabilistic_choice(const Program& p) {
  return any_node(p, [](const Program& q) {
    if (as<ProbChoice>(q) || as<ProbAssign>(q) || as<IfProb>(q) || as<ChooseFromDist>(q)) return true;
    const auto* w = as<While>(q);
    return w && !w->guard.is_boolean();
  });
}

const While* find_loop(const Program& p) {
  if (const auto* w = as<While>(p)) return w;
  const While* found = nullptr;
  for_each_child(p, [&](const Program& c) {
    if (!found) found = find_loop(c);
  });
  return found;
}

void collect_predicates(const Program& p, std::vector<Expr>& out) {
  auto add = [&](const Expr& e) {
    if (!e.is_boolean()) return;
    for (const auto& seen : out)
      if (seen == e) return;
    out.push_back(e);
  };
  std::visit(overloaded{
                 [&](const IfBool& n) { add(n.condition); },
                 [&](const While& n) { add(n.guard); },
                 [&](const GuardedIf& n) {
                   for (const auto& b : n.branches) add(b.guard);
                 },
                 [&](const Assert& n) { add(n.predicate); },
                 [&](const SuchThat& n) { add(n.predicate); },
                 [](const auto&) {},
             },
             p.node().v);
  for_each_child(p, [&](const Program& c) { collect_predicates(c, out); });
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string join(const std::vector<Expr>& es) {
  std::string out;
  for (std::size_t i = 0; i < es.size(); ++i) out += (i ? ", " : "") + to_text(es[i]);
  return out;
}

std::string join(const std::vector<VarRef>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) out += (i ? "," : "") + vs[i].name;
  return out;
}

std::string indent_lines(const std::string& text, const std::string& pad) {
  std::string out = pad;
  for (char c : text) {
    out += c;
    if (c == '\n') out += pad;
  }
  return out;
}

// Statements that can stand as a choice operand without parentheses.
bool is_closed(const Program& p) {
  return as<Skip>(p) || as<Abort>(p) || as<Assign>(p) || as<ChooseFromSet>(p) || as<ChooseFromDist>(p) ||
         as<Assert>(p) || as<While>(p) || as<GuardedIf>(p) || as<IfBool>(p) || as<IfProb>(p);
}

std::string operand(const Program& p) {
  std::string s = to_text(p);
  return is_closed(p) ? s : "(" + s + ")";
}

std::string block(const Program& p) { return indent_lines(to_text(p), "  "); }

}  // namespace

std::string to_text(const Program& p) {
  return std::visit(
      overloaded{
          [](const Skip&) -> std::string { return "SKIP"; },
          [](const Abort&) -> std::string { return "ABORT"; },
          [](const Assign& n) { return join(n.targets) + " := " + join(n.values); },
          [](const Seq& n) {
            // Sequencing parses right-nested.
            std::string head = as<Seq>(n.first) ? "(" + to_text(n.first) + ")" : to_text(n.first);
            return head + ";\n" + to_text(n.second);
          },
          [](const IfBool& n) {
            return "IF " + to_text(n.condition) + " THEN\n" + block(n.then_branch) + "\nELSE\n" +
                   block(n.else_branch) + "\nFI";
          },
          [](const IfProb& n) {
            return "IF " + to_text(n.probability) + " THEN\n" + block(n.then_branch) + "\nELSE\n" +
                   block(n.else_branch) + "\nFI";
          },
          [](const While& n) { return "WHILE " + to_text(n.guard) + " DO\n" + block(n.body) + "\nOD"; },
          [](const ProbChoice& n) {
            return operand(n.left) + " <" + to_text(n.probability) + "> " + operand(n.right);
          },
          [](const DemonChoice& n) { return operand(n.left) + " |^| " + operand(n.right); },
          [](const ProbAssign& n) {
            return n.target.name + " :in " + to_text(n.left) + " <" + to_text(n.probability) + "> " +
                   to_text(n.right);
          },
          [](const DemonAssign& n) {
            return n.target.name + " :in " + to_text(n.left) + " |^| " + to_text(n.right);
          },
          [](const ChooseFromSet& n) { return n.target.name + " :in {" + join(n.elements) + "}"; },
          [](const SuchThat& n) { return join(n.targets) + " :suchthat " + to_text(n.predicate); },
          [](const ChooseFromDist& n) {
            std::string out = n.target.name + " :dist [";
            for (std::size_t i = 0; i < n.entries.size(); ++i)
              out += (i ? ", " : "") + to_text(n.entries[i].value) + ": " + to_text(n.entries[i].probability);
            return out + "]";
          },
          [](const GuardedIf& n) {
            std::string out;
            for (std::size_t i = 0; i < n.branches.size(); ++i)
              out += (i ? "\n[] " : "IF ") + to_text(n.branches[i].guard) + " ->\n" + block(n.branches[i].body);
            return out + "\nFI";
          },
          [](const Assert& n) { return "{ " + to_text(n.predicate) + " }"; },
      },
      p.node().v);
}

}  // namespace pgcl
