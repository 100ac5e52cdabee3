#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "pgcl/expr.hpp"

namespace pgcl {

struct ProgramNode;

// Immutable pGCL command tree. Copies share structure.
class Program {
 public:
  Program();  // SKIP
  explicit Program(std::shared_ptr<const ProgramNode> node) : node_(std::move(node)) {}

  const ProgramNode& node() const { return *node_; }
  // Identity of the node, stable across copies of this Program.
  const void* id() const { return node_.get(); }

 private:
  std::shared_ptr<const ProgramNode> node_;
};

struct VarRef {
  std::string name;
  std::size_t index = 0;
  friend bool operator==(const VarRef&, const VarRef&) = default;
};

struct Skip {};
struct Abort {};
// x1, ..., xn := e1, ..., en (simultaneous)
struct Assign {
  std::vector<VarRef> targets;
  std::vector<Expr> values;
};
struct Seq {
  Program first;
  Program second;
};
struct IfBool {
  Expr condition;
  Program then_branch;
  Program else_branch;
};
// IF p THEN P ELSE Q with numeric p
struct IfProb {
  Expr probability;
  Program then_branch;
  Program else_branch;
};
// A numeric guard makes this a probabilistic loop.
struct While {
  Expr guard;
  Program body;
};
struct ProbChoice {
  Expr probability;
  Program left;
  Program right;
};
struct DemonChoice {
  Program left;
  Program right;
};
// x :in e1 <p> e2
struct ProbAssign {
  VarRef target;
  Expr left;
  Expr probability;
  Expr right;
};
// x :in e1 |^| e2
struct DemonAssign {
  VarRef target;
  Expr left;
  Expr right;
};
struct ChooseFromSet {
  VarRef target;
  std::vector<Expr> elements;
};
// x1, ..., xn :suchthat pred, ranging over the declared domains
struct SuchThat {
  std::vector<VarRef> targets;
  Expr predicate;
};
struct DistEntry {
  Expr value;
  Expr probability;
};
struct ChooseFromDist {
  VarRef target;
  std::vector<DistEntry> entries;
};
struct GuardedBranch {
  Expr guard;
  Program body;
};
struct GuardedIf {
  std::vector<GuardedBranch> branches;
};
struct Assert {
  Expr predicate;
};

struct ProgramNode {
  std::variant<Skip, Abort, Assign, Seq, IfBool, IfProb, While, ProbChoice, DemonChoice, ProbAssign,
               DemonAssign, ChooseFromSet, SuchThat, ChooseFromDist, GuardedIf, Assert>
      v;
};

template <typename T>
Program make_program(T node) {
  return Program(std::make_shared<const ProgramNode>(ProgramNode{std::move(node)}));
}

template <typename T>
const T* as(const Program& p) {
  return std::get_if<T>(&p.node().v);
}

bool operator==(const Program& a, const Program& b);

bool is_loop_free(const Program& p);
bool has_demonic_choice(const Program& p);
bool has_probabilistic_choice(const Program& p);

// First While node in program order, or nullptr.
const While* find_loop(const Program& p);

// Guards, conditions and assertion predicates with a boolean reading.
void collect_predicates(const Program& p, std::vector<Expr>& out);

// Canonical concrete syntax; re-parses to an equal tree.
std::string to_text(const Program& p);

}  // namespace pgcl
