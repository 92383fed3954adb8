#include <sstream>

#include "overloaded.hpp"
#include "sessions/syntax.hpp"

namespace sessions {

using detail::overloaded;

namespace {

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Less:
    case BinaryOp::Equal: return 3;
    case BinaryOp::Add:
    case BinaryOp::Sub:
    case BinaryOp::Concat: return 4;
    case BinaryOp::Mul: return 5;
  }
  return 0;
}

void print_expr(std::ostream& os, const Expr& e, int context) {
  std::visit(overloaded{
                 [&](const VarExpr& v) { os << v.name; },
                 [&](const LitExpr& l) { os << to_string(l.value); },
                 [&](const BinaryExpr& b) {
                   int prec = precedence(b.op);
                   bool paren = prec < context;
                   if (paren) os << '(';
                   print_expr(os, b.lhs, prec);
                   os << ' ' << symbol(b.op) << ' ';
                   print_expr(os, b.rhs, prec + 1);
                   if (paren) os << ')';
                 },
                 [&](const UnaryExpr& u) {
                   os << symbol(u.op) << ' ';
                   print_expr(os, u.operand, 6);
                 },
             },
             e.node().v);
}

void print_type(std::ostream& os, const SessionType& t);

void print_type_branches(std::ostream& os, const Participant& peer, char op,
                         const std::vector<TypeBranch>& branches) {
  os << peer << op;
  if (branches.size() != 1) os << '{';
  for (std::size_t i = 0; i < branches.size(); ++i) {
    if (i > 0) os << ", ";
    os << branches[i].label << '(' << to_string(branches[i].sort) << ").";
    print_type(os, branches[i].next);
  }
  if (branches.size() != 1) os << '}';
}

void print_type(std::ostream& os, const SessionType& t) {
  std::visit(overloaded{
                 [&](const OutType& o) { print_type_branches(os, o.peer, '!', o.branches); },
                 [&](const InType& i) { print_type_branches(os, i.peer, '?', i.branches); },
                 [&](const RecType& r) {
                   os << "rec " << r.var << " . ";
                   print_type(os, r.body);
                 },
                 [&](const VarType& v) { os << v.name; },
                 [&](const EndType&) { os << "end"; },
             },
             t.node().v);
}

void print_global(std::ostream& os, const GlobalType& g) {
  std::visit(overloaded{
                 [&](const CommGlobal& c) {
                   os << c.from << " -> " << c.to << " : ";
                   if (c.branches.size() == 1) {
                     const auto& b = c.branches.front();
                     os << b.label << '(' << to_string(b.sort) << ") . ";
                     print_global(os, b.next);
                     return;
                   }
                   os << '{';
                   for (std::size_t i = 0; i < c.branches.size(); ++i) {
                     if (i > 0) os << ", ";
                     const auto& b = c.branches[i];
                     os << b.label << '(' << to_string(b.sort) << ") . ";
                     print_global(os, b.next);
                   }
                   os << '}';
                 },
                 [&](const RecGlobal& r) {
                   os << "rec " << r.var << " . ";
                   print_global(os, r.body);
                 },
                 [&](const VarGlobal& v) { os << v.name; },
                 [&](const EndGlobal&) { os << "end"; },
             },
             g.node().v);
}

// Contexts: 0 anywhere, 1 operand of (+), 2 operand of +, 3 after a prefix.
void print_process(std::ostream& os, const Process& p, int context) {
  auto binary = [&](const Process& l, const Process& r, int prec, const char* op) {
    bool paren = context > prec;
    if (paren) os << '(';
    print_process(os, l, prec);
    os << ' ' << op << ' ';
    print_process(os, r, prec + 1);
    if (paren) os << ')';
  };
  std::visit(overloaded{
                 [&](const OutputProc& o) {
                   os << o.to << '!' << o.label << '(';
                   print_expr(os, o.payload, 0);
                   os << ").";
                   print_process(os, o.next, 3);
                 },
                 [&](const InputProc& i) {
                   os << i.from << '?' << i.label << '(' << i.var;
                   if (i.annotation) os << ':' << to_string(*i.annotation);
                   os << ").";
                   print_process(os, i.next, 3);
                 },
                 [&](const InternalChoiceProc& c) { binary(c.left, c.right, 1, "(+)"); },
                 [&](const ExternalChoiceProc& c) { binary(c.left, c.right, 2, "+"); },
                 [&](const RecProc& r) {
                   os << "rec " << r.var;
                   if (r.annotation) {
                     os << " : ";
                     print_type(os, *r.annotation);
                   }
                   os << " . ";
                   print_process(os, r.body, 3);
                 },
                 [&](const VarProc& v) { os << v.name; },
                 [&](const InactProc&) { os << "end"; },
             },
             p.node().v);
}

std::string escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + '"';
}

template <typename T, typename F>
std::string render(const T& value, F print) {
  std::ostringstream os;
  print(os, value);
  return os.str();
}

}  // namespace

std::string to_string(const Payload& payload) {
  return std::visit(overloaded{
                        [](std::uint64_t n) { return std::to_string(n); },
                        [](std::int64_t n) {
                          if (n >= 0) return std::to_string(n) + "i";
                          auto magnitude = static_cast<std::uint64_t>(-(n + 1)) + 1;
                          return "-" + std::to_string(magnitude);
                        },
                        [](bool b) { return std::string(b ? "true" : "false"); },
                        [](const std::string& s) { return escape(s); },
                    },
                    payload);
}

std::string to_string(const Value& value) {
  return to_string(value.payload) + "^{" + value.level + "," + value.topic + "}";
}

std::string to_string(const AnnotatedSort& sort) {
  return std::string(to_string(sort.sort)) + "^{" + sort.level + "," + sort.topic + "}";
}

std::string to_string(const Expr& expr) {
  return render(expr, [](std::ostream& os, const Expr& e) { print_expr(os, e, 0); });
}

std::string to_string(const Process& process) {
  return render(process, [](std::ostream& os, const Process& p) { print_process(os, p, 0); });
}

std::string to_string(const Session& session) {
  std::string out;
  for (const auto& c : session.components) {
    if (!out.empty()) out += " | ";
    out += c.participant + " : " + to_string(c.process);
  }
  return out;
}

std::string to_string(const SessionType& type) { return render(type, print_type); }

std::string to_string(const GlobalType& type) { return render(type, print_global); }

std::string to_string(const SessionAction& action) {
  if (const auto* m = as_message(action)) {
    return m->from + " -> " + m->to + " : " + m->label + "(" + to_string(m->value) + ")";
  }
  return "tau";
}

std::string to_string(const Model& model) {
  std::ostringstream os;
  const auto& lattice = model.security.lattice;
  os << "lattice {\n  levels";
  for (const auto& l : lattice.levels()) os << ' ' << l;
  os << ";\n";
  for (const auto& a : lattice.levels()) {
    for (const auto& b : lattice.levels()) {
      if (a != b && lattice.leq(a, b)) os << "  below " << a << ' ' << b << ";\n";
    }
  }
  os << "}\n";
  os << "topics {\n ";
  for (const auto& t : model.security.topics.topics()) os << ' ' << t;
  os << ";\n";
  for (const auto& [a, b] : model.security.topics.independent_pairs()) {
    os << "  indep " << a << ' ' << b << ";\n";
  }
  os << "}\n";
  for (const auto& [key, level] : model.security.policy.entries()) {
    os << "read " << key.first << ' ' << key.second << " = " << level << ";\n";
  }
  os << "read default = " << model.security.policy.fallback() << ";\n";
  for (const auto& [name, p] : model.processes) os << "proc " << name << " = " << p << ";\n";
  for (const auto& [name, g] : model.globals) os << "global " << name << " = " << g << ";\n";
  for (const auto& [name, s] : model.sessions) os << "session " << name << " = " << s << ";\n";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Value& value) { return os << to_string(value); }
std::ostream& operator<<(std::ostream& os, const AnnotatedSort& sort) {
  return os << to_string(sort);
}
std::ostream& operator<<(std::ostream& os, const Expr& expr) { return os << to_string(expr); }
std::ostream& operator<<(std::ostream& os, const Process& process) {
  return os << to_string(process);
}
std::ostream& operator<<(std::ostream& os, const Session& session) {
  return os << to_string(session);
}
std::ostream& operator<<(std::ostream& os, const SessionType& type) { return os << to_string(type); }
std::ostream& operator<<(std::ostream& os, const GlobalType& type) { return os << to_string(type); }
std::ostream& operator<<(std::ostream& os, const SessionAction& action) {
  return os << to_string(action);
}

}  // namespace sessions
