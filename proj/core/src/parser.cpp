#include <cctype>
#include <charconv>
#include <map>
#include <functional>
#include <limits>
#include <optional>
#include <set>

#include "overloaded.hpp"
#include "sessions/error.hpp"
#include "sessions/semantics.hpp"
#include "sessions/syntax.hpp"

namespace sessions {

namespace {

enum class Tok { Ident, Number, IntNumber, String, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

std::string where(const Token& t) { return std::to_string(t.line) + ":" + std::to_string(t.col); }

[[noreturn]] void syntax_error(const Token& t, const std::string& message) {
  throw Error(ErrorKind::SyntaxError, where(t) + ": " + message);
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  static const std::vector<std::string_view> symbols = {"(+)", "->", "==", "++", "{", "}", "(",
                                                         ")",   ";",  ",",  ".",  ":", "=", "|",
                                                         "!",   "?",  "^",  "+",  "-", "*", "<"};
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok{Tok::End, "", line, col};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      tok.kind = Tok::Ident;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      tok.kind = Tok::Number;
      tok.text = std::string(text.substr(i, j - i));
      if (j < text.size() && text[j] == 'i' && (j + 1 == text.size() || !ident_char(text[j + 1]))) {
        tok.kind = Tok::IntNumber;
        ++j;
      } else if (j < text.size() && ident_char(text[j])) {
        tok.text = std::string(text.substr(i, j + 1 - i));
        syntax_error(tok, "malformed number '" + tok.text + "'");
      }
      advance(j - i);
    } else if (c == '"') {
      tok.kind = Tok::String;
      std::size_t j = i + 1;
      for (;; ++j) {
        if (j >= text.size() || text[j] == '\n') syntax_error(tok, "unterminated string");
        if (text[j] == '"') break;
        if (text[j] == '\\') {
          if (j + 1 >= text.size()) syntax_error(tok, "unterminated string");
          char e = text[++j];
          switch (e) {
            case 'n': tok.text += '\n'; break;
            case 't': tok.text += '\t'; break;
            case '"':
            case '\\': tok.text += e; break;
            default: syntax_error(tok, std::string("unknown escape \\") + e);
          }
        } else {
          tok.text += text[j];
        }
      }
      advance(j + 1 - i);
    } else {
      bool matched = false;
      for (auto sym : symbols) {
        if (text.substr(i, sym.size()) == sym) {
          tok.kind = Tok::Symbol;
          tok.text = std::string(sym);
          advance(sym.size());
          matched = true;
          break;
        }
      }
      if (!matched) syntax_error(tok, std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(tok));
  }
  out.push_back(Token{Tok::End, "", line, col});
  return out;
}

const std::set<std::string, std::less<>> keywords = {
    "lattice", "levels", "below", "topics", "indep", "read", "default", "proc", "session",
    "global",  "type",   "rec",   "end",    "true",  "false", "and",    "or",   "not"};

// Checks levels and topics against the declarations seen so far; absent when
// parsing standalone terms.
struct Scope {
  std::set<std::string, std::less<>> levels;
  std::set<std::string, std::less<>> topics;
};

class Parser {
 public:
  Parser(std::string_view text, const Scope* scope) : toks_(lex(text)), scope_(scope) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is_symbol(std::string_view s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Symbol && peek(ahead).text == s;
  }
  bool is_keyword(std::string_view s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Ident && peek(ahead).text == s;
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool accept_symbol(std::string_view s) {
    if (!is_symbol(s)) return false;
    next();
    return true;
  }
  void expect_symbol(std::string_view s) {
    if (!accept_symbol(s)) syntax_error(peek(), "expected '" + std::string(s) + "'" + found());
  }
  void expect_keyword(std::string_view s) {
    if (!is_keyword(s)) syntax_error(peek(), "expected '" + std::string(s) + "'" + found());
    next();
  }
  std::string found() const {
    if (at_end()) return ", found end of input";
    return ", found '" + peek().text + "'";
  }
  Token identifier(const char* what) {
    if (peek().kind != Tok::Ident || keywords.contains(peek().text)) {
      syntax_error(peek(), std::string("expected ") + what + found());
    }
    return next();
  }
  void expect_end() {
    if (!at_end()) syntax_error(peek(), "unexpected trailing input" + found());
  }

  // ^{level,topic}
  std::pair<Level, Topic> classification() {
    expect_symbol("^");
    expect_symbol("{");
    Token level = identifier("a level");
    expect_symbol(",");
    Token topic = identifier("a topic");
    expect_symbol("}");
    if (scope_ != nullptr) {
      if (!scope_->levels.contains(level.text)) {
        throw Error(ErrorKind::UnknownIdentifier, where(level) + ": undeclared level '" + level.text + "'");
      }
      if (!scope_->topics.contains(topic.text)) {
        throw Error(ErrorKind::UnknownIdentifier, where(topic) + ": undeclared topic '" + topic.text + "'");
      }
    }
    return {level.text, topic.text};
  }

  AnnotatedSort annotated_sort() {
    Token name = identifier("a sort");
    auto sort = sort_from_name(name.text);
    if (!sort) syntax_error(name, "unknown sort '" + name.text + "'");
    auto [level, topic] = classification();
    return {*sort, level, topic};
  }

  // ---- expressions -------------------------------------------------------

  Expr expr() { return binary_level(1); }

  std::optional<BinaryOp> binary_op(int level) const {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      if (level == 1 && t.text == "or") return BinaryOp::Or;
      if (level == 2 && t.text == "and") return BinaryOp::And;
      return std::nullopt;
    }
    if (t.kind != Tok::Symbol) return std::nullopt;
    if (level == 3 && t.text == "<") return BinaryOp::Less;
    if (level == 3 && t.text == "==") return BinaryOp::Equal;
    if (level == 4 && t.text == "+") return BinaryOp::Add;
    if (level == 4 && t.text == "-") return BinaryOp::Sub;
    if (level == 4 && t.text == "++") return BinaryOp::Concat;
    if (level == 5 && t.text == "*") return BinaryOp::Mul;
    return std::nullopt;
  }

  Expr binary_level(int level) {
    if (level > 5) return unary();
    Expr lhs = binary_level(level + 1);
    while (auto op = binary_op(level)) {
      next();
      lhs = Expr::binary(*op, lhs, binary_level(level + 1));
    }
    return lhs;
  }

  Expr unary() {
    if (is_keyword("not")) {
      next();
      return Expr::unary(UnaryOp::Not, unary());
    }
    return primary_expr();
  }

  Expr primary_expr() {
    const Token& t = peek();
    if (accept_symbol("(")) {
      Expr e = expr();
      expect_symbol(")");
      return e;
    }
    if (t.kind == Tok::Ident && !keywords.contains(t.text)) return Expr::var(next().text);
    return Expr::lit(literal());
  }

  Value literal() {
    Token t = next();
    Payload payload;
    auto parse_u64 = [&](const std::string& digits) {
      std::uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        syntax_error(t, "number out of range");
      }
      return v;
    };
    if (t.kind == Tok::Number) {
      payload = parse_u64(t.text);
    } else if (t.kind == Tok::IntNumber) {
      std::uint64_t v = parse_u64(t.text);
      if (v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
        syntax_error(t, "int literal out of range");
      }
      payload = static_cast<std::int64_t>(v);
    } else if (t.kind == Tok::Symbol && t.text == "-") {
      Token digits = next();
      if (digits.kind != Tok::Number) syntax_error(digits, "expected digits after '-'");
      std::uint64_t v = parse_u64(digits.text);
      constexpr auto limit = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) + 1;
      if (v > limit) syntax_error(digits, "int literal out of range");
      payload = v == limit ? std::numeric_limits<std::int64_t>::min()
                           : -static_cast<std::int64_t>(v);
    } else if (t.kind == Tok::Ident && (t.text == "true" || t.text == "false")) {
      payload = t.text == "true";
    } else if (t.kind == Tok::String) {
      payload = t.text;
    } else {
      syntax_error(t, "expected an expression, found '" + t.text + "'");
    }
    auto [level, topic] = classification();
    return Value{std::move(payload), level, topic};
  }

  // ---- processes ---------------------------------------------------------

  Process process() {
    Process p = external();
    while (accept_symbol("(+)")) p = Process::internal_choice(p, external());
    return p;
  }

  Process external() {
    Process p = unit();
    while (accept_symbol("+")) p = Process::external_choice(p, unit());
    return p;
  }

  Process unit() {
    if (accept_symbol("(")) {
      Process p = process();
      expect_symbol(")");
      return p;
    }
    if (is_keyword("end")) {
      next();
      return Process::inact();
    }
    if (is_keyword("rec")) {
      next();
      Token var = identifier("a process variable");
      if (!std::isupper(static_cast<unsigned char>(var.text.front()))) {
        syntax_error(var, "process variables start with an upper-case letter");
      }
      std::optional<SessionType> annotation;
      if (accept_symbol(":")) annotation = session_type();
      expect_symbol(".");
      return Process::rec(var.text, unit(), annotation);
    }
    Token name = identifier("a process");
    if (accept_symbol("!")) {
      Token label = identifier("a label");
      expect_symbol("(");
      Expr payload = expr();
      expect_symbol(")");
      expect_symbol(".");
      return Process::output(name.text, label.text, payload, unit());
    }
    if (accept_symbol("?")) {
      Token label = identifier("a label");
      expect_symbol("(");
      Token var = identifier("a variable");
      std::optional<AnnotatedSort> annotation;
      if (accept_symbol(":")) annotation = annotated_sort();
      expect_symbol(")");
      expect_symbol(".");
      return Process::input(name.text, label.text, var.text, annotation, unit());
    }
    if (!std::isupper(static_cast<unsigned char>(name.text.front()))) {
      syntax_error(name, "expected a process, found '" + name.text +
                             "' (process names start with an upper-case letter)");
    }
    return Process::var(name.text);
  }

  // ---- types -------------------------------------------------------------

  SessionType session_type() {
    if (is_keyword("end")) {
      next();
      return SessionType::end();
    }
    if (is_keyword("rec")) {
      next();
      Token var = identifier("a type variable");
      expect_symbol(".");
      return SessionType::rec(var.text, session_type());
    }
    Token name = identifier("a session type");
    bool output = is_symbol("!");
    if (!output && !is_symbol("?")) return SessionType::var(name.text);
    next();
    std::vector<TypeBranch> branches;
    auto branch = [&] {
      Token label = identifier("a label");
      expect_symbol("(");
      AnnotatedSort sort = annotated_sort();
      expect_symbol(")");
      expect_symbol(".");
      branches.push_back({label.text, sort, session_type()});
    };
    if (accept_symbol("{")) {
      do {
        branch();
      } while (accept_symbol(","));
      expect_symbol("}");
    } else {
      branch();
    }
    return output ? SessionType::out(name.text, std::move(branches))
                  : SessionType::in(name.text, std::move(branches));
  }

  GlobalType global_type() {
    if (is_keyword("end")) {
      next();
      return GlobalType::end();
    }
    if (is_keyword("rec")) {
      next();
      Token var = identifier("a type variable");
      expect_symbol(".");
      return GlobalType::rec(var.text, global_type());
    }
    Token from = identifier("a participant");
    if (!accept_symbol("->")) return GlobalType::var(from.text);
    Token to = identifier("a participant");
    expect_symbol(":");
    std::vector<GlobalBranch> branches;
    auto branch = [&] {
      Token label = identifier("a label");
      expect_symbol("(");
      AnnotatedSort sort = annotated_sort();
      expect_symbol(")");
      expect_symbol(".");
      branches.push_back({label.text, sort, global_type()});
    };
    if (accept_symbol("{")) {
      do {
        branch();
      } while (accept_symbol(","));
      expect_symbol("}");
    } else {
      branch();
    }
    return GlobalType::comm(from.text, to.text, std::move(branches));
  }

  std::size_t position() const { return pos_; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Scope* scope_;
};

// ---- models ----------------------------------------------------------------

struct PendingProcess {
  std::string name;
  Process body;
  Token at;
};

class ModelParser {
 public:
  explicit ModelParser(std::string_view text) : p_(text, &scope_) {}

  Model run() {
    while (!p_.at_end()) {
      if (p_.accept_symbol(";")) continue;
      const Token& t = p_.peek();
      if (t.kind != Tok::Ident) syntax_error(t, "expected a declaration" + p_.found());
      if (t.text == "lattice") {
        lattice();
      } else if (t.text == "topics") {
        topics();
      } else if (t.text == "read") {
        read();
      } else if (t.text == "proc") {
        proc();
      } else if (t.text == "session") {
        session();
      } else if (t.text == "global") {
        global();
      } else {
        syntax_error(t, "expected a declaration" + p_.found());
      }
    }
    if (!lattice_) {
      lattice_ = Lattice::validate({"bot"}, {});
      scope_.levels.insert("bot");
    }
    TopicUniverse universe(topic_list_, indep_);
    std::optional<ReadingPolicy> policy;
    if (fallback_) {
      policy.emplace(*lattice_, universe, reads_, *fallback_);
    } else {
      policy.emplace(*lattice_, universe, reads_);
    }
    Model model{SecurityContext{*lattice_, universe, *policy}, {}, {}, {}};
    resolve(model);
    for (auto& [name, g] : globals_) model.globals.emplace_back(name, g);
    return model;
  }

 private:
  void declare(std::set<std::string>& names, const Token& name, const char* what) {
    if (!names.insert(name.text).second) {
      throw Error(ErrorKind::DuplicateDefinition,
                  where(name) + ": " + what + " '" + name.text + "' defined twice");
    }
  }

  void lattice() {
    Token kw = p_.next();
    if (lattice_) {
      throw Error(ErrorKind::DuplicateDefinition, where(kw) + ": lattice declared twice");
    }
    p_.expect_symbol("{");
    p_.expect_keyword("levels");
    std::vector<Level> levels;
    std::set<std::string> seen;
    while (!p_.is_symbol(";")) {
      Token l = p_.identifier("a level");
      declare(seen, l, "level");
      levels.push_back(l.text);
    }
    p_.expect_symbol(";");
    std::vector<CoverPair> covers;
    while (p_.is_keyword("below")) {
      p_.next();
      Token lo = p_.identifier("a level");
      Token hi = p_.identifier("a level");
      for (const auto& t : {lo, hi}) {
        if (!seen.contains(t.text)) {
          throw Error(ErrorKind::UnknownIdentifier, where(t) + ": undeclared level '" + t.text + "'");
        }
      }
      covers.push_back({lo.text, hi.text});
      p_.expect_symbol(";");
    }
    p_.expect_symbol("}");
    if (levels.empty()) syntax_error(kw, "lattice needs at least one level");
    lattice_ = Lattice::validate(levels, covers);
    scope_.levels.insert(levels.begin(), levels.end());
  }

  void topics() {
    Token kw = p_.next();
    if (topics_declared_) {
      throw Error(ErrorKind::DuplicateDefinition, where(kw) + ": topics declared twice");
    }
    topics_declared_ = true;
    p_.expect_symbol("{");
    std::set<std::string> seen;
    while (!p_.is_symbol(";")) {
      Token t = p_.identifier("a topic");
      declare(seen, t, "topic");
      topic_list_.push_back(t.text);
    }
    p_.expect_symbol(";");
    while (p_.is_keyword("indep")) {
      p_.next();
      Token a = p_.identifier("a topic");
      Token b = p_.identifier("a topic");
      for (const auto& t : {a, b}) {
        if (!seen.contains(t.text)) {
          throw Error(ErrorKind::UnknownIdentifier, where(t) + ": undeclared topic '" + t.text + "'");
        }
      }
      if (a.text == b.text) {
        throw Error(ErrorKind::ReflexiveIndependence,
                    where(a) + ": topic '" + a.text + "' cannot be independent of itself");
      }
      indep_.emplace_back(a.text, b.text);
      p_.expect_symbol(";");
    }
    p_.expect_symbol("}");
    scope_.topics.insert(topic_list_.begin(), topic_list_.end());
  }

  void read() {
    Token kw = p_.next();
    if (p_.is_keyword("default")) {
      p_.next();
      p_.expect_symbol("=");
      Token level = known_level();
      if (fallback_) {
        throw Error(ErrorKind::DuplicateDefinition, where(kw) + ": default reading level set twice");
      }
      fallback_ = level.text;
    } else {
      Token who = p_.identifier("a participant");
      Token topic = p_.identifier("a topic");
      if (!scope_.topics.contains(topic.text)) {
        throw Error(ErrorKind::UnknownIdentifier,
                    where(topic) + ": undeclared topic '" + topic.text + "'");
      }
      p_.expect_symbol("=");
      Token level = known_level();
      if (!reads_.emplace(std::make_pair(who.text, topic.text), level.text).second) {
        throw Error(ErrorKind::DuplicateDefinition,
                    where(kw) + ": reading level of " + who.text + " on " + topic.text + " set twice");
      }
    }
    p_.expect_symbol(";");
  }

  Token known_level() {
    Token level = p_.identifier("a level");
    if (!scope_.levels.contains(level.text)) {
      throw Error(ErrorKind::UnknownIdentifier, where(level) + ": undeclared level '" + level.text + "'");
    }
    return level;
  }

  void proc() {
    p_.next();
    Token name = p_.identifier("a process name");
    if (!std::isupper(static_cast<unsigned char>(name.text.front()))) {
      syntax_error(name, "process names start with an upper-case letter");
    }
    declare(names_, name, "name");
    p_.expect_symbol("=");
    procs_.push_back({name.text, p_.process(), name});
  }

  void session() {
    p_.next();
    Token name = p_.identifier("a session name");
    declare(names_, name, "name");
    p_.expect_symbol("=");
    std::vector<std::pair<Token, Process>> components;
    do {
      Token who = p_.identifier("a participant");
      p_.expect_symbol(":");
      components.emplace_back(who, p_.process());
    } while (p_.accept_symbol("|"));
    sessions_.emplace_back(name, std::move(components));
  }

  void global() {
    p_.next();
    Token name = p_.identifier("a global type name");
    declare(names_, name, "name");
    p_.expect_symbol("=");
    Token at = p_.peek();
    GlobalType g = p_.global_type();
    try {
      wf_global_type(g);
    } catch (const Error& e) {
      throw Error(e.kind(), where(at) + ": " + e.detail());
    }
    globals_.emplace_back(name.text, g);
  }

  // Inlines named processes, innermost first, rejecting cyclic definitions.
  void resolve(Model& model) {
    std::map<std::string, const PendingProcess*> by_name;
    for (const auto& p : procs_) by_name[p.name] = &p;
    std::map<std::string, Process> done;
    std::set<std::string> active;
    std::function<Process(const PendingProcess&)> inline_named = [&](const PendingProcess& p) {
      if (auto it = done.find(p.name); it != done.end()) return it->second;
      if (!active.insert(p.name).second) {
        throw Error(ErrorKind::UnknownIdentifier,
                    where(p.at) + ": process '" + p.name + "' is defined in terms of itself");
      }
      Process body = p.body;
      for (const auto& var : free_process_vars(body)) {
        auto it = by_name.find(var);
        if (it == by_name.end()) {
          throw Error(ErrorKind::UnknownIdentifier,
                      where(p.at) + ": unknown process '" + var + "' in " + p.name);
        }
        body = substitute_process(body, var, inline_named(*it->second));
      }
      active.erase(p.name);
      done.emplace(p.name, body);
      return body;
    };
    for (const auto& p : procs_) model.processes.emplace_back(p.name, inline_named(p));
    for (const auto& [name, components] : sessions_) {
      Session s;
      for (const auto& [who, body] : components) {
        Process resolved = body;
        for (const auto& var : free_process_vars(body)) {
          auto it = by_name.find(var);
          if (it == by_name.end()) {
            throw Error(ErrorKind::UnknownIdentifier,
                        where(who) + ": unknown process '" + var + "'");
          }
          resolved = substitute_process(resolved, var, done.at(var));
        }
        s.components.push_back({who.text, resolved});
      }
      model.sessions.emplace_back(name.text, std::move(s));
    }
  }

  Scope scope_;
  Parser p_;
  std::optional<Lattice> lattice_;
  bool topics_declared_ = false;
  std::vector<Topic> topic_list_;
  std::vector<std::pair<Topic, Topic>> indep_;
  ReadingPolicy::Entries reads_;
  std::optional<Level> fallback_;
  std::set<std::string> names_;
  std::vector<PendingProcess> procs_;
  std::vector<std::pair<Token, std::vector<std::pair<Token, Process>>>> sessions_;
  std::vector<std::pair<std::string, GlobalType>> globals_;
};

template <typename T, typename F>
T parse_whole(std::string_view text, F parse) {
  Parser p(text, nullptr);
  T out = parse(p);
  p.expect_end();
  return out;
}

}  // namespace

Model parse_model(std::string_view text) { return ModelParser(text).run(); }

Process parse_process(std::string_view text) {
  return parse_whole<Process>(text, [](Parser& p) { return p.process(); });
}

Expr parse_expr(std::string_view text) {
  return parse_whole<Expr>(text, [](Parser& p) { return p.expr(); });
}

SessionType parse_session_type(std::string_view text) {
  return parse_whole<SessionType>(text, [](Parser& p) { return p.session_type(); });
}

GlobalType parse_global_type(std::string_view text) {
  return parse_whole<GlobalType>(text, [](Parser& p) { return p.global_type(); });
}

const Process* Model::process(std::string_view name) const {
  for (const auto& [n, p] : processes) {
    if (n == name) return &p;
  }
  return nullptr;
}

const Session* Model::session(std::string_view name) const {
  for (const auto& [n, s] : sessions) {
    if (n == name) return &s;
  }
  return nullptr;
}

const GlobalType* Model::global(std::string_view name) const {
  for (const auto& [n, g] : globals) {
    if (n == name) return &g;
  }
  return nullptr;
}

bool same_model(const Model& a, const Model& b) {
  const auto& la = a.security.lattice;
  const auto& lb = b.security.lattice;
  if (la.levels() != lb.levels()) return false;
  for (const auto& x : la.levels()) {
    for (const auto& y : la.levels()) {
      if (la.leq(x, y) != lb.leq(x, y)) return false;
    }
  }
  return a.security.topics.topics() == b.security.topics.topics() &&
         a.security.topics.independent_pairs() == b.security.topics.independent_pairs() &&
         a.security.policy.entries() == b.security.policy.entries() &&
         a.security.policy.fallback() == b.security.policy.fallback() &&
         a.processes == b.processes && a.sessions == b.sessions && a.globals == b.globals;
}

}  // namespace sessions
