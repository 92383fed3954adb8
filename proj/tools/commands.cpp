#include "commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "sessions/checker.hpp"
#include "sessions/error.hpp"
#include "sessions/generate.hpp"
#include "sessions/oracle.hpp"
#include "sessions/projection.hpp"
#include "sessions/properties.hpp"
#include "sessions/report.hpp"
#include "sessions/semantics.hpp"
#include "sessions/syntax.hpp"
#include "sessions/type_relations.hpp"

namespace sessions::cli {

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kInputError = 2;

struct Options {
  std::string file;
  std::string session;
  std::string global;
  std::string json;
  std::string participant;
  std::size_t depth = 5;
  std::size_t steps = 5;
  std::uint64_t seed = 0;
  std::size_t random = 0;
  bool check_safe = false;
};

// Raised for unreadable files and unknown names; maps to exit code 2.
struct InputError {
  std::string message;
};

bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError:
    case ErrorKind::UnknownIdentifier:
    case ErrorKind::DuplicateDefinition:
    case ErrorKind::NotAPartialOrder:
    case ErrorKind::NotALattice:
    case ErrorKind::UnknownLevel:
    case ErrorKind::UnknownTopic:
    case ErrorKind::ReflexiveIndependence:
    case ErrorKind::InvalidArgument:
    case ErrorKind::Unguarded:
    case ErrorKind::FreeVariable:
    case ErrorKind::FreeTypeVariable:
    case ErrorKind::SelfCommunication:
    case ErrorKind::EmptyChoice:
    case ErrorKind::DuplicateLabel:
    case ErrorKind::DuplicateParticipant:
      return true;
    default:
      return false;
  }
}

class Paint {
 public:
  Paint() {
    const char* env = std::getenv("SESSIONS_COLOR");
    enabled_ = env != nullptr && std::string(env) == "1";
  }
  std::string good(const std::string& s) const { return wrap("32", s); }
  std::string bad(const std::string& s) const { return wrap("31", s); }

 private:
  std::string wrap(const char* code, const std::string& s) const {
    if (!enabled_) return s;
    return std::string("\x1b[") + code + "m" + s + "\x1b[0m";
  }
  bool enabled_ = false;
};

struct Loaded {
  std::string digest;
  Model model;
};

Loaded load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{"cannot read " + path};
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  return Loaded{input_digest(text), parse_model(text)};
}

template <typename T>
const T& named(const std::vector<std::pair<std::string, T>>& items, const std::string& name,
               const char* what) {
  if (items.empty()) throw InputError{std::string("model has no ") + what};
  if (name.empty()) return items.front().second;
  for (const auto& [n, item] : items) {
    if (n == name) return item;
  }
  throw InputError{std::string("no ") + what + " named '" + name + "'"};
}

void write_json(const Options& opt, const Json& report, std::ostream& out) {
  if (opt.json.empty()) return;
  if (opt.json == "-") {
    out << report.dump(2) << '\n';
    return;
  }
  // Written to a sibling file first so readers never see a partial report.
  std::string tmp = opt.json + ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw InputError{"cannot write " + opt.json};
    file << report.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, opt.json);
}

int cmd_check(const Options& opt, std::ostream& out, std::ostream& json_out) {
  Paint paint;
  Loaded in = load(opt.file);
  const auto& session = named(in.model.sessions, opt.session, "session");
  const auto& global = named(in.model.globals, opt.global, "global type");
  SessionReport report = check_session(session, global, in.model.security);
  for (const auto& p : report.participants) {
    out << p.participant << ": " << (p.ok ? paint.good("ok") : paint.bad("rejected")) << '\n';
    if (p.projection) out << "  projection: " << *p.projection << '\n';
    if (p.type) out << "  type: " << *p.type << '\n';
    if (p.error) out << "  error: " << to_string(*p.error) << ": " << p.detail << '\n';
  }
  if (report.ok) {
    out << "verdict: " << paint.good("ok") << '\n';
  } else {
    out << "verdict: " << paint.bad("rejected") << " (" << to_string(*report.error) << ": "
        << report.detail << ")\n";
  }
  write_json(opt, session_report_json(report, in.digest), json_out);
  if (report.ok) return kOk;
  return is_input_error(*report.error) ? kInputError : kFailure;
}

int cmd_project(const Options& opt, std::ostream& out, std::ostream& json_out) {
  Loaded in = load(opt.file);
  const auto& global = named(in.model.globals, opt.global, "global type");
  std::vector<Participant> targets;
  if (!opt.participant.empty()) {
    targets.push_back(opt.participant);
  } else {
    for (const auto& p : participants(global)) targets.push_back(p);
  }
  Json report = report_skeleton("project", in.digest, "ok");
  int code = kOk;
  Json projections = Json::object();
  for (const auto& p : targets) {
    SessionType t;
    try {
      t = project(global, p);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotProjectable) throw;
      out << (targets.size() > 1 ? p + ": " : "") << "not projectable: " << e.detail() << '\n';
      report["verdict"] = "rejected";
      report["findings"].push_back(
          Json{{"kind", "NotProjectable"}, {"indices", Json::array()}, {"trace", Json::array()},
               {"detail", e.detail()}, {"participant", p}});
      code = kFailure;
      continue;
    }
    out << (targets.size() > 1 ? p + ": " : "") << t << '\n';
    projections[p] = to_string(t);
    if (opt.check_safe) {
      auto why = unsafe_reason(t, in.model.security);
      out << (targets.size() > 1 ? p + ": " : "") << (why ? "unsafe: " + *why : "safe") << '\n';
      if (why) {
        report["verdict"] = "rejected";
        report["findings"].push_back(Json{{"kind", "UnsafeType"}, {"indices", Json::array()},
                                          {"trace", Json::array()}, {"detail", *why},
                                          {"participant", p}});
        code = kFailure;
      }
    }
  }
  report["projections"] = std::move(projections);
  write_json(opt, report, json_out);
  return code;
}

void print_trace(std::ostream& out, const Trace& trace, const std::string& indent) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << indent << i << ": " << to_string(trace[i]) << '\n';
  }
}

int cmd_oracle(const Options& opt, std::ostream& out, std::ostream& json_out) {
  Paint paint;
  Loaded in = load(opt.file);
  const auto& session = named(in.model.sessions, opt.session, "session");
  SafetyReport report = check_safe_session(session, opt.depth, in.model.security);
  for (const auto& v : report.violations) {
    out << paint.bad(std::string(to_string(v.kind))) << " violation at";
    for (auto i : v.indices) out << ' ' << i;
    out << ": " << v.explanation << '\n';
    print_trace(out, v.trace, "  ");
  }
  out << (report.safe ? paint.good("safe") : paint.bad("unsafe")) << " up to depth " << opt.depth
      << " (" << report.traces_explored << " traces, " << report.violations.size()
      << " violations)\n";
  write_json(opt, safety_report_json(report, in.digest), json_out);
  return report.safe ? kOk : kFailure;
}

int cmd_simulate(const Options& opt, std::ostream& out, std::ostream& json_out) {
  Loaded in = load(opt.file);
  Session current = named(in.model.sessions, opt.session, "session");
  validate_session(current);
  Rng rng(opt.seed);
  Trace trace;
  for (std::size_t i = 0; i < opt.depth; ++i) {
    auto steps = step_session(current, in.model.security.lattice);
    if (steps.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, steps.size() - 1);
    const auto& step = steps[pick(rng)];
    trace.push_back(step.action);
    out << to_string(step.action) << '\n';
    current = step.next;
  }
  Json report = report_skeleton("simulate", in.digest, "ok");
  report["seed"] = opt.seed;
  report["trace"] = to_json(trace);
  write_json(opt, report, json_out);
  return kOk;
}

struct PropertyRun {
  std::size_t models = 0;
  std::size_t typable = 0;
  std::size_t failures = 0;
};

Json property_finding(const PropertyReport& r) {
  Json f;
  f["kind"] = r.property;
  f["indices"] = Json::array();
  f["trace"] = r.witness ? to_json(*r.witness) : Json::array();
  f["detail"] = r.detail;
  Json chain = Json::array();
  for (const auto& g : r.chain) chain.push_back(to_string(g));
  f["globals"] = std::move(chain);
  return f;
}

template <typename Property>
int run_property(const Options& opt, std::ostream& out, std::ostream& json_out, const char* command,
                 Property property) {
  Paint paint;
  if (opt.random > 0) {
    Rng rng(opt.seed);
    PropertyRun run;
    Json report = report_skeleton(command, "", "PASS");
    for (std::size_t i = 0; i < opt.random; ++i) {
      auto model = generate_typable_model(rng);
      if (!model) continue;
      ++run.models;
      PropertyReport r = property(model->session, model->global, model->security);
      if (r.verdict == PropertyVerdict::Pass) ++run.typable;
      if (r.passed()) continue;
      ++run.failures;
      out << paint.bad("FAIL") << ": " << r.detail << '\n';
      out << "  session: " << model->session << '\n';
      out << "  global: " << model->global << '\n';
      if (r.witness) print_trace(out, *r.witness, "  ");
      Json f = property_finding(r);
      f["session"] = to_string(model->session);
      f["global"] = to_string(model->global);
      report["findings"].push_back(std::move(f));
    }
    bool ok = run.failures == 0;
    out << (ok ? paint.good("PASS") : paint.bad("FAIL")) << ": " << run.models << " models, "
        << run.typable << " checked, " << run.failures << " failures\n";
    report["verdict"] = ok ? "PASS" : "FAIL";
    report["models"] = run.models;
    report["checked"] = run.typable;
    write_json(opt, report, json_out);
    return ok ? kOk : kFailure;
  }
  Loaded in = load(opt.file);
  const auto& session = named(in.model.sessions, opt.session, "session");
  const auto& global = named(in.model.globals, opt.global, "global type");
  PropertyReport r = property(session, global, in.model.security);
  std::string verdict(to_string(r.verdict));
  out << (r.passed() ? paint.good(verdict) : paint.bad(verdict)) << ": " << r.detail << '\n';
  if (r.witness && !r.passed()) print_trace(out, *r.witness, "  ");
  for (const auto& g : r.chain) out << "  G: " << g << '\n';
  Json report = report_skeleton(command, in.digest, r.passed() ? "PASS" : "FAIL");
  if (!r.passed()) report["findings"].push_back(property_finding(r));
  report["states_explored"] = r.states_explored;
  write_json(opt, report, json_out);
  return r.passed() ? kOk : kFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secure multiparty session checker"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool file_required) {
    auto* file = sub->add_option("file", opt.file, "Model file")->check(CLI::ExistingFile);
    if (file_required) file->required();
    sub->add_option("--json", opt.json, "Write a JSON report to this path ('-' for stdout)");
  };

  auto* check = app.add_subcommand("check", "Type check a session against a global type");
  add_common(check, true);
  check->add_option("--session", opt.session, "Session name (default: first)");
  check->add_option("--global", opt.global, "Global type name (default: first)");

  auto* proj = app.add_subcommand("project", "Project a global type onto participants");
  add_common(proj, true);
  proj->add_option("participant", opt.participant, "Participant (default: all)");
  proj->add_option("--global", opt.global, "Global type name (default: first)");
  proj->add_flag("--check-safe", opt.check_safe, "Report whether each projection is safe");

  auto* oracle = app.add_subcommand("oracle", "Check access control and leak freedom on all traces");
  add_common(oracle, true);
  oracle->add_option("--session", opt.session, "Session name (default: first)");
  oracle->add_option("--depth", opt.depth, "Trace length bound")->capture_default_str();

  auto* sim = app.add_subcommand("simulate", "Print one random run");
  add_common(sim, true);
  sim->add_option("--session", opt.session, "Session name (default: first)");
  sim->add_option("--depth", opt.depth, "Maximum number of steps")->capture_default_str();
  sim->add_option("--seed", opt.seed, "Random seed")->capture_default_str();

  auto* sound = app.add_subcommand("soundness", "Typable sessions are safe");
  add_common(sound, false);
  sound->add_option("--session", opt.session, "Session name (default: first)");
  sound->add_option("--global", opt.global, "Global type name (default: first)");
  sound->add_option("--depth", opt.depth, "Oracle depth")->capture_default_str();
  sound->add_option("--random", opt.random, "Check this many generated models instead");
  sound->add_option("--seed", opt.seed, "Generator seed")->capture_default_str();

  auto* sr = app.add_subcommand("sr", "Typing is preserved by reduction");
  add_common(sr, false);
  sr->add_option("--session", opt.session, "Session name (default: first)");
  sr->add_option("--global", opt.global, "Global type name (default: first)");
  sr->add_option("--steps", opt.steps, "Reduction steps to explore")->capture_default_str();
  sr->add_option("--random", opt.random, "Check this many generated models instead");
  sr->add_option("--seed", opt.seed, "Generator seed")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  // With `--json -` stdout carries the report alone.
  std::ostringstream discarded;
  std::ostream& text = opt.json == "-" ? discarded : out;
  try {
    if (check->parsed()) return cmd_check(opt, text, out);
    if (proj->parsed()) return cmd_project(opt, text, out);
    if (oracle->parsed()) return cmd_oracle(opt, text, out);
    if (sim->parsed()) return cmd_simulate(opt, text, out);
    if ((sound->parsed() || sr->parsed()) && opt.random == 0 && opt.file.empty()) {
      err << "error: a model file or --random is required\n";
      return kInputError;
    }
    if (sound->parsed()) {
      return run_property(opt, text, out, "soundness",
                          [&](const Session& n, const GlobalType& g, const SecurityContext& s) {
                            return soundness_property(n, g, s, opt.depth);
                          });
    }
    return run_property(opt, text, out, "sr",
                        [&](const Session& n, const GlobalType& g, const SecurityContext& s) {
                          return subject_reduction_property(n, g, s, opt.steps);
                        });
  } catch (const InputError& e) {
    err << "error: " << e.message << '\n';
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_input_error(e.kind()) ? kInputError : kFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace sessions::cli
