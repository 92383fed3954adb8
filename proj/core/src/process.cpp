#include "sessions/process.hpp"

namespace sessions {

Expr Expr::var(std::string name) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{VarExpr{std::move(name)}}));
}
Expr Expr::lit(Value value) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{LitExpr{std::move(value)}}));
}
Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  return Expr(std::make_shared<const ExprNode>(
      ExprNode{BinaryExpr{op, std::move(lhs), std::move(rhs)}}));
}
Expr Expr::unary(UnaryOp op, Expr operand) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{UnaryExpr{op, std::move(operand)}}));
}

std::strong_ordering Expr::operator<=>(const Expr& other) const {
  if (node_ == other.node_) return std::strong_ordering::equal;
  return node_->v <=> other.node_->v;
}
bool Expr::operator==(const Expr& other) const {
  return node_ == other.node_ || node_->v == other.node_->v;
}

namespace {
const Process& shared_inact() {
  static const Process inact = Process::inact();
  return inact;
}
}  // namespace

Process::Process() : Process(shared_inact()) {}

Process Process::inact() {
  return Process(std::make_shared<const ProcessNode>(ProcessNode{InactProc{}}));
}
Process Process::output(Participant to, Label label, Expr payload, Process next) {
  return Process(std::make_shared<const ProcessNode>(ProcessNode{
      OutputProc{std::move(to), std::move(label), std::move(payload), std::move(next)}}));
}
Process Process::input(Participant from, Label label, std::string var,
                       std::optional<AnnotatedSort> annotation, Process next) {
  return Process(std::make_shared<const ProcessNode>(
      ProcessNode{InputProc{std::move(from), std::move(label), std::move(var),
                            std::move(annotation), std::move(next)}}));
}
Process Process::internal_choice(Process left, Process right) {
  return Process(std::make_shared<const ProcessNode>(
      ProcessNode{InternalChoiceProc{std::move(left), std::move(right)}}));
}
Process Process::external_choice(Process left, Process right) {
  return Process(std::make_shared<const ProcessNode>(
      ProcessNode{ExternalChoiceProc{std::move(left), std::move(right)}}));
}
Process Process::rec(std::string var, Process body, std::optional<SessionType> annotation) {
  return Process(std::make_shared<const ProcessNode>(
      ProcessNode{RecProc{std::move(var), std::move(annotation), std::move(body)}}));
}
Process Process::var(std::string name) {
  return Process(std::make_shared<const ProcessNode>(ProcessNode{VarProc{std::move(name)}}));
}

bool Process::is_inact() const { return std::holds_alternative<InactProc>(node_->v); }

std::strong_ordering Process::operator<=>(const Process& other) const {
  if (node_ == other.node_) return std::strong_ordering::equal;
  return node_->v <=> other.node_->v;
}
bool Process::operator==(const Process& other) const {
  return node_ == other.node_ || node_->v == other.node_->v;
}

}  // namespace sessions
