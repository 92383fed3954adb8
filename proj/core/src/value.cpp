#include "sessions/value.hpp"

#include "sessions/error.hpp"

namespace sessions {

std::string_view to_string(Sort sort) {
  switch (sort) {
    case Sort::Nat: return "nat";
    case Sort::Int: return "int";
    case Sort::Bool: return "bool";
    case Sort::Str: return "str";
  }
  return "?";
}

std::optional<Sort> sort_from_name(std::string_view name) {
  if (name == "nat") return Sort::Nat;
  if (name == "int") return Sort::Int;
  if (name == "bool") return Sort::Bool;
  if (name == "str") return Sort::Str;
  return std::nullopt;
}

std::string_view symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Less: return "<";
    case BinaryOp::Equal: return "==";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
    case BinaryOp::Concat: return "++";
  }
  return "?";
}

std::string_view symbol(UnaryOp op) {
  switch (op) {
    case UnaryOp::Not: return "not";
  }
  return "?";
}

namespace {

bool numeric(Sort s) { return s == Sort::Nat || s == Sort::Int; }

std::int64_t as_int(const Payload& p) {
  if (auto* n = std::get_if<std::uint64_t>(&p)) return static_cast<std::int64_t>(*n);
  return std::get<std::int64_t>(p);
}

std::int64_t wrap(std::uint64_t bits) { return static_cast<std::int64_t>(bits); }

}  // namespace

std::optional<Sort> result_sort(BinaryOp op, Sort lhs, Sort rhs) {
  switch (op) {
    case BinaryOp::Add:
    case BinaryOp::Mul:
      if (!numeric(lhs) || !numeric(rhs)) return std::nullopt;
      return lhs == Sort::Nat && rhs == Sort::Nat ? Sort::Nat : Sort::Int;
    case BinaryOp::Sub:
      if (!numeric(lhs) || !numeric(rhs)) return std::nullopt;
      return Sort::Int;
    case BinaryOp::Less:
    case BinaryOp::Equal:
      if (!numeric(lhs) || !numeric(rhs)) return std::nullopt;
      return Sort::Bool;
    case BinaryOp::And:
    case BinaryOp::Or:
      if (lhs != Sort::Bool || rhs != Sort::Bool) return std::nullopt;
      return Sort::Bool;
    case BinaryOp::Concat:
      if (lhs != Sort::Str || rhs != Sort::Str) return std::nullopt;
      return Sort::Str;
  }
  return std::nullopt;
}

std::optional<Sort> result_sort(UnaryOp op, Sort operand) {
  switch (op) {
    case UnaryOp::Not:
      if (operand != Sort::Bool) return std::nullopt;
      return Sort::Bool;
  }
  return std::nullopt;
}

Payload apply(BinaryOp op, const Payload& lhs, const Payload& rhs) {
  auto result = result_sort(op, sort_of(lhs), sort_of(rhs));
  if (!result) {
    throw Error(ErrorKind::SortMismatch,
                "operator '" + std::string(symbol(op)) + "' is undefined on " +
                    std::string(to_string(sort_of(lhs))) + ", " +
                    std::string(to_string(sort_of(rhs))));
  }
  switch (op) {
    case BinaryOp::Add:
    case BinaryOp::Mul:
    case BinaryOp::Sub: {
      if (*result == Sort::Nat) {
        auto a = std::get<std::uint64_t>(lhs);
        auto b = std::get<std::uint64_t>(rhs);
        return op == BinaryOp::Add ? a + b : a * b;
      }
      // Two's complement wrap-around instead of signed overflow.
      auto a = static_cast<std::uint64_t>(as_int(lhs));
      auto b = static_cast<std::uint64_t>(as_int(rhs));
      if (op == BinaryOp::Add) return wrap(a + b);
      if (op == BinaryOp::Sub) return wrap(a - b);
      return wrap(a * b);
    }
    case BinaryOp::Less:
      if (sort_of(lhs) == Sort::Nat && sort_of(rhs) == Sort::Nat) {
        return std::get<std::uint64_t>(lhs) < std::get<std::uint64_t>(rhs);
      }
      return as_int(lhs) < as_int(rhs);
    case BinaryOp::Equal:
      if (sort_of(lhs) == Sort::Nat && sort_of(rhs) == Sort::Nat) {
        return std::get<std::uint64_t>(lhs) == std::get<std::uint64_t>(rhs);
      }
      return as_int(lhs) == as_int(rhs);
    case BinaryOp::And: return std::get<bool>(lhs) && std::get<bool>(rhs);
    case BinaryOp::Or: return std::get<bool>(lhs) || std::get<bool>(rhs);
    case BinaryOp::Concat: return std::get<std::string>(lhs) + std::get<std::string>(rhs);
  }
  return false;
}

Payload apply(UnaryOp op, const Payload& operand) {
  if (!result_sort(op, sort_of(operand))) {
    throw Error(ErrorKind::SortMismatch, "operator '" + std::string(symbol(op)) +
                                             "' is undefined on " +
                                             std::string(to_string(sort_of(operand))));
  }
  return !std::get<bool>(operand);
}

}  // namespace sessions
