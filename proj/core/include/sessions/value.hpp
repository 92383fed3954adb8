#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "sessions/security.hpp"

namespace sessions {

enum class Sort { Nat, Int, Bool, Str };

std::string_view to_string(Sort sort);
std::optional<Sort> sort_from_name(std::string_view name);

// Alternatives are in Sort order, so payload.index() is the sort.
using Payload = std::variant<std::uint64_t, std::int64_t, bool, std::string>;

inline Sort sort_of(const Payload& payload) { return static_cast<Sort>(payload.index()); }

// A value v^{ℓ,φ}: a payload classified by a security level and a topic.
struct Value {
  Payload payload;
  Level level;
  Topic topic;

  Sort sort() const { return sort_of(payload); }

  auto operator<=>(const Value&) const = default;
  bool operator==(const Value&) const = default;
};

// S^{ℓ,φ}
struct AnnotatedSort {
  Sort sort;
  Level level;
  Topic topic;

  auto operator<=>(const AnnotatedSort&) const = default;
  bool operator==(const AnnotatedSort&) const = default;
};

enum class BinaryOp { Add, Sub, Mul, Less, Equal, And, Or, Concat };
enum class UnaryOp { Not };

std::string_view symbol(BinaryOp op);
std::string_view symbol(UnaryOp op);

// The fixed operator table. Arithmetic stays in nat only for + and * on two
// nats; any int operand, or subtraction, yields int. Comparisons take two
// numbers. Returns nullopt when the operator is undefined on the sorts.
std::optional<Sort> result_sort(BinaryOp op, Sort lhs, Sort rhs);
std::optional<Sort> result_sort(UnaryOp op, Sort operand);

// Payload arithmetic for the table above. Throws SortMismatch.
Payload apply(BinaryOp op, const Payload& lhs, const Payload& rhs);
Payload apply(UnaryOp op, const Payload& operand);

}  // namespace sessions
