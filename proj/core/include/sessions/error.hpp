#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sessions {

enum class ErrorKind {
  // security lattice and topics
  NotAPartialOrder,
  NotALattice,
  UnknownLevel,
  UnknownTopic,
  ReflexiveIndependence,
  // evaluation and process structure
  MixedTopics,
  SortMismatch,
  FreeVariable,
  Unguarded,
  NotARecursion,
  // types
  DuplicateLabel,
  FreeTypeVariable,
  SelfCommunication,
  EmptyChoice,
  NotProjectable,
  ResidualUndefined,
  // typing
  UnboundVariable,
  TopicMismatch,
  UnknownOperator,
  MixedPeers,
  MissingAnnotation,
  TypeMismatch,
  UnsafeType,
  LabelNotOffered,
  SortOrAnnotationMismatch,
  DuplicateParticipant,
  MissingParticipant,
  // input
  SyntaxError,
  UnknownIdentifier,
  DuplicateDefinition,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  // The message without the "Kind: " prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace sessions
