#include "sessions/error.hpp"

namespace sessions {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotAPartialOrder: return "NotAPartialOrder";
    case ErrorKind::NotALattice: return "NotALattice";
    case ErrorKind::UnknownLevel: return "UnknownLevel";
    case ErrorKind::UnknownTopic: return "UnknownTopic";
    case ErrorKind::ReflexiveIndependence: return "ReflexiveIndependence";
    case ErrorKind::MixedTopics: return "MixedTopics";
    case ErrorKind::SortMismatch: return "SortMismatch";
    case ErrorKind::FreeVariable: return "FreeVariable";
    case ErrorKind::Unguarded: return "Unguarded";
    case ErrorKind::NotARecursion: return "NotARecursion";
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::FreeTypeVariable: return "FreeTypeVariable";
    case ErrorKind::SelfCommunication: return "SelfCommunication";
    case ErrorKind::EmptyChoice: return "EmptyChoice";
    case ErrorKind::NotProjectable: return "NotProjectable";
    case ErrorKind::ResidualUndefined: return "ResidualUndefined";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::TopicMismatch: return "TopicMismatch";
    case ErrorKind::UnknownOperator: return "UnknownOperator";
    case ErrorKind::MixedPeers: return "MixedPeers";
    case ErrorKind::MissingAnnotation: return "MissingAnnotation";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::UnsafeType: return "UnsafeType";
    case ErrorKind::LabelNotOffered: return "LabelNotOffered";
    case ErrorKind::SortOrAnnotationMismatch: return "SortOrAnnotationMismatch";
    case ErrorKind::DuplicateParticipant: return "DuplicateParticipant";
    case ErrorKind::MissingParticipant: return "MissingParticipant";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::DuplicateDefinition: return "DuplicateDefinition";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      detail_(message) {}

}  // namespace sessions
