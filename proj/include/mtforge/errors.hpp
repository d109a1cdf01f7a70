#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace mtforge {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define MTFORGE_ERROR(Name)                 \
    class Name : public ::mtforge::Error {  \
    public:                                 \
        using ::mtforge::Error::Error;      \
    }

// graph_store
MTFORGE_ERROR(ParseError);
MTFORGE_ERROR(SchemaError);
MTFORGE_ERROR(ConformanceError);
MTFORGE_ERROR(EmptyTypeError);

// gql_engine
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& message, std::size_t offset, std::string expected = "")
        : Error(message + " (offset " + std::to_string(offset) + ")"),
          offset_(offset),
          expected_(std::move(expected)) {}

    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t offset_ = 0;
    std::string expected_;
};

MTFORGE_ERROR(UnsupportedStatementError);
MTFORGE_ERROR(UnboundVariableError);
MTFORGE_ERROR(SemanticError);
MTFORGE_ERROR(TypeError);

// dialogue_corpus
MTFORGE_ERROR(IoError);
MTFORGE_ERROR(InvariantError);

// text_gen
MTFORGE_ERROR(MissingSlotError);
MTFORGE_ERROR(UnrenderableError);
MTFORGE_ERROR(TransportError);
MTFORGE_ERROR(MalformedResponseError);

// forge
MTFORGE_ERROR(NoApplicablePatternError);
MTFORGE_ERROR(UnboundPlaceholderError);
MTFORGE_ERROR(DialogueAbandonedError);

// evaluation
MTFORGE_ERROR(GoldParseError);
MTFORGE_ERROR(GoldExecutionError);
MTFORGE_ERROR(AlignmentError);

// da_baseline
MTFORGE_ERROR(ReformulationError);
MTFORGE_ERROR(InferenceError);

#undef MTFORGE_ERROR

}  // namespace mtforge
