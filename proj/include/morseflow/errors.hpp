#ifndef MORSEFLOW_ERRORS_HPP_
#define MORSEFLOW_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace morseflow {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- system / evolution ---

struct UnknownStateError : Error {
    explicit UnknownStateError(const std::string& name)
        : Error("unknown state: " + name), state(name) {}
    std::string state;
};

struct OutOfDomainError : Error {
    OutOfDomainError() : Error("initial point outside the domain box") {}
};

struct NonIntegerTimeError : Error {
    explicit NonIntegerTimeError(double t)
        : Error("finite-kind systems require integer time, got " + std::to_string(t)) {}
};

struct NondeterministicError : Error {
    explicit NondeterministicError(const std::string& what_arg) : Error(what_arg) {}
};

// --- expression parsing / evaluation ---

struct SyntaxError : Error {
    SyntaxError(std::size_t pos, const std::string& expected_what)
        : Error("syntax error at position " + std::to_string(pos) + ": expected " + expected_what),
          position(pos), expected(expected_what) {}
    std::size_t position;  // 1-based character position
    std::string expected;
};

struct UnknownIdentifierError : Error {
    UnknownIdentifierError(std::size_t pos, const std::string& name)
        : Error("unknown identifier '" + name + "' at position " + std::to_string(pos)),
          position(pos), identifier(name) {}
    std::size_t position;
    std::string identifier;
};

struct ArityError : Error {
    ArityError(std::size_t pos, const std::string& name, int dim)
        : Error("variable '" + name + "' at position " + std::to_string(pos) +
                " exceeds dimension " + std::to_string(dim)),
          position(pos), identifier(name) {}
    std::size_t position;
    std::string identifier;
};

struct NumericError : Error {
    explicit NumericError(const std::string& what_arg) : Error(what_arg) {}
};

// --- grids / transitions ---

struct GridTooLargeError : Error {
    GridTooLargeError(std::size_t cells, std::size_t cap)
        : Error("grid has " + std::to_string(cells) + " cells, cap is " + std::to_string(cap)),
          cells(cells), cap(cap) {}
    std::size_t cells;
    std::size_t cap;
};

// --- limit sets / attractors ---

struct EmptyInputError : Error {
    EmptyInputError() : Error("operation requires a nonempty cell set") {}
};

struct NotAbsorbingError : Error {
    explicit NotAbsorbingError(int cell)
        : Error("set is not absorbing; first offending cell " + std::to_string(cell)),
          first_offending_cell(cell) {}
    int first_offending_cell;
};

struct EscapesDomainError : Error {
    explicit EscapesDomainError(int cell)
        : Error("forward orbit of cell " + std::to_string(cell) + " reaches the escape sink"),
          cell(cell) {}
    int cell;
};

struct NotForwardClosedError : Error {
    NotForwardClosedError() : Error("set is not forward closed: F(A) is not contained in A") {}
};

// --- morse ---

struct NotAttractorInSubsystemError : Error {
    NotAttractorInSubsystemError() : Error("set is not an attractor of the restricted subsystem") {}
};

struct ChainNotIncreasingError : Error {
    explicit ChainNotIncreasingError(const std::string& what_arg) : Error(what_arg) {}
};

struct ChainEntryNotAttractorError : Error {
    explicit ChainEntryNotAttractorError(std::size_t index)
        : Error("chain entry " + std::to_string(index) +
                " does not validate as an attractor of the subsystem"),
          index(index) {}
    std::size_t index;
};

// --- lyapunov ---

struct EmptyAttractorError : Error {
    EmptyAttractorError() : Error("attractor cell set is empty") {}
};

struct NotInBasinError : Error {
    explicit NotInBasinError(const std::string& what_arg) : Error(what_arg) {}
};

struct HorizonTooShortError : Error {
    explicit HorizonTooShortError(double horizon)
        : Error("trajectory has not entered the attractor band by horizon " +
                std::to_string(horizon)),
          horizon(horizon) {}
    double horizon;
};

struct OverlapError : Error {
    OverlapError() : Error("separating set K intersects the attractor") {}
};

// --- io ---

struct ParseError : Error {
    explicit ParseError(const std::string& what_arg) : Error(what_arg) {}
};

struct SchemaError : Error {
    explicit SchemaError(const std::string& what_arg) : Error(what_arg) {}
};

}  // namespace morseflow

#endif  // MORSEFLOW_ERRORS_HPP_
