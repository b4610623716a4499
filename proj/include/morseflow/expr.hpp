#ifndef MORSEFLOW_EXPR_HPP_
#define MORSEFLOW_EXPR_HPP_

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace morseflow {

// Arithmetic expression over the variables of a vector field component.
// Variables are x, y, z (dim <= 3) or x1..xn; functions are the fixed set
// sin, cos, exp, tanh, abs, sqrt.
class FieldExpr {
public:
    enum class Kind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
    enum class Func { Sin, Cos, Exp, Tanh, Abs, Sqrt };

    struct Node {
        Kind kind;
        double value = 0.0;   // Number
        int var_index = 0;    // Variable, 1-based
        Func func = Func::Sin;
        int lhs = -1;         // child indices into the node pool
        int rhs = -1;
    };

    FieldExpr() = default;

    const std::vector<Node>& nodes() const { return nodes_; }
    int root() const { return root_; }
    int arity() const { return arity_; }

    // Canonical fully parenthesized rendering; reparsing yields a
    // structurally identical tree.
    std::string to_string() const;

    // Structural equality of the trees (node pools may be laid out differently).
    bool same_structure(const FieldExpr& other) const;

    friend FieldExpr parse_field(const std::string& text, int dim);
    friend double eval_field(const FieldExpr& e, std::span<const double> point);

private:
    std::vector<Node> nodes_;
    int root_ = -1;
    int arity_ = 0;
};

// Parses `text` as an expression in at most `dim` variables.
// Precedence: ^ > unary minus > * / > + -, all left-associative except ^,
// which is right-associative; -x^2 parses as -(x^2).
// Throws SyntaxError, UnknownIdentifierError, ArityError.
FieldExpr parse_field(const std::string& text, int dim);

// Evaluates in double precision. Throws NumericError when the result is
// NaN or infinite (division by zero, sqrt of a negative, overflow).
double eval_field(const FieldExpr& e, std::span<const double> point);

// Same evaluation without the finiteness check; integrators test the
// result themselves to turn non-finite values into escape events.
double eval_field_raw(const FieldExpr& e, std::span<const double> point);

}  // namespace morseflow

#endif  // MORSEFLOW_EXPR_HPP_
