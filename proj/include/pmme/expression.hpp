#pragma once

#include <memory>
#include <string>
#include <vector>

namespace pmme {

/// Compiled arithmetic expression in the variables `t` and `theta`.
///
/// Grammar: numbers, `t`, `theta`, constants `pi` and `e`, binary + - * / ^
/// (^ is right-associative and binds tighter than unary minus), parentheses,
/// and the functions sin cos tan exp log sqrt abs. Evaluation is a walk over
/// a flat postfix program, so a compiled expression is cheap to copy and
/// safe to share between threads.
class Expression {
public:
    /// Throws ValidationError with the offending position on a syntax error.
    static Expression parse(const std::string& text);

    [[nodiscard]] double operator()(double theta, double t) const;
    [[nodiscard]] const std::string& text() const noexcept { return text_; }
    [[nodiscard]] bool uses_theta() const noexcept { return uses_theta_; }

    enum class Op : unsigned char {
        constant, var_t, var_theta, add, sub, mul, div, pow, neg,
        sin, cos, tan, exp, log, sqrt, abs
    };
    struct Instr {
        Op op;
        double value;
    };

private:
    std::string text_;
    std::vector<Instr> program_;
    int max_depth_{0};
    bool uses_theta_{false};
};

} // namespace pmme
