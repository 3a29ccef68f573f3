#include "pmme/expression.hpp"

#include "pmme/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

namespace pmme {

namespace {

using Op = Expression::Op;
using Instr = Expression::Instr;

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    std::vector<Instr> run() {
        parse_sum();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected character");
        return std::move(program_);
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream os;
        os << "expression '" << text_ << "': " << what << " at position " << pos_;
        throw ValidationError(os.str());
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void parse_sum() {
        parse_unary();
        while (true) {
            if (accept('+')) {
                parse_unary();
                program_.push_back({Op::add, 0.0});
            } else if (accept('-')) {
                parse_unary();
                program_.push_back({Op::sub, 0.0});
            } else {
                return;
            }
        }
    }

    // Unary minus applies to a whole product: -a*b == -(a*b), -x^2 == -(x^2).
    void parse_unary() {
        if (accept('-')) {
            parse_unary();
            program_.push_back({Op::neg, 0.0});
            return;
        }
        if (accept('+')) {
            parse_unary();
            return;
        }
        parse_product();
    }

    void parse_product() {
        parse_power();
        while (true) {
            if (accept('*')) {
                parse_power_or_unary();
                program_.push_back({Op::mul, 0.0});
            } else if (accept('/')) {
                parse_power_or_unary();
                program_.push_back({Op::div, 0.0});
            } else {
                return;
            }
        }
    }

    void parse_power_or_unary() {
        if (accept('-')) {
            parse_power_or_unary();
            program_.push_back({Op::neg, 0.0});
            return;
        }
        parse_power();
    }

    void parse_power() {
        parse_atom();
        if (accept('^')) {
            parse_power_or_unary();
            program_.push_back({Op::pow, 0.0});
        }
    }

    void parse_atom() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            parse_sum();
            if (!accept(')')) fail("expected ')'");
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = text_.c_str() + pos_;
            char* end = nullptr;
            const double value = std::strtod(begin, &end);
            if (end == begin) fail("malformed number");
            pos_ += static_cast<std::size_t>(end - begin);
            program_.push_back({Op::constant, value});
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            const std::string name = text_.substr(start, pos_ - start);
            if (name == "t") return program_.push_back({Op::var_t, 0.0});
            if (name == "theta") return program_.push_back({Op::var_theta, 0.0});
            if (name == "pi") return program_.push_back({Op::constant, std::numbers::pi});
            if (name == "e") return program_.push_back({Op::constant, std::numbers::e});
            const Op fn = function_op(name);
            if (!accept('(')) fail("expected '(' after " + name);
            parse_sum();
            if (!accept(')')) fail("expected ')'");
            program_.push_back({fn, 0.0});
            return;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    Op function_op(const std::string& name) const {
        if (name == "sin") return Op::sin;
        if (name == "cos") return Op::cos;
        if (name == "tan") return Op::tan;
        if (name == "exp") return Op::exp;
        if (name == "log") return Op::log;
        if (name == "sqrt") return Op::sqrt;
        if (name == "abs") return Op::abs;
        fail("unknown identifier '" + name + "'");
    }

    const std::string& text_;
    std::size_t pos_{0};
    std::vector<Instr> program_;
};

} // namespace

Expression Expression::parse(const std::string& text) {
    Expression e;
    e.text_ = text;
    e.program_ = Parser(text).run();
    int depth = 0;
    for (const auto& ins : e.program_) {
        switch (ins.op) {
        case Op::constant:
        case Op::var_t:
        case Op::var_theta: ++depth; break;
        case Op::add:
        case Op::sub:
        case Op::mul:
        case Op::div:
        case Op::pow: --depth; break;
        default: break;
        }
        e.max_depth_ = std::max(e.max_depth_, depth);
        if (ins.op == Op::var_theta) e.uses_theta_ = true;
    }
    return e;
}

double Expression::operator()(double theta, double t) const {
    constexpr int kInline = 32;
    double inline_stack[kInline]{};
    std::vector<double> heap_stack;
    double* stack = inline_stack;
    if (max_depth_ > kInline) {
        heap_stack.resize(static_cast<std::size_t>(max_depth_));
        stack = heap_stack.data();
    }
    int top = -1;
    for (const auto& ins : program_) {
        switch (ins.op) {
        case Op::constant: stack[++top] = ins.value; break;
        case Op::var_t: stack[++top] = t; break;
        case Op::var_theta: stack[++top] = theta; break;
        case Op::add: stack[top - 1] += stack[top]; --top; break;
        case Op::sub: stack[top - 1] -= stack[top]; --top; break;
        case Op::mul: stack[top - 1] *= stack[top]; --top; break;
        case Op::div: stack[top - 1] /= stack[top]; --top; break;
        case Op::pow: stack[top - 1] = std::pow(stack[top - 1], stack[top]); --top; break;
        case Op::neg: stack[top] = -stack[top]; break;
        case Op::sin: stack[top] = std::sin(stack[top]); break;
        case Op::cos: stack[top] = std::cos(stack[top]); break;
        case Op::tan: stack[top] = std::tan(stack[top]); break;
        case Op::exp: stack[top] = std::exp(stack[top]); break;
        case Op::log: stack[top] = std::log(stack[top]); break;
        case Op::sqrt: stack[top] = std::sqrt(stack[top]); break;
        case Op::abs: stack[top] = std::abs(stack[top]); break;
        }
    }
    return stack[0];
}

} // namespace pmme
