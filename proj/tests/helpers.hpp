#pragma once

#include "pmme/expansion.hpp"
#include "pmme/intensity.hpp"
#include "pmme/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pmme::test {

inline constexpr double kPi = std::numbers::pi;

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

struct Fixture {
    ModelAndWeight mw;
    InverseMap inv;

    explicit Fixture(const std::string& name, const BuiltinParams& params = {})
        : Fixture(builtin_model(name, params)) {}
    explicit Fixture(ModelAndWeight m) : mw(m), inv(moment_map(m.model, m.weight)) {}

    const MomentMap& map() const { return inv.map(); }
};

} // namespace pmme::test
