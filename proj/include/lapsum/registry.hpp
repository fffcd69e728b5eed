#pragma once

#include "lapsum/function_expr.hpp"

namespace lapsum {

/// Named instances used across the CLI and the verification suites.
inline FunctionExpr make_named_target(const std::string& id) {
    if (id == "expsum_unit")
        return make_expsum(ExpSum::create({{{-1.0, 0.0}, 1.0, 0}}, true));
    if (id == "expsum_decay2")
        return make_expsum(ExpSum::create({{{-2.0, 0.0}, 1.0, 0}}, true));
    if (id == "expsum_gap")
        return make_expsum(ExpSum::create(
            {{{-1.0, 0.0}, 1.0, 0}, {{-2.0, 0.0}, -1.0, 0}}, true));
    if (id == "expsum_pair")
        return make_expsum(ExpSum::create(
            {{{-0.1, 2.0}, 0.5, 0}, {{-0.1, -2.0}, 0.5, 0}}, true));
    if (id == "bump") return make_bump(3.0, 1.0);
    if (id == "mollified_bump") return mollify(make_bump(3.0, 1.0), 2.0);
    if (id == "standard_damped")
        return damp(mollify(make_bump(3.0, 1.0), 2.0), 0.2);
    if (id == "powerdecay_half") return make_power_decay(0.5, 1.0);
    if (id == "sine_bump") return sine_modulate(make_bump(4.0, 1.0), 3.0);
    if (id == "zero") return make_zero();
    throw precondition_error("unknown target id '" + id + "'");
}

inline std::vector<std::string> registry_target_ids() {
    return {"expsum_unit", "expsum_decay2", "expsum_gap",  "expsum_pair",
            "bump",        "mollified_bump", "standard_damped",
            "powerdecay_half", "sine_bump",  "zero"};
}

} // namespace lapsum
