#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "angle.hpp"
#include "types.hpp"

namespace cubus {

using Json = nlohmann::json;  // std::map-backed objects keep keys sorted

inline Json to_json(cplx z) { return Json::array({z.real() + 0.0, z.imag() + 0.0}); }  // +0.0 folds -0

// One record per line; no timestamps so identical inputs give identical bytes.
struct Report {
    std::string command;
    Json inputs = Json::object();
    Json outputs = Json::object();
    Json tolerances = Json::object();
    Json budgets = Json::object();

    Json to_json() const
    {
        return Json{{"command", command}, {"inputs", inputs}, {"outputs", outputs}, {"tolerances", tolerances},
                    {"budgets", budgets}};
    }

    std::string line() const { return to_json().dump(); }
};

inline void emit(std::ostream& out, const Report& r) { out << r.line() << '\n'; }

}  // namespace cubus
