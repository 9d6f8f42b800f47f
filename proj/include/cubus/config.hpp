#pragma once

#include <fstream>
#include <map>
#include <set>
#include <string>

#include "types.hpp"

namespace cubus {

// Plain key=value settings; '#' starts a comment. Command-line flags are applied on top.
class Config {
public:
    static const std::set<std::string>& known_keys()
    {
        static const std::set<std::string> keys{
            "budget",           "tol",                "threads",          "ray.steps_per_level", "ray.max_levels",
            "ray.landing_tol",  "ray.potential_floor", "ray.newton_max",  "portrait.qmax",       "cycle.budget",
            "cycle.detect",     "cycle.max_period",   "renorm.budget",    "renorm.eps_angle",    "inverse.steps",
            "inverse.newton_max", "index.nodes",      "fatou.terms",      "horn.samples",        "horn.max_residual",
            "conarg.tol",       "render.budget"};
        return keys;
    }

    static Config parse(std::istream& in, const std::string& origin = "config")
    {
        Config c;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": expected key=value");
            std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
            if (!known_keys().count(key))
                throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": unknown key " + key);
            c.values_[key] = value;
        }
        return c;
    }

    static Config load(const std::string& path)
    {
        std::ifstream in(path);
        if (!in) throw IoError("cannot read config file " + path);
        return parse(in, path);
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    const std::map<std::string, std::string>& values() const { return values_; }

    double number(const std::string& key, double fallback) const
    {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(it->second, &used);
        } catch (const std::logic_error&) {
            throw std::invalid_argument("config key " + key + " is not a number: " + it->second);
        }
        if (used != it->second.size()) throw std::invalid_argument("config key " + key + " is not a number: " + it->second);
        return v;
    }

    int integer(const std::string& key, int fallback) const
    {
        double v = number(key, fallback);
        if (v != std::floor(v) || std::abs(v) > 2e9) throw std::invalid_argument("config key " + key + " must be an integer");
        return int(v);
    }

private:
    static std::string trim(const std::string& s)
    {
        auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    std::map<std::string, std::string> values_;
};

}  // namespace cubus
