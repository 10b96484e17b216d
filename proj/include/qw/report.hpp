#pragma once

#include <chrono>
#include <string>

#include "json.hpp"

namespace qw {

using json = nlohmann::json;

// Outcome of a verification suite: counts, first failures, free-form info.
struct Report {
    std::string name;
    bool pass = true;
    long checks = 0;
    json failures = json::array();
    json info = json::object();

    explicit Report(std::string n = "") : name(std::move(n)) {}

    void check(bool ok, const json& where) {
        ++checks;
        if (ok) return;
        pass = false;
        if (failures.size() < 16) failures.push_back(where);
    }
    void fail(const json& where) { check(false, where); }
    void merge(const Report& o) {
        checks += o.checks;
        if (!o.pass) pass = false;
        for (auto& f : o.failures)
            if (failures.size() < 16) failures.push_back({{"in", o.name}, {"at", f}});
    }
    json to_json() const {
        json j = {{"name", name}, {"pass", pass}, {"checks", checks}};
        if (!failures.empty()) j["failures"] = failures;
        if (!info.empty()) j["info"] = info;
        return j;
    }
};

class Stopwatch {
public:
    Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    std::chrono::steady_clock::time_point t0_;
};

}  // namespace qw
