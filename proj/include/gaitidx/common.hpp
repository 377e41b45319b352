#pragma once

#include <stdexcept>
#include <string>

namespace gaitidx {

// All fatal conditions surface as Error; messages name the module and the
// offending input so callers can locate the problem.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void require(bool cond, const std::string& msg) {
    if (!cond) fail(msg);
}

}  // namespace gaitidx
