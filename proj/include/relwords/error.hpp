#pragma once

#include <stdexcept>
#include <string>

namespace relwords {

// Every failure surfaced by the library. The message names the stage and the
// offending input (line number, document id, path) where one exists.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace relwords
