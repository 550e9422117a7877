#pragma once

#include <stdexcept>
#include <string>

namespace isac {

/// Numeric or domain failure raised by a library module. `module()` names
/// the component that failed so front ends can report it.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& what)
        : std::runtime_error(what), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

}  // namespace isac
