#pragma once

#include <stdexcept>
#include <string>

namespace skelmetric {

/// Domain error raised by any module. `name()` is "<module>::<Kind>", the
/// string the CLI prints next to a failing status.
class Error : public std::runtime_error {
public:
    Error(std::string module, std::string kind, const std::string& message)
        : std::runtime_error(message), module_(std::move(module)), kind_(std::move(kind)) {}

    const std::string& module() const noexcept { return module_; }
    const std::string& kind() const noexcept { return kind_; }
    std::string name() const { return module_ + "::" + kind_; }

private:
    std::string module_;
    std::string kind_;
};

}  // namespace skelmetric
