#include "outagekit/error.hpp"

#include <iostream>
#include <mutex>

namespace outagekit {

namespace {

std::mutex& handler_mutex() {
    static std::mutex m;
    return m;
}

WarningHandler& handler() {
    static WarningHandler h = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
    return h;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler h) {
    std::lock_guard lock(handler_mutex());
    WarningHandler old = std::move(handler());
    handler() = std::move(h);
    return old;
}

void warn(std::string_view message) {
    std::lock_guard lock(handler_mutex());
    if (handler()) {
        handler()(message);
    }
}

}  // namespace outagekit
