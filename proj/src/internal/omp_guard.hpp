#pragma once

#include <exception>
#include <mutex>

namespace gevent::detail {

// Exceptions must not escape an OpenMP region; keep the first and rethrow after.
class ExceptionSlot {
public:
    template <class Fn>
    void run(Fn&& fn) noexcept {
        try {
            fn();
        } catch (...) {
            std::lock_guard lock(mutex_);
            if (!error_) error_ = std::current_exception();
        }
    }
    void rethrow() const {
        if (error_) std::rethrow_exception(error_);
    }

private:
    std::mutex mutex_;
    std::exception_ptr error_;
};

}  // namespace gevent::detail
